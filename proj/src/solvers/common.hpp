#pragma once

#include <chrono>

#include "mapf/solvers.hpp"

namespace mapf::detail {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : start_(Clock::now()),
        end_(start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  bool expired() const { return Clock::now() >= end_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
  Clock::time_point end_;
};

// Trims trailing goal waits, pads to the common makespan, checks validity and
// fills status/solution/sum_of_costs/makespan.
SolveOutcome finish_solved(const MapfInstance& instance, Solution solution, SolveStats stats);
SolveOutcome finish_unsolved(SolveStatus status, SolveStats stats);

}  // namespace mapf::detail
