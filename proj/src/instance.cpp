#include "mapf/instance.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <tuple>

namespace mapf {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "line " << line;
        if (column != 0) os << ", column " << column;
        os << ": " << what;
        return os.str();
      }()),
      line_(line),
      column_(column) {}

VertexId GridInfo::vertex_at(Cell c) const {
  if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height) return kNoVertex;
  return cell_to_vertex[static_cast<std::size_t>(c.y) * width + c.x];
}

Graph::Graph(std::size_t vertex_count, std::span<const std::pair<VertexId, VertexId>> edges)
    : adjacency_(vertex_count) {
  for (auto [u, v] : edges) {
    if (!contains(u) || !contains(v)) throw ContractViolation("edge endpoint is not a vertex");
    if (u == v) throw ContractViolation("self-loop edge");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edge_count_ += list.size();
  }
  edge_count_ /= 2;
}

bool Graph::adjacent(VertexId u, VertexId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<VertexId, VertexId>> Graph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < static_cast<VertexId>(adjacency_.size()); ++u)
    for (VertexId v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

MapfInstance::MapfInstance(Graph graph, std::vector<Agent> agents)
    : graph_(std::move(graph)), agents_(std::move(agents)) {
  std::set<VertexId> starts, goals;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    auto& a = agents_[i];
    a.id = static_cast<AgentId>(i);
    if (!graph_.contains(a.start) || !graph_.contains(a.goal))
      throw ContractViolation("agent " + std::to_string(i) + " start or goal is not a vertex");
    if (!starts.insert(a.start).second)
      throw ContractViolation("duplicate start vertex for agent " + std::to_string(i));
    if (!goals.insert(a.goal).second)
      throw ContractViolation("duplicate goal vertex for agent " + std::to_string(i));
  }
}

VertexId Path::at(Timestep t) const {
  if (positions.empty()) return kNoVertex;
  if (t < 0) return positions.front();
  if (static_cast<std::size_t>(t) >= positions.size()) return positions.back();
  return positions[t];
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

int header_value(std::string_view line, std::string_view key, std::size_t lineno) {
  auto fields = split_fields(line);
  int value = 0;
  if (fields.size() != 2 || fields[0] != key || !parse_number(fields[1], value) || value <= 0)
    throw ParseError("expected '" + std::string(key) + " <positive int>'", lineno);
  return value;
}

bool is_passable(char c) { return c == '.' || c == 'G' || c == 'S'; }
bool is_blocked(char c) { return c == '@' || c == 'O' || c == 'T' || c == 'W'; }

}  // namespace

Graph parse_map(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 4) throw ParseError("truncated map header", lines.size() + 1);
  if (auto f = split_fields(lines[0]); f.size() != 2 || f[0] != "type")
    throw ParseError("expected 'type <name>'", 1);
  const int height = header_value(lines[1], "height", 2);
  const int width = header_value(lines[2], "width", 3);
  if (split_fields(lines[3]) != std::vector<std::string_view>{"map"})
    throw ParseError("expected 'map'", 4);

  // Allow trailing blank lines only.
  std::size_t rows_end = lines.size();
  while (rows_end > 4 && lines[rows_end - 1].empty()) --rows_end;
  if (rows_end - 4 != static_cast<std::size_t>(height))
    throw ParseError("expected " + std::to_string(height) + " map rows, found " +
                         std::to_string(rows_end - 4),
                     rows_end + 1);

  GridInfo grid;
  grid.width = width;
  grid.height = height;
  grid.cell_to_vertex.assign(static_cast<std::size_t>(width) * height, kNoVertex);
  for (int y = 0; y < height; ++y) {
    auto row = lines[4 + y];
    const std::size_t lineno = 5 + y;
    if (row.size() != static_cast<std::size_t>(width))
      throw ParseError("row width " + std::to_string(row.size()) + " != " + std::to_string(width),
                       lineno, std::min(row.size(), static_cast<std::size_t>(width)) + 1);
    for (int x = 0; x < width; ++x) {
      char c = row[x];
      if (is_passable(c)) {
        grid.cell_to_vertex[static_cast<std::size_t>(y) * width + x] =
            static_cast<VertexId>(grid.vertex_to_cell.size());
        grid.vertex_to_cell.push_back({x, y});
      } else if (!is_blocked(c)) {
        throw ParseError(std::string("unknown cell character '") + c + "'", lineno, x + 1);
      }
    }
  }

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const Cell& c : grid.vertex_to_cell) {
    VertexId v = grid.vertex_at(c);
    if (VertexId r = grid.vertex_at({c.x + 1, c.y}); r != kNoVertex) edges.emplace_back(v, r);
    if (VertexId d = grid.vertex_at({c.x, c.y + 1}); d != kNoVertex) edges.emplace_back(v, d);
  }
  Graph graph(grid.vertex_to_cell.size(), edges);
  graph.set_grid(std::move(grid));
  return graph;
}

std::string render_map(const Graph& graph) {
  if (!graph.grid()) throw ContractViolation("render_map needs a grid graph");
  const auto& g = *graph.grid();
  std::string out = "type octile\nheight " + std::to_string(g.height) + "\nwidth " +
                    std::to_string(g.width) + "\nmap\n";
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) out += g.passable({x, y}) ? '.' : '@';
    out += '\n';
  }
  return out;
}

std::vector<ScenEntry> parse_scen(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("missing version line", 1);
  auto header = split_fields(lines[0]);
  if (header.size() != 2 || header[0] != "version" || (header[1] != "1" && header[1] != "1.0"))
    throw ParseError("expected 'version 1'", 1);

  std::vector<ScenEntry> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto fields = split_fields(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() != 9)
      throw ParseError("expected 9 fields, found " + std::to_string(fields.size()), lineno);
    ScenEntry e;
    e.map_name = std::string(fields[1]);
    int* ints[] = {&e.bucket, nullptr, &e.map_width, &e.map_height,
                   &e.start.x, &e.start.y, &e.goal.x, &e.goal.y};
    for (std::size_t f = 0; f < 8; ++f) {
      if (!ints[f]) continue;
      if (!parse_number(fields[f], *ints[f]))
        throw ParseError("non-numeric field '" + std::string(fields[f]) + "'", lineno);
    }
    if (!parse_number(fields[8], e.optimal_length))
      throw ParseError("non-numeric optimal length '" + std::string(fields[8]) + "'", lineno);
    out.push_back(std::move(e));
  }
  return out;
}

MapfInstance build_instance(const Graph& graph, std::span<const ScenEntry> specs, std::size_t count) {
  if (!graph.grid()) throw ContractViolation("build_instance needs a grid graph");
  if (count > specs.size())
    throw ContractViolation("requested " + std::to_string(count) + " agents but scenario has " +
                            std::to_string(specs.size()));
  const auto& grid = *graph.grid();
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < count; ++i) {
    VertexId s = grid.vertex_at(specs[i].start);
    VertexId g = grid.vertex_at(specs[i].goal);
    if (s == kNoVertex) throw ContractViolation("agent " + std::to_string(i) + " starts on a blocked cell");
    if (g == kNoVertex) throw ContractViolation("agent " + std::to_string(i) + " goal is a blocked cell");
    agents.push_back({static_cast<AgentId>(i), s, g});
  }
  return MapfInstance(graph, std::move(agents));
}

int path_cost(const Path& path, VertexId goal) {
  if (path.positions.empty() || path.positions.back() != goal)
    throw ContractViolation("path does not end at its goal");
  for (std::size_t t = path.positions.size(); t-- > 0;)
    if (path.positions[t] != goal) return static_cast<int>(t) + 1;
  return 0;
}

int sum_of_costs(const MapfInstance& instance, const Solution& solution) {
  int total = 0;
  for (const auto& p : solution) total += path_cost(p, instance.agent(p.agent).goal);
  return total;
}

Path pad_path(Path path, Timestep horizon) {
  if (!path.positions.empty())
    while (path.positions.size() < static_cast<std::size_t>(horizon) + 1)
      path.positions.push_back(path.positions.back());
  return path;
}

Path trim_path(Path path) {
  while (path.positions.size() > 1 && path.positions.back() == path.positions[path.positions.size() - 2])
    path.positions.pop_back();
  return path;
}

Solution pad_solution(Solution solution) {
  std::size_t horizon = 0;
  for (const auto& p : solution) horizon = std::max(horizon, p.length());
  for (auto& p : solution) p = pad_path(std::move(p), static_cast<Timestep>(horizon));
  return solution;
}

std::vector<Collision> validate_solution(const MapfInstance& instance, const Solution& solution) {
  (void)instance;
  std::size_t horizon = 0;
  for (const auto& p : solution) horizon = std::max(horizon, p.length());

  std::vector<Collision> out;
  for (std::size_t i = 0; i < solution.size(); ++i) {
    for (std::size_t j = i + 1; j < solution.size(); ++j) {
      const Path& pi = solution[i];
      const Path& pj = solution[j];
      for (Timestep t = 0; t <= static_cast<Timestep>(horizon); ++t) {
        if (pi.at(t) == pj.at(t)) out.push_back(Collision::vertex(pi.agent, pj.agent, pi.at(t), t));
        if (t < static_cast<Timestep>(horizon)) {
          VertexId u = pi.at(t), v = pi.at(t + 1);
          if (u != v && pj.at(t) == v && pj.at(t + 1) == u)
            out.push_back(Collision::edge(pi.agent, pj.agent, u, v, t));
        }
      }
    }
  }
  auto key = [](const Collision& c) {
    return std::tuple(c.t, c.agent_i, c.agent_j, c.kind, c.from, c.to);
  };
  std::sort(out.begin(), out.end(), [&](const Collision& a, const Collision& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mapf
