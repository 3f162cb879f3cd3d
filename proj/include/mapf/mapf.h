#ifndef MAPF_MAPF_H
#define MAPF_MAPF_H

#include <stddef.h>

#if defined(_WIN32)
#define MAPF_API __declspec(dllexport)
#else
#define MAPF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mapf_status {
  MAPF_OK = 0,
  MAPF_ERR_INVALID_ARGUMENT = 1,
  MAPF_ERR_PARSE = 2,
  MAPF_ERR_IO = 3,
  MAPF_ERR_CONTRACT = 4,
  MAPF_ERR_INTERNAL = 5
} mapf_status;

typedef enum mapf_outcome {
  MAPF_SOLVED = 0,
  MAPF_TIMEOUT = 1,
  MAPF_INFEASIBLE = 2
} mapf_outcome;

typedef struct mapf_instance mapf_instance;
typedef struct mapf_result mapf_result;

/* Message for the last failed call on this thread; never NULL. */
MAPF_API const char* mapf_last_error(void);

/* Algorithm names: cbs, mddsat, smtcbs, sparse, heuristic. */
MAPF_API int mapf_algorithm_known(const char* name);

/* Builds an instance from the first `agents` scenario lines. */
MAPF_API mapf_status mapf_instance_load(const char* map_path, const char* scen_path, size_t agents,
                                        mapf_instance** out);
MAPF_API mapf_status mapf_instance_from_text(const char* map_text, const char* scen_text, size_t agents,
                                             mapf_instance** out);
MAPF_API void mapf_instance_free(mapf_instance* instance);
MAPF_API size_t mapf_instance_agent_count(const mapf_instance* instance);
MAPF_API size_t mapf_instance_vertex_count(const mapf_instance* instance);

MAPF_API mapf_status mapf_solve(const mapf_instance* instance, const char* algorithm, double timeout_s,
                                mapf_result** out);
MAPF_API void mapf_result_free(mapf_result* result);
MAPF_API mapf_outcome mapf_result_outcome(const mapf_result* result);
/* -1 unless solved. */
MAPF_API int mapf_result_sum_of_costs(const mapf_result* result);
MAPF_API int mapf_result_makespan(const mapf_result* result);
MAPF_API double mapf_result_runtime(const mapf_result* result);
MAPF_API size_t mapf_result_sat_calls(const mapf_result* result);
MAPF_API size_t mapf_result_conflicts(const mapf_result* result);
/* Copies agent `agent`'s vertex ids into `buffer` if it has room; *length
   always receives the path length in vertices. */
MAPF_API mapf_status mapf_result_path(const mapf_result* result, size_t agent, int* buffer, size_t capacity,
                                      size_t* length);
/* Caller releases *json with mapf_string_free. Paths are vertex ids. */
MAPF_API mapf_status mapf_result_to_json(const mapf_instance* instance, const mapf_result* result,
                                         char** json);

/* Writes the propositional model of the first sum-of-costs bound as DIMACS
   plus a JSON variable map. `algorithm` selects full (smtcbs, mddsat) or
   sparse (sparse, heuristic) diagrams; complete selects the collision rules. */
MAPF_API mapf_status mapf_export_model(const mapf_instance* instance, const char* algorithm, int complete,
                                       const char* cnf_path, const char* varmap_path);

/* Runs a suite directory and writes CSV (and cactus data if cactus_path is
   not NULL). `algorithms` and `agent_counts` are comma-separated lists.
   *errors receives the number of runs whose inputs failed to load. */
MAPF_API mapf_status mapf_bench_run(const char* suite_dir, const char* algorithms, const char* agent_counts,
                                    size_t per_count, double timeout_s, size_t jobs, const char* csv_path,
                                    const char* cactus_path, size_t* errors);

MAPF_API void mapf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
