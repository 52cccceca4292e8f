#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridplan/gridworld.hpp"
#include "gridplan/metaheuristics.hpp"

namespace gridplan {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One planner run. path_len is the planner's own objective: step costs
/// for grid planners, Euclidean polyline length for GA/BSO, arc length for
/// the potential-field tracker. Failure reports +inf.
struct TrialResult {
    std::string algo;
    std::string map_name;
    std::uint64_t seed = 0;
    bool success = false;
    double path_len = kUnreachable;
    int iterations_to_best = 0;
    double wall_ms = 0.0;
    int collisions = 0;
    // not serialized into the CSV row:
    Path path;                     // for rendering
    std::vector<IterStats> trace;  // ga/aco/bso per-iteration trace
    std::string field_dump;        // consensus distance / shunting activity field
    std::string trajectory_dump;   // apf trajectory CSV
};

using ParamMap = std::map<std::string, std::string>;

/// "k=v,k=v" -> map. Throws ConfigError on malformed pairs.
ParamMap parse_params(const std::string& spec);

inline const std::vector<std::string> kKnownAlgos = {"shunting", "consensus", "apf",
                                                     "ga",       "aco",       "bso"};

/// Dispatches to one planner; wall_ms wraps the planning call only, so
/// everything except wall_ms is deterministic in (algo, scenario, seed,
/// params). Throws ConfigError for unknown algos or bad params.
TrialResult run_trial(const std::string& algo, const ScenarioConfig& sc,
                      const std::string& map_name, std::uint64_t seed, const ParamMap& params);

struct BenchConfig {
    std::vector<std::pair<std::string, ScenarioConfig>> suite;  // (name, scenario)
    std::vector<std::string> algos;
    int trials = 20;
    std::uint64_t base_seed = 1;
    ParamMap params;
    int workers = 1;
};

struct AggregateRow {
    std::string algo;
    std::string map_name;
    int trials = 0;
    double success_rate = 0.0;
    double mean_path_len = kUnreachable;    // over successes
    double median_path_len = kUnreachable;  // over successes
    double mean_iterations = 0.0;
    double mean_wall_ms = 0.0;
};

struct MetricsTable {
    std::vector<TrialResult> trials;
    std::vector<AggregateRow> rows;
};

/// Full cross product algos x scenarios x trials with seeds base_seed+0..
/// trials-1; trials may run on several workers, results are ordered by the
/// job list either way.
MetricsTable run_suite(const BenchConfig& cfg);

/// Recomputes the aggregate rows from raw trials (grouped in first-seen
/// order).
std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& trials);

/// Mean wall-time ratio between two algos over all their trials.
std::optional<double> wall_time_ratio(const MetricsTable& table, const std::string& num_algo,
                                      const std::string& den_algo);

/// Header "algo,map,seed,success,path_len,iterations_to_best,wall_ms,
/// collisions"; rows sorted by (algo, map, seed); floats at 6 significant
/// digits; the wall_ms column (header and values) drops out when
/// include_walltime is false.
std::string emit_csv(const std::vector<TrialResult>& trials, bool include_walltime = true);

std::vector<TrialResult> parse_trials_csv(const std::string& text);

/// ASCII map: obstacles '#', free '.', path '*', then 'S', then 'T'
/// (precedence T > S > *). With a field, emits the integer tabulation of
/// format_field instead.
std::string render_map(const GridMap& map, const DistanceField* field = nullptr,
                       const Path* path = nullptr);

std::string format_table(const MetricsTable& table);

}  // namespace gridplan
