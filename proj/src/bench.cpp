#include "gridplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "gridplan/aco.hpp"
#include "gridplan/bso.hpp"
#include "gridplan/consensus.hpp"
#include "gridplan/ga.hpp"
#include "gridplan/potential_field.hpp"
#include "gridplan/shunting.hpp"

namespace gridplan {

ParamMap parse_params(const std::string& spec) {
    ParamMap out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("bad parameter '" + item + "', expected key=value");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

namespace {

double get_double(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (...) {
        throw ConfigError("parameter '" + key + "' is not a number: '" + it->second + "'");
    }
}

int get_int(const ParamMap& params, const std::string& key, int fallback) {
    const double v = get_double(params, key, double(fallback));
    return int(v);
}

Neighborhood get_nb(const ParamMap& params, Neighborhood fallback) {
    auto it = params.find("nb");
    if (it == params.end()) return fallback;
    if (it->second == "four") return Neighborhood::Four;
    if (it->second == "eight") return Neighborhood::Eight;
    throw ConfigError("parameter 'nb' must be 'four' or 'eight'");
}

struct PlanOutcome {
    bool success = false;
    double path_len = kUnreachable;
    int iterations = 0;
    int collisions = 0;
    Path path;
    std::vector<IterStats> trace;
    std::string field_dump;
    std::string trajectory_dump;
};

PlanOutcome plan_consensus(const ScenarioConfig& sc, const ParamMap& params) {
    PlanOutcome out;
    const Neighborhood nb = get_nb(params, sc.neighborhood);
    auto net = init_net(sc.map, nb);
    const int max_sweeps = get_int(params, "max_sweeps", sc.map.rows * sc.map.cols);
    auto res = solve(net, max_sweeps);
    out.iterations = res.sweeps;
    out.field_dump = format_field(res.field, sc.map);
    if (res.field.at(sc.map.start) == kUnreachable) return out;
    out.path = backtrack(res.field, sc.map, sc.map.start, nb);
    out.path_len = path_length(out.path, nb);
    out.success = true;
    return out;
}

PlanOutcome plan_shunting(const ScenarioConfig& sc, const ParamMap& params) {
    PlanOutcome out;
    ShuntingParams p;
    p.A = get_double(params, "A", p.A);
    p.B = get_double(params, "B", p.B);
    p.D = get_double(params, "D", p.D);
    p.E = get_double(params, "E", p.E);
    p.mu = get_double(params, "mu", p.mu);
    p.r0 = get_double(params, "r0", p.r0);
    p.dt = get_double(params, "dt", p.dt);
    p.tol = get_double(params, "tol", p.tol);
    p.max_iters = get_int(params, "max_iters", p.max_iters);
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    auto field = settle(sc.map, p);
    auto res = extract_path(field, sc.map, sc.map.start);
    out.iterations = field.iterations;
    out.field_dump = format_activity(field, sc.map);
    out.path = res.path;
    out.success = res.reached;
    if (res.reached) out.path_len = path_length(res.path, Neighborhood::Eight);
    return out;
}

PlanOutcome plan_apf(const ScenarioConfig& sc, const ParamMap& params) {
    PlanOutcome out;
    ApfParams p;
    p.alpha = get_double(params, "alpha", p.alpha);
    p.beta = get_double(params, "beta", p.beta);
    p.lambda = get_double(params, "lambda", p.lambda);
    p.eta = get_double(params, "eta", p.eta);
    p.rho0 = get_double(params, "rho0", p.rho0);
    p.d_safe = get_double(params, "d_safe", p.d_safe);
    p.dt = get_double(params, "dt", p.dt);
    p.v_max = get_double(params, "v_max", p.v_max);
    p.goal_eps = get_double(params, "goal_eps", p.goal_eps);
    p.max_steps = get_int(params, "max_steps", p.max_steps);
    auto res = simulate(make_apf_scenario(sc), p);
    out.success = res.arrived;
    out.iterations = res.steps;
    out.collisions = res.collisions;
    out.trajectory_dump = trajectory_csv(res);
    if (res.arrived) out.path_len = res.traveled;
    return out;
}

FitnessParams fitness_params_from(const ParamMap& params, FitnessParams fp) {
    fp.r_term = get_double(params, "r_term", fp.r_term);
    return fp;
}

PlanOutcome plan_ga(const ScenarioConfig& sc, std::uint64_t seed, const ParamMap& params) {
    GaParams p;
    p.population = get_int(params, "population", p.population);
    p.generations = get_int(params, "generations", p.generations);
    p.crossover_rate = get_double(params, "crossover_rate", p.crossover_rate);
    p.mutation_rate = get_double(params, "mutation_rate", p.mutation_rate);
    p.interior_waypoints = get_int(params, "interior_waypoints", p.interior_waypoints);
    p.fitness_params = fitness_params_from(params, p.fitness_params);
    auto res = run_ga(sc, p, seed);
    PlanOutcome out;
    out.success = res.success;
    out.path_len = res.best_cost;
    out.iterations = res.iterations_to_best;
    out.path = res.best_path;
    out.trace = std::move(res.trace);
    return out;
}

PlanOutcome plan_aco(const ScenarioConfig& sc, std::uint64_t seed, const ParamMap& params) {
    AcoParams p;
    p.ants = get_int(params, "ants", p.ants);
    p.iterations = get_int(params, "iterations", p.iterations);
    p.alpha_ph = get_double(params, "alpha_ph", p.alpha_ph);
    p.beta_h = get_double(params, "beta_h", p.beta_h);
    p.elitist_bonus = get_double(params, "elitist_bonus", p.elitist_bonus);
    p.evaporation = get_double(params, "evaporation", p.evaporation);
    p.deposit_q = get_double(params, "q", p.deposit_q);
    p.tau0 = get_double(params, "tau0", p.tau0);
    p.nb = get_nb(params, p.nb);
    auto res = run_aco(sc, p, seed);
    PlanOutcome out;
    out.success = res.success;
    out.path_len = res.best_cost;
    out.iterations = res.iterations_to_best;
    out.path = res.best_path;
    out.trace = std::move(res.trace);
    return out;
}

PlanOutcome plan_bso(const ScenarioConfig& sc, std::uint64_t seed, const ParamMap& params) {
    BsoParams p;
    p.swarm = get_int(params, "swarm", p.swarm);
    p.iterations = get_int(params, "iterations", p.iterations);
    p.inertia = get_double(params, "inertia", p.inertia);
    p.cognitive = get_double(params, "cognitive", p.cognitive);
    p.social = get_double(params, "social", p.social);
    p.lambda_blend = get_double(params, "lambda_blend", p.lambda_blend);
    p.step_decay = get_double(params, "step_decay", p.step_decay);
    p.antenna_span = get_double(params, "antenna_span", p.antenna_span);
    p.step0 = get_double(params, "step0", p.step0);
    p.interior_waypoints = get_int(params, "interior_waypoints", p.interior_waypoints);
    p.fitness_params = fitness_params_from(params, p.fitness_params);
    auto res = run_bso(sc, p, seed);
    PlanOutcome out;
    out.success = res.success;
    out.path_len = res.best_cost;
    out.iterations = res.iterations_to_best;
    out.path = res.best_path;
    out.trace = std::move(res.trace);
    return out;
}

}  // namespace

TrialResult run_trial(const std::string& algo, const ScenarioConfig& sc,
                      const std::string& map_name, std::uint64_t seed, const ParamMap& params) {
    if (std::find(kKnownAlgos.begin(), kKnownAlgos.end(), algo) == kKnownAlgos.end())
        throw ConfigError("unknown algorithm '" + algo + "'");

    TrialResult tr;
    tr.algo = algo;
    tr.map_name = map_name;
    tr.seed = seed;

    const auto t0 = std::chrono::steady_clock::now();
    PlanOutcome out;
    if (algo == "consensus") out = plan_consensus(sc, params);
    else if (algo == "shunting") out = plan_shunting(sc, params);
    else if (algo == "apf") out = plan_apf(sc, params);
    else if (algo == "ga") out = plan_ga(sc, seed, params);
    else if (algo == "aco") out = plan_aco(sc, seed, params);
    else out = plan_bso(sc, seed, params);
    const auto t1 = std::chrono::steady_clock::now();

    tr.success = out.success;
    tr.path_len = out.path_len;
    tr.iterations_to_best = out.iterations;
    tr.collisions = out.collisions;
    tr.path = std::move(out.path);
    tr.trace = std::move(out.trace);
    tr.field_dump = std::move(out.field_dump);
    tr.trajectory_dump = std::move(out.trajectory_dump);
    tr.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return tr;
}

MetricsTable run_suite(const BenchConfig& cfg) {
    if (cfg.algos.empty()) throw ConfigError("no algorithms selected");
    if (cfg.suite.empty()) throw ConfigError("empty scenario suite");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");

    struct Job {
        const std::string* algo;
        const std::pair<std::string, ScenarioConfig>* scenario;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& algo : cfg.algos)
        for (const auto& scenario : cfg.suite)
            for (int t = 0; t < cfg.trials; ++t)
                jobs.push_back({&algo, &scenario, cfg.base_seed + std::uint64_t(t)});

    MetricsTable table;
    table.trials.resize(jobs.size());
    const int workers = std::max(1, std::min<int>(cfg.workers, int(jobs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            table.trials[i] = run_trial(*job.algo, job.scenario->second, job.scenario->first,
                                        job.seed, cfg.params);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    table.rows = aggregate(table.trials);
    return table;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& trials) {
    std::vector<AggregateRow> rows;
    auto find_row = [&](const TrialResult& tr) -> AggregateRow& {
        for (auto& row : rows)
            if (row.algo == tr.algo && row.map_name == tr.map_name) return row;
        rows.push_back({tr.algo, tr.map_name, 0, 0, 0, 0, 0, 0});
        return rows.back();
    };
    std::map<std::pair<std::string, std::string>, std::vector<double>> lens;
    for (const auto& tr : trials) {
        auto& row = find_row(tr);
        ++row.trials;
        row.success_rate += tr.success ? 1.0 : 0.0;
        row.mean_iterations += double(tr.iterations_to_best);
        row.mean_wall_ms += tr.wall_ms;
        if (tr.success) lens[{tr.algo, tr.map_name}].push_back(tr.path_len);
    }
    for (auto& row : rows) {
        row.success_rate /= double(row.trials);
        row.mean_iterations /= double(row.trials);
        row.mean_wall_ms /= double(row.trials);
        auto& ls = lens[{row.algo, row.map_name}];
        if (!ls.empty()) {
            std::sort(ls.begin(), ls.end());
            double sum = 0.0;
            for (double v : ls) sum += v;
            row.mean_path_len = sum / double(ls.size());
            row.median_path_len = ls.size() % 2 == 1
                                      ? ls[ls.size() / 2]
                                      : 0.5 * (ls[ls.size() / 2 - 1] + ls[ls.size() / 2]);
        }
    }
    return rows;
}

std::optional<double> wall_time_ratio(const MetricsTable& table, const std::string& num_algo,
                                      const std::string& den_algo) {
    double num = 0.0, den = 0.0;
    int num_n = 0, den_n = 0;
    for (const auto& tr : table.trials) {
        if (tr.algo == num_algo) {
            num += tr.wall_ms;
            ++num_n;
        } else if (tr.algo == den_algo) {
            den += tr.wall_ms;
            ++den_n;
        }
    }
    if (num_n == 0 || den_n == 0 || den <= 0.0) return std::nullopt;
    return (num / double(num_n)) / (den / double(den_n));
}

namespace {

std::string format_double(double v) {
    if (v == kUnreachable) return "inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string emit_csv(const std::vector<TrialResult>& trials, bool include_walltime) {
    std::vector<const TrialResult*> sorted;
    sorted.reserve(trials.size());
    for (const auto& tr : trials) sorted.push_back(&tr);
    std::sort(sorted.begin(), sorted.end(), [](const TrialResult* a, const TrialResult* b) {
        if (a->algo != b->algo) return a->algo < b->algo;
        if (a->map_name != b->map_name) return a->map_name < b->map_name;
        return a->seed < b->seed;
    });

    std::string out = include_walltime
                          ? "algo,map,seed,success,path_len,iterations_to_best,wall_ms,collisions\n"
                          : "algo,map,seed,success,path_len,iterations_to_best,collisions\n";
    for (const TrialResult* tr : sorted) {
        out += tr->algo + "," + tr->map_name + "," + std::to_string(tr->seed) + "," +
               (tr->success ? "1" : "0") + "," + format_double(tr->path_len) + "," +
               std::to_string(tr->iterations_to_best);
        if (include_walltime) out += "," + format_double(tr->wall_ms);
        out += "," + std::to_string(tr->collisions) + "\n";
    }
    return out;
}

std::vector<TrialResult> parse_trials_csv(const std::string& text) {
    std::vector<TrialResult> out;
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw ConfigError("empty CSV");
    const bool has_wall = line.find(",wall_ms,") != std::string::npos;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        const std::size_t expect = has_wall ? 8 : 7;
        if (f.size() != expect) throw ConfigError("bad CSV row: '" + line + "'");
        TrialResult tr;
        tr.algo = f[0];
        tr.map_name = f[1];
        tr.seed = std::stoull(f[2]);
        tr.success = f[3] == "1";
        tr.path_len = f[4] == "inf" ? kUnreachable : std::stod(f[4]);
        tr.iterations_to_best = std::stoi(f[5]);
        if (has_wall) tr.wall_ms = f[6] == "inf" ? 0.0 : std::stod(f[6]);
        tr.collisions = std::stoi(f.back());
        out.push_back(std::move(tr));
    }
    return out;
}

std::string render_map(const GridMap& map, const DistanceField* field, const Path* path) {
    if (field != nullptr) {
        if (field->rows != map.rows || field->cols != map.cols)
            throw std::invalid_argument("field dimensions do not match the map");
        return format_field(*field, map);
    }
    std::vector<std::string> canvas(std::size_t(map.rows), std::string(std::size_t(map.cols), '.'));
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c)
            if (!map.is_free({r, c})) canvas[std::size_t(r)][std::size_t(c)] = '#';
    if (path != nullptr) {
        for (const Coord& w : path->waypoints) {
            if (!map.in_bounds(w))
                throw std::invalid_argument("path leaves the map");
            canvas[std::size_t(w.row)][std::size_t(w.col)] = '*';
        }
    }
    auto put = [&](Coord c, char ch) {
        if (map.in_bounds(c)) canvas[std::size_t(c.row)][std::size_t(c.col)] = ch;
    };
    put(map.start, 'S');
    put(map.target, 'T');
    std::string out;
    for (const auto& row : canvas) {
        out += row;
        out += '\n';
    }
    return out;
}

std::string format_table(const MetricsTable& table) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-10s %-14s %7s %9s %10s %12s %10s %11s\n", "algo", "map",
                  "trials", "success", "mean_len", "median_len", "mean_iter", "mean_ms");
    out += buf;
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%-10s %-14s %7d %9.2f %10s %12s %10.1f %11.3f\n",
                      row.algo.c_str(), row.map_name.c_str(), row.trials, row.success_rate,
                      format_double(row.mean_path_len).c_str(),
                      format_double(row.median_path_len).c_str(), row.mean_iterations,
                      row.mean_wall_ms);
        out += buf;
    }
    const auto ratio = wall_time_ratio(table, "bso", "aco");
    if (ratio.has_value()) {
        std::snprintf(buf, sizeof buf, "bso/aco mean wall-time ratio: %.2f%%\n", *ratio * 100.0);
        out += buf;
    }
    return out;
}

}  // namespace gridplan
