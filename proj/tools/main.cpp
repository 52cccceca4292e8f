#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gridplan/bench.hpp"
#include "gridplan/consensus.hpp"
#include "gridplan/perception.hpp"

using namespace gridplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanningFailure = 1;
constexpr int kExitConfigError = 2;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write to '" + path + "'");
    out << content;
}

std::vector<std::string> split_list(const std::string& spec) {
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_plan(const std::string& algo, const std::string& map_file, std::uint64_t seed,
             const std::string& params_spec, const std::string& out_file, bool render,
             bool no_walltime, const std::string& trace_file, const std::string& field_file,
             const std::string& trajectory_file) {
    const auto sc = load_scenario_file(map_file);
    const auto params = parse_params(params_spec);
    const auto tr =
        run_trial(algo, sc, std::filesystem::path(map_file).stem().string(), seed, params);
    std::string out = emit_csv({tr}, !no_walltime);
    if (render) out += render_map(sc.map, nullptr, tr.success ? &tr.path : nullptr);
    write_output(out_file, out);
    if (!trace_file.empty()) write_output(trace_file, trace_csv(tr.trace));
    if (!field_file.empty()) {
        if (tr.field_dump.empty())
            throw ConfigError("algorithm '" + algo + "' does not produce a field dump");
        write_output(field_file, tr.field_dump);
    }
    if (!trajectory_file.empty()) {
        if (tr.trajectory_dump.empty())
            throw ConfigError("algorithm '" + algo + "' does not produce a trajectory");
        write_output(trajectory_file, tr.trajectory_dump);
    }
    return tr.success ? kExitOk : kExitPlanningFailure;
}

int cmd_bench(const std::string& suite_dir, const std::string& algos_spec, int trials,
              std::uint64_t seed, const std::string& params_spec, const std::string& out_file,
              bool no_walltime, int workers) {
    BenchConfig cfg;
    cfg.algos = split_list(algos_spec);
    cfg.trials = trials;
    cfg.base_seed = seed;
    cfg.params = parse_params(params_spec);
    cfg.workers = workers;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(suite_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".scn")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) cfg.suite.emplace_back(f.stem().string(), load_scenario_file(f));

    const auto table = run_suite(cfg);
    write_output(out_file, emit_csv(table.trials, !no_walltime));
    std::cout << format_table(table);
    return kExitOk;
}

int cmd_perceive(const std::string& frame_file, double threshold, int order,
                 const std::string& out_file, const std::string& grid_out, int cell, bool invert) {
    const auto frame = read_pgm_file(frame_file);
    const auto report = assess_frame(frame, order);
    write_output(out_file, "f_x,f_y,sf,residual_mse\n" + quality_csv(report) + "\n");
    if (!grid_out.empty()) {
        const auto grid = frame_to_grid(frame, {threshold}, cell, !invert);
        std::string text = std::to_string(grid.rows) + " " + std::to_string(grid.cols) + "\n";
        for (int r = 0; r < grid.rows; ++r) {
            for (int c = 0; c < grid.cols; ++c) text += grid.is_free({r, c}) ? '.' : '#';
            text += '\n';
        }
        write_output(grid_out, text);
    }
    return kExitOk;
}

int cmd_verify_field(const std::string& map_file, const std::string& field_file, bool eight) {
    const auto sc = load_scenario_file(map_file);
    std::ifstream in(field_file);
    if (!in) throw ConfigError("cannot open field file '" + field_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    DistanceField field;
    try {
        field = parse_field(ss.str(), sc.map);
    } catch (const FieldParseError& e) {
        std::cerr << "field parse error: " << e.what() << "\n";
        return kExitConfigError;
    }
    const auto nb = eight ? Neighborhood::Eight : Neighborhood::Four;
    const auto violation = verify_consistency(field, sc.map, nb);
    if (violation.has_value()) {
        std::cout << "violation at (" << violation->cell.row << "," << violation->cell.col
                  << "): value " << violation->value << ", expected " << violation->expected
                  << " (" << violation->reason << ")\n";
        return kExitPlanningFailure;
    }
    std::cout << "field is locally consistent\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid path-planning suite and benchmark harness"};
    app.require_subcommand(1);

    // plan
    auto* plan = app.add_subcommand("plan", "run one planner on one scenario");
    std::string plan_algo, plan_map, plan_params, plan_out, plan_trace, plan_field,
        plan_trajectory;
    std::uint64_t plan_seed = 1;
    bool plan_render = false, plan_no_wall = false;
    plan->add_option("--algo", plan_algo, "one of shunting|consensus|apf|ga|aco|bso")->required();
    plan->add_option("--map", plan_map, "scenario file")->required();
    plan->add_option("--seed", plan_seed, "rng seed");
    plan->add_option("--params", plan_params, "comma-separated key=value overrides");
    plan->add_option("--out", plan_out, "output file (default stdout)");
    plan->add_flag("--render", plan_render, "append an ASCII rendering of the planned path");
    plan->add_flag("--no-walltime", plan_no_wall, "omit the wall_ms column");
    plan->add_option("--trace-out", plan_trace, "write the per-iteration trace CSV (ga/aco/bso)");
    plan->add_option("--field-out", plan_field,
                     "write the distance field (consensus) or activity field (shunting)");
    plan->add_option("--trajectory-out", plan_trajectory, "write the apf trajectory CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "run the seeded benchmark suite");
    std::string bench_suite, bench_algos, bench_params, bench_out;
    int bench_trials = 20, bench_workers = 1;
    std::uint64_t bench_seed = 1;
    bool bench_no_wall = false;
    bench->add_option("--suite", bench_suite, "directory of .scn files")->required();
    bench->add_option("--algos", bench_algos, "comma-separated algorithm list")->required();
    bench->add_option("--trials", bench_trials, "trials per (algo, map)");
    bench->add_option("--seed", bench_seed, "base seed; trial k uses seed+k");
    bench->add_option("--params", bench_params, "comma-separated key=value overrides");
    bench->add_option("--out", bench_out, "CSV output file")->required();
    bench->add_flag("--no-walltime", bench_no_wall, "omit the wall_ms column");
    bench->add_option("--workers", bench_workers, "concurrent trial runners");

    // perceive
    auto* perceive = app.add_subcommand("perceive", "frame quality report and occupancy grid");
    std::string pv_frame, pv_out, pv_grid_out;
    double pv_threshold = 128.0;
    int pv_order = 2, pv_cell = 1;
    bool pv_invert = false;
    perceive->add_option("--frame", pv_frame, "ASCII PGM (P2) input")->required();
    perceive->add_option("--threshold", pv_threshold, "binarization threshold in (0,255)");
    perceive->add_option("--order", pv_order, "predictor order for the residual score");
    perceive->add_option("--out", pv_out, "quality CSV output (default stdout)");
    perceive->add_option("--grid-out", pv_grid_out, "also write the binarized occupancy grid");
    perceive->add_option("--cell", pv_cell, "downsample factor for --grid-out");
    perceive->add_flag("--invert", pv_invert, "treat black as occupied");

    // verify-field
    auto* verify = app.add_subcommand("verify-field", "check a distance field dump");
    std::string vf_map, vf_field;
    bool vf_eight = false;
    verify->add_option("--map", vf_map, "scenario file")->required();
    verify->add_option("--field", vf_field, "field dump file")->required();
    verify->add_flag("--eight", vf_eight, "verify against the eight-neighborhood");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (plan->parsed())
            return cmd_plan(plan_algo, plan_map, plan_seed, plan_params, plan_out, plan_render,
                            plan_no_wall, plan_trace, plan_field, plan_trajectory);
        if (bench->parsed())
            return cmd_bench(bench_suite, bench_algos, bench_trials, bench_seed, bench_params,
                             bench_out, bench_no_wall, bench_workers);
        if (perceive->parsed())
            return cmd_perceive(pv_frame, pv_threshold, pv_order, pv_out, pv_grid_out, pv_cell,
                                pv_invert);
        if (verify->parsed()) return cmd_verify_field(vf_map, vf_field, vf_eight);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
