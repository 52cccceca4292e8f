#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gridplan/bench.hpp"
#include "gridplan/consensus.hpp"
#include "test_util.hpp"

using namespace gridplan;

namespace {

ScenarioConfig open5() {
    return load_scenario("5 5\nS....\n.....\n.....\n.....\n....T\n");
}

}  // namespace

TEST_CASE("parse_params") {
    auto p = parse_params("alpha=1.5,iterations=30,nb=eight");
    CHECK(p.at("alpha") == "1.5");
    CHECK(p.at("nb") == "eight");
    CHECK(parse_params("").empty());
    CHECK_THROWS_AS(parse_params("novalue"), ConfigError);
    CHECK_THROWS_AS(parse_params("=x"), ConfigError);
}

TEST_CASE("run_trial: unknown algo and bad params fail before planning") {
    auto sc = open5();
    CHECK_THROWS_AS(run_trial("dijkstra", sc, "m", 1, {}), ConfigError);
    CHECK_THROWS_AS(run_trial("aco", sc, "m", 1, parse_params("ants=abc")), ConfigError);
    CHECK_THROWS_AS(run_trial("consensus", sc, "m", 1, parse_params("nb=six")), ConfigError);
}

TEST_CASE("run_trial: consensus path length equals the oracle distance") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = testutil::random_map(rng, 12, 12, 0.25);
        ScenarioConfig sc;
        sc.map = m;
        auto oracle = shortest_path_oracle(m, Neighborhood::Four);
        auto tr = run_trial("consensus", sc, "rand", 1, {});
        if (oracle.field.at(m.start) == kUnreachable) {
            CHECK(!tr.success);
            CHECK(tr.path_len == kUnreachable);
        } else {
            CHECK(tr.success);
            CHECK(tr.path_len == oracle.field.at(m.start));
        }
    }
}

TEST_CASE("run_trial: aco with zero iterations reports failure") {
    auto tr = run_trial("aco", open5(), "open5", 1, parse_params("iterations=0"));
    CHECK(!tr.success);
    CHECK(tr.path_len == kUnreachable);
}

TEST_CASE("run_trial is deterministic except wall_ms") {
    auto sc = open5();
    auto params = parse_params("iterations=20");
    auto a = run_trial("aco", sc, "open5", 7, params);
    auto b = run_trial("aco", sc, "open5", 7, params);
    CHECK(a.success == b.success);
    CHECK(a.path_len == b.path_len);
    CHECK(a.iterations_to_best == b.iterations_to_best);
    CHECK(a.collisions == b.collisions);
    CHECK(emit_csv({a}, false) == emit_csv({b}, false));
}

TEST_CASE("run_suite: single cell cross product and config errors") {
    BenchConfig cfg;
    cfg.suite.emplace_back("open5", open5());
    cfg.algos = {"consensus"};
    cfg.trials = 1;
    auto table = run_suite(cfg);
    CHECK(table.trials.size() == 1);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].success_rate == 1.0);
    CHECK(table.rows[0].trials == 1);

    BenchConfig empty_algos = cfg;
    empty_algos.algos.clear();
    CHECK_THROWS_AS(run_suite(empty_algos), ConfigError);
    BenchConfig no_maps = cfg;
    no_maps.suite.clear();
    CHECK_THROWS_AS(run_suite(no_maps), ConfigError);
    BenchConfig no_trials = cfg;
    no_trials.trials = 0;
    CHECK_THROWS_AS(run_suite(no_trials), ConfigError);
}

TEST_CASE("run_suite: results independent of the worker count") {
    BenchConfig cfg;
    cfg.suite.emplace_back("open5", open5());
    cfg.algos = {"consensus", "aco"};
    cfg.trials = 4;
    cfg.params = parse_params("iterations=15");
    cfg.workers = 1;
    auto serial = run_suite(cfg);
    cfg.workers = 4;
    auto parallel = run_suite(cfg);
    CHECK(emit_csv(serial.trials, false) == emit_csv(parallel.trials, false));
}

TEST_CASE("emit_csv: layout, sorting, inf and the wall-time flag") {
    CHECK(emit_csv({}) == "algo,map,seed,success,path_len,iterations_to_best,wall_ms,collisions\n");

    TrialResult t1{"bbb", "m", 2, true, 12.5, 3, 99.0, 0, {}};
    TrialResult t2{"aaa", "m", 1, false, kUnreachable, 0, 11.0, 2, {}};
    auto csv = emit_csv({t1, t2});
    CHECK(csv ==
          "algo,map,seed,success,path_len,iterations_to_best,wall_ms,collisions\n"
          "aaa,m,1,0,inf,0,11,2\n"
          "bbb,m,2,1,12.5,3,99,0\n");

    auto no_wall = emit_csv({t1, t2}, false);
    CHECK(no_wall.find("wall_ms") == std::string::npos);
    TrialResult t1_other_wall = t1;
    t1_other_wall.wall_ms = 1234.5;
    CHECK(emit_csv({t1_other_wall, t2}, false) == no_wall);  // byte-identical
}

TEST_CASE("csv round-trips: emit is a fixed point of emit(parse(.))") {
    TrialResult t1{"ga", "map01", 5, true, 28.62741699, 144, 12.25, 0, {}};
    TrialResult t2{"ga", "map01", 6, false, kUnreachable, 0, 8.5, 3, {}};
    const auto once = emit_csv({t1, t2});
    auto parsed = parse_trials_csv(once);
    REQUIRE(parsed.size() == 2);
    CHECK(emit_csv(parsed) == once);
    CHECK(parsed[0].seed == 5);
    CHECK(parsed[0].success);
    CHECK(parsed[1].path_len == kUnreachable);
    CHECK(parsed[1].collisions == 3);
}

TEST_CASE("aggregate matches a direct recomputation") {
    std::vector<TrialResult> trials{
        {"a", "m", 1, true, 10.0, 5, 1.0, 0, {}},
        {"a", "m", 2, true, 20.0, 7, 3.0, 0, {}},
        {"a", "m", 3, false, kUnreachable, 0, 2.0, 1, {}},
        {"b", "m", 1, true, 8.0, 2, 4.0, 0, {}},
    };
    auto rows = aggregate(trials);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].algo == "a");
    CHECK(rows[0].trials == 3);
    CHECK(rows[0].success_rate == doctest::Approx(2.0 / 3.0));
    CHECK(rows[0].mean_path_len == doctest::Approx(15.0));
    CHECK(rows[0].median_path_len == doctest::Approx(15.0));
    CHECK(rows[0].mean_wall_ms == doctest::Approx(2.0));
    CHECK(rows[1].mean_path_len == doctest::Approx(8.0));

    MetricsTable table{trials, rows};
    auto ratio = wall_time_ratio(table, "b", "a");
    REQUIRE(ratio.has_value());
    CHECK(*ratio == doctest::Approx(4.0 / 2.0));
    CHECK(!wall_time_ratio(table, "b", "zzz").has_value());
}

TEST_CASE("render_map: precedence, path overlay and field tabulation") {
    GridMap tiny(1, 1);
    tiny.start = tiny.target = {0, 0};
    CHECK(render_map(tiny) == "T\n");

    auto sc = load_scenario("2 3\nS#T\n...\n");
    Path p{{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}}};
    CHECK(render_map(sc.map, nullptr, &p) == "S#T\n***\n");
    CHECK(render_map(sc.map) == "S#T\n...\n");

    auto oracle = shortest_path_oracle(sc.map, Neighborhood::Four);
    CHECK(render_map(sc.map, &oracle.field) == "4 -1 0\n3 2 1\n");

    DistanceField wrong(3, 3);
    CHECK_THROWS_AS(render_map(sc.map, &wrong), std::invalid_argument);

    Path outside{{{5, 5}}};
    CHECK_THROWS_AS(render_map(sc.map, nullptr, &outside), std::invalid_argument);
}

TEST_CASE("apf trial reports collisions") {
    auto sc = load_scenario(
        "5 9\n"
        ".........\n"
        ".........\n"
        "S...#...T\n"
        ".........\n"
        ".........\n");
    auto tr = run_trial("apf", sc, "blocked", 1, parse_params("eta=0,d_safe=0.6,max_steps=6000"));
    CHECK(tr.collisions > 0);
}
