#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gridplan/ga.hpp"
#include "test_util.hpp"

using namespace gridplan;

namespace {

Chromosome waypoint_chromosome(std::vector<Coord> pts, bool feasible = true) {
    Chromosome c;
    c.encoding = Chromosome::Encoding::Waypoints;
    c.waypoints = std::move(pts);
    c.feasible = feasible;
    return c;
}

Chromosome binary_chromosome(const std::string& bits) {
    Chromosome c;
    c.encoding = Chromosome::Encoding::Binary;
    for (char ch : bits) c.bits.push_back(ch == '1' ? 1 : 0);
    return c;
}

std::string bits_of(const Chromosome& c) {
    std::string s;
    for (auto b : c.bits) s += b ? '1' : '0';
    return s;
}

}  // namespace

TEST_CASE("fitness micro-values") {
    FitnessParams fp;  // R = 0
    CHECK(fitness(waypoint_chromosome({{0, 0}, {0, 1}}), fp) == 2.0);          // d=1, n=2
    auto c = waypoint_chromosome({{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}});    // n=5
    // force d = 2 via a two-unit straight line with 5 points
    auto c2 = waypoint_chromosome({{0, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 2}});
    CHECK(fitness(c2, fp) == doctest::Approx(0.75).epsilon(1e-12));            // d=2, n=5
    CHECK(fitness(c, fp) > 0.0);
}

TEST_CASE("fitness: halving d doubles fitness; strictly decreasing in n and d") {
    FitnessParams fp;
    auto len2 = waypoint_chromosome({{0, 0}, {0, 2}});
    auto len1 = waypoint_chromosome({{0, 0}, {0, 1}});
    CHECK(fitness(len1, fp) == doctest::Approx(2.0 * fitness(len2, fp)).epsilon(1e-12));

    auto more_wp = waypoint_chromosome({{0, 0}, {0, 1}, {0, 2}});
    CHECK(fitness(more_wp, fp) < fitness(len2, fp));  // same d=2, larger n

    auto longer = waypoint_chromosome({{0, 0}, {0, 3}});
    CHECK(fitness(longer, fp) < fitness(len2, fp));
}

TEST_CASE("fitness: infeasible penalty and degenerate errors") {
    FitnessParams fp;
    auto ok = waypoint_chromosome({{0, 0}, {3, 4}});
    auto bad = waypoint_chromosome({{0, 0}, {3, 4}}, false);
    CHECK(fitness(bad, fp) == doctest::Approx(fitness(ok, fp) * 1e-3).epsilon(1e-12));

    CHECK_THROWS_AS(fitness(waypoint_chromosome({{0, 0}}), fp), std::invalid_argument);
    CHECK_THROWS_AS(fitness(waypoint_chromosome({{1, 1}, {1, 1}}), fp), std::invalid_argument);
    CHECK_THROWS_AS(fitness(binary_chromosome("1010"), fp), std::invalid_argument);
}

TEST_CASE("segment feasibility: straight lines and corner squeezes") {
    auto m = testutil::make_map({
        "S....",
        ".#...",
        "..#..",
        "....T",
    });
    CHECK(segment_clear(m, {0, 1}, {0, 4}));
    CHECK(!segment_clear(m, {0, 0}, {3, 4}));       // passes through the blocks
    CHECK(!segment_clear(m, {2, 1}, {1, 2}));       // diagonal squeeze between #s
    CHECK(waypoints_feasible(m, {{0, 0}, {0, 4}, {3, 4}}));
    CHECK(!waypoints_feasible(m, {{0, 0}, {3, 3}}));
}

TEST_CASE("densify_polyline yields a four-adjacent path covering the segment") {
    Path p = densify_polyline({{0, 0}, {2, 5}, {4, 5}});
    CHECK(p.waypoints.front() == Coord{0, 0});
    CHECK(p.waypoints.back() == Coord{4, 5});
    for (std::size_t k = 1; k < p.waypoints.size(); ++k) {
        const int dr = std::abs(p.waypoints[k].row - p.waypoints[k - 1].row);
        const int dc = std::abs(p.waypoints[k].col - p.waypoints[k - 1].col);
        CHECK(dr + dc == 1);
    }
}

TEST_CASE("selection_survivors: the pure f_norm > R rule") {
    CHECK(selection_survivors({1.0, 0.3}, {0.5, 0.5}) == std::vector<std::size_t>{0});
    CHECK(selection_survivors({1.0, 1.0}, {0.999, 0.0}) == std::vector<std::size_t>{0, 1});
    CHECK(selection_survivors({0.2}, {0.2}).empty());  // strict inequality
}

TEST_CASE("select: normalized-max individual always survives; size preserved") {
    Rng rng(4);
    FitnessParams fp;
    std::vector<Chromosome> pop;
    for (int k = 0; k < 12; ++k)
        pop.push_back(waypoint_chromosome({{0, 0}, {0, 1 + k}}));  // shortest is best
    for (int round = 0; round < 20; ++round) {
        auto next = select(pop, fp, rng);
        CHECK(next.size() == pop.size());
        bool best_present = false;
        for (const auto& c : next)
            if (c.waypoints == pop[0].waypoints) best_present = true;
        CHECK(best_present);
    }
    CHECK_THROWS_AS(select({}, fp, rng), std::invalid_argument);
}

TEST_CASE("crossover_at: segment swap semantics") {
    auto a = binary_chromosome("000000");
    auto b = binary_chromosome("111111");
    auto [c1, c2] = crossover_at(a, b, 2, 4);
    CHECK(bits_of(c1) == "001100");
    CHECK(bits_of(c2) == "110011");

    auto [w1, w2] = crossover_at(a, b, 0, 6);  // whole length: swapped parents
    CHECK(bits_of(w1) == "111111");
    CHECK(bits_of(w2) == "000000");

    auto [e1, e2] = crossover_at(a, b, 3, 3);  // empty segment: children equal parents
    CHECK(bits_of(e1) == "000000");
    CHECK(bits_of(e2) == "111111");

    CHECK_THROWS_AS(crossover_at(a, binary_chromosome("111"), 0, 1), std::invalid_argument);
}

TEST_CASE("crossover preserves the multiset of genes across the pair") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::string sa, sb;
        for (int k = 0; k < 10; ++k) {
            sa += rng.bernoulli(0.5) ? '1' : '0';
            sb += rng.bernoulli(0.5) ? '1' : '0';
        }
        auto a = binary_chromosome(sa), b = binary_chromosome(sb);
        auto [c1, c2] = crossover(a, b, rng);
        int before = 0, after = 0;
        for (auto bit : a.bits) before += bit;
        for (auto bit : b.bits) before += bit;
        for (auto bit : c1.bits) after += bit;
        for (auto bit : c2.bits) after += bit;
        CHECK(before == after);
        CHECK(c1.bits.size() == a.bits.size());
    }
}

TEST_CASE("mutate: binary flips") {
    Rng rng(5);
    auto c = binary_chromosome("1010");
    auto same = mutate(c, 0.0, rng);
    CHECK(bits_of(same) == "1010");
    auto flipped = mutate(c, 1.0, rng);
    CHECK(bits_of(flipped) == "0101");
}

TEST_CASE("mutate: waypoint output stays feasible and duplicate-free") {
    auto m = testutil::make_map({
        "S.....#...",
        "......#...",
        "......#...",
        "..........",
        "..........",
        "...#......",
        "...#......",
        "...#......",
        "..........",
        ".........T",
    });
    // a feasible seed chromosome routed by hand
    auto seed = waypoint_chromosome({{0, 0}, {4, 1}, {4, 4}, {8, 5}, {9, 9}});
    REQUIRE(waypoints_feasible(m, seed.waypoints));
    Rng rng(31);
    int mutated = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Rng r = rng.child(std::uint64_t(trial));
        auto out = mutate(seed, 1.0, r, &m);
        CHECK(out.feasible);
        CHECK(waypoints_feasible(m, out.waypoints));
        std::set<std::pair<int, int>> seen;
        for (const Coord& w : out.waypoints) CHECK(seen.insert({w.row, w.col}).second);
        CHECK(out.waypoints.front() == m.start);
        CHECK(out.waypoints.back() == m.target);
        if (!(out.waypoints == seed.waypoints)) ++mutated;
    }
    CHECK(mutated > 250);

    CHECK_THROWS_AS(mutate(seed, 1.0, rng, nullptr), std::invalid_argument);
}

TEST_CASE("run_ga: open 10x10 within 5% of the straight line for 18/20 seeds") {
    auto sc = load_scenario(
        "10 10\n"
        "S.........\n..........\n..........\n..........\n..........\n"
        "..........\n..........\n..........\n..........\n.........T\n");
    const double straight = polyline_length({sc.map.start, sc.map.target});
    GaParams p;
    p.generations = 200;
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto res = run_ga(sc, p, seed);
        if (res.success && res.best_cost <= 1.05 * straight) ++good;
    }
    CHECK(good >= 18);
}

TEST_CASE("run_ga: population 1 with zero rates is a fixed point") {
    auto sc = load_scenario("5 5\nS....\n.....\n.....\n.....\n....T\n");
    GaParams p;
    p.population = 1;
    p.generations = 30;
    p.mutation_rate = 0.0;
    p.crossover_rate = 0.0;
    auto res = run_ga(sc, p, 9);
    for (const auto& row : res.trace) CHECK(row.best_cost == res.trace.front().best_cost);
    CHECK(res.iterations_to_best == 0);
}

TEST_CASE("run_ga: best-ever fitness trace is monotone non-decreasing") {
    auto sc = load_scenario(
        "10 10\n"
        "S.........\n..........\n..###.....\n..........\n.....##...\n"
        "..........\n..#.......\n..#.......\n..........\n.........T\n");
    GaParams p;
    p.generations = 60;
    auto res = run_ga(sc, p, 3);
    for (std::size_t k = 1; k < res.trace.size(); ++k)
        CHECK(res.trace[k].best_fitness >= res.trace[k - 1].best_fitness);
    CHECK(res.success);
    // decoded best path is a valid grid path that avoids obstacles
    for (const Coord& w : res.best_path.waypoints) CHECK(sc.map.is_free(w));
    CHECK(res.best_path.waypoints.front() == sc.map.start);
    CHECK(res.best_path.waypoints.back() == sc.map.target);
}

TEST_CASE("trace_csv: pinned header and row shape") {
    std::vector<IterStats> trace{{1, 10.0, 12.5, 40, 0.2}, {2, 9.0, 11.0, 80, 0.25}};
    CHECK(trace_csv(trace) ==
          "iter,best_cost,mean_cost,evaluations\n"
          "1,10,12.5,40\n"
          "2,9,11,80\n");
    CHECK(trace_csv({}) == "iter,best_cost,mean_cost,evaluations\n");
}

TEST_CASE("run_ga is deterministic in the seed") {
    auto sc = load_scenario("8 8\nS.......\n........\n..##....\n........\n........\n....#...\n........\n.......T\n");
    GaParams p;
    p.generations = 40;
    auto a = run_ga(sc, p, 11);
    auto b = run_ga(sc, p, 11);
    CHECK(a.best_cost == b.best_cost);
    CHECK(a.best.waypoints == b.best.waypoints);
    CHECK(a.iterations_to_best == b.iterations_to_best);
}
