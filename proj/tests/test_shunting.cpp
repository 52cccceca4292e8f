#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gridplan/shunting.hpp"
#include "gridplan/rng.hpp"
#include "test_util.hpp"

using namespace gridplan;

TEST_CASE("kernel: r0 = 2 couples the 8-neighborhood, weights 1/d") {
    ShuntingParams p;
    auto k = make_kernel(p);
    CHECK(k.taps.size() == 8);
    for (const auto& tap : k.taps) {
        const double d = std::sqrt(double(tap.dr * tap.dr + tap.dc * tap.dc));
        CHECK(tap.w == doctest::Approx(p.mu / d).epsilon(1e-12));
        CHECK(d < p.r0);
    }
    // a wider radius picks up the distance-2 ring as well
    ShuntingParams wide = p;
    wide.r0 = 2.5;
    wide.dt = 0.004;
    CHECK(make_kernel(wide).taps.size() == 20);
}

TEST_CASE("validate: defaults pass, bad params throw") {
    ShuntingParams p;
    CHECK_NOTHROW(validate(p));
    ShuntingParams bad = p;
    bad.dt = 0.05;  // dt*(10+100+12) = 6.1 >= 1
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = p;
    bad.A = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("external_input: target positive, obstacles negative") {
    auto sc = load_scenario("3 3\nS..\n.T.\n..#\n");
    ShuntingParams p;
    auto input = external_input(sc.map, p);
    CHECK(input[sc.map.index({1, 1})] == p.E);
    CHECK(input[sc.map.index({2, 2})] == -p.E);
    CHECK(input[sc.map.index({0, 0})] == 0.0);
    double sum = 0.0;
    for (double v : input) sum += v;
    CHECK(sum == 0.0);  // one target, one obstacle

    // obstacle-free map: inputs sum to exactly E
    auto open = load_scenario("3 3\nS..\n.T.\n...\n");
    auto in2 = external_input(open.map, p);
    sum = 0.0;
    for (double v : in2) sum += v;
    CHECK(sum == p.E);
}

TEST_CASE("step: zero field with zero input stays zero") {
    ShuntingParams p;
    auto kernel = make_kernel(p);
    ActivityField f(4, 4);
    std::vector<double> input(16, 0.0);
    CHECK(step(f, input, kernel, p) == 0.0);
    for (double v : f.x) CHECK(v == 0.0);
}

TEST_CASE("isolated neuron equilibria match the closed forms") {
    ShuntingParams p;  // A=10, B=1, D=1
    auto kernel = make_kernel(p);

    ActivityField pos(1, 1);
    std::vector<double> drive{100.0};
    for (int it = 0; it < 5000; ++it) step(pos, drive, kernel, p);
    CHECK(pos.x[0] == doctest::Approx(p.B * 100.0 / (p.A + 100.0)).epsilon(1e-9));

    ActivityField neg(1, 1);
    std::vector<double> sink{-100.0};
    for (int it = 0; it < 5000; ++it) step(neg, sink, kernel, p);
    CHECK(neg.x[0] == doctest::Approx(-p.D * 100.0 / (p.A + 100.0)).epsilon(1e-9));
}

TEST_CASE("settle: 1x1 target-only map hits B*E/(A+E)") {
    GridMap m(1, 1);
    m.start = m.target = {0, 0};
    ShuntingParams p;
    auto f = settle(m, p);
    CHECK(f.converged);
    CHECK(f.x[0] == doctest::Approx(p.B * p.E / (p.A + p.E)).epsilon(1e-5));
}

TEST_CASE("settle: max_iters 0 returns the zero field, flagged") {
    GridMap m(2, 2);
    m.start = {0, 0};
    m.target = {1, 1};
    ShuntingParams p;
    p.max_iters = 0;
    auto f = settle(m, p);
    CHECK(!f.converged);
    CHECK(f.iterations == 0);
    for (double v : f.x) CHECK(v == 0.0);
}

TEST_CASE("settle: target holds the strict maximum on an open map") {
    auto sc = load_scenario("5 5\nS....\n.....\n..T..\n.....\n.....\n");
    ShuntingParams p;
    auto f = settle(sc.map, p);
    REQUIRE(f.converged);
    const double peak = f.at(sc.map.target);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c)
            if (Coord{r, c} != sc.map.target) CHECK(f.at({r, c}) < peak);
}

TEST_CASE("settle is deterministic") {
    auto sc = load_scenario("6 6\nS.....\n..#...\n..#...\n..#...\n......\n....T.\n");
    ShuntingParams p;
    auto f1 = settle(sc.map, p);
    auto f2 = settle(sc.map, p);
    CHECK(f1.x == f2.x);
    CHECK(f1.iterations == f2.iterations);
}

TEST_CASE("boundedness under random admissible inputs") {
    Rng rng(63);
    ShuntingParams p;
    auto kernel = make_kernel(p);
    for (int trial = 0; trial < 5; ++trial) {
        ActivityField f(6, 6);
        std::vector<double> input(36);
        for (auto& v : input) v = rng.uniform(-p.E, p.E);
        for (int it = 0; it < 400; ++it) {
            step(f, input, kernel, p);
            for (double v : f.x) {
                CHECK(v >= -p.D - p.tol);
                CHECK(v <= p.B + p.tol);
            }
        }
    }
}

TEST_CASE("euler step matches an independent right-hand side") {
    Rng rng(64);
    ShuntingParams p;
    auto kernel = make_kernel(p);
    for (int trial = 0; trial < 10; ++trial) {
        ActivityField f(4, 4);
        for (auto& v : f.x) v = rng.uniform(-p.D, p.B);
        std::vector<double> input(16);
        for (auto& v : input) v = rng.uniform(-p.E, p.E);
        const ActivityField before = f;
        step(f, input, kernel, p);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double lateral = 0.0;
                for (int nr = 0; nr < 4; ++nr)
                    for (int nc = 0; nc < 4; ++nc) {
                        const double d = std::sqrt(double((nr - r) * (nr - r) + (nc - c) * (nc - c)));
                        if (d > 0.0 && d < p.r0 && before.at({nr, nc}) > 0.0)
                            lateral += p.mu / d * before.at({nr, nc});
                    }
                const std::size_t i = std::size_t(r) * 4 + std::size_t(c);
                const double xi = before.at({r, c});
                const double rhs = -p.A * xi +
                                   (p.B - xi) * (std::max(input[i], 0.0) + lateral) -
                                   (p.D + xi) * std::max(-input[i], 0.0);
                const double fd = (f.at({r, c}) - xi) / p.dt;
                CHECK(fd == doctest::Approx(rhs).epsilon(1e-9));
            }
    }
}

TEST_CASE("extract_path: start equals target") {
    GridMap m(3, 3);
    m.start = m.target = {1, 1};
    ActivityField f(3, 3);
    auto res = extract_path(f, m, m.start);
    CHECK(res.reached);
    CHECK(res.path.waypoints.size() == 1);
}

TEST_CASE("extract_path: monotone corridor") {
    auto sc = load_scenario("1 5\nS...T\n");
    ShuntingParams p;
    auto f = settle(sc.map, p);
    auto res = extract_path(f, sc.map, sc.map.start);
    REQUIRE(res.reached);
    CHECK(res.path.waypoints.size() == 5);
}

TEST_CASE("extract_path: enclosed start stalls immediately") {
    // all eight neighbors of S are obstacles
    auto sc = load_scenario("3 4\n###T\n#S##\n####\n");
    ShuntingParams p;
    auto f = settle(sc.map, p);
    auto res = extract_path(f, sc.map, sc.map.start);
    CHECK(!res.reached);
    CHECK(res.path.waypoints.size() == 1);
}

TEST_CASE("obstacle cells never rise above tol at steady state") {
    Rng rng(71);
    ShuntingParams p;
    for (int trial = 0; trial < 6; ++trial) {
        auto m = testutil::random_map(rng, 9, 9, 0.2);
        auto f = settle(m, p);
        REQUIRE(f.converged);
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c)
                if (!m.is_free({r, c})) CHECK(f.at({r, c}) <= p.tol);
    }
}

TEST_CASE("extracted paths avoid obstacles on varied maps") {
    Rng rng(65);
    ShuntingParams p;
    int reached = 0;
    for (int trial = 0; trial < 8; ++trial) {
        auto m = testutil::random_map(rng, 10, 10, 0.15);
        auto oracle = shortest_path_oracle(m, Neighborhood::Eight);
        if (oracle.field.at(m.start) == kUnreachable) continue;
        auto f = settle(m, p);
        auto res = extract_path(f, m, m.start);
        for (Coord w : res.path.waypoints) CHECK(m.is_free(w));
        if (res.reached) ++reached;
    }
    CHECK(reached >= 1);
}

TEST_CASE("format_activity marks obstacles and prints 6 significant digits") {
    auto sc = load_scenario("1 3\nS#T\n");
    ActivityField f(1, 3);
    f.at({0, 0}) = 0.123456789;
    f.at({0, 2}) = 0.5;
    CHECK(format_activity(f, sc.map) == "0.123457 -1 0.5\n");
}

TEST_CASE("step_scene: scene1 fixed point at zero with saturating output") {
    ShuntingParams p;
    auto kernel = make_kernel(p);
    ActivityField f(3, 3);
    SceneParams sp;
    sp.scene = SceneParams::Scene::Scene1;
    sp.g = SceneParams::Output::LinearSaturating;
    CHECK(step_scene(f, sp, kernel, p) == 0.0);
    for (double v : f.x) CHECK(v == 0.0);
}

TEST_CASE("step_scene: scene2 with zero gain relaxes toward I/A") {
    ShuntingParams p;
    auto kernel = make_kernel(p);
    ActivityField f(2, 2);
    SceneParams sp;
    sp.scene = SceneParams::Scene::Scene2;
    sp.gain = 0.0;
    sp.I = 3.0;
    step_scene(f, sp, kernel, p);
    for (double v : f.x) CHECK(v == doctest::Approx(p.dt * sp.I).epsilon(1e-12));
    for (int it = 0; it < 20000; ++it) step_scene(f, sp, kernel, p);
    for (double v : f.x) CHECK(v == doctest::Approx(sp.I / p.A).epsilon(1e-6));
}

TEST_CASE("step_scene: scene1 with zero gain is pure exponential decay") {
    ShuntingParams p;
    auto kernel = make_kernel(p);
    ActivityField f(2, 2);
    for (auto& v : f.x) v = 0.8;
    SceneParams sp;
    sp.scene = SceneParams::Scene::Scene1;
    sp.gain = 0.0;
    step_scene(f, sp, kernel, p);
    for (double v : f.x) CHECK(v == doctest::Approx(0.8 * (1.0 - p.A * p.dt)).epsilon(1e-12));
}
