#include "gridplan/bso.hpp"

#include <algorithm>
#include <cmath>

namespace gridplan {

std::vector<double> random_direction(std::size_t n, Rng& rng) {
    std::vector<double> b(n);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& v : b) {
            v = rng.normal();
            norm += v * v;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : b) v /= norm;
    return b;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

std::vector<double> normalized_or_random(std::vector<double> d, std::size_t n, Rng& rng) {
    double norm = 0.0;
    for (double v : d) norm += v * v;
    if (norm < 1e-24) return random_direction(n, rng);
    norm = std::sqrt(norm);
    for (auto& v : d) v /= norm;
    return d;
}

}  // namespace

double antennae_step(Beetle& beetle, const FitnessFn& f, const std::vector<double>& gbest,
                     const BsoParams& params, Rng& rng,
                     const std::vector<double>* direction_override) {
    const std::size_t n = beetle.x.size();
    const std::vector<double> b =
        direction_override != nullptr ? *direction_override : random_direction(n, rng);

    std::vector<double> right(n), left(n);
    for (std::size_t i = 0; i < n; ++i) {
        right[i] = beetle.x[i] + 0.5 * params.antenna_span * b[i];
        left[i] = beetle.x[i] - 0.5 * params.antenna_span * b[i];
    }
    const int s = sign(f(right) - f(left));

    const double r1 = rng.uniform01(), r2 = rng.uniform01();
    for (std::size_t i = 0; i < n; ++i) {
        const double bas = beetle.step * b[i] * double(s);
        beetle.v[i] = params.inertia * beetle.v[i] +
                      params.cognitive * r1 * (beetle.pbest[i] - beetle.x[i]) +
                      params.social * r2 * (gbest[i] - beetle.x[i]);
        beetle.x[i] += params.lambda_blend * beetle.v[i] + (1.0 - params.lambda_blend) * bas;
    }
    beetle.step *= params.step_decay;
    beetle.last_dir = b;

    const double fit = f(beetle.x);
    if (fit > beetle.pbest_fit) {
        beetle.pbest_fit = fit;
        beetle.pbest = beetle.x;
    }
    return fit;
}

std::vector<double> chemotaxis_direction(const Beetle& beetle, double beetle_fitness,
                                         const SwarmStats& stats, Rng& rng) {
    const std::size_t n = beetle.x.size();
    if (beetle.fails >= 2 && !beetle.last_dir.empty()) {
        std::vector<double> reversed(n);
        for (std::size_t i = 0; i < n; ++i) reversed[i] = -beetle.last_dir[i];
        return reversed;
    }
    if (beetle.fails == 1) return random_direction(n, rng);
    std::vector<double> d(n);
    const std::vector<double>& head =
        beetle_fitness >= stats.fitness_q80 ? stats.gbest : stats.centroid;
    for (std::size_t i = 0; i < n; ++i) d[i] = head[i] - beetle.x[i];
    return normalized_or_random(std::move(d), n, rng);
}

double fitness_quantile(std::vector<double> fitnesses, double q) {
    if (fitnesses.empty()) return 0.0;
    std::sort(fitnesses.begin(), fitnesses.end());
    const std::size_t idx =
        std::size_t(std::ceil(q * double(fitnesses.size() - 1)));
    return fitnesses[std::min(idx, fitnesses.size() - 1)];
}

BsoResult run_bso(const ScenarioConfig& sc, const BsoParams& params, std::uint64_t seed) {
    const GridMap& map = sc.map;
    Rng rng(seed);
    const std::size_t dim = 2 * std::size_t(params.interior_waypoints);
    const FitnessParams& fp = params.fitness_params;

    long evaluations = 0;
    // interior waypoints are ordered by their projection onto the
    // start->target chord so a decoded polyline runs route-wise instead of
    // zigzagging across the map
    const double chord_r = double(map.target.row - map.start.row);
    const double chord_c = double(map.target.col - map.start.col);
    auto decode = [&](const std::vector<double>& x) {
        Chromosome c;
        c.encoding = Chromosome::Encoding::Waypoints;
        std::vector<std::pair<double, Coord>> interior;
        for (std::size_t k = 0; k + 1 < dim; k += 2) {
            const int r = std::clamp(int(std::lround(x[k])), 0, map.rows - 1);
            const int col = std::clamp(int(std::lround(x[k + 1])), 0, map.cols - 1);
            const double proj = double(r - map.start.row) * chord_r +
                                double(col - map.start.col) * chord_c;
            interior.emplace_back(proj, Coord{r, col});
        }
        std::stable_sort(interior.begin(), interior.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        c.waypoints.push_back(map.start);
        for (const auto& [proj, cell] : interior) c.waypoints.push_back(cell);
        c.waypoints.push_back(map.target);
        c.feasible = waypoints_feasible(map, c.waypoints);
        return c;
    };
    auto objective = [&](const std::vector<double>& x) {
        ++evaluations;
        return fitness(decode(x), fp);
    };

    BsoResult res;
    Chromosome best_decoded;
    bool have_feasible = false;
    double best_feasible_cost = kUnreachable;

    std::vector<Beetle> swarm(std::size_t(params.swarm));
    std::vector<double> fits(swarm.size());
    std::vector<double> gbest;
    double gbest_fit = -kUnreachable;

    // seed positions around the start->target chord: evenly spaced points
    // plus gaussian jitter, so early polylines are roughly route-shaped;
    // the jitter scale is stratified across the swarm for diversity
    const double extent = double(std::max(map.rows, map.cols));
    for (std::size_t k = 0; k < swarm.size(); ++k) {
        Beetle& beetle = swarm[k];
        const double jitter =
            extent * (0.05 + 0.4 * double(k) / double(std::max<std::size_t>(swarm.size() - 1, 1)));
        beetle.x.resize(dim);
        for (std::size_t i = 0; i < dim; i += 2) {
            const double u = double(i / 2 + 1) / double(params.interior_waypoints + 1);
            const double row = double(map.start.row) + u * double(map.target.row - map.start.row);
            const double col = double(map.start.col) + u * double(map.target.col - map.start.col);
            beetle.x[i] = std::clamp(row + jitter * rng.normal(), 0.0, double(map.rows - 1));
            beetle.x[i + 1] = std::clamp(col + jitter * rng.normal(), 0.0, double(map.cols - 1));
        }
        beetle.v.assign(dim, 0.0);
        beetle.step = params.step0;
        const double fit = objective(beetle.x);
        beetle.pbest = beetle.x;
        beetle.pbest_fit = fit;
        beetle.last_fit = fit;
        fits[k] = fit;
        if (fit > gbest_fit) {
            gbest_fit = fit;
            gbest = beetle.x;
        }
    }

    auto track_best = [&](const std::vector<double>& x, int iter) {
        Chromosome c = decode(x);
        if (!c.feasible) return;
        const double cost = polyline_length(c.waypoints);
        if (cost < best_feasible_cost) {
            best_feasible_cost = cost;
            best_decoded = std::move(c);
            res.best_position = x;
            res.iterations_to_best = iter;
            have_feasible = true;
        }
    };
    for (const Beetle& beetle : swarm) track_best(beetle.x, 0);

    auto reseed = [&](Beetle& beetle, Rng& r) {
        for (std::size_t i = 0; i < dim; i += 2) {
            const double u = double(i / 2 + 1) / double(params.interior_waypoints + 1);
            const double row = double(map.start.row) + u * double(map.target.row - map.start.row);
            const double col = double(map.start.col) + u * double(map.target.col - map.start.col);
            const double jitter = 0.3 * extent;
            beetle.x[i] = std::clamp(row + jitter * r.normal(), 0.0, double(map.rows - 1));
            beetle.x[i + 1] = std::clamp(col + jitter * r.normal(), 0.0, double(map.cols - 1));
        }
        beetle.v.assign(dim, 0.0);
        beetle.step = params.step0;
        beetle.fails = 0;
        const double fit = objective(beetle.x);
        beetle.pbest = beetle.x;
        beetle.pbest_fit = fit;
        beetle.last_fit = fit;
        return fit;
    };

    for (int it = 1; it <= params.iterations; ++it) {
        // periodic random restart of beetles that never found a clear route
        if (it % 60 == 0) {
            for (std::size_t k = 0; k < swarm.size(); ++k) {
                if (decode(swarm[k].pbest).feasible) continue;
                Rng r = rng.child(0xBEE5000u + (std::uint64_t(it) << 16) + k);
                fits[k] = reseed(swarm[k], r);
                if (fits[k] > gbest_fit) {
                    gbest_fit = fits[k];
                    gbest = swarm[k].x;
                }
                track_best(swarm[k].x, it);
            }
        }

        SwarmStats stats;
        stats.gbest = gbest;
        stats.centroid.assign(dim, 0.0);
        for (const Beetle& beetle : swarm)
            for (std::size_t i = 0; i < dim; ++i) stats.centroid[i] += beetle.x[i];
        for (auto& v : stats.centroid) v /= double(swarm.size());
        stats.fitness_q80 = fitness_quantile(fits, params.elite_quantile);

        double cost_sum = 0.0;
        for (std::size_t k = 0; k < swarm.size(); ++k) {
            Beetle& beetle = swarm[k];
            Rng beetle_rng = rng.child((std::uint64_t(it) << 20) | std::uint64_t(k));
            const auto dir = chemotaxis_direction(beetle, fits[k], stats, beetle_rng);
            const double fit = antennae_step(beetle, objective, gbest, params, beetle_rng, &dir);
            beetle.fails = fit > beetle.last_fit ? 0 : beetle.fails + 1;
            beetle.last_fit = fit;
            fits[k] = fit;
            if (fit > gbest_fit) {
                gbest_fit = fit;
                gbest = beetle.x;
            }
            Chromosome decoded = decode(beetle.x);
            cost_sum += polyline_length(decoded.waypoints);
            if (decoded.feasible) {
                const double cost = polyline_length(decoded.waypoints);
                if (cost < best_feasible_cost) {
                    best_feasible_cost = cost;
                    best_decoded = std::move(decoded);
                    res.best_position = beetle.x;
                    res.iterations_to_best = it;
                    have_feasible = true;
                }
            }
        }

        IterStats row;
        row.iter = it;
        row.best_cost = have_feasible ? best_feasible_cost : kUnreachable;
        row.mean_cost = cost_sum / double(swarm.size());
        row.evaluations = evaluations;
        row.best_fitness = gbest_fit;
        res.trace.push_back(row);
    }

    if (have_feasible) {
        res.success = true;
        res.best_cost = best_feasible_cost;
        res.best_path = densify_polyline(best_decoded.waypoints);
    }
    return res;
}

}  // namespace gridplan
