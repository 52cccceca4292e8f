#pragma once

#include <functional>

#include "gridplan/metaheuristics.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

struct BsoParams {
    int swarm = 56;
    int iterations = 400;
    double inertia = 0.6;        // w
    double cognitive = 1.5;      // c1
    double social = 1.0;         // c2
    double lambda_blend = 0.5;   // position update: lambda*v + (1-lambda)*bas
    double step_decay = 0.97;    // gamma
    double antenna_span = 6.0;   // d0, wide enough to sense across walls
    double step0 = 2.0;          // initial BAS step delta
    double elite_quantile = 0.8;
    int interior_waypoints = 4;
    FitnessParams fitness_params{};
};

/// Unit vector with standard-normal components (direction-uniform);
/// an all-zero draw is re-sampled.
std::vector<double> random_direction(std::size_t n, Rng& rng);

struct Beetle {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> pbest;
    double pbest_fit = -kUnreachable;
    double step = 1.0;        // delta, decays by step_decay each move
    double last_fit = -kUnreachable;
    std::vector<double> last_dir;
    int fails = 0;            // consecutive non-improving moves
};

using FitnessFn = std::function<double(const std::vector<double>&)>;

/// One BAS+PSO move (maximization):
///   b   = direction (override or fresh random)
///   xi  = step * b * sign(f(x + d0/2 b) - f(x - d0/2 b))
///   v  <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)
///   x  <- x + lambda v + (1 - lambda) xi
///   step <- gamma * step; pbest updated. Returns f(x_new).
double antennae_step(Beetle& beetle, const FitnessFn& f, const std::vector<double>& gbest,
                     const BsoParams& params, Rng& rng,
                     const std::vector<double>* direction_override = nullptr);

struct SwarmStats {
    std::vector<double> gbest;
    std::vector<double> centroid;
    double fitness_q80 = 0.0;  // the "better than 80%" threshold
};

/// Direction policy: at or above the 80th-percentile fitness head for
/// gbest, below it head for the swarm centroid; one non-improving move
/// switches to a fresh random direction, a second consecutive one negates
/// the previous direction.
std::vector<double> chemotaxis_direction(const Beetle& beetle, double beetle_fitness,
                                         const SwarmStats& stats, Rng& rng);

/// The 80th-percentile threshold used above (index ceil(q*(n-1)) of the
/// sorted fitnesses).
double fitness_quantile(std::vector<double> fitnesses, double q);

struct BsoResult {
    Path best_path;
    bool success = false;
    double best_cost = kUnreachable;
    int iterations_to_best = 0;
    std::vector<double> best_position;
    std::vector<IterStats> trace;
};

/// Positions are flattened interior waypoints (row, col per pair), snapped
/// to the nearest in-bounds cell for evaluation; the objective is the
/// feasibility-penalized path fitness.
BsoResult run_bso(const ScenarioConfig& sc, const BsoParams& params, std::uint64_t seed);

}  // namespace gridplan
