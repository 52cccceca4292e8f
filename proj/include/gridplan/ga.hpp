#pragma once

#include "gridplan/metaheuristics.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

struct GaParams {
    int population = 60;
    int generations = 350;
    double crossover_rate = 0.9;
    double mutation_rate = 0.5;
    int interior_waypoints = 4;  // genes between start and target at init
    // R > 0 flattens the waypoint-count term so route length dominates
    // selection; micro-level fitness checks pass their own FitnessParams.
    FitnessParams fitness_params{9.0};
};

/// The pure retention rule: index i survives iff normalized[i] > r_draws[i].
/// Elitism and refilling live in select().
std::vector<std::size_t> selection_survivors(const std::vector<double>& normalized,
                                             const std::vector<double>& r_draws);

/// Fitness-proportional filter: fitnesses are normalized by the population
/// maximum, each individual draws one fresh uniform R in [0,1) and survives
/// iff f_norm > R; the best individual always survives; the population is
/// refilled to its original size by uniform cloning of survivors.
std::vector<Chromosome> select(const std::vector<Chromosome>& pop, const FitnessParams& fp,
                               Rng& rng);

/// Swaps the gene segment [i, j) between copies of a and b.
/// Requires matching encoding and length.
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t i, std::size_t j);

/// Segment bounds drawn uniformly over 0 <= i <= j <= length. When a map
/// is given, waypoint children get a fresh feasibility flag.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            const GridMap* map = nullptr);

/// Binary: each bit flips independently with probability rate.
/// Waypoints: with probability rate, two non-adjacent interior waypoints
/// are re-sampled from free cells (junction segments kept clear where
/// possible) and the stretch between them is re-stitched with the
/// Four-neighborhood shortest-path oracle, then de-duplicated by loop
/// removal. Requires a map for the waypoint encoding.
Chromosome mutate(const Chromosome& c, double rate, Rng& rng, const GridMap* map = nullptr);

struct GaResult {
    Chromosome best;
    Path best_path;  // densified polyline of the best feasible individual
    bool success = false;
    double best_cost = kUnreachable;  // Euclidean polyline length
    int iterations_to_best = 0;
    std::vector<IterStats> trace;
};

GaResult run_ga(const ScenarioConfig& sc, const GaParams& params, std::uint64_t seed);

}  // namespace gridplan
