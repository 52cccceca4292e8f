#pragma once

#include <optional>

#include "gridplan/metaheuristics.hpp"
#include "gridplan/rng.hpp"

namespace gridplan {

/// Undirected per-edge pheromone over the grid graph. Stored as four
/// canonical slots per cell (E, S, SE, SW); the mirrored direction on the
/// other endpoint addresses the same value. The floor tau_min keeps every
/// edge reachable after heavy evaporation.
class PheromoneMatrix {
public:
    PheromoneMatrix() = default;
    PheromoneMatrix(int rows, int cols, double tau0, double evaporation, double deposit_q);

    double get(Coord a, Coord b) const;
    void add(Coord a, Coord b, double delta);

    /// tau <- (1 - evaporation) * tau on every edge, then the floor.
    void evaporate();
    void apply_floor();

    double evaporation() const { return evaporation_; }
    double deposit_q() const { return deposit_q_; }
    double tau_min() const { return tau_min_; }

private:
    std::size_t slot(Coord a, Coord b) const;

    int rows_ = 0, cols_ = 0;
    double evaporation_ = 0.1;
    double deposit_q_ = 1.0;
    double tau_min_ = 1e-4;
    std::vector<double> tau_;
};

struct AcoParams {
    int ants = 40;            // m
    int iterations = 320;
    double alpha_ph = 1.0;    // pheromone exponent
    double beta_h = 7.0;      // heuristic exponent
    double elitist_bonus = 2.0;
    double evaporation = 0.08;  // the update rule's beta
    double deposit_q = 20.0;    // Q, scaled to typical tour costs
    double tau0 = 1.0;
    Neighborhood nb = Neighborhood::Eight;
};

struct Tour {
    Path path;
    double cost = 0.0;
};

/// Evaporation, then ant-cycle deposits Q/L_k on each tour's edges, then
/// the elitist bonus bonus*Q/L_best on the best tour's edges, then the
/// floor.
void update_pheromone(PheromoneMatrix& tau, const std::vector<Tour>& tours,
                      const Tour* best_tour, double elitist_bonus);

/// One ant's walk start -> target over unvisited free neighbors with
/// probability proportional to tau^alpha_ph * (1/heuristic)^beta_h, where
/// the heuristic is the Euclidean distance to the target (the target
/// itself, when adjacent, is taken outright). Dead ends and the step cap
/// 4*rows*cols return nullopt.
std::optional<Tour> construct_tour(const PheromoneMatrix& tau, const GridMap& map,
                                   const AcoParams& params, Rng& rng);

struct AcoResult {
    Path best_path;
    bool success = false;
    double best_cost = kUnreachable;
    int iterations_to_best = 0;
    int dead_ants = 0;
    std::vector<IterStats> trace;
};

AcoResult run_aco(const ScenarioConfig& sc, const AcoParams& params, std::uint64_t seed);

}  // namespace gridplan
