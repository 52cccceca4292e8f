#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridplan/gridworld.hpp"

namespace gridplan {

struct FitnessParams {
    double r_term = 0.0;  // the fitness formula's R, deterministic by default
};

/// Multiplier applied to the fitness of a chromosome whose polyline
/// crosses an obstacle; keeps populations alive on hard maps instead of
/// rejecting them outright.
inline constexpr double kInfeasiblePenalty = 1e-3;

/// Either a raw bit string or a waypoint polyline [start, ..., target]
/// whose consecutive genes are meant to be joined by straight segments.
struct Chromosome {
    enum class Encoding { Binary, Waypoints };
    Encoding encoding = Encoding::Waypoints;
    std::vector<std::uint8_t> bits;
    std::vector<Coord> waypoints;
    bool feasible = true;

    std::size_t size() const {
        return encoding == Encoding::Binary ? bits.size() : waypoints.size();
    }
};

/// Euclidean length of the polyline through the points.
double polyline_length(const std::vector<Coord>& pts);

/// All consecutive straight segments are obstacle-free.
bool waypoints_feasible(const GridMap& map, const std::vector<Coord>& pts);

/// fitness = (1/d) * (1 + 1/sqrt(n-1) + R) with d the Euclidean polyline
/// length and n the waypoint count; infeasible chromosomes are scaled by
/// kInfeasiblePenalty. Throws std::invalid_argument for n < 2 or d = 0.
double fitness(const Chromosome& c, const FitnessParams& fp);

/// Expands a polyline into a 4-adjacent cell path (supercover cells of
/// each segment, consecutive duplicates removed) for rendering and Path
/// output.
Path densify_polyline(const std::vector<Coord>& pts);

struct IterStats {
    int iter = 0;
    double best_cost = 0.0;
    double mean_cost = 0.0;
    long evaluations = 0;
    double best_fitness = 0.0;  // objective scale of the optimizer; not in the CSV
};

/// CSV "iter,best_cost,mean_cost,evaluations" (header included).
std::string trace_csv(const std::vector<IterStats>& trace);

}  // namespace gridplan
