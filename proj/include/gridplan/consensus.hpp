#pragma once

#include <optional>
#include <vector>

#include "gridplan/gridworld.hpp"

namespace gridplan {

/// Biased min-consensus network over the free cells of a grid. Leader
/// nodes pin their state to 0; followers relax toward
/// min over neighbors of (neighbor state + edge bias), where the bias is
/// the step cost (1 orthogonal, sqrt(2) diagonal). The fixed point is the
/// shortest-path distance field from the leader set.
struct ConsensusNet {
    GridMap map;
    Neighborhood nb = Neighborhood::Four;
    std::vector<Coord> leaders;
    std::vector<std::uint8_t> leader_mask;  // per cell, 1 = leader
    DistanceField state;                    // s; leaders 0, followers start at +inf
    int sweeps_done = 0;
};

/// Leaders default to {map.target}; followers are the remaining free cells.
ConsensusNet init_net(const GridMap& map, Neighborhood nb);
ConsensusNet init_net(const GridMap& map, Neighborhood nb, const std::vector<Coord>& leaders);

/// One synchronous (Jacobi) sweep over all followers. Returns the largest
/// |change| over followers; a +inf -> finite transition counts as +inf.
double sweep(ConsensusNet& net);

struct SolveResult {
    DistanceField field;
    int sweeps = 0;
    bool converged = false;
};

/// Sweeps until a fixed point (max change 0) or max_sweeps. On a grid,
/// max_sweeps >= rows*cols guarantees convergence.
SolveResult solve(ConsensusNet& net, int max_sweeps);

class BacktrackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Steepest-descent path extraction: from `from`, repeatedly move to the
/// neighbor with minimal field value, strictly smaller than the current
/// one, until a zero-distance cell is reached. Visited cells are marked so
/// a corrupt field cannot cycle. Throws BacktrackError when no strictly
/// smaller neighbor exists before reaching 0.
Path backtrack(const DistanceField& field, const GridMap& map, Coord from,
               Neighborhood nb = Neighborhood::Four);

struct FieldViolation {
    Coord cell;
    double value = 0.0;
    double expected = 0.0;
    std::string reason;
};

/// Local-consistency check of a distance field: every free cell with a
/// positive value must equal min over free neighbors of (value + step
/// cost); zero cells are leaders and are skipped. Returns the first
/// violating cell in row-major order, or nullopt.
std::optional<FieldViolation> verify_consistency(const DistanceField& field, const GridMap& map,
                                                 Neighborhood nb, double tol = 1e-9);

}  // namespace gridplan
