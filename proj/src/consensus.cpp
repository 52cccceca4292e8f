#include "gridplan/consensus.hpp"

#include <algorithm>
#include <cmath>

namespace gridplan {

namespace {

double edge_bias(Coord a, Coord b) {
    return (a.row != b.row && a.col != b.col) ? kDiagonalCost : 1.0;
}

}  // namespace

ConsensusNet init_net(const GridMap& map, Neighborhood nb) {
    return init_net(map, nb, {map.target});
}

ConsensusNet init_net(const GridMap& map, Neighborhood nb, const std::vector<Coord>& leaders) {
    ConsensusNet net;
    net.map = map;
    net.nb = nb;
    net.leaders = leaders;
    net.leader_mask.assign(map.cells.size(), 0);
    net.state = DistanceField(map.rows, map.cols);
    for (Coord l : leaders) {
        if (map.in_bounds(l) && map.is_free(l)) {
            net.leader_mask[map.index(l)] = 1;
            net.state.at(l) = 0.0;
        }
    }
    return net;
}

double sweep(ConsensusNet& net) {
    const GridMap& map = net.map;
    DistanceField next = net.state;
    double max_change = 0.0;
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            Coord p{r, c};
            if (!map.is_free(p)) continue;
            if (net.leader_mask[map.index(p)]) continue;  // pinned at 0
            double best = kUnreachable;
            for (Coord q : neighbors(map, p, net.nb)) {
                if (!map.is_free(q)) continue;
                const double cand = net.state.at(q) + edge_bias(p, q);
                best = std::min(best, cand);
            }
            next.at(p) = best;
            const double old = net.state.at(p);
            if (old == kUnreachable && best != kUnreachable) {
                max_change = kUnreachable;
            } else if (best != kUnreachable) {
                max_change = std::max(max_change, std::abs(best - old));
            }
        }
    }
    net.state = std::move(next);
    ++net.sweeps_done;
    return max_change;
}

SolveResult solve(ConsensusNet& net, int max_sweeps) {
    SolveResult res;
    for (int k = 0; k < max_sweeps; ++k) {
        const double change = sweep(net);
        if (change == 0.0) {
            res.converged = true;
            break;
        }
    }
    res.sweeps = net.sweeps_done;
    res.field = net.state;
    return res;
}

Path backtrack(const DistanceField& field, const GridMap& map, Coord from, Neighborhood nb) {
    if (!map.in_bounds(from) || !map.is_free(from))
        throw BacktrackError("backtrack start is not a free cell");
    if (field.at(from) == kUnreachable)
        throw BacktrackError("backtrack start has infinite distance");

    std::vector<std::uint8_t> visited(map.cells.size(), 0);
    Path p;
    Coord cur = from;
    p.waypoints.push_back(cur);
    visited[map.index(cur)] = 1;
    while (field.at(cur) > 0.0) {
        Coord best{};
        double best_d = field.at(cur);
        bool found = false;
        for (Coord q : neighbors(map, cur, nb)) {
            if (!map.is_free(q) || visited[map.index(q)]) continue;
            if (field.at(q) < best_d) {
                best_d = field.at(q);
                best = q;
                found = true;
            }
        }
        if (!found)
            throw BacktrackError("no strictly descending neighbor at (" +
                                 std::to_string(cur.row) + "," + std::to_string(cur.col) +
                                 "): corrupt field");
        cur = best;
        visited[map.index(cur)] = 1;
        p.waypoints.push_back(cur);
    }
    return p;
}

std::optional<FieldViolation> verify_consistency(const DistanceField& field, const GridMap& map,
                                                 Neighborhood nb, double tol) {
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            Coord p{r, c};
            if (!map.is_free(p)) continue;
            const double v = field.at(p);
            if (v == 0.0) continue;  // leader
            double best = kUnreachable;
            for (Coord q : neighbors(map, p, nb)) {
                if (!map.is_free(q)) continue;
                best = std::min(best, field.at(q) + edge_bias(p, q));
            }
            if (v == kUnreachable && best == kUnreachable) continue;
            if (v == kUnreachable || best == kUnreachable || std::abs(v - best) > tol)
                return FieldViolation{p, v, best, "value does not equal min neighbor + bias"};
        }
    }
    return std::nullopt;
}

}  // namespace gridplan
