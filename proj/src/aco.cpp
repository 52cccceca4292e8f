#include "gridplan/aco.hpp"

#include <algorithm>
#include <cmath>

namespace gridplan {

PheromoneMatrix::PheromoneMatrix(int rows, int cols, double tau0, double evaporation,
                                 double deposit_q)
    : rows_(rows),
      cols_(cols),
      evaporation_(evaporation),
      deposit_q_(deposit_q),
      tau_min_(1e-4 * deposit_q),
      tau_(std::size_t(rows) * std::size_t(cols) * 4, tau0) {}

std::size_t PheromoneMatrix::slot(Coord a, Coord b) const {
    int dr = b.row - a.row, dc = b.col - a.col;
    Coord base = a;
    if (!(dc == 1 && dr >= 0) && !(dr == 1 && dc <= 0)) {
        // mirror onto the canonical direction of the other endpoint
        base = b;
        dr = -dr;
        dc = -dc;
    }
    int k;
    if (dr == 0 && dc == 1) k = 0;       // E
    else if (dr == 1 && dc == 0) k = 1;  // S
    else if (dr == 1 && dc == 1) k = 2;  // SE
    else if (dr == 1 && dc == -1) k = 3; // SW
    else throw std::invalid_argument("pheromone edge endpoints are not adjacent");
    return (std::size_t(base.row) * std::size_t(cols_) + std::size_t(base.col)) * 4 +
           std::size_t(k);
}

double PheromoneMatrix::get(Coord a, Coord b) const { return tau_[slot(a, b)]; }

void PheromoneMatrix::add(Coord a, Coord b, double delta) { tau_[slot(a, b)] += delta; }

void PheromoneMatrix::evaporate() {
    for (double& t : tau_) t *= 1.0 - evaporation_;
}

void PheromoneMatrix::apply_floor() {
    for (double& t : tau_) t = std::max(t, tau_min_);
}

void update_pheromone(PheromoneMatrix& tau, const std::vector<Tour>& tours,
                      const Tour* best_tour, double elitist_bonus) {
    tau.evaporate();
    for (const Tour& tour : tours) {
        const double deposit = tau.deposit_q() / tour.cost;
        for (std::size_t k = 1; k < tour.path.waypoints.size(); ++k)
            tau.add(tour.path.waypoints[k - 1], tour.path.waypoints[k], deposit);
    }
    if (best_tour != nullptr && elitist_bonus > 0.0) {
        const double deposit = elitist_bonus * tau.deposit_q() / best_tour->cost;
        for (std::size_t k = 1; k < best_tour->path.waypoints.size(); ++k)
            tau.add(best_tour->path.waypoints[k - 1], best_tour->path.waypoints[k], deposit);
    }
    tau.apply_floor();
}

std::optional<Tour> construct_tour(const PheromoneMatrix& tau, const GridMap& map,
                                   const AcoParams& params, Rng& rng) {
    std::vector<std::uint8_t> visited(map.cells.size(), 0);
    Tour tour;
    Coord cur = map.start;
    if (!map.in_bounds(cur) || !map.is_free(cur)) return std::nullopt;
    tour.path.waypoints.push_back(cur);
    visited[map.index(cur)] = 1;
    const int step_cap = 4 * map.rows * map.cols;

    std::vector<Coord> candidates;
    std::vector<double> weights;
    for (int step_i = 0; step_i < step_cap; ++step_i) {
        if (cur == map.target) {
            tour.cost = path_length(tour.path, params.nb);
            return tour;
        }
        candidates.clear();
        weights.clear();
        bool target_adjacent = false;
        for (Coord q : neighbors(map, cur, params.nb)) {
            if (!map.is_free(q) || visited[map.index(q)]) continue;
            if (q == map.target) {
                target_adjacent = true;
                break;
            }
            candidates.push_back(q);
        }
        Coord next{};
        if (target_adjacent) {
            next = map.target;
        } else {
            if (candidates.empty()) return std::nullopt;  // dead end
            double total = 0.0;
            for (Coord q : candidates) {
                const double dr = double(q.row - map.target.row);
                const double dc = double(q.col - map.target.col);
                const double heuristic = std::sqrt(dr * dr + dc * dc);
                const double w = std::pow(tau.get(cur, q), params.alpha_ph) *
                                 std::pow(1.0 / heuristic, params.beta_h);
                weights.push_back(w);
                total += w;
            }
            if (total <= 0.0) {
                next = candidates[rng.uniform_int(candidates.size())];
            } else {
                double pick = rng.uniform01() * total;
                std::size_t chosen = candidates.size() - 1;
                for (std::size_t k = 0; k < weights.size(); ++k) {
                    pick -= weights[k];
                    if (pick < 0.0) {
                        chosen = k;
                        break;
                    }
                }
                next = candidates[chosen];
            }
        }
        cur = next;
        visited[map.index(cur)] = 1;
        tour.path.waypoints.push_back(cur);
    }
    return std::nullopt;  // step cap exhausted
}

AcoResult run_aco(const ScenarioConfig& sc, const AcoParams& params, std::uint64_t seed) {
    const GridMap& map = sc.map;
    Rng rng(seed);
    PheromoneMatrix tau(map.rows, map.cols, params.tau0, params.evaporation, params.deposit_q);

    AcoResult res;
    std::optional<Tour> best;
    long evaluations = 0;

    for (int it = 1; it <= params.iterations; ++it) {
        std::vector<Tour> tours;
        tours.reserve(std::size_t(params.ants));
        double cost_sum = 0.0;
        for (int k = 0; k < params.ants; ++k) {
            Rng ant_rng = rng.child((std::uint64_t(it) << 20) | std::uint64_t(k));
            auto tour = construct_tour(tau, map, params, ant_rng);
            ++evaluations;
            if (!tour.has_value()) {
                ++res.dead_ants;
                continue;
            }
            cost_sum += tour->cost;
            if (!best.has_value() || tour->cost < best->cost) {
                best = tour;
                res.iterations_to_best = it;
            }
            tours.push_back(std::move(*tour));
        }
        update_pheromone(tau, tours, best.has_value() ? &*best : nullptr, params.elitist_bonus);

        IterStats row;
        row.iter = it;
        row.best_cost = best.has_value() ? best->cost : kUnreachable;
        row.mean_cost = tours.empty() ? kUnreachable : cost_sum / double(tours.size());
        row.evaluations = evaluations;
        row.best_fitness = best.has_value() ? 1.0 / best->cost : 0.0;
        res.trace.push_back(row);
    }

    if (best.has_value()) {
        res.success = true;
        res.best_cost = best->cost;
        res.best_path = best->path;
    }
    return res;
}

}  // namespace gridplan
