#include "gridplan/ga.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

namespace gridplan {

std::vector<std::size_t> selection_survivors(const std::vector<double>& normalized,
                                             const std::vector<double>& r_draws) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < normalized.size(); ++i)
        if (normalized[i] > r_draws[i]) out.push_back(i);
    return out;
}

std::vector<Chromosome> select(const std::vector<Chromosome>& pop, const FitnessParams& fp,
                               Rng& rng) {
    if (pop.empty()) throw std::invalid_argument("select on an empty population");
    std::vector<double> fit(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = fitness(pop[i], fp);
    const std::size_t best = std::size_t(std::max_element(fit.begin(), fit.end()) - fit.begin());
    const double fmax = fit[best];

    std::vector<double> normalized(pop.size()), draws(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        normalized[i] = fmax > 0.0 ? fit[i] / fmax : 0.0;
        draws[i] = rng.uniform01();
    }
    auto kept = selection_survivors(normalized, draws);
    if (std::find(kept.begin(), kept.end(), best) == kept.end()) kept.push_back(best);

    std::vector<Chromosome> out;
    out.reserve(pop.size());
    for (std::size_t i : kept) out.push_back(pop[i]);
    while (out.size() < pop.size()) out.push_back(pop[kept[rng.uniform_int(kept.size())]]);
    return out;
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t i, std::size_t j) {
    if (a.encoding != b.encoding || a.size() != b.size())
        throw std::invalid_argument("crossover needs equal-length encodings");
    Chromosome ca = a, cb = b;
    if (a.encoding == Chromosome::Encoding::Binary) {
        for (std::size_t k = i; k < j; ++k) std::swap(ca.bits[k], cb.bits[k]);
    } else {
        for (std::size_t k = i; k < j; ++k) std::swap(ca.waypoints[k], cb.waypoints[k]);
    }
    return {std::move(ca), std::move(cb)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            const GridMap* map) {
    const std::size_t len = a.size();
    std::size_t i = rng.uniform_int(len + 1);
    std::size_t j = rng.uniform_int(len + 1);
    if (i > j) std::swap(i, j);
    auto children = crossover_at(a, b, i, j);
    if (map != nullptr && a.encoding == Chromosome::Encoding::Waypoints) {
        children.first.feasible = waypoints_feasible(*map, children.first.waypoints);
        children.second.feasible = waypoints_feasible(*map, children.second.waypoints);
    }
    return children;
}

namespace {

std::vector<Coord> free_cells(const GridMap& map) {
    std::vector<Coord> cells;
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c)
            if (map.is_free({r, c})) cells.push_back({r, c});
    return cells;
}

// Loop removal: on a repeated cell, cut everything since its first
// occurrence. Consecutive pairs of the output were consecutive in the
// input, so junction feasibility survives.
std::vector<Coord> dedup_path(const std::vector<Coord>& pts, int cols) {
    std::vector<Coord> out;
    std::vector<int> seen_at;  // index into out, keyed by cell id, -1 = absent
    int max_id = 0;
    for (const Coord& c : pts) max_id = std::max(max_id, c.row * cols + c.col);
    seen_at.assign(std::size_t(max_id) + 1, -1);
    for (const Coord& c : pts) {
        const int id = c.row * cols + c.col;
        if (seen_at[std::size_t(id)] >= 0) {
            for (std::size_t k = std::size_t(seen_at[std::size_t(id)]) + 1; k < out.size(); ++k)
                seen_at[std::size_t(out[k].row * cols + out[k].col)] = -1;
            out.resize(std::size_t(seen_at[std::size_t(id)]) + 1);
        } else {
            out.push_back(c);
            seen_at[std::size_t(id)] = int(out.size()) - 1;
        }
    }
    return out;
}

// Random free cell whose straight junction to `anchor` is clear; falls
// back to `original` when no candidate fits.
Coord sample_junction_cell(const GridMap& map, const std::vector<Coord>& cells, Coord anchor,
                           Coord original, Rng& rng) {
    for (int tries = 0; tries < 32; ++tries) {
        Coord cand = cells[rng.uniform_int(cells.size())];
        if (segment_clear(map, anchor, cand)) return cand;
    }
    return original;
}

// Shortest adjacent-cell path for the mutation stitch: Eight moves, but a
// diagonal step needs both orthogonal side cells free, so every step of
// the result is also clear as a straight segment.
std::optional<std::vector<Coord>> stitch_path(const GridMap& map, Coord from, Coord to) {
    if (!map.is_free(from) || !map.is_free(to)) return std::nullopt;
    const std::size_t n = map.cells.size();
    std::vector<double> dist(n, kUnreachable);
    std::vector<std::int32_t> parent(n, -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[map.index(to)] = 0.0;
    pq.push({0.0, map.index(to)});
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        Coord cur{int(i) / map.cols, int(i) % map.cols};
        for (Coord q : neighbors(map, cur, Neighborhood::Eight)) {
            if (!map.is_free(q)) continue;
            const bool diagonal = q.row != cur.row && q.col != cur.col;
            if (diagonal && (!map.is_free({cur.row, q.col}) || !map.is_free({q.row, cur.col})))
                continue;  // no corner cutting
            const double cand = d + (diagonal ? kDiagonalCost : 1.0);
            if (cand < dist[map.index(q)]) {
                dist[map.index(q)] = cand;
                parent[map.index(q)] = std::int32_t(i);
                pq.push({cand, map.index(q)});
            }
        }
    }
    if (dist[map.index(from)] == kUnreachable) return std::nullopt;
    std::vector<Coord> path{from};
    std::size_t cur = map.index(from);
    while (cur != map.index(to)) {
        cur = std::size_t(parent[cur]);
        path.push_back({int(cur) / map.cols, int(cur) % map.cols});
    }
    return path;
}

}  // namespace

Chromosome mutate(const Chromosome& c, double rate, Rng& rng, const GridMap* map) {
    if (c.encoding == Chromosome::Encoding::Binary) {
        Chromosome out = c;
        for (auto& bit : out.bits)
            if (rng.uniform01() < rate) bit = bit ? 0 : 1;
        return out;
    }
    if (map == nullptr) throw std::invalid_argument("waypoint mutation needs a map");
    if (rng.uniform01() >= rate) return c;
    const std::size_t len = c.waypoints.size();
    if (len < 5) return c;  // no non-adjacent interior pair exists

    std::size_t i = 0, j = 0;
    if (rng.uniform01() < 0.25) {
        // full-span refresh: re-route everything between the outermost
        // interior genes; escapes a bad homotopy class in one move
        i = 1;
        j = len - 2;
    } else {
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
            i = 1 + rng.uniform_int(len - 2);
            j = 1 + rng.uniform_int(len - 2);
            if (i > j) std::swap(i, j);
            found = j >= i + 2;
        }
        if (!found) return c;
    }

    const auto cells = free_cells(*map);
    if (cells.empty()) return c;
    const Coord wi = sample_junction_cell(*map, cells, c.waypoints[i - 1], c.waypoints[i], rng);
    const Coord wj = sample_junction_cell(*map, cells, c.waypoints[j + 1], c.waypoints[j], rng);

    auto stitched = stitch_path(*map, wi, wj);
    if (!stitched.has_value()) return c;  // wi cannot reach wj

    std::vector<Coord> genes(c.waypoints.begin(), c.waypoints.begin() + long(i));
    genes.insert(genes.end(), stitched->begin(), stitched->end());
    genes.insert(genes.end(), c.waypoints.begin() + long(j) + 1, c.waypoints.end());

    Chromosome out;
    out.encoding = Chromosome::Encoding::Waypoints;
    out.waypoints = dedup_path(genes, map->cols);
    out.feasible = waypoints_feasible(*map, out.waypoints);
    return out;
}

GaResult run_ga(const ScenarioConfig& sc, const GaParams& params, std::uint64_t seed) {
    const GridMap& map = sc.map;
    Rng rng(seed);
    const auto cells = free_cells(map);
    const FitnessParams& fp = params.fitness_params;

    auto make_individual = [&](Rng& r) {
        Chromosome c;
        c.encoding = Chromosome::Encoding::Waypoints;
        c.waypoints.push_back(map.start);
        for (int k = 0; k < params.interior_waypoints; ++k)
            c.waypoints.push_back(cells[r.uniform_int(cells.size())]);
        c.waypoints.push_back(map.target);
        c.feasible = waypoints_feasible(map, c.waypoints);
        return c;
    };

    std::vector<Chromosome> pop;
    pop.reserve(std::size_t(params.population));
    for (int k = 0; k < params.population; ++k) pop.push_back(make_individual(rng));

    GaResult res;
    long evaluations = 0;
    Chromosome best_ever;
    double best_fit = -1.0;

    auto consider = [&](const Chromosome& c, int gen) {
        const double f = fitness(c, fp);
        ++evaluations;
        if (f > best_fit) {
            best_fit = f;
            best_ever = c;
            res.iterations_to_best = gen;
        }
    };
    for (const auto& c : pop) consider(c, 0);

    for (int gen = 1; gen <= params.generations; ++gen) {
        pop = select(pop, fp, rng);

        for (std::size_t k = 0; k + 1 < pop.size(); k += 2) {
            if (rng.uniform01() >= params.crossover_rate) continue;
            if (pop[k].size() != pop[k + 1].size()) continue;  // stitched lengths diverge
            auto [ca, cb] = crossover(pop[k], pop[k + 1], rng, &map);
            pop[k] = std::move(ca);
            pop[k + 1] = std::move(cb);
        }

        for (std::size_t k = 0; k < pop.size(); ++k) {
            Rng mut_rng = rng.child((std::uint64_t(gen) << 20) | k);
            pop[k] = mutate(pop[k], params.mutation_rate, mut_rng, &map);
        }

        double cost_sum = 0.0;
        for (const auto& c : pop) {
            consider(c, gen);
            cost_sum += polyline_length(c.waypoints);
        }
        // elitism: the best-ever individual replaces the current worst
        std::size_t worst = 0;
        double worst_fit = kUnreachable;
        for (std::size_t k = 0; k < pop.size(); ++k) {
            const double f = fitness(pop[k], fp);
            if (f < worst_fit) {
                worst_fit = f;
                worst = k;
            }
        }
        if (worst_fit < best_fit) pop[worst] = best_ever;

        IterStats row;
        row.iter = gen;
        row.best_cost = best_ever.feasible ? polyline_length(best_ever.waypoints) : kUnreachable;
        row.mean_cost = cost_sum / double(pop.size());
        row.evaluations = evaluations;
        row.best_fitness = best_fit;
        res.trace.push_back(row);
    }

    res.best = best_ever;
    if (best_ever.feasible && !best_ever.waypoints.empty()) {
        res.success = true;
        res.best_cost = polyline_length(best_ever.waypoints);
        res.best_path = densify_polyline(best_ever.waypoints);
    }
    return res;
}

}  // namespace gridplan
