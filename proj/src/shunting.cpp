#include "gridplan/shunting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gridplan {

WeightKernel make_kernel(const ShuntingParams& p) {
    WeightKernel k;
    const int reach = int(std::ceil(p.r0));
    for (int dr = -reach; dr <= reach; ++dr)
        for (int dc = -reach; dc <= reach; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const double d = std::sqrt(double(dr * dr + dc * dc));
            // strictly inside the receptive radius: with r0 = 2 the field
            // couples to the 8-neighborhood only, so excitation cannot jump
            // across a one-cell wall and park a maximum at an inner corner
            if (d < p.r0) k.taps.push_back({dr, dc, p.mu / d});
        }
    return k;
}

void validate(const ShuntingParams& p) {
    if (p.A <= 0 || p.B <= 0 || p.D <= 0 || p.E <= 0 || p.mu <= 0 || p.r0 <= 0 || p.dt <= 0 ||
        p.tol <= 0 || p.max_iters < 0)
        throw std::invalid_argument("shunting parameters must be positive");
    const auto kernel = make_kernel(p);
    if (p.dt * (p.A + p.E + p.mu * double(kernel.taps.size())) >= 1.0)
        throw std::invalid_argument("explicit-Euler stability guard failed: "
                                    "dt*(A + E + mu*neighbors) must be < 1");
}

std::vector<double> external_input(const GridMap& map, const ShuntingParams& p) {
    std::vector<double> input(map.cells.size(), 0.0);
    for (int r = 0; r < map.rows; ++r)
        for (int c = 0; c < map.cols; ++c) {
            Coord cc{r, c};
            if (cc == map.target)
                input[map.index(cc)] = p.E;
            else if (!map.is_free(cc))
                input[map.index(cc)] = -p.E;
        }
    return input;
}

double step(ActivityField& field, const std::vector<double>& input, const WeightKernel& kernel,
            const ShuntingParams& p) {
    const int rows = field.rows, cols = field.cols;
    std::vector<double> next(field.x.size());
    double max_change = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = std::size_t(r) * std::size_t(cols) + std::size_t(c);
            double lateral = 0.0;
            for (const auto& tap : kernel.taps) {
                const int nr = r + tap.dr, nc = c + tap.dc;
                if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                const double xj = field.x[std::size_t(nr) * std::size_t(cols) + std::size_t(nc)];
                if (xj > 0.0) lateral += tap.w * xj;
            }
            const double xi = field.x[i];
            const double excite = std::max(input[i], 0.0) + lateral;
            const double inhibit = std::max(-input[i], 0.0);
            const double dx = -p.A * xi + (p.B - xi) * excite - (p.D + xi) * inhibit;
            next[i] = xi + p.dt * dx;
            max_change = std::max(max_change, std::abs(next[i] - xi));
        }
    }
    field.x = std::move(next);
    ++field.iterations;
    return max_change;
}

ActivityField settle(const GridMap& map, const ShuntingParams& p) {
    validate(p);
    ActivityField field(map.rows, map.cols);
    const auto input = external_input(map, p);
    const auto kernel = make_kernel(p);
    for (int it = 0; it < p.max_iters; ++it) {
        if (step(field, input, kernel, p) < p.tol) {
            field.converged = true;
            break;
        }
    }
    return field;
}

ExtractResult extract_path(const ActivityField& field, const GridMap& map, Coord start) {
    ExtractResult res;
    if (!map.in_bounds(start) || !map.is_free(start)) return res;
    Coord cur = start;
    res.path.waypoints.push_back(cur);
    if (cur == map.target) {
        res.reached = true;
        return res;
    }
    const int step_cap = 4 * map.rows * map.cols;
    for (int k = 0; k < step_cap; ++k) {
        Coord best{};
        double best_x = field.at(cur);
        bool found = false;
        for (Coord q : neighbors(map, cur, Neighborhood::Eight)) {
            if (!map.is_free(q)) continue;
            if (field.at(q) > best_x) {
                best_x = field.at(q);
                best = q;
                found = true;
            }
        }
        if (!found) return res;  // local maximum stall
        cur = best;
        res.path.waypoints.push_back(cur);
        if (cur == map.target) {
            res.reached = true;
            return res;
        }
    }
    return res;  // step cap
}

std::string format_activity(const ActivityField& field, const GridMap& map) {
    std::string out;
    char buf[48];
    for (int r = 0; r < field.rows; ++r) {
        for (int c = 0; c < field.cols; ++c) {
            if (c > 0) out += ' ';
            if (!map.is_free({r, c})) {
                out += "-1";
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.6g", field.at({r, c}));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

double step_scene(ActivityField& field, const SceneParams& sp, const WeightKernel& kernel,
                  const ShuntingParams& p) {
    const int rows = field.rows, cols = field.cols;
    std::vector<double> next(field.x.size());
    double max_change = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = std::size_t(r) * std::size_t(cols) + std::size_t(c);
            double z = 0.0;
            for (const auto& tap : kernel.taps) {
                const int nr = r + tap.dr, nc = c + tap.dc;
                if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                z += tap.w * field.x[std::size_t(nr) * std::size_t(cols) + std::size_t(nc)];
            }
            const double y = sp.g == SceneParams::Output::Logistic
                                 ? 1.0 / (1.0 + std::exp(-z))
                                 : std::clamp(z, 0.0, p.B);
            double dx = -p.A * field.x[i] + sp.gain * y;
            if (sp.scene == SceneParams::Scene::Scene2) dx += sp.I;
            next[i] = field.x[i] + p.dt * dx;
            max_change = std::max(max_change, std::abs(next[i] - field.x[i]));
        }
    }
    field.x = std::move(next);
    ++field.iterations;
    return max_change;
}

}  // namespace gridplan
