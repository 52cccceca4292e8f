#include "gridplan/metaheuristics.hpp"

#include <cmath>
#include <cstdio>

namespace gridplan {

double polyline_length(const std::vector<Coord>& pts) {
    double total = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double dr = double(pts[k].row - pts[k - 1].row);
        const double dc = double(pts[k].col - pts[k - 1].col);
        total += std::sqrt(dr * dr + dc * dc);
    }
    return total;
}

bool waypoints_feasible(const GridMap& map, const std::vector<Coord>& pts) {
    if (pts.empty()) return false;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (!segment_clear(map, pts[k - 1], pts[k])) return false;
    return map.in_bounds(pts.front()) && map.is_free(pts.front());
}

double fitness(const Chromosome& c, const FitnessParams& fp) {
    if (c.encoding != Chromosome::Encoding::Waypoints)
        throw std::invalid_argument("fitness is defined for waypoint chromosomes");
    const std::size_t n = c.waypoints.size();
    if (n < 2) throw std::invalid_argument("degenerate chromosome: fewer than 2 waypoints");
    const double d = polyline_length(c.waypoints);
    if (d <= 0.0) throw std::invalid_argument("degenerate chromosome: zero length");
    double f = (1.0 / d) * (1.0 + 1.0 / std::sqrt(double(n - 1)) + fp.r_term);
    if (!c.feasible) f *= kInfeasiblePenalty;
    return f;
}

namespace {

// Cells along a segment as a 4-adjacent chain: like supercover_line but an
// exact corner crossing steps through one side cell only.
void walk_segment(Coord a, Coord b, std::vector<Coord>& out) {
    const int nx = std::abs(b.col - a.col), ny = std::abs(b.row - a.row);
    const int sx = b.col > a.col ? 1 : -1, sy = b.row > a.row ? 1 : -1;
    Coord cur = a;
    int ix = 0, iy = 0;
    while (ix < nx || iy < ny) {
        const long long decision = (1 + 2LL * ix) * ny - (1 + 2LL * iy) * nx;
        if (decision <= 0) {
            cur = {cur.row, cur.col + sx};
            ++ix;
        } else {
            cur = {cur.row + sy, cur.col};
            ++iy;
        }
        out.push_back(cur);
    }
}

}  // namespace

Path densify_polyline(const std::vector<Coord>& pts) {
    Path p;
    if (pts.empty()) return p;
    p.waypoints.push_back(pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        std::vector<Coord> cells;
        walk_segment(pts[k - 1], pts[k], cells);
        for (const Coord& c : cells)
            if (!(c == p.waypoints.back())) p.waypoints.push_back(c);
    }
    return p;
}

std::string trace_csv(const std::vector<IterStats>& trace) {
    std::string out = "iter,best_cost,mean_cost,evaluations\n";
    char buf[128];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.6g,%.6g,%ld\n", row.iter, row.best_cost,
                      row.mean_cost, row.evaluations);
        out += buf;
    }
    return out;
}

}  // namespace gridplan
