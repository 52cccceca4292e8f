#pragma once

#include <string>
#include <vector>

#include "gridplan/gridworld.hpp"
#include "gridplan/rng.hpp"

namespace testutil {

// Builds a map from rows of {., #, S, T}; rows must be equal length.
inline gridplan::GridMap make_map(const std::vector<std::string>& art) {
    gridplan::GridMap m(int(art.size()), int(art[0].size()));
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            switch (art[std::size_t(r)][std::size_t(c)]) {
                case '#': m.at({r, c}) = gridplan::Cell::Obstacle; break;
                case 'S': m.start = {r, c}; break;
                case 'T': m.target = {r, c}; break;
                default: break;
            }
        }
    }
    return m;
}

// Random map with the given obstacle density; start/target are distinct
// random free cells (density capped so at least two cells stay free).
inline gridplan::GridMap random_map(gridplan::Rng& rng, int rows, int cols, double density) {
    gridplan::GridMap m(rows, cols);
    for (auto& cell : m.cells)
        if (rng.uniform01() < density) cell = gridplan::Cell::Obstacle;

    std::vector<gridplan::Coord> free_cells;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (m.is_free({r, c})) free_cells.push_back({r, c});
    if (free_cells.size() < 2) {
        m.cells[0] = m.cells[1] = gridplan::Cell::Free;
        free_cells = {{0, 0}, {0, 1}};
    }
    const auto si = rng.uniform_int(free_cells.size());
    auto ti = rng.uniform_int(free_cells.size());
    while (ti == si) ti = rng.uniform_int(free_cells.size());
    m.start = free_cells[si];
    m.target = free_cells[ti];
    return m;
}

}  // namespace testutil
