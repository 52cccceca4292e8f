#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridplan {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr double kDiagonalCost = 1.4142135623730950488;  // sqrt(2)

enum class Cell : std::uint8_t { Free, Obstacle };
enum class Neighborhood { Four, Eight };

struct Coord {
    int row = 0;
    int col = 0;
    bool operator==(const Coord&) const = default;
};

/// Rectangular occupancy world. Row 0 is the top row; coordinates are
/// 0-based (row, col). `start` and `target` are meaningful only after
/// load_scenario() or explicit assignment (perceived grids carry defaults).
struct GridMap {
    int rows = 0;
    int cols = 0;
    std::vector<Cell> cells;  // row-major, rows*cols entries
    Coord start{};
    Coord target{};

    GridMap() = default;
    GridMap(int r, int c, Cell fill = Cell::Free)
        : rows(r), cols(c), cells(std::size_t(r) * std::size_t(c), fill) {}

    bool in_bounds(Coord c) const {
        return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
    }
    std::size_t index(Coord c) const {
        return std::size_t(c.row) * std::size_t(cols) + std::size_t(c.col);
    }
    Cell at(Coord c) const { return cells[index(c)]; }
    Cell& at(Coord c) { return cells[index(c)]; }
    bool is_free(Coord c) const { return at(c) == Cell::Free; }
    std::size_t obstacle_count() const;
};

struct Path {
    std::vector<Coord> waypoints;
    bool empty() const { return waypoints.empty(); }
    std::size_t size() const { return waypoints.size(); }
};

/// One sample of a continuous-space track: position (x, y) at time t.
/// x runs along columns, y along rows; cell (r, c) has center (c+0.5, r+0.5).
struct TrackSample {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
    bool operator==(const TrackSample&) const = default;
};

struct ScenarioConfig {
    GridMap map;
    Neighborhood neighborhood = Neighborhood::Four;
    std::vector<TrackSample> moving_target_track;  // empty = static target
};

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Scenario text format:
//   '#'-prefixed full lines before the header are comments
//   header line: "rows cols"
//   rows lines of exactly cols chars from {. # S T}
//   optional trailing lines "track: x,y,t; x,y,t; ..."
ScenarioConfig load_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& sc);

/// In-bounds neighbors of c in the order N, E, S, W, NE, SE, SW, NW
/// (Four stops after W). Occupancy is not filtered here.
std::vector<Coord> neighbors(const GridMap& map, Coord c, Neighborhood nb);

/// Per-cell scalar field; kUnreachable marks unreached cells. Obstacle
/// cells keep kUnreachable and are rendered as -1 by format_field().
struct DistanceField {
    int rows = 0;
    int cols = 0;
    std::vector<double> d;

    DistanceField() = default;
    DistanceField(int r, int c, double fill = kUnreachable)
        : rows(r), cols(c), d(std::size_t(r) * std::size_t(c), fill) {}

    std::size_t index(Coord c) const {
        return std::size_t(c.row) * std::size_t(cols) + std::size_t(c.col);
    }
    double at(Coord c) const { return d[index(c)]; }
    double& at(Coord c) { return d[index(c)]; }
};

struct OracleResult {
    DistanceField field;        // exact distances from map.target
    std::optional<Path> path;   // optimal start->target path when reachable
};

/// Single-source shortest paths from map.target: BFS for Four (unit cost),
/// Dijkstra for Eight (1 orthogonal, sqrt(2) diagonal). Test oracle for
/// every planner in the suite.
OracleResult shortest_path_oracle(const GridMap& map, Neighborhood nb);

/// Sum of per-step costs; throws std::invalid_argument on a step that is
/// not adjacent under nb.
double path_length(const Path& p, Neighborhood nb);

/// Every cell the center-to-center segment from a to b passes through, in
/// order. Exact corner crossings conservatively include both side cells.
std::vector<Coord> supercover_line(Coord a, Coord b);

/// True when the straight segment between the cell centers of a and b
/// touches no obstacle cell.
bool segment_clear(const GridMap& map, Coord a, Coord b);

// Matrix text dump, one row per line: obstacles "-1", unreached "inf",
// integral values as integers, anything else at 6 significant digits.
std::string format_field(const DistanceField& f, const GridMap& map);

class FieldParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a format_field()-style dump and validates the -1 marks against
/// the map's obstacles. Throws FieldParseError on malformed input,
/// dimension mismatch, or obstacle-mark mismatch.
DistanceField parse_field(const std::string& text, const GridMap& map);

}  // namespace gridplan
