#include "gridplan/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <queue>
#include <sstream>

namespace gridplan {

std::size_t GridMap::obstacle_count() const {
    return std::size_t(std::count(cells.begin(), cells.end(), Cell::Obstacle));
}

namespace {

const int kOffsets[8][2] = {
    {-1, 0},  // N
    {0, 1},   // E
    {1, 0},   // S
    {0, -1},  // W
    {-1, 1},  // NE
    {1, 1},   // SE
    {1, -1},  // SW
    {-1, -1}, // NW
};

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

std::string trim_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
    return s;
}

std::vector<TrackSample> parse_track_line(const std::string& body, int line_no) {
    std::vector<TrackSample> samples;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ';')) {
        // skip empty segments from a trailing ';'
        bool blank = item.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        double v[3];
        std::stringstream fs(item);
        std::string f;
        int n = 0;
        while (std::getline(fs, f, ',')) {
            if (n >= 3 || !parse_double(f, v[n]))
                throw ScenarioError(line_no, "malformed track sample '" + item + "'");
            ++n;
        }
        if (n != 3) throw ScenarioError(line_no, "track sample needs x,y,t: '" + item + "'");
        samples.push_back({v[0], v[1], v[2]});
    }
    return samples;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) lines.push_back(trim_cr(line));
    }

    std::size_t i = 0;
    // comments and blank lines are allowed before the header only
    while (i < lines.size() && (lines[i].empty() || lines[i][0] == '#')) ++i;
    if (i >= lines.size()) throw ScenarioError(int(lines.size()), "missing header line");

    int rows = 0, cols = 0;
    {
        std::stringstream hs(lines[i]);
        std::string extra;
        if (!(hs >> rows >> cols) || rows <= 0 || cols <= 0 || (hs >> extra))
            throw ScenarioError(int(i + 1), "header must be 'rows cols' with positive integers");
    }
    ++i;

    ScenarioConfig sc;
    sc.map = GridMap(rows, cols);
    bool have_start = false, have_target = false;
    for (int r = 0; r < rows; ++r, ++i) {
        if (i >= lines.size())
            throw ScenarioError(int(lines.size()), "expected " + std::to_string(rows) +
                                                       " grid lines, got " + std::to_string(r));
        const std::string& row = lines[i];
        if (int(row.size()) != cols)
            throw ScenarioError(int(i + 1), "grid line has " + std::to_string(row.size()) +
                                                " cells, expected " + std::to_string(cols));
        for (int c = 0; c < cols; ++c) {
            Coord cc{r, c};
            switch (row[std::size_t(c)]) {
                case '.': break;
                case '#': sc.map.at(cc) = Cell::Obstacle; break;
                case 'S':
                    if (have_start) throw ScenarioError(int(i + 1), "duplicate start marker 'S'");
                    have_start = true;
                    sc.map.start = cc;
                    break;
                case 'T':
                    if (have_target) throw ScenarioError(int(i + 1), "duplicate target marker 'T'");
                    have_target = true;
                    sc.map.target = cc;
                    break;
                default:
                    throw ScenarioError(int(i + 1), std::string("bad cell character '") +
                                                        row[std::size_t(c)] + "'");
            }
        }
    }
    if (!have_start) throw ScenarioError(int(i), "missing start marker 'S'");
    if (!have_target) throw ScenarioError(int(i), "missing target marker 'T'");

    for (; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        if (line.rfind("track:", 0) == 0) {
            auto samples = parse_track_line(line.substr(6), int(i + 1));
            sc.moving_target_track.insert(sc.moving_target_track.end(), samples.begin(),
                                          samples.end());
            continue;
        }
        throw ScenarioError(int(i + 1), "unexpected content after grid: '" + line + "'");
    }
    for (std::size_t k = 1; k < sc.moving_target_track.size(); ++k) {
        if (!(sc.moving_target_track[k].t > sc.moving_target_track[k - 1].t))
            throw ScenarioError(int(lines.size()), "track timestamps must be strictly increasing");
    }
    return sc;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& sc) {
    const GridMap& m = sc.map;
    if (m.start == m.target)
        throw std::invalid_argument("scenario format cannot express start == target");
    std::string out = std::to_string(m.rows) + " " + std::to_string(m.cols) + "\n";
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            Coord cc{r, c};
            char ch = m.at(cc) == Cell::Obstacle ? '#' : '.';
            if (cc == m.start) ch = 'S';
            if (cc == m.target) ch = 'T';
            out += ch;
        }
        out += '\n';
    }
    if (!sc.moving_target_track.empty()) {
        out += "track: ";
        char buf[96];
        for (std::size_t k = 0; k < sc.moving_target_track.size(); ++k) {
            const TrackSample& s = sc.moving_target_track[k];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", s.x, s.y, s.t);
            out += buf;
            if (k + 1 < sc.moving_target_track.size()) out += "; ";
        }
        out += '\n';
    }
    return out;
}

std::vector<Coord> neighbors(const GridMap& map, Coord c, Neighborhood nb) {
    std::vector<Coord> out;
    const int n = nb == Neighborhood::Four ? 4 : 8;
    out.reserve(std::size_t(n));
    for (int k = 0; k < n; ++k) {
        Coord q{c.row + kOffsets[k][0], c.col + kOffsets[k][1]};
        if (map.in_bounds(q)) out.push_back(q);
    }
    return out;
}

OracleResult shortest_path_oracle(const GridMap& map, Neighborhood nb) {
    OracleResult res;
    res.field = DistanceField(map.rows, map.cols);
    const std::size_t n = map.cells.size();
    std::vector<std::int32_t> parent(n, -1);

    if (!map.in_bounds(map.target) || !map.is_free(map.target)) return res;
    const std::size_t tgt = map.index(map.target);

    if (nb == Neighborhood::Four) {
        std::deque<Coord> queue;
        res.field.at(map.target) = 0.0;
        queue.push_back(map.target);
        while (!queue.empty()) {
            Coord cur = queue.front();
            queue.pop_front();
            const double dcur = res.field.at(cur);
            for (Coord q : neighbors(map, cur, nb)) {
                if (!map.is_free(q)) continue;
                if (res.field.at(q) != kUnreachable) continue;
                res.field.at(q) = dcur + 1.0;
                parent[map.index(q)] = std::int32_t(map.index(cur));
                queue.push_back(q);
            }
        }
    } else {
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        res.field.at(map.target) = 0.0;
        pq.push({0.0, tgt});
        while (!pq.empty()) {
            auto [dcur, icur] = pq.top();
            pq.pop();
            if (dcur > res.field.d[icur]) continue;  // stale entry
            Coord cur{int(icur) / map.cols, int(icur) % map.cols};
            for (int k = 0; k < 8; ++k) {
                Coord q{cur.row + kOffsets[k][0], cur.col + kOffsets[k][1]};
                if (!map.in_bounds(q) || !map.is_free(q)) continue;
                const double step = k < 4 ? 1.0 : kDiagonalCost;
                const double cand = dcur + step;
                if (cand < res.field.at(q)) {
                    res.field.at(q) = cand;
                    parent[map.index(q)] = std::int32_t(icur);
                    pq.push({cand, map.index(q)});
                }
            }
        }
    }

    if (map.in_bounds(map.start) && res.field.at(map.start) != kUnreachable) {
        Path p;
        std::size_t cur = map.index(map.start);
        p.waypoints.push_back(map.start);
        while (cur != tgt) {
            cur = std::size_t(parent[cur]);
            p.waypoints.push_back({int(cur) / map.cols, int(cur) % map.cols});
        }
        res.path = std::move(p);
    }
    return res;
}

double path_length(const Path& p, Neighborhood nb) {
    std::size_t orth = 0, diag = 0;
    for (std::size_t k = 1; k < p.waypoints.size(); ++k) {
        const int dr = std::abs(p.waypoints[k].row - p.waypoints[k - 1].row);
        const int dc = std::abs(p.waypoints[k].col - p.waypoints[k - 1].col);
        if (dr + dc == 1) {
            ++orth;
        } else if (dr == 1 && dc == 1 && nb == Neighborhood::Eight) {
            ++diag;
        } else {
            throw std::invalid_argument("path step " + std::to_string(k) +
                                        " is not adjacent under the declared neighborhood");
        }
    }
    return double(orth) + double(diag) * kDiagonalCost;
}

std::vector<Coord> supercover_line(Coord a, Coord b) {
    std::vector<Coord> cells;
    const int nx = std::abs(b.col - a.col), ny = std::abs(b.row - a.row);
    const int sx = b.col > a.col ? 1 : -1, sy = b.row > a.row ? 1 : -1;
    Coord cur = a;
    cells.push_back(cur);
    int ix = 0, iy = 0;
    while (ix < nx || iy < ny) {
        const long long decision = (1 + 2LL * ix) * ny - (1 + 2LL * iy) * nx;
        if (decision == 0) {
            // exact corner crossing: include both side cells
            cells.push_back({cur.row, cur.col + sx});
            cells.push_back({cur.row + sy, cur.col});
            cur = {cur.row + sy, cur.col + sx};
            ++ix;
            ++iy;
        } else if (decision < 0) {
            cur = {cur.row, cur.col + sx};
            ++ix;
        } else {
            cur = {cur.row + sy, cur.col};
            ++iy;
        }
        cells.push_back(cur);
    }
    return cells;
}

bool segment_clear(const GridMap& map, Coord a, Coord b) {
    if (!map.in_bounds(a) || !map.in_bounds(b)) return false;
    for (Coord c : supercover_line(a, b))
        if (!map.is_free(c)) return false;
    return true;
}

std::string format_field(const DistanceField& f, const GridMap& map) {
    std::string out;
    char buf[48];
    for (int r = 0; r < f.rows; ++r) {
        for (int c = 0; c < f.cols; ++c) {
            if (c > 0) out += ' ';
            Coord cc{r, c};
            if (map.at(cc) == Cell::Obstacle) {
                out += "-1";
                continue;
            }
            const double v = f.at(cc);
            if (v == kUnreachable) {
                out += "inf";
            } else if (std::abs(v - std::round(v)) < 1e-9 && std::abs(v) < 9e15) {
                std::snprintf(buf, sizeof buf, "%lld", (long long)std::llround(v));
                out += buf;
            } else {
                std::snprintf(buf, sizeof buf, "%.6g", v);
                out += buf;
            }
        }
        out += '\n';
    }
    return out;
}

DistanceField parse_field(const std::string& text, const GridMap& map) {
    DistanceField f(map.rows, map.cols);
    std::stringstream ss(text);
    std::string line;
    int r = 0;
    while (std::getline(ss, line)) {
        line = trim_cr(line);
        if (line.empty()) continue;
        if (r >= map.rows) throw FieldParseError("field has more rows than the map");
        std::stringstream ls(line);
        std::string tok;
        int c = 0;
        while (ls >> tok) {
            if (c >= map.cols) throw FieldParseError("row " + std::to_string(r) + " too long");
            Coord cc{r, c};
            if (tok == "-1") {
                if (map.at(cc) != Cell::Obstacle)
                    throw FieldParseError("obstacle mark at free cell (" + std::to_string(r) +
                                          "," + std::to_string(c) + ")");
                // field keeps kUnreachable at obstacle cells
            } else if (tok == "inf") {
                f.at(cc) = kUnreachable;
            } else {
                double v;
                if (!parse_double(tok, v) || v < 0)
                    throw FieldParseError("bad field value '" + tok + "'");
                if (map.at(cc) == Cell::Obstacle)
                    throw FieldParseError("value at obstacle cell (" + std::to_string(r) + "," +
                                          std::to_string(c) + ")");
                f.at(cc) = v;
            }
            ++c;
        }
        if (c != map.cols)
            throw FieldParseError("row " + std::to_string(r) + " has " + std::to_string(c) +
                                  " values, expected " + std::to_string(map.cols));
        ++r;
    }
    if (r != map.rows)
        throw FieldParseError("field has " + std::to_string(r) + " rows, expected " +
                              std::to_string(map.rows));
    return f;
}

}  // namespace gridplan
