#include "gridplan/perception.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridplan {

ImageFrame binarize(const ImageFrame& frame, const BinarizeParams& p) {
    ImageFrame out(frame.rows, frame.cols);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i)
        out.pixels[i] = frame.pixels[i] > p.threshold ? 255.0 : 0.0;
    return out;
}

QualityReport spatial_frequency(const ImageFrame& frame) {
    QualityReport q;
    const int M = frame.rows, N = frame.cols;
    if (M < 1 || N < 1) return q;
    const double norm = 1.0 / (double(M) * double(N));
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 1; j < N; ++j) {
            const double d = frame.at(i, j) - frame.at(i, j - 1);
            sx += d * d;
        }
    for (int i = 1; i < M; ++i)
        for (int j = 0; j < N; ++j) {
            const double d = frame.at(i, j) - frame.at(i - 1, j);
            sy += d * d;
        }
    q.f_x = std::sqrt(norm * sx);
    q.f_y = std::sqrt(norm * sy);
    q.sf = std::sqrt(q.f_x * q.f_x + q.f_y * q.f_y);
    return q;
}

namespace {

// Gaussian elimination with partial pivoting; returns false when a pivot
// degenerates.
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

}  // namespace

PredictorModel fit_predictor(const std::vector<double>& signal, int k) {
    if (k < 1) throw std::invalid_argument("predictor order must be >= 1");
    if (int(signal.size()) <= 2 * k)
        throw std::invalid_argument("signal too short: need length > 2*order");

    const std::size_t uk = std::size_t(k);
    // minimize sum_n (y(n) + sum_i a_i y(n-i))^2  ->  (X^T X) a = -X^T y
    std::vector<std::vector<double>> xtx(uk, std::vector<double>(uk, 0.0));
    std::vector<double> xty(uk, 0.0);
    for (std::size_t n = uk; n < signal.size(); ++n) {
        for (std::size_t i = 0; i < uk; ++i) {
            xty[i] -= signal[n - 1 - i] * signal[n];
            for (std::size_t j = i; j < uk; ++j)
                xtx[i][j] += signal[n - 1 - i] * signal[n - 1 - j];
        }
    }
    for (std::size_t i = 0; i < uk; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];

    PredictorModel model;
    model.order = k;
    if (!solve_linear(xtx, xty, model.coeffs)) {
        for (std::size_t i = 0; i < uk; ++i) xtx[i][i] += 1e-8;
        model.regularized = true;
        if (!solve_linear(xtx, xty, model.coeffs)) model.coeffs.assign(uk, 0.0);
    }
    return model;
}

double residual_score(const std::vector<double>& signal, const PredictorModel& model) {
    const std::size_t uk = std::size_t(model.order);
    if (signal.size() <= uk) throw std::invalid_argument("signal shorter than predictor order");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n = uk; n < signal.size(); ++n) {
        double pred = 0.0;
        for (std::size_t i = 0; i < uk; ++i) pred -= model.coeffs[i] * signal[n - 1 - i];
        const double e = signal[n] - pred;
        sum += e * e;
        ++count;
    }
    return sum / double(count);
}

QualityReport assess_frame(const ImageFrame& frame, int k) {
    QualityReport q = spatial_frequency(frame);
    if (int(frame.pixels.size()) > 2 * k) {
        auto model = fit_predictor(frame.pixels, k);
        q.residual_mse = residual_score(frame.pixels, model);
    }
    return q;
}

GridMap frame_to_grid(const ImageFrame& frame, const BinarizeParams& p, int cell,
                      bool white_is_obstacle) {
    if (cell < 1) throw std::invalid_argument("cell size must be >= 1");
    if (frame.rows % cell != 0 || frame.cols % cell != 0)
        throw std::invalid_argument("frame dimensions must be divisible by the cell size");
    const ImageFrame bin = binarize(frame, p);
    GridMap m(frame.rows / cell, frame.cols / cell);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) {
            int white = 0;
            for (int dr = 0; dr < cell; ++dr)
                for (int dc = 0; dc < cell; ++dc)
                    if (bin.at(r * cell + dr, c * cell + dc) == 255.0) ++white;
            const bool majority = 2 * white >= cell * cell;
            if (majority == white_is_obstacle) m.at({r, c}) = Cell::Obstacle;
        }
    return m;
}

ImageFrame read_pgm(const std::string& text) {
    std::stringstream ss(text);
    auto next_token = [&]() -> std::string {
        std::string tok;
        while (ss >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(ss, rest);
                continue;
            }
            return tok;
        }
        throw PgmError("unexpected end of PGM data");
    };
    if (next_token() != "P2") throw PgmError("not an ASCII PGM (P2) image");
    const int cols = std::stoi(next_token());
    const int rows = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (cols < 1 || rows < 1 || maxval < 1) throw PgmError("bad PGM header");
    ImageFrame frame(rows, cols);
    const double scale = 255.0 / double(maxval);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        const int v = std::stoi(next_token());
        if (v < 0 || v > maxval) throw PgmError("pixel value out of range");
        frame.pixels[i] = double(v) * scale;
    }
    return frame;
}

ImageFrame read_pgm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PgmError("cannot open PGM file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_pgm(ss.str());
}

std::string write_pgm(const ImageFrame& frame) {
    std::string out = "P2\n" + std::to_string(frame.cols) + " " + std::to_string(frame.rows) +
                      "\n255\n";
    char buf[16];
    for (int r = 0; r < frame.rows; ++r) {
        for (int c = 0; c < frame.cols; ++c) {
            std::snprintf(buf, sizeof buf, "%d", int(std::lround(frame.at(r, c))));
            out += buf;
            out += c + 1 < frame.cols ? ' ' : '\n';
        }
    }
    return out;
}

std::string quality_csv(const QualityReport& q) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g", q.f_x, q.f_y, q.sf, q.residual_mse);
    return buf;
}

}  // namespace gridplan
