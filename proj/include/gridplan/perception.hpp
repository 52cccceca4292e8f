#pragma once

#include <string>
#include <vector>

#include "gridplan/gridworld.hpp"

namespace gridplan {

/// Grayscale frame, pixels in [0, 255], row-major.
struct ImageFrame {
    int rows = 0;  // M
    int cols = 0;  // N
    std::vector<double> pixels;

    ImageFrame() = default;
    ImageFrame(int r, int c, double fill = 0.0)
        : rows(r), cols(c), pixels(std::size_t(r) * std::size_t(c), fill) {}

    double at(int r, int c) const { return pixels[std::size_t(r) * std::size_t(cols) + std::size_t(c)]; }
    double& at(int r, int c) { return pixels[std::size_t(r) * std::size_t(cols) + std::size_t(c)]; }
};

struct BinarizeParams {
    double threshold = 128.0;  // in (0, 255); pixel == threshold maps to 0
};

/// Linear one-step predictor y_hat(n) = -sum_i a_i * y(n-i). The sign
/// convention follows the estimation formula it implements, so a fitted
/// a_i is the negated AR coefficient.
struct PredictorModel {
    int order = 0;
    std::vector<double> coeffs;
    bool regularized = false;  // normal equations were singular; ridge used
};

struct QualityReport {
    double f_x = 0.0;
    double f_y = 0.0;
    double sf = 0.0;  // sqrt(f_x^2 + f_y^2)
    double residual_mse = 0.0;
};

/// Pixel > threshold -> 255, otherwise 0.
ImageFrame binarize(const ImageFrame& frame, const BinarizeParams& p);

/// Row/column-difference spatial frequencies:
///   f_x = sqrt(1/(MN) * sum_{i=1..M} sum_{j=2..N} (I(i,j) - I(i,j-1))^2)
///   f_y analogously over row differences. residual_mse is left 0.
QualityReport spatial_frequency(const ImageFrame& frame);

/// Least-squares fit of the predictor coefficients; needs
/// signal.size() > 2*k. Singular normal equations fall back to a ridge
/// solve (epsilon 1e-8) and set `regularized`.
PredictorModel fit_predictor(const std::vector<double>& signal, int k);

/// Mean squared one-step prediction error over n = k .. len-1.
double residual_score(const std::vector<double>& signal, const PredictorModel& model);

/// Quality report for a frame: spatial frequencies plus the residual of an
/// order-k predictor fitted to the row-major pixel sequence.
QualityReport assess_frame(const ImageFrame& frame, int k);

/// Binarize, then turn each cell x cell block into one grid cell:
/// Obstacle iff at least half of the block's pixels are white (255).
/// `white_is_obstacle = false` inverts the polarity. Frame dimensions must
/// be divisible by cell. start/target of the result are left at {0,0}.
GridMap frame_to_grid(const ImageFrame& frame, const BinarizeParams& p, int cell,
                      bool white_is_obstacle = true);

class PgmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ASCII PGM (P2). Values are rescaled to [0, 255] when maxval differs.
ImageFrame read_pgm(const std::string& text);
ImageFrame read_pgm_file(const std::string& path);
std::string write_pgm(const ImageFrame& frame);

/// CSV row "f_x,f_y,sf,residual_mse" at 6 significant digits.
std::string quality_csv(const QualityReport& q);

}  // namespace gridplan
