#pragma once

#include <vector>

#include "gridplan/gridworld.hpp"

namespace gridplan {

/// Shunting dynamics per cell i:
///   dx_i/dt = -A x_i + (B - x_i) ([I_i]+ + sum_j w_ij [x_j]+) - (D + x_i) [I_i]-
/// with lateral weights w_ij = mu / d_ij for 0 < d_ij < r0 (Euclidean
/// cell-center distance), 0 beyond. Integrated by explicit Euler; the
/// activity stays within [-D, B] as long as the stability guard holds.
struct ShuntingParams {
    double A = 10.0;    // passive decay
    double B = 1.0;     // upper activity bound
    double D = 1.0;     // lower activity bound (magnitude)
    double E = 100.0;   // external input magnitude
    double mu = 1.0;    // lateral weight gain
    double r0 = 2.0;    // receptive radius, grid units
    double dt = 0.005;  // Euler step
    double tol = 1e-6;  // settle() convergence threshold on max |dx|
    int max_iters = 20000;
};

/// Offsets within the receptive radius and the count used by the
/// stability guard dt * (A + E + mu * neighbor_count) < 1.
struct WeightKernel {
    struct Tap {
        int dr, dc;
        double w;
    };
    std::vector<Tap> taps;
};

WeightKernel make_kernel(const ShuntingParams& p);

/// Throws std::invalid_argument when a parameter is out of range or the
/// explicit-Euler stability guard fails.
void validate(const ShuntingParams& p);

struct ActivityField {
    int rows = 0;
    int cols = 0;
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;

    ActivityField() = default;
    ActivityField(int r, int c) : rows(r), cols(c), x(std::size_t(r) * std::size_t(c), 0.0) {}
    double at(Coord cc) const { return x[std::size_t(cc.row) * std::size_t(cols) + std::size_t(cc.col)]; }
    double& at(Coord cc) { return x[std::size_t(cc.row) * std::size_t(cols) + std::size_t(cc.col)]; }
};

/// +E at the target, -E at obstacles, 0 elsewhere.
std::vector<double> external_input(const GridMap& map, const ShuntingParams& p);

/// One synchronous Euler step of the shunting dynamics over every cell.
/// Returns the largest |change| over cells.
double step(ActivityField& field, const std::vector<double>& input, const WeightKernel& kernel,
            const ShuntingParams& p);

/// Iterates step() from a zero field until max |change| < tol or
/// max_iters; non-convergence is flagged, not thrown.
ActivityField settle(const GridMap& map, const ShuntingParams& p);

struct ExtractResult {
    Path path;
    bool reached = false;
};

/// Greedy ascent readout: from start, move to the free Eight-neighbor with
/// maximal activity, strictly greater than the current cell's, until the
/// target; a stall before the target fails with the partial path. Capped
/// at 4*rows*cols steps.
ExtractResult extract_path(const ActivityField& field, const GridMap& map, Coord start);

/// Scene-switched dynamics:
///   scene1: dx_i/dt = -A x_i + gain * y_i
///   scene2: dx_i/dt = -A x_i + gain * y_i + I
/// with y_i = g(sum_{j in NE_i} w_ij x_j) over the same kernel.
struct SceneParams {
    enum class Scene { Scene1, Scene2 };
    enum class Output { LinearSaturating, Logistic };
    double gain = 1.0;  // D_i(T), fixed per scene
    double I = 0.0;     // constant drive, scene2 only
    Scene scene = Scene::Scene1;
    Output g = Output::LinearSaturating;
};

double step_scene(ActivityField& field, const SceneParams& sp, const WeightKernel& kernel,
                  const ShuntingParams& p);

/// Matrix text dump in the DistanceField convention: obstacles "-1",
/// activities at 6 significant digits.
std::string format_activity(const ActivityField& field, const GridMap& map);

}  // namespace gridplan
