#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gridplan/gridworld.hpp"

namespace gridplan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    bool operator==(const Vec2&) const = default;
};

struct RobotState {
    Vec2 pos;
    Vec2 vel;
    Vec2 acc;
};

struct TargetState {
    Vec2 pos;
    Vec2 vel;
    Vec2 acc;
};

struct ApfParams {
    double alpha = 1.0;    // position gain
    double beta = 2.0;     // velocity gain
    double lambda = 0.0;   // acceleration gain
    double eta = 1.0;      // repulsion gain
    double rho0 = 3.0;     // repulsion influence range
    double d_safe = 0.3;   // emergency clearance threshold, < rho0
    double dt = 0.01;
    double v_max = 5.0;
    double goal_eps = 0.1;
    int max_steps = 5000;
};

struct ObstacleDisc {
    Vec2 center;
    double radius = 0.0;
    Vec2 velocity;
};

struct ObstacleSet {
    std::vector<ObstacleDisc> discs;
};

/// F = alpha*(Xg - X) + beta*(Vg - V) + lambda*(ag - a).
/// Zero exactly when position, velocity and acceleration all match.
Vec2 attractive_force(const RobotState& r, const TargetState& t, const ApfParams& p);

/// Goal-modulated inverse-distance repulsion, summed over discs within
/// the influence range:
///   eta * (1/rho - 1/rho0) / rho^2 * |X - Xg| * (unit vector away)
/// The |X - Xg| factor kills repulsion at the goal, so an obstacle next to
/// the target cannot push the robot into orbit. Throws std::domain_error
/// when the robot is inside a disc.
Vec2 repulsive_force(const RobotState& r, const TargetState& t, const ObstacleSet& obs,
                     const ApfParams& p);

enum class ClearanceStatus { Clear, Emergency };

/// Emergency iff min clearance over discs is strictly below d_safe.
ClearanceStatus collision_check(const RobotState& r, const ObstacleSet& obs, double d_safe);

/// Piecewise-linear target track; position clamps to the ends, velocity is
/// the segment slope (zero outside and at single-sample tracks), and the
/// acceleration of a linear segment is zero.
class Track {
public:
    Track() = default;
    explicit Track(std::vector<TrackSample> samples);
    TargetState state_at(double t) const;
    bool moving() const { return samples_.size() >= 2; }

private:
    std::vector<TrackSample> samples_;
};

struct ApfScenario {
    Vec2 start;
    Track target;
    ObstacleSet obstacles;
};

/// Grid scenario -> continuous scenario: cell (r, c) center is
/// (c+0.5, r+0.5); every obstacle cell becomes a disc of radius 0.5; the
/// moving-target track is taken verbatim when present.
ApfScenario make_apf_scenario(const ScenarioConfig& sc);

struct TrajectoryPoint {
    double t = 0.0;
    Vec2 pos;
    Vec2 vel;
    Vec2 force;
    double min_clearance = 0.0;
    bool emergency = false;
};

struct SimResult {
    bool arrived = false;
    int steps = 0;
    int collisions = 0;        // emergency events
    double traveled = 0.0;     // arc length
    std::vector<TrajectoryPoint> trajectory;
};

/// Discrete-time loop: F = attractive + repulsive, a <- F (unit mass),
/// V <- clamp(V + a*dt, v_max), X <- X + V*dt. Clearance below d_safe
/// triggers the emergency measure instead of the force update: the
/// velocity component toward the offending disc is zeroed and a unit
/// lateral (counterclockwise) impulse is applied for that step. Terminates
/// on arrival (position within goal_eps; moving targets additionally need
/// the velocity matched within goal_eps) or max_steps.
SimResult simulate(const ApfScenario& scenario, const ApfParams& p);

/// CSV rows "t,x,y,vx,vy,fx,fy,min_clearance,event" (header included).
std::string trajectory_csv(const SimResult& result);

}  // namespace gridplan
