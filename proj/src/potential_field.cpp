#include "gridplan/potential_field.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace gridplan {

Vec2 attractive_force(const RobotState& r, const TargetState& t, const ApfParams& p) {
    return (t.pos - r.pos) * p.alpha + (t.vel - r.vel) * p.beta + (t.acc - r.acc) * p.lambda;
}

Vec2 repulsive_force(const RobotState& r, const TargetState& t, const ObstacleSet& obs,
                     const ApfParams& p) {
    Vec2 total;
    const double goal_dist = (r.pos - t.pos).norm();
    for (const auto& disc : obs.discs) {
        const Vec2 away = r.pos - disc.center;
        const double rho = away.norm() - disc.radius;
        if (rho <= 0.0) throw std::domain_error("robot inside an obstacle disc");
        if (rho > p.rho0) continue;
        const double mag = p.eta * (1.0 / rho - 1.0 / p.rho0) / (rho * rho) * goal_dist;
        const double len = away.norm();
        total += away * (mag / len);
    }
    return total;
}

ClearanceStatus collision_check(const RobotState& r, const ObstacleSet& obs, double d_safe) {
    for (const auto& disc : obs.discs) {
        const double rho = (r.pos - disc.center).norm() - disc.radius;
        if (rho < d_safe) return ClearanceStatus::Emergency;
    }
    return ClearanceStatus::Clear;
}

Track::Track(std::vector<TrackSample> samples) : samples_(std::move(samples)) {}

TargetState Track::state_at(double t) const {
    TargetState s;
    if (samples_.empty()) return s;
    if (samples_.size() == 1 || t < samples_.front().t) {
        s.pos = {samples_.front().x, samples_.front().y};
        return s;
    }
    if (t >= samples_.back().t) {
        s.pos = {samples_.back().x, samples_.back().y};
        return s;
    }
    std::size_t hi = 1;
    while (samples_[hi].t < t) ++hi;
    const TrackSample& a = samples_[hi - 1];
    const TrackSample& b = samples_[hi];
    const double span = b.t - a.t;
    const double u = (t - a.t) / span;
    s.pos = {a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u};
    s.vel = {(b.x - a.x) / span, (b.y - a.y) / span};
    // piecewise-linear: zero acceleration inside segments
    return s;
}

ApfScenario make_apf_scenario(const ScenarioConfig& sc) {
    ApfScenario out;
    out.start = {double(sc.map.start.col) + 0.5, double(sc.map.start.row) + 0.5};
    if (!sc.moving_target_track.empty()) {
        out.target = Track(sc.moving_target_track);
    } else {
        out.target = Track({{double(sc.map.target.col) + 0.5, double(sc.map.target.row) + 0.5, 0.0}});
    }
    for (int r = 0; r < sc.map.rows; ++r)
        for (int c = 0; c < sc.map.cols; ++c)
            if (!sc.map.is_free({r, c}))
                out.obstacles.discs.push_back({{double(c) + 0.5, double(r) + 0.5}, 0.5, {}});
    return out;
}

namespace {

Vec2 clamp_speed(Vec2 v, double v_max) {
    const double speed = v.norm();
    if (speed > v_max) return v * (v_max / speed);
    return v;
}

}  // namespace

SimResult simulate(const ApfScenario& scenario, const ApfParams& p) {
    SimResult res;
    RobotState robot;
    robot.pos = scenario.start;

    ObstacleSet obstacles = scenario.obstacles;
    const bool moving = scenario.target.moving();

    for (int step_i = 0; step_i <= p.max_steps; ++step_i) {
        const double t = double(step_i) * p.dt;
        const TargetState target = scenario.target.state_at(t);

        if ((robot.pos - target.pos).norm() < p.goal_eps &&
            (!moving || (robot.vel - target.vel).norm() < p.goal_eps)) {
            res.arrived = true;
            res.steps = step_i;
            return res;
        }
        if (step_i == p.max_steps) break;

        // nearest disc decides between the force law and the emergency measure
        double min_clearance = std::numeric_limits<double>::infinity();
        const ObstacleDisc* offending = nullptr;
        for (const auto& disc : obstacles.discs) {
            const double rho = (robot.pos - disc.center).norm() - disc.radius;
            if (rho < min_clearance) {
                min_clearance = rho;
                offending = &disc;
            }
        }

        TrajectoryPoint pt;
        pt.t = t;
        pt.min_clearance = min_clearance;

        if (offending != nullptr && min_clearance < p.d_safe) {
            Vec2 away = robot.pos - offending->center;
            const double len = away.norm();
            away = len > 1e-12 ? away * (1.0 / len) : Vec2{1.0, 0.0};
            const double toward = -robot.vel.dot(away);
            if (toward > 0.0) robot.vel += away * toward;  // drop the closing component
            robot.vel += Vec2{-away.y, away.x};            // unit lateral impulse, ccw
            robot.vel = clamp_speed(robot.vel, p.v_max);
            ++res.collisions;
            pt.emergency = true;
        } else {
            const Vec2 force =
                attractive_force(robot, target, p) + repulsive_force(robot, target, obstacles, p);
            robot.acc = force;  // unit mass
            robot.vel = clamp_speed(robot.vel + robot.acc * p.dt, p.v_max);
            pt.force = force;
        }

        const Vec2 before = robot.pos;
        robot.pos += robot.vel * p.dt;
        res.traveled += (robot.pos - before).norm();
        ++res.steps;

        pt.pos = robot.pos;
        pt.vel = robot.vel;
        res.trajectory.push_back(pt);

        for (auto& disc : obstacles.discs) disc.center += disc.velocity * p.dt;
    }
    return res;
}

std::string trajectory_csv(const SimResult& result) {
    std::string out = "t,x,y,vx,vy,fx,fy,min_clearance,event\n";
    char buf[256];
    for (const auto& pt : result.trajectory) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%s\n", pt.t,
                      pt.pos.x, pt.pos.y, pt.vel.x, pt.vel.y, pt.force.x, pt.force.y,
                      pt.min_clearance, pt.emergency ? "emergency" : "");
        out += buf;
    }
    return out;
}

}  // namespace gridplan
