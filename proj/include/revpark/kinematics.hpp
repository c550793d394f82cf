#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "revpark/geometry.hpp"

namespace revpark {

/// Vehicle state used by the planner: rear-axle center position plus yaw.
/// Yaw is stored unwrapped; it is only wrapped inside cost and goal tests.
struct Pose {
  double x_r = 0.0;  // rear-axle center X, world frame [m]
  double y_r = 0.0;  // rear-axle center Y, world frame [m]
  double psi = 0.0;  // yaw, world frame [rad]

  bool finite() const {
    return std::isfinite(x_r) && std::isfinite(y_r) && std::isfinite(psi);
  }

  friend constexpr bool operator==(const Pose& a, const Pose& b) {
    return a.x_r == b.x_r && a.y_r == b.y_r && a.psi == b.psi;
  }
};

/// Constant input held over one motion primitive.
struct ControlInput {
  double delta_f = 0.0;  // front steer angle [rad]
  double v_r = 0.0;      // rear-axle speed, signed; negative = reverse [m/s]

  friend constexpr bool operator==(const ControlInput& a, const ControlInput& b) {
    return a.delta_f == b.delta_f && a.v_r == b.v_r;
  }
};

/// Vehicle geometry. Overall length always equals
/// wheelbase + rear_overhang + front_overhang; the constructor enforces it.
struct VehicleParams {
  double wheelbase;       // rear to front axle [m]
  double length;          // overall [m]
  double width;           // overall [m]
  double rear_overhang;   // rear-axle center to rear bumper [m]
  double front_overhang;  // front-axle center to front bumper [m]
  double delta_max;       // steering limit [rad]

  /// Default mid-size car: 2.896 m wheelbase, 4.878 m x 1.935 m body,
  /// symmetric overhangs, 0.75 rad steering limit.
  VehicleParams() : VehicleParams(2.896, 4.878, 1.935) {}

  /// If rear_overhang is not given, overhangs split symmetrically as
  /// (length - wheelbase) / 2.
  VehicleParams(double wheelbase_m, double length_m, double width_m,
                std::optional<double> rear_overhang_m = std::nullopt,
                double delta_max_rad = 0.75)
      : wheelbase(wheelbase_m),
        length(length_m),
        width(width_m),
        rear_overhang(rear_overhang_m ? *rear_overhang_m : (length_m - wheelbase_m) / 2.0),
        front_overhang(length_m - wheelbase_m - rear_overhang),
        delta_max(delta_max_rad) {
    if (!(wheelbase > 0.0) || !(length > 0.0) || !(width > 0.0) ||
        !(rear_overhang > 0.0) || !(front_overhang > 0.0)) {
      throw std::invalid_argument("vehicle dimensions must be positive");
    }
    if (!(delta_max > 0.0) || !(delta_max < std::numbers::pi / 2.0)) {
      throw std::invalid_argument("delta_max must lie in (0, pi/2)");
    }
  }

  double half_width() const { return width / 2.0; }

  friend bool operator==(const VehicleParams& a, const VehicleParams& b) {
    return a.wheelbase == b.wheelbase && a.length == b.length && a.width == b.width &&
           a.rear_overhang == b.rear_overhang && a.front_overhang == b.front_overhang &&
           a.delta_max == b.delta_max;
  }
};

struct TimedPose {
  double t = 0.0;  // [s], relative to primitive start
  Pose pose;
};

/// One simulated constant-input motion primitive.
struct Trajectory {
  std::vector<TimedPose> samples;  // t strictly increasing from 0
  ControlInput input;

  const Pose& back_pose() const { return samples.back().pose; }
};

struct PoseRates {
  double dx = 0.0;    // [m/s]
  double dy = 0.0;    // [m/s]
  double dpsi = 0.0;  // [rad/s]
};

// Kinematic single-track model with front steering and the rear-axle center
// as reference point:
//   x_r'  = v_r cos(psi)
//   y_r'  = v_r sin(psi)
//   psi'  = v_r / L * tan(delta_f)
inline PoseRates derivative(const Pose& pose, const ControlInput& u, const VehicleParams& vp) {
  if (!pose.finite() || !std::isfinite(u.delta_f) || !std::isfinite(u.v_r)) {
    throw std::invalid_argument("derivative: non-finite input");
  }
  if (!(std::abs(u.delta_f) < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("derivative: |delta_f| must be < pi/2");
  }
  return {u.v_r * std::cos(pose.psi), u.v_r * std::sin(pose.psi),
          u.v_r / vp.wheelbase * std::tan(u.delta_f)};
}

/// One classical RK4 step of `derivative` over dt. Deterministic.
inline Pose integrate_step(const Pose& pose, const ControlInput& u, const VehicleParams& vp,
                           double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrate_step: dt must be > 0");
  }
  auto shifted = [](const Pose& p, const PoseRates& k, double h) -> Pose {
    return {p.x_r + h * k.dx, p.y_r + h * k.dy, p.psi + h * k.dpsi};
  };
  const PoseRates k1 = derivative(pose, u, vp);
  const PoseRates k2 = derivative(shifted(pose, k1, dt / 2.0), u, vp);
  const PoseRates k3 = derivative(shifted(pose, k2, dt / 2.0), u, vp);
  const PoseRates k4 = derivative(shifted(pose, k3, dt), u, vp);
  return {pose.x_r + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          pose.y_r + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy),
          pose.psi + dt / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)};
}

/// Exact endpoint of the constant-input motion after time t: a straight line
/// for zero steer, otherwise a circular arc of signed yaw rate
/// w = v_r / L * tan(delta_f). Serves as the integration oracle in tests.
inline Pose arc_endpoint(const Pose& pose, const ControlInput& u, const VehicleParams& vp,
                         double t) {
  if (u.delta_f == 0.0) {
    return {pose.x_r + u.v_r * t * std::cos(pose.psi),
            pose.y_r + u.v_r * t * std::sin(pose.psi), pose.psi};
  }
  const double w = u.v_r / vp.wheelbase * std::tan(u.delta_f);
  const double psi1 = pose.psi + w * t;
  return {pose.x_r + u.v_r / w * (std::sin(psi1) - std::sin(pose.psi)),
          pose.y_r - u.v_r / w * (std::cos(psi1) - std::cos(pose.psi)), psi1};
}

/// Simulates one constant-steer primitive with repeated RK4 steps.
/// duration must be an integer multiple of dt (within 1e-9); the trajectory
/// holds duration/dt + 1 samples and starts at the given pose.
inline Trajectory simulate_primitive(const Pose& pose, const ControlInput& u,
                                     const VehicleParams& vp, double duration, double dt) {
  if (!(duration > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("simulate_primitive: duration and dt must be > 0");
  }
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - duration) > 1e-9) {
    throw std::invalid_argument("simulate_primitive: duration must be a multiple of dt");
  }
  Trajectory traj;
  traj.input = u;
  traj.samples.reserve(steps + 1);
  traj.samples.push_back({0.0, pose});
  Pose current = pose;
  for (std::size_t i = 1; i <= steps; ++i) {
    current = integrate_step(current, u, vp, dt);
    traj.samples.push_back({static_cast<double>(i) * dt, current});
  }
  return traj;
}

// Transport formula: a body point at signed offset s along the heading.
inline Vec2 body_point(const Pose& pose, double s) {
  return {pose.x_r + s * std::cos(pose.psi), pose.y_r + s * std::sin(pose.psi)};
}

/// Front-axle center position (offset = wheelbase along heading).
inline Vec2 front_axle_position(const Pose& pose, const VehicleParams& vp) {
  return body_point(pose, vp.wheelbase);
}

/// Longitudinal offsets spanning the full vehicle centerline, rear bumper to
/// front bumper, endpoints included, consecutive gaps <= spacing.
inline std::vector<double> centerline_offsets(const VehicleParams& vp, double spacing) {
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("centerline spacing must be > 0");
  }
  const double s0 = -vp.rear_overhang;
  const double s1 = vp.wheelbase + vp.front_overhang;
  const double span = s1 - s0;
  const auto gaps = static_cast<std::size_t>(std::ceil(span / spacing - 1e-12));
  const std::size_t n = gaps < 1 ? 1 : gaps;
  std::vector<double> offsets;
  offsets.reserve(n + 1);
  offsets.push_back(s0);
  for (std::size_t i = 1; i < n; ++i) {
    offsets.push_back(s0 + span * static_cast<double>(i) / static_cast<double>(n));
  }
  offsets.push_back(s1);
  return offsets;
}

/// Vehicle centerline reconstructed from the rear-axle pose, sampled densely
/// enough that consecutive points are at most `spacing` apart. Both bumper
/// endpoints are always included.
inline std::vector<Vec2> centerline_points(const Pose& pose, const VehicleParams& vp,
                                           double spacing) {
  const std::vector<double> offsets = centerline_offsets(vp, spacing);
  const double c = std::cos(pose.psi);
  const double s = std::sin(pose.psi);
  std::vector<Vec2> points;
  points.reserve(offsets.size());
  for (double off : offsets) {
    points.push_back({pose.x_r + off * c, pose.y_r + off * s});
  }
  return points;
}

}  // namespace revpark
