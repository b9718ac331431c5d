#pragma once

// Closed-form model of the 3-DOF cylindrical robot (revolute theta1, prismatic
// d2 and d3): inverse dynamics, the 3x4 regressor, the four-component base
// parameter mapping, the excitation trajectory, and the physical bounds the
// trajectory is supposed to observe.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/matrix.hpp"

namespace cylid {

inline constexpr double kDefaultGravity = 9.81;  // m/s^2

// The four physical parameters every estimator targets.
struct RobotParams {
  double m2 = 0.0;       // link 2 mass, kg
  double m3 = 0.0;       // link 3 mass, kg
  double s3z = 0.0;      // link 3 center-of-mass offset along its z-axis, m (may be negative)
  double inertia = 0.0;  // combined inertia I, kg m^2
};

inline bool is_physical(const RobotParams& p) {
  return p.m2 > 0.0 && p.m3 > 0.0 && p.inertia > 0.0 &&
         p.inertia + p.m3 * p.s3z * p.s3z > 0.0;
}

struct JointState {
  double theta1 = 0.0;       // rad
  double d2 = 0.0;           // m
  double d3 = 0.0;           // m
  double theta1_dot = 0.0;   // rad/s
  double d2_dot = 0.0;       // m/s
  double d3_dot = 0.0;       // m/s
  double theta1_ddot = 0.0;  // rad/s^2
  double d2_ddot = 0.0;      // m/s^2
  double d3_ddot = 0.0;      // m/s^2
};

// Base parameters: alpha = (I + m3*s3z^2, m2, m3, m3*s3z).
using BaseParams = std::array<double, 4>;

inline BaseParams alpha_from_params(const RobotParams& p) {
  return {p.inertia + p.m3 * p.s3z * p.s3z, p.m2, p.m3, p.m3 * p.s3z};
}

inline constexpr double kDefaultExtractEps = 1e-6;

// Raised when alpha3 (= m3) is too close to zero to divide by.
struct ExtractionError : std::runtime_error {
  explicit ExtractionError(const BaseParams& raw)
      : std::runtime_error("params_from_alpha: |alpha3| below extraction threshold"),
        alpha(raw) {}
  BaseParams alpha;
};

// Inverts alpha_from_params. Nonphysical outputs (negative masses from bad
// estimates) are returned as-is; rejecting them is the caller's business.
inline RobotParams params_from_alpha(const BaseParams& a, double extract_eps = kDefaultExtractEps) {
  if (std::fabs(a[2]) < extract_eps) throw ExtractionError(a);
  RobotParams p;
  p.m2 = a[1];
  p.m3 = a[2];
  p.s3z = a[3] / a[2];
  p.inertia = a[0] - a[3] * a[3] / a[2];
  return p;
}

// tau1 [N m], tau2 [N], tau3 [N]
inline std::array<double, 3> inverse_dynamics(const RobotParams& p, const JointState& s,
                                              double g = kDefaultGravity) {
  const double arm = p.s3z + s.d3;
  return {
      (p.inertia + p.m3 * arm * arm) * s.theta1_ddot + 2.0 * p.m3 * arm * s.d3_dot * s.theta1_dot,
      (p.m2 + p.m3) * (s.d2_ddot + g),
      p.m3 * s.d3_ddot - p.m3 * arm * s.theta1_dot * s.theta1_dot,
  };
}

// The 3x4 matrix Y with inverse_dynamics(p, s, g) == Y * alpha_from_params(p).
inline Mat regressor(const JointState& s, double g = kDefaultGravity) {
  Mat y(3, 4, 0.0);
  y(0, 0) = s.theta1_ddot;
  y(0, 2) = 2.0 * s.d3 * s.d3_dot * s.theta1_dot + s.d3 * s.d3 * s.theta1_ddot;
  y(0, 3) = 2.0 * s.d3_dot * s.theta1_dot + 2.0 * s.d3 * s.theta1_ddot;
  y(1, 1) = s.d2_ddot + g;
  y(1, 2) = s.d2_ddot + g;
  y(2, 2) = s.d3_ddot - s.d3 * s.theta1_dot * s.theta1_dot;
  y(2, 3) = -s.theta1_dot * s.theta1_dot;
  return y;
}

namespace detail {

struct SineTerm {
  double amplitude;
  double frequency;
};

inline constexpr std::array<SineTerm, 3> kTheta1Terms{{{0.43, 2.2}, {0.23, 1.8}, {-3.4, 0.06}}};
inline constexpr std::array<SineTerm, 3> kD2Terms{{{1.0, 0.1}, {-0.3, 0.07}, {0.35, 1.3}}};
inline constexpr std::array<SineTerm, 3> kD3Terms{{{0.1, 0.1}, {-0.1, 2.7}, {0.06, 0.14}}};
inline constexpr double kTheta1Offset = -0.36;
inline constexpr double kD2Offset = -0.014;
inline constexpr double kD3Offset = 0.26;

inline void eval_sines(const std::array<SineTerm, 3>& terms, double offset, double t,
                       double& pos, double& vel, double& acc) {
  pos = offset;
  vel = 0.0;
  acc = 0.0;
  for (const auto& term : terms) {
    const double w = term.frequency;
    pos += term.amplitude * std::sin(w * t);
    vel += term.amplitude * w * std::cos(w * t);
    acc -= term.amplitude * w * w * std::sin(w * t);
  }
}

}  // namespace detail

inline constexpr double kTrajectoryDuration = 10.0;  // s

// Excitation trajectory on t in [0, 10]; derivatives are analytic.
inline JointState trajectory(double t) {
  if (!(t >= 0.0 && t <= kTrajectoryDuration))
    throw std::out_of_range("trajectory: t outside [0, 10]");
  JointState s;
  detail::eval_sines(detail::kTheta1Terms, detail::kTheta1Offset, t, s.theta1, s.theta1_dot,
                     s.theta1_ddot);
  detail::eval_sines(detail::kD2Terms, detail::kD2Offset, t, s.d2, s.d2_dot, s.d2_ddot);
  detail::eval_sines(detail::kD3Terms, detail::kD3Offset, t, s.d3, s.d3_dot, s.d3_ddot);
  return s;
}

struct Interval {
  double lo;
  double hi;
};

// Closed intervals for every coordinate of the excitation trajectory.
struct TrajectoryBounds {
  Interval theta1{-std::numbers::pi, std::numbers::pi};
  Interval d2{0.0, 1.0};
  Interval d3{0.0, 1.0};
  Interval theta1_dot{-4.0, 4.0};
  Interval d2_dot{-2.0, 2.0};
  Interval d3_dot{-1.5, 1.5};
  Interval theta1_ddot{-3.0, 3.0};
  Interval d2_ddot{-2.0, 2.0};
  Interval d3_ddot{-1.0, 1.0};

  static TrajectoryBounds standard() { return {}; }
};

// Names every violated inequality, e.g. "d2 position min". Empty = compliant.
inline std::vector<std::string> check_bounds(const JointState& s,
                                             const TrajectoryBounds& b = TrajectoryBounds::standard()) {
  std::vector<std::string> out;
  const struct {
    const char* joint;
    const char* kind;
    double value;
    Interval iv;
  } checks[] = {
      {"theta1", "position", s.theta1, b.theta1},
      {"d2", "position", s.d2, b.d2},
      {"d3", "position", s.d3, b.d3},
      {"theta1", "velocity", s.theta1_dot, b.theta1_dot},
      {"d2", "velocity", s.d2_dot, b.d2_dot},
      {"d3", "velocity", s.d3_dot, b.d3_dot},
      {"theta1", "acceleration", s.theta1_ddot, b.theta1_ddot},
      {"d2", "acceleration", s.d2_ddot, b.d2_ddot},
      {"d3", "acceleration", s.d3_ddot, b.d3_ddot},
  };
  for (const auto& c : checks) {
    if (c.value < c.iv.lo) out.push_back(std::string(c.joint) + " " + c.kind + " min");
    if (c.value > c.iv.hi) out.push_back(std::string(c.joint) + " " + c.kind + " max");
  }
  return out;
}

}  // namespace cylid
