#pragma once

// Sampling the excitation trajectory into (state, torque) pairs and
// corrupting them under the four error scenarios, reproducibly. A corrupted
// set keeps full provenance (true parameters, gravity, scenario, seed) and
// may not be corrupted again.

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/rng.hpp"
#include "cylid/robot.hpp"

namespace cylid {

struct Sample {
  double t = 0.0;  // s
  JointState state;
  std::array<double, 3> torque{};  // N m, N, N
};

inline constexpr int kComponentsPerSample = 12;  // 9 state + 3 torque

struct Provenance {
  RobotParams true_params;
  double g = kDefaultGravity;
  std::string scenario = "clean";
  std::uint64_t noise_seed = 0;
};

struct SampleSet {
  std::vector<Sample> samples;
  Provenance provenance;

  std::size_t size() const { return samples.size(); }
};

// One multiplicative error scenario. Bounds are relative half-widths in [0,1).
struct NoiseScenario {
  enum class Kind { kStateOnly, kTorqueOnly, kAll, kOutliers, kCustom };

  Kind kind = Kind::kAll;
  double bound = 0.20;  // kStateOnly / kTorqueOnly / kAll
  int outlier_count = 10;
  double outlier_bound = 0.70;
  double base_bound = 0.05;
  // kCustom: one bound per component, CSV column order
  // (theta1, d2, d3, theta1_dot, d2_dot, d3_dot, theta1_ddot, d2_ddot, d3_ddot,
  //  tau1, tau2, tau3)
  std::array<double, kComponentsPerSample> component_bounds{};

  static NoiseScenario s1() { return {Kind::kStateOnly, 0.20}; }
  static NoiseScenario s2() { return {Kind::kTorqueOnly, 0.20}; }
  static NoiseScenario s3() { return {Kind::kAll, 0.20}; }
  static NoiseScenario s4() { return {Kind::kOutliers, 0.0, 10, 0.70, 0.05}; }
  static NoiseScenario custom(const std::array<double, kComponentsPerSample>& bounds) {
    NoiseScenario sc;
    sc.kind = Kind::kCustom;
    sc.component_bounds = bounds;
    return sc;
  }

  std::string id() const {
    switch (kind) {
      case Kind::kStateOnly: return "s1";
      case Kind::kTorqueOnly: return "s2";
      case Kind::kAll: return "s3";
      case Kind::kOutliers: return "s4";
      case Kind::kCustom: return "custom";
    }
    return "?";
  }

  void validate(std::size_t sample_count) const {
    auto check_bound = [](double b) {
      if (!(b >= 0.0 && b < 1.0))
        throw std::invalid_argument("NoiseScenario: bounds must lie in [0, 1)");
    };
    check_bound(bound);
    check_bound(outlier_bound);
    check_bound(base_bound);
    for (double b : component_bounds) check_bound(b);
    if (kind == Kind::kOutliers) {
      if (outlier_count < 0 ||
          static_cast<std::size_t>(outlier_count) > sample_count * kComponentsPerSample)
        throw std::invalid_argument("NoiseScenario: outlier_count exceeds component count");
    }
  }
};

namespace detail {

inline double* component_ptr(Sample& s, int c) {
  switch (c) {
    case 0: return &s.state.theta1;
    case 1: return &s.state.d2;
    case 2: return &s.state.d3;
    case 3: return &s.state.theta1_dot;
    case 4: return &s.state.d2_dot;
    case 5: return &s.state.d3_dot;
    case 6: return &s.state.theta1_ddot;
    case 7: return &s.state.d2_ddot;
    case 8: return &s.state.d3_ddot;
    case 9: return &s.torque[0];
    case 10: return &s.torque[1];
    case 11: return &s.torque[2];
  }
  throw std::out_of_range("component_ptr: bad index");
}

}  // namespace detail

// Samples at the midpoints of n equal subintervals of [0, 10]; torques come
// from the inverse dynamics at the true parameters.
inline SampleSet collect_samples(const RobotParams& true_params, double g, std::size_t n) {
  if (n < 2) throw std::invalid_argument("collect_samples: need at least 2 samples");
  if (!is_physical(true_params))
    throw std::invalid_argument("collect_samples: true parameters must be physical");
  if (!(g > 0.0)) throw std::invalid_argument("collect_samples: g must be positive");
  SampleSet set;
  set.provenance.true_params = true_params;
  set.provenance.g = g;
  set.samples.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    Sample s;
    s.t = (static_cast<double>(k) - 0.5) * kTrajectoryDuration / static_cast<double>(n);
    s.state = trajectory(s.t);
    s.torque = inverse_dynamics(true_params, s.state, g);
    set.samples.push_back(s);
  }
  return set;
}

// Multiplicative corruption x -> x * (1 + u), u uniform on (-b, +b). Component
// order is fixed (samples in order, components in CSV column order), and for
// the outlier scenario the outlier index set is drawn first, so the result is
// a pure function of (set, scenario, seed).
inline SampleSet corrupt(const SampleSet& clean, const NoiseScenario& sc, std::uint64_t seed) {
  if (clean.provenance.scenario != "clean")
    throw std::invalid_argument("corrupt: input was already corrupted (scenario '" +
                                clean.provenance.scenario + "')");
  if (clean.samples.empty()) throw std::invalid_argument("corrupt: empty sample set");
  sc.validate(clean.size());

  SampleSet out = clean;
  out.provenance.scenario = sc.id();
  out.provenance.noise_seed = seed;
  SeededRng rng(seed);

  const std::size_t total = clean.size() * kComponentsPerSample;
  std::vector<bool> outlier(total, false);
  if (sc.kind == NoiseScenario::Kind::kOutliers) {
    // partial Fisher-Yates: the first outlier_count entries are the outliers
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < sc.outlier_count; ++k) {
      const std::size_t j = k + rng.below(total - static_cast<std::size_t>(k));
      std::swap(idx[k], idx[j]);
      outlier[idx[k]] = true;
    }
  }

  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    for (int c = 0; c < kComponentsPerSample; ++c) {
      const bool is_state = c < 9;
      double b = 0.0;
      bool targeted = false;
      switch (sc.kind) {
        case NoiseScenario::Kind::kStateOnly:
          targeted = is_state;
          b = sc.bound;
          break;
        case NoiseScenario::Kind::kTorqueOnly:
          targeted = !is_state;
          b = sc.bound;
          break;
        case NoiseScenario::Kind::kAll:
          targeted = true;
          b = sc.bound;
          break;
        case NoiseScenario::Kind::kOutliers:
          targeted = true;
          b = outlier[i * kComponentsPerSample + c] ? sc.outlier_bound : sc.base_bound;
          break;
        case NoiseScenario::Kind::kCustom:
          targeted = true;
          b = sc.component_bounds[static_cast<std::size_t>(c)];
          break;
      }
      if (!targeted) continue;
      const double u = rng.symmetric_open(b);
      double* x = detail::component_ptr(out.samples[i], c);
      *x *= 1.0 + u;
    }
  }
  return out;
}

}  // namespace cylid
