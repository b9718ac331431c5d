#pragma once

// The sixteen swarm cost functions: eight matrix measures applied to the
// absolute error matrix E (ids 1-8) and the same eight applied to the
// entrywise-relative error matrix (ids 9-16).
//
//   1 Frobenius             5 one * inf
//   2 spectral              6 one * spectral * inf
//   3 induced one           7 max row sum of squares
//   4 induced inf           8 max absolute entry

#include <stdexcept>

#include "cylid/estimators.hpp"
#include "cylid/matrix.hpp"
#include "cylid/robot.hpp"
#include "cylid/sampling.hpp"

namespace cylid {

inline constexpr int kCostCount = 16;

// Column i holds tau_measured(i) - tau_predicted(i) for candidate parameters p.
inline Mat error_matrix(const RobotParams& p, const SampleSet& set, double g) {
  if (set.samples.empty()) throw std::invalid_argument("error_matrix: empty sample set");
  Mat e(3, set.samples.size(), 0.0);
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const auto predicted = inverse_dynamics(p, set.samples[i].state, g);
    for (std::size_t r = 0; r < 3; ++r) e(r, i) = set.samples[i].torque[r] - predicted[r];
  }
  return e;
}

// Entrywise (T - T_hat) / T with the same denominator clamp as to_relative.
inline Mat relative_error_matrix(const RobotParams& p, const SampleSet& set, double g) {
  if (set.samples.empty())
    throw std::invalid_argument("relative_error_matrix: empty sample set");
  double max_abs = 0.0;
  for (const Sample& s : set.samples)
    for (double t : s.torque) max_abs = std::max(max_abs, std::fabs(t));
  if (max_abs == 0.0)
    throw std::invalid_argument("relative_error_matrix: all torques are zero");
  const double eps = kRelativeClampScale * max_abs;

  Mat e(3, set.samples.size(), 0.0);
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const auto predicted = inverse_dynamics(p, set.samples[i].state, g);
    for (std::size_t r = 0; r < 3; ++r) {
      const double t = set.samples[i].torque[r];
      double div = t;
      if (std::fabs(div) < eps) div = (div < 0.0) ? -eps : eps;
      e(r, i) = (t - predicted[r]) / div;
    }
  }
  return e;
}

// family in 1..8
inline double matrix_cost(int family, const Mat& e) {
  switch (family) {
    case 1: return frobenius_norm(e);
    case 2: return spectral_norm(e);
    case 3: return induced_one_norm(e);
    case 4: return induced_inf_norm(e);
    case 5: return induced_one_norm(e) * induced_inf_norm(e);
    case 6: return induced_one_norm(e) * spectral_norm(e) * induced_inf_norm(e);
    case 7: return max_row_sumsq(e);
    case 8: return max_abs_entry(e);
  }
  throw std::invalid_argument("matrix_cost: family must be in 1..8");
}

// id in 1..16; ids 9..16 are the relative-matrix versions of 1..8
inline double cost(int id, const RobotParams& p, const SampleSet& set, double g) {
  if (id < 1 || id > kCostCount) throw std::invalid_argument("cost: id must be in 1..16");
  const bool relative = id > 8;
  const int family = relative ? id - 8 : id;
  return matrix_cost(family, relative ? relative_error_matrix(p, set, g)
                                      : error_matrix(p, set, g));
}

}  // namespace cylid
