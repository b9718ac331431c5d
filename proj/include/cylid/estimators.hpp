#pragma once

// The analytic estimators. LS solves the normal equations; TLS shifts them by
// the smallest singular value of the augmented matrix [W | tau]; RLS minimizes
// the worst-case residual over a Frobenius-bounded perturbation ball, which
// collapses to the convex objective ||W a - tau||_2 + rho*sqrt(1 + ||a||_2^2)
// and is solved by damped Newton descent. Each method also runs on the
// relative form (rows divided by their measured torque).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cylid/matrix.hpp"
#include "cylid/robot.hpp"
#include "cylid/sampling.hpp"

namespace cylid {

// Shared scale for the relative-form denominator clamp: rows whose measured
// torque is below kRelativeClampScale * max|tau| divide by the clamped value.
inline constexpr double kRelativeClampScale = 1e-3;

struct Observation {
  Mat w;     // 3N x 4
  Vec tau;   // 3N
  bool relative = false;
  std::vector<std::size_t> clamped_rows;  // relative form only
};

inline Observation build_observation(const SampleSet& set, double g) {
  if (set.samples.empty()) throw std::invalid_argument("build_observation: empty sample set");
  const std::size_t n = set.samples.size();
  Observation o;
  o.w = Mat(3 * n, 4, 0.0);
  o.tau.resize(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Mat y = regressor(set.samples[i].state, g);
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = 0; c < 4; ++c) o.w(3 * i + r, c) = y(r, c);
      o.tau[3 * i + r] = set.samples[i].torque[r];
    }
  }
  return o;
}

// Rows divide by their measured torque (rhs becomes 1). Rows whose torque is
// below the clamp threshold divide by the clamped value instead, with the rhs
// scaled consistently to tau/divisor, so their influence stays bounded without
// breaking consistent systems.
inline Observation to_relative(const Observation& o) {
  if (o.relative) throw std::invalid_argument("to_relative: observation already relative");
  double max_abs = 0.0;
  for (double t : o.tau) max_abs = std::max(max_abs, std::fabs(t));
  if (max_abs == 0.0) throw std::invalid_argument("to_relative: all torques are zero");
  const double eps = kRelativeClampScale * max_abs;

  Observation r;
  r.w = o.w;
  r.tau.assign(o.tau.size(), 1.0);
  r.relative = true;
  for (std::size_t i = 0; i < o.tau.size(); ++i) {
    double div = o.tau[i];
    if (std::fabs(div) < eps) {
      div = (div < 0.0) ? -eps : eps;  // sign(0) treated as +1
      r.tau[i] = o.tau[i] / div;
      r.clamped_rows.push_back(i);
    }
    for (std::size_t c = 0; c < r.w.cols; ++c) r.w(i, c) /= div;
  }
  return r;
}

struct RankDeficientError : std::runtime_error {
  RankDeficientError(const std::string& msg, Vec comb)
      : std::runtime_error(msg), combination(std::move(comb)) {}
  Vec combination;  // null-space direction of W^T W
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, Vec last, double grad)
      : std::runtime_error(msg), last_iterate(std::move(last)), gradient_norm(grad) {}
  Vec last_iterate;
  double gradient_norm;
};

// One analytic fit, any column count (the oracle tests run small synthetic
// problems through the same code paths).
struct FitResult {
  Vec alpha;
  double residual_norm = 0.0;  // ||tau - W alpha||_2
  double sigma_min = 0.0;      // TLS / RLS: smallest singular value of [W|tau]
  double rho = 0.0;            // RLS perturbation bound
  double objective = 0.0;      // RLS achieved objective
  double condition = 0.0;      // condition estimate of the solved system
  bool condition_flag = false;
  int iterations = 0;  // RLS
};

namespace detail {

inline std::string combination_string(const Mat& gram_matrix) {
  const auto eig = symmetric_eigen(gram_matrix);
  std::string s;
  for (std::size_t c = 0; c < gram_matrix.cols; ++c) {
    const double coef = eig.vectors(c, 0);
    if (std::fabs(coef) < 1e-3) continue;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%.3g*col%zu", s.empty() ? "" : " + ", coef, c);
    s += buf;
  }
  return s + " ~ 0";
}

}  // namespace detail

inline FitResult ls_fit(const Mat& w, const Vec& tau) {
  if (w.rows < w.cols) throw std::invalid_argument("ls_fit: need at least as many rows as columns");
  const Mat g = gram(w);
  const auto sol = solve_linear(g, transpose_matvec(w, tau));
  if (sol.flagged) {
    Vec comb(w.cols);
    const auto eig = symmetric_eigen(g);
    for (std::size_t c = 0; c < w.cols; ++c) comb[c] = eig.vectors(c, 0);
    throw RankDeficientError("ls_fit: observation matrix is rank deficient (" +
                                 detail::combination_string(g) + ")",
                             comb);
  }
  FitResult out;
  out.alpha = sol.x;
  out.condition = sol.condition;
  Vec r = matvec(w, out.alpha);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = tau[i] - r[i];
  out.residual_norm = norm2(r);
  return out;
}

// TLS with an explicitly supplied shift; sigma = 0 reduces to the LS normal
// equations. Never throws on conditioning: divergence on bad data is the
// expected, observable behavior.
inline FitResult tls_fit_shifted(const Mat& w, const Vec& tau, double sigma) {
  Mat g = gram(w);
  for (std::size_t c = 0; c < g.cols; ++c) g(c, c) -= sigma * sigma;
  const auto sol = solve_linear(g, transpose_matvec(w, tau));
  FitResult out;
  out.alpha = sol.x;
  out.sigma_min = sigma;
  out.condition = sol.condition;
  out.condition_flag = sol.flagged;
  Vec r = matvec(w, out.alpha);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = tau[i] - r[i];
  out.residual_norm = norm2(r);
  return out;
}

inline double augmented_sigma_min(const Mat& w, const Vec& tau) {
  Mat aug(w.rows, w.cols + 1);
  for (std::size_t i = 0; i < w.rows; ++i) {
    for (std::size_t j = 0; j < w.cols; ++j) aug(i, j) = w(i, j);
    aug(i, w.cols) = tau[i];
  }
  return smallest_singular_value(aug);
}

inline FitResult tls_fit(const Mat& w, const Vec& tau) {
  if (w.rows <= w.cols + 1)
    throw std::invalid_argument("tls_fit: need more rows than augmented columns");
  return tls_fit_shifted(w, tau, augmented_sigma_min(w, tau));
}

// Worst-case residual over the Frobenius ball of radius rho, in closed form.
inline double rls_objective(const Mat& w, const Vec& tau, const Vec& alpha, double rho) {
  Vec r = matvec(w, alpha);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= tau[i];
  return norm2(r) + rho * std::sqrt(1.0 + dot(alpha, alpha));
}

inline constexpr int kRlsIterationCap = 10000;

inline FitResult rls_fit(const Mat& w, const Vec& tau, std::optional<double> rho_opt = std::nullopt) {
  const double rho = rho_opt ? *rho_opt : augmented_sigma_min(w, tau);
  if (!(rho >= 0.0)) throw std::invalid_argument("rls_fit: rho must be nonnegative");
  const std::size_t n = w.cols;
  const double delta = 1e-12;  // smoothing of the residual norm near zero

  // start from LS when the normal equations cooperate
  Vec x(n, 0.0);
  {
    const auto sol = solve_linear(gram(w), transpose_matvec(w, tau));
    if (!sol.flagged) x = sol.x;
  }

  auto objective = [&](const Vec& a) {
    Vec r = matvec(w, a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= tau[i];
    return std::sqrt(dot(r, r) + delta * delta) + rho * std::sqrt(1.0 + dot(a, a));
  };

  double fx = objective(x);
  double grad_norm = 0.0;
  int iter = 0;
  for (; iter < kRlsIterationCap; ++iter) {
    Vec r = matvec(w, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= tau[i];
    const double s = std::sqrt(dot(r, r) + delta * delta);
    const double t = std::sqrt(1.0 + dot(x, x));
    const Vec p = transpose_matvec(w, r);

    Vec grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = p[i] / s + rho * x[i] / t;
    grad_norm = norm2(grad);
    if (grad_norm < 1e-9 * (1.0 + std::fabs(fx))) break;

    Mat h = gram(w);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        h(i, j) = h(i, j) / s - p[i] * p[j] / (s * s * s) +
                  rho * ((i == j ? 1.0 : 0.0) / t - x[i] * x[j] / (t * t * t));
      }
    Vec neg_grad(n);
    for (std::size_t i = 0; i < n; ++i) neg_grad[i] = -grad[i];
    auto newton = solve_linear(h, neg_grad);
    Vec dir = newton.x;
    double slope = dot(grad, dir);
    if (newton.flagged || !(slope < 0.0)) {
      dir = neg_grad;  // damped fallback
      slope = -grad_norm * grad_norm;
    }

    // backtracking Armijo line search
    double step = 1.0;
    bool accepted = false;
    double fx_new = fx;
    for (int back = 0; back < 60; ++back) {
      Vec cand(n);
      for (std::size_t i = 0; i < n; ++i) cand[i] = x[i] + step * dir[i];
      const double fc = objective(cand);
      if (fc <= fx + 1e-4 * step * slope) {
        x = cand;
        fx_new = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // objective floor reached
    const double rel_improve = (fx - fx_new) / std::max(std::fabs(fx), 1e-300);
    fx = fx_new;
    if (rel_improve < 1e-12) break;
  }
  if (iter >= kRlsIterationCap) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "rls_fit: no convergence after %d iterations (gradient norm %.3g)",
                  kRlsIterationCap, grad_norm);
    throw ConvergenceError(buf, x, grad_norm);
  }

  FitResult out;
  out.alpha = x;
  out.rho = rho;
  out.sigma_min = rho_opt ? 0.0 : rho;
  out.objective = rls_objective(w, tau, x, rho);
  out.iterations = iter;
  Vec r = matvec(w, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = tau[i] - r[i];
  out.residual_norm = norm2(r);
  return out;
}

enum class AnalyticKind { kLs, kTls, kRls };

// One benchmark-table row worth of result. Solver and extraction failures are
// carried as flags, never exceptions, so a benchmark sweep always completes.
struct EstimateResult {
  std::optional<BaseParams> alpha;
  std::optional<RobotParams> params;
  double seconds = 0.0;  // wall clock around the solve only
  double sigma_min = 0.0;
  double rho = 0.0;
  double residual_norm = 0.0;
  double condition = 0.0;
  std::size_t clamped_rows = 0;
  bool condition_flag = false;
  bool extraction_flag = false;
  bool solver_failed = false;
  std::string note;
};

inline EstimateResult estimate(AnalyticKind kind, bool relative, const SampleSet& set, double g) {
  EstimateResult out;
  Observation o = build_observation(set, g);
  if (relative) {
    o = to_relative(o);
    out.clamped_rows = o.clamped_rows.size();
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    FitResult fit;
    switch (kind) {
      case AnalyticKind::kLs: fit = ls_fit(o.w, o.tau); break;
      case AnalyticKind::kTls: fit = tls_fit(o.w, o.tau); break;
      case AnalyticKind::kRls: fit = rls_fit(o.w, o.tau); break;
    }
    out.alpha = BaseParams{fit.alpha[0], fit.alpha[1], fit.alpha[2], fit.alpha[3]};
    out.sigma_min = fit.sigma_min;
    out.rho = fit.rho;
    out.residual_norm = fit.residual_norm;
    out.condition = fit.condition;
    out.condition_flag = fit.condition_flag;
  } catch (const RankDeficientError& e) {
    out.solver_failed = true;
    out.note = e.what();
  } catch (const ConvergenceError& e) {
    out.solver_failed = true;
    out.note = e.what();
    if (e.last_iterate.size() == 4)
      out.alpha = BaseParams{e.last_iterate[0], e.last_iterate[1], e.last_iterate[2],
                             e.last_iterate[3]};
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.seconds = std::chrono::duration<double>(t1 - t0).count();

  if (out.alpha) {
    try {
      out.params = params_from_alpha(*out.alpha);
    } catch (const ExtractionError&) {
      out.extraction_flag = true;
    }
  }
  return out;
}

}  // namespace cylid
