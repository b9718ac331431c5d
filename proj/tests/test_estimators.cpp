#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cylid/estimators.hpp"
#include "cylid/rng.hpp"
#include "cylid/sampling.hpp"

using namespace cylid;

namespace {

const RobotParams kTrue{5.0, 3.0, -0.5, 3.0};
const BaseParams kTrueAlpha = alpha_from_params(kTrue);

Mat random_tall(SeededRng& rng, std::size_t rows, std::size_t cols, double lo = -5.0,
                double hi = 5.0) {
  Mat m(rows, cols);
  for (double& v : m.a) v = rng.uniform(lo, hi);
  return m;
}

Vec residual(const Mat& w, const Vec& tau, const Vec& alpha) {
  Vec r = matvec(w, alpha);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= tau[i];
  return r;
}

}  // namespace

TEST_CASE("build_observation stacks regressors and torques in sample order") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  REQUIRE(o.w.rows == 30);
  REQUIRE(o.w.cols == 4);
  REQUIRE(o.tau.size() == 30);
  CHECK_FALSE(o.relative);

  const Vec pred = matvec(o.w, Vec(kTrueAlpha.begin(), kTrueAlpha.end()));
  for (std::size_t i = 0; i < pred.size(); ++i) CHECK(std::fabs(pred[i] - o.tau[i]) < 1e-10);

  const SampleSet two = collect_samples(kTrue, 9.81, 2);
  const Observation o2 = build_observation(two, 9.81);
  const Mat y0 = regressor(two.samples[0].state, 9.81);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(o2.w(r, c) == y0(r, c));
}

TEST_CASE("to_relative divides rows by their torque and sets the rhs to one") {
  Observation o;
  o.w = Mat::from_rows({{2, 4, 6, 8}, {1, 2, 3, 4}});
  o.tau = {2.0, 4.0};
  const Observation r = to_relative(o);
  CHECK(r.relative);
  CHECK(r.clamped_rows.empty());
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(r.w(0, c) == o.w(0, c) / 2.0);
    CHECK(r.w(1, c) == o.w(1, c) / 4.0);
  }
  CHECK(r.tau == Vec{1.0, 1.0});
  CHECK_THROWS_AS(to_relative(r), std::invalid_argument);
}

TEST_CASE("to_relative clamps near-zero denominators") {
  Observation o;
  o.w = Mat::from_rows({{1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}});
  o.tau = {10.0, 1e-15, -1e-15};
  const Observation r = to_relative(o);
  REQUIRE(r.clamped_rows == std::vector<std::size_t>{1, 2});
  // clamp is 1e-3 * max|tau| = 0.01, sign preserved; rhs scaled consistently
  CHECK(r.w(1, 0) == 2.0 / 0.01);
  CHECK(r.w(2, 0) == 3.0 / -0.01);
  CHECK(r.tau[0] == 1.0);
  CHECK(r.tau[1] == 1e-15 / 0.01);
  CHECK(r.tau[2] == -1e-15 / -0.01);

  Observation zero;
  zero.w = Mat(2, 4, 1.0);
  zero.tau = {0.0, 0.0};
  CHECK_THROWS_AS(to_relative(zero), std::invalid_argument);
}

TEST_CASE("LS recovers the true base parameters from clean data") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  const FitResult fit = ls_fit(o.w, o.tau);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::fabs(fit.alpha[i] - kTrueAlpha[i]) < 1e-7);
}

TEST_CASE("LS toy problems") {
  // one-parameter normal equation: alpha = (1 + 3) / 2
  const FitResult toy = ls_fit(Mat::from_rows({{1.0}, {1.0}}), Vec{1.0, 3.0});
  CHECK_THAT(toy.alpha[0], Catch::Matchers::WithinAbs(2.0, 1e-14));

  // consistent square system with power-of-two entries solves exactly
  const FitResult sq = ls_fit(Mat::from_rows({{2, 0}, {0, 4}}), Vec{2.0, 8.0});
  CHECK(sq.alpha == Vec{1.0, 2.0});
  CHECK(sq.residual_norm == 0.0);
}

TEST_CASE("LS rejects rank-deficient observations naming the combination") {
  // column 2 = 2 * column 0
  const Mat w = Mat::from_rows({{1, 0, 2}, {2, 1, 4}, {3, 2, 6}, {4, 1, 8}});
  try {
    ls_fit(w, Vec{1, 2, 3, 4});
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.combination.size() == 3);
    CHECK(std::string(e.what()).find("col") != std::string::npos);
    // the null direction satisfies W v = 0
    Mat wm = w;
    const Vec img = matvec(wm, e.combination);
    CHECK(norm2(img) < 1e-6 * frobenius_norm(w));
  }
}

TEST_CASE("LS first-order optimality on random datasets") {
  SeededRng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat w = random_tall(rng, 12, 4);
    Vec tau(12);
    for (double& v : tau) v = rng.uniform(-10.0, 10.0);
    const FitResult fit = ls_fit(w, tau);
    const double base = norm2(residual(w, tau, fit.alpha));
    for (std::size_t d = 0; d < 4; ++d) {
      for (double sign : {-1.0, 1.0}) {
        Vec alpha = fit.alpha;
        alpha[d] += sign * 1e-4;
        CHECK(norm2(residual(w, tau, alpha)) >= base * (1.0 - 1e-9));
      }
    }
  }
}

TEST_CASE("TLS degenerates to LS on clean data") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  const FitResult tls = tls_fit(o.w, o.tau);
  CHECK(tls.sigma_min <= 1e-7);
  const FitResult ls = ls_fit(o.w, o.tau);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(tls.alpha[i] - ls.alpha[i]) < 1e-6);
}

TEST_CASE("TLS with a forced zero shift is bit-identical to LS") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  const FitResult shifted = tls_fit_shifted(o.w, o.tau, 0.0);
  const FitResult ls = ls_fit(o.w, o.tau);
  for (std::size_t i = 0; i < 4; ++i) CHECK(shifted.alpha[i] == ls.alpha[i]);
}

TEST_CASE("TLS matches the augmented-Gram closed form on small problems") {
  SeededRng rng(909);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat w = random_tall(rng, 6, 1);
    Vec tau(6);
    const double a_true = rng.uniform(-3.0, 3.0);
    for (std::size_t i = 0; i < 6; ++i)
      tau[i] = w(i, 0) * a_true + rng.uniform(-0.3, 0.3);

    const FitResult fit = tls_fit(w, tau);

    // oracle: analytic eigen decomposition of the 2x2 augmented Gram
    double g00 = 0, g01 = 0, g11 = 0;
    for (std::size_t i = 0; i < 6; ++i) {
      g00 += w(i, 0) * w(i, 0);
      g01 += w(i, 0) * tau[i];
      g11 += tau[i] * tau[i];
    }
    const double tr = g00 + g11;
    const double det = g00 * g11 - g01 * g01;
    const double lo = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
    // eigenvector (v0, v1) of the smallest eigenvalue; alpha = -v0/v1
    double v0 = g01, v1 = lo - g00;
    if (std::fabs(v0) + std::fabs(v1) < 1e-12) { v0 = lo - g11; v1 = g01; }
    if (std::fabs(v1) < 1e-9) continue;  // degenerate direction, skip
    const double alpha_oracle = -v0 / v1;

    CHECK(std::fabs(fit.sigma_min - std::sqrt(std::max(0.0, lo))) < 1e-7 * (1 + fit.sigma_min));
    CHECK(std::fabs(fit.alpha[0] - alpha_oracle) < 1e-6 * (1.0 + std::fabs(alpha_oracle)));
  }
}

TEST_CASE("RLS with rho = 0 equals LS per component") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  const FitResult rls = rls_fit(o.w, o.tau, 0.0);
  const FitResult ls = ls_fit(o.w, o.tau);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(rls.alpha[i] - ls.alpha[i]) < 1e-8);
}

TEST_CASE("RLS with the TLS-derived rho recovers true alpha on clean data") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);
  const Observation o = build_observation(set, 9.81);
  const FitResult rls = rls_fit(o.w, o.tau);
  CHECK(rls.rho <= 1e-7);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::fabs(rls.alpha[i] - kTrueAlpha[i]) < 1e-6);
}

TEST_CASE("RLS beats a local grid and the objective is midpoint convex") {
  SeededRng rng(1234);
  const Mat w = random_tall(rng, 12, 2);
  Vec tau(12);
  for (double& v : tau) v = rng.uniform(-4.0, 4.0);
  const double rho = 0.3;
  const FitResult fit = rls_fit(w, tau, rho);
  const double at_solution = rls_objective(w, tau, fit.alpha, rho);
  CHECK_THAT(fit.objective, Catch::Matchers::WithinAbs(at_solution, 1e-12));

  for (int i = 0; i < 201; ++i) {
    for (int j = 0; j < 201; ++j) {
      const Vec p{fit.alpha[0] - 1.0 + i / 100.0, fit.alpha[1] - 1.0 + j / 100.0};
      CHECK(at_solution <= rls_objective(w, tau, p, rho) + 1e-10);
    }
  }

  for (int seg = 0; seg < 100; ++seg) {
    Vec x{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    Vec y{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const Vec mid{0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1])};
    CHECK(rls_objective(w, tau, mid, rho) <=
          0.5 * (rls_objective(w, tau, x, rho) + rls_objective(w, tau, y, rho)) + 1e-12);
  }
}

TEST_CASE("random Frobenius-ball perturbations never beat the worst-case bound") {
  SeededRng rng(555);
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t rows = 9, cols = 3;
    const Mat w = random_tall(rng, rows, cols);
    Vec tau(rows);
    for (double& v : tau) v = rng.uniform(-5.0, 5.0);
    Vec alpha(cols);
    for (double& v : alpha) v = rng.uniform(-2.0, 2.0);
    const double rho = rng.uniform(0.05, 1.0);
    const double bound = rls_objective(w, tau, alpha, rho);

    for (int trial = 0; trial < 1000; ++trial) {
      Mat delta(rows, cols + 1);
      for (double& v : delta.a) v = rng.uniform(-1.0, 1.0);
      const double fn = frobenius_norm(delta);
      const double radius = rho * rng.next_double();
      for (double& v : delta.a) v *= radius / fn;
      Mat wp = w;
      Vec taup = tau;
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) wp(i, j) += delta(i, j);
        taup[i] += delta(i, cols);
      }
      CHECK(norm2(residual(wp, taup, alpha)) <= bound + 1e-9);
    }

    // the analytic worst-case direction attains the bound
    Vec r = residual(w, tau, alpha);
    double rn = norm2(r);
    Vec u(rows, 0.0);
    if (rn > 1e-12) for (std::size_t i = 0; i < rows; ++i) u[i] = r[i] / rn;
    else u[0] = 1.0;
    const double t = std::sqrt(1.0 + dot(alpha, alpha));
    Mat wp = w;
    Vec taup = tau;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) wp(i, j) += rho * u[i] * alpha[j] / t;
      taup[i] += rho * u[i] * (-1.0) / t;  // augmented direction is [alpha; -1] / t
    }
    const double attained = norm2(residual(wp, taup, alpha));
    CHECK(attained <= bound + 1e-9);
    CHECK(attained >= bound * 0.99);
  }
}

TEST_CASE("estimate dispatch on clean data") {
  const SampleSet set = collect_samples(kTrue, 9.81, 10);

  const EstimateResult ls = estimate(AnalyticKind::kLs, false, set, 9.81);
  REQUIRE(ls.params.has_value());
  CHECK(std::fabs(ls.params->m2 - 5.0) < 1e-6 * 5.0);
  CHECK(std::fabs(ls.params->m3 - 3.0) < 1e-6 * 3.0);
  CHECK(std::fabs(ls.params->s3z - -0.5) < 1e-6 * 0.5);
  CHECK(std::fabs(ls.params->inertia - 3.0) < 1e-6 * 3.0);
  CHECK(ls.seconds >= 0.0);
  CHECK_FALSE(ls.condition_flag);
  CHECK_FALSE(ls.solver_failed);

  // all six analytic variants agree on clean data
  for (AnalyticKind kind : {AnalyticKind::kLs, AnalyticKind::kTls, AnalyticKind::kRls}) {
    for (bool relative : {false, true}) {
      const EstimateResult e = estimate(kind, relative, set, 9.81);
      REQUIRE(e.params.has_value());
      CHECK(std::fabs(e.params->m2 - 5.0) < 1e-6 * 5.0);
      CHECK(std::fabs(e.params->m3 - 3.0) < 1e-6 * 3.0);
      CHECK(std::fabs(e.params->s3z - -0.5) < 1e-6 * 0.5);
      CHECK(std::fabs(e.params->inertia - 3.0) < 1e-6 * 3.0);
    }
  }

  // relative RLS matches relative LS on clean data
  const EstimateResult lsr = estimate(AnalyticKind::kLs, true, set, 9.81);
  const EstimateResult rlsr = estimate(AnalyticKind::kRls, true, set, 9.81);
  REQUIRE(lsr.params.has_value());
  REQUIRE(rlsr.params.has_value());
  CHECK(std::fabs(lsr.params->m2 - rlsr.params->m2) < 1e-6);
  CHECK(std::fabs(lsr.params->inertia - rlsr.params->inertia) < 1e-6);
}

TEST_CASE("TLS on heavy corruption completes, possibly flagged or nonphysical") {
  const SampleSet clean = collect_samples(kTrue, 9.81, 20);
  const SampleSet noisy = corrupt(clean, NoiseScenario::s3(), 2718);
  const EstimateResult e = estimate(AnalyticKind::kTls, false, noisy, 9.81);
  CHECK(e.alpha.has_value());  // always emits an estimate, flagged or not
}
