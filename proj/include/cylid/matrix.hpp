#pragma once

// Dense row-major matrices and the small-scale linear algebra the estimators
// need: entrywise and induced norms, cyclic Jacobi eigenvalues, singular
// values through Gram matrices, and Gaussian elimination with a condition
// estimate. Everything here targets the ~100x6 scale of this problem; inputs
// are assumed finite.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylid {

using Vec = std::vector<double>;

struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major, rows*cols entries

  Mat() = default;

  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {
    if (r == 0 || c == 0) throw std::invalid_argument("Mat: dimensions must be positive");
  }

  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rws) {
    Mat m(rws.size(), rws.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rws) {
      if (row.size() != m.cols) throw std::invalid_argument("Mat: ragged rows");
      std::size_t j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline bool is_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline bool is_finite(const Mat& m) { return is_finite(m.a); }

inline double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec matvec(const Mat& m, const Vec& x) {
  if (x.size() != m.cols) throw std::invalid_argument("matvec: size mismatch");
  Vec y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// m^T * y
inline Vec transpose_matvec(const Mat& m, const Vec& y) {
  if (y.size() != m.rows) throw std::invalid_argument("transpose_matvec: size mismatch");
  Vec x(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) x[j] += m(i, j) * y[i];
  return x;
}

inline Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Mat matmul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: size mismatch");
  Mat z(x.rows, y.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double xik = x(i, k);
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

// m^T * m (symmetric by construction)
inline Mat gram(const Mat& m) {
  Mat g(m.cols, m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      for (std::size_t k = j; k < m.cols; ++k) g(j, k) += m(i, j) * m(i, k);
  for (std::size_t j = 0; j < m.cols; ++j)
    for (std::size_t k = 0; k < j; ++k) g(j, k) = g(k, j);
  return g;
}

inline double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

// maximum absolute column sum
inline double induced_one_norm(const Mat& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

// maximum absolute row sum
inline double induced_inf_norm(const Mat& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double max_row_sumsq(const Mat& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * m(i, j);
    best = std::max(best, s);
  }
  return best;
}

inline double max_abs_entry(const Mat& m) {
  double best = 0.0;
  for (double v : m.a) best = std::max(best, std::fabs(v));
  return best;
}

struct EigenDecomposition {
  Vec values;   // ascending
  Mat vectors;  // column k pairs with values[k]
};

// Cyclic Jacobi rotations on a symmetric matrix. Input must be square and
// symmetric within 1e-10 relative to its largest entry.
inline EigenDecomposition symmetric_eigen(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("symmetric_eigen: matrix not square");
  const std::size_t n = m.rows;
  const double scale = max_abs_entry(m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(m(i, j) - m(j, i)) > 1e-10 * std::max(scale, 1e-300))
        throw std::invalid_argument("symmetric_eigen: matrix not symmetric");

  Mat a = m;
  Mat v = Mat::identity(n);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * std::max(frobenius_norm(a), 1e-300)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

// Largest singular value through the smaller Gram matrix.
inline double spectral_norm(const Mat& m) {
  const Mat g = (m.cols <= m.rows) ? gram(m) : gram(transpose(m));
  const auto eig = symmetric_eigen(g);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

// Smallest singular value of a tall matrix (rows >= cols). The eigenvector of
// the smallest Gram eigenvalue is re-applied to m itself, which recovers the
// accuracy the Gram squaring would otherwise lose near zero.
inline double smallest_singular_value(const Mat& m) {
  if (m.rows < m.cols)
    throw std::invalid_argument("smallest_singular_value: requires rows >= cols");
  const auto eig = symmetric_eigen(gram(m));
  Vec v(m.cols);
  for (std::size_t r = 0; r < m.cols; ++r) v[r] = eig.vectors(r, 0);
  return norm2(matvec(m, v));
}

inline constexpr double kConditionCap = 1e12;

struct LinearSolve {
  Vec x;
  double condition = 0.0;  // one-norm condition estimate
  bool flagged = false;    // condition above cap (or pivot floored)
};

// Gaussian elimination with partial pivoting. Never throws on bad
// conditioning: the solve proceeds (pivots floored if exactly degenerate) and
// the condition estimate ||a||_1 * ||a^-1||_1 flags the result. Callers decide.
inline LinearSolve solve_linear(const Mat& a, const Vec& b, double condition_cap = kConditionCap) {
  if (a.rows != a.cols) throw std::invalid_argument("solve_linear: matrix not square");
  if (b.size() != a.rows) throw std::invalid_argument("solve_linear: rhs size mismatch");
  const std::size_t n = a.rows;
  const double scale = std::max(max_abs_entry(a), 1e-300);
  const double pivot_floor = scale * 1e-30;

  Mat lu = a;
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  bool floored = false;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(lu(i, k)) > std::fabs(lu(best, k))) best = i;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(best, j));
      std::swap(piv[k], piv[best]);
    }
    if (std::fabs(lu(k, k)) < pivot_floor) {
      lu(k, k) = (lu(k, k) < 0.0) ? -pivot_floor : pivot_floor;
      floored = true;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }

  auto lu_solve = [&](const Vec& rhs) {
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[piv[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * y[j];
      y[i] = s / lu(i, i);
    }
    return y;
  };

  LinearSolve out;
  out.x = lu_solve(b);

  // condition estimate from the explicit inverse (n <= 6 here)
  double inv_one_norm = 0.0;
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vec col = lu_solve(e);
    e[j] = 0.0;
    double s = 0.0;
    for (double v : col) s += std::fabs(v);
    inv_one_norm = std::max(inv_one_norm, s);
  }
  out.condition = induced_one_norm(a) * inv_one_norm;
  out.flagged = floored || !(out.condition < condition_cap);
  return out;
}

}  // namespace cylid
