#pragma once

// Reference computations written independently of the library: plain loops,
// modified Gram-Schmidt and Jacobi rotations instead of SVD/eigensolvers.

#include "fusion/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using fusion::cdouble;
using fusion::Index;
using fusion::Matrix;
using fusion::Vector;

inline double abs2(double x) { return x * x; }
inline double abs2(cdouble x) { return std::norm(x); }
inline double conj(double x) { return x; }
inline cdouble conj(cdouble x) { return std::conj(x); }

/// Modified Gram-Schmidt with one reorthogonalization pass; a column is
/// dropped when its remaining norm is below tol times its original norm.
template <typename S>
Matrix<S> mgs(const Matrix<S>& a, double tol = 1e-9) {
  std::vector<Vector<S>> q;
  for (Index c = 0; c < a.cols(); ++c) {
    Vector<S> v = a.col(c);
    const double orig = v.norm();
    if (orig == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        S dot = S(0);
        for (Index k = 0; k < v.size(); ++k) dot += conj(u(k)) * v(k);
        for (Index k = 0; k < v.size(); ++k) v(k) -= dot * u(k);
      }
    }
    const double r = v.norm();
    if (r > tol * orig) q.push_back(v / r);
  }
  Matrix<S> out(a.rows(), static_cast<Index>(q.size()));
  for (std::size_t k = 0; k < q.size(); ++k) out.col(static_cast<Index>(k)) = q[k];
  return out;
}

template <typename S>
Index rank(const Matrix<S>& a, double tol = 1e-9) {
  return mgs(a, tol).cols();
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi, ascending.
inline std::vector<double> jacobi_eigenvalues(Matrix<double> a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index r = p + 1; r < n; ++r) {
        if (std::abs(a(p, r)) < 1e-300) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * a(p, r));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (Index k = 0; k < n; ++k) ev[k] = a(k, k);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues of a Hermitian matrix. Complex input goes through the real
/// embedding [Re -Im; Im Re], whose spectrum repeats each eigenvalue twice.
inline std::vector<double> eigenvalues(const Matrix<double>& a) { return jacobi_eigenvalues(a); }

inline std::vector<double> eigenvalues(const Matrix<cdouble>& a) {
  const Index n = a.rows();
  Matrix<double> r(2 * n, 2 * n);
  r << a.real(), -a.imag(), a.imag(), a.real();
  const std::vector<double> doubled = jacobi_eigenvalues(r);
  std::vector<double> ev;
  for (std::size_t k = 0; k < doubled.size(); k += 2) ev.push_back(doubled[k]);
  return ev;
}

template <typename S>
std::pair<double, double> extremes(const Matrix<S>& a) {
  const std::vector<double> ev = eigenvalues(a);
  return {ev.front(), ev.back()};
}

/// sum_i v_i^2 sum_j e_ij e_ij^H with e_ij from Gram-Schmidt on raw spanning sets.
template <typename S>
Matrix<S> frame_operator(Index n, const std::vector<Matrix<S>>& spans, const std::vector<double>& weights) {
  Matrix<S> s = Matrix<S>::Zero(n, n);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Matrix<S> e = mgs(spans[i]);
    for (Index j = 0; j < e.cols(); ++j)
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) s(a, b) += weights[i] * weights[i] * e(a, j) * conj(e(b, j));
  }
  return s;
}

/// sum_k phi_k phi_k^H over the columns.
template <typename S>
Matrix<S> vector_frame_operator(const Matrix<S>& phi) {
  const Index n = phi.rows();
  Matrix<S> s = Matrix<S>::Zero(n, n);
  for (Index k = 0; k < phi.cols(); ++k)
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) s(a, b) += phi(a, k) * conj(phi(b, k));
  return s;
}

/// Frame operator of the full Gabor system {M_m T_n g} by explicit
/// exponentials: g_mn(t) = exp(2 pi i m t / L) g((t - n) mod L).
inline Matrix<cdouble> gabor_frame_operator(const Vector<cdouble>& g) {
  const Index len = g.size();
  Matrix<cdouble> s = Matrix<cdouble>::Zero(len, len);
  for (Index m = 0; m < len; ++m) {
    for (Index n = 0; n < len; ++n) {
      Vector<cdouble> v(len);
      for (Index t = 0; t < len; ++t) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(m * t) / static_cast<double>(len);
        v(t) = std::polar(1.0, phase) * g(((t - n) % len + len) % len);
      }
      for (Index a = 0; a < len; ++a)
        for (Index b = 0; b < len; ++b) s(a, b) += v(a) * std::conj(v(b));
    }
  }
  return s;
}

/// max and min of x^H Q x over random unit probes.
template <typename S, typename Rng>
std::pair<double, double> probe_extremes(const Matrix<S>& q, std::size_t probes, Rng& rng) {
  std::normal_distribution<double> nd;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t p = 0; p < probes; ++p) {
    Vector<S> x(q.rows());
    for (Index k = 0; k < x.size(); ++k) {
      if constexpr (std::is_same_v<S, cdouble>) {
        x(k) = cdouble(nd(rng), nd(rng));
      } else {
        x(k) = nd(rng);
      }
    }
    x /= x.norm();
    const double val = std::real(x.dot(q * x));
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  return {lo, hi};
}

/// Largest value of x^H Q x on the unit sphere: best of `probes` random unit
/// vectors, refined by power iteration on Q + ||Q||_F I started from it.
template <typename S, typename Rng>
double probe_max(const Matrix<S>& q, std::size_t probes, Rng& rng) {
  std::normal_distribution<double> nd;
  Vector<S> best;
  double best_val = -INFINITY;
  for (std::size_t p = 0; p < probes; ++p) {
    Vector<S> x(q.rows());
    for (Index k = 0; k < x.size(); ++k) {
      if constexpr (std::is_same_v<S, cdouble>) {
        x(k) = cdouble(nd(rng), nd(rng));
      } else {
        x(k) = nd(rng);
      }
    }
    x /= x.norm();
    const double val = std::real(x.dot(q * x));
    if (val > best_val) {
      best_val = val;
      best = x;
    }
  }
  const double shift = q.norm();
  for (int it = 0; it < 2000; ++it) {
    Vector<S> y = q * best + shift * best;
    best = y / y.norm();
  }
  return std::max(best_val, std::real(best.dot(q * best)));
}

}  // namespace oracle
