// Test-only oracles, deliberately independent of the implementation paths
// they check: quadrature instead of erf, exhaustive grids instead of LPs,
// neighborhood sampling instead of dual certificates.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "blindid/channel.hpp"
#include "blindid/rng.hpp"
#include "blindid/sparse_select.hpp"

namespace oracles {

namespace detail {

inline double simpson(double (*f)(double), double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(double (*f)(double), double a, double b,
                               double fa, double fm, double fb, double whole,
                               double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double gauss_kernel(double u) { return 2.0 * std::exp(-u * u); }

}  // namespace detail

// gamma(1/2, x) by adaptive Simpson quadrature. The substitution t = u^2
// removes the endpoint singularity: integral of t^(-1/2) e^(-t) over [0, x]
// equals the integral of 2 e^(-u^2) over [0, sqrt(x)].
inline double incomplete_gamma_half_quadrature(double x) {
  if (x == 0.0) return 0.0;
  const double b = std::sqrt(x);
  const double fa = detail::gauss_kernel(0.0);
  const double fm = detail::gauss_kernel(0.5 * b);
  const double fb = detail::gauss_kernel(b);
  const double whole = detail::simpson(detail::gauss_kernel, 0.0, b, fa, fm, fb);
  return detail::adaptive_simpson(detail::gauss_kernel, 0.0, b, fa, fm, fb,
                                  whole, 1e-14, 40);
}

// Exhaustive grid minimum of ||y - X g||_1 over g in [-5, 5] at step 1e-3,
// one dimension.
inline double l1_grid_min_1d(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = -5000; i <= 5000; ++i) {
    const double g = i * 1e-3;
    const double obj = (y - X.col(0) * g).cwiseAbs().sum();
    if (obj < best) best = obj;
  }
  return best;
}

// Same over [-5, 5]^2; the inner evaluation is kept flat so the two nested
// 10001-point loops stay cheap.
inline double l1_grid_min_2d(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const int m = static_cast<int>(X.rows());
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
  for (int i = -5000; i <= 5000; ++i) {
    const double g1 = i * 1e-3;
    Eigen::VectorXd r = y - X.col(0) * g1;
    for (int j = -5000; j <= 5000; ++j) {
      const double g2 = j * 1e-3;
      double obj = 0.0;
      for (int k = 0; k < m; ++k) obj += std::abs(r[k] - X(k, 1) * g2);
      if (obj < best) best = obj;
    }
  }
  return best;
}

// Sampled-neighborhood local-minimum certificate at g = 0: checks
// f_p(g) >= f_p(0) on num_samples points of norm <= r, halving r from 1e-2
// until the property holds or r drops below 1e-10.
inline bool local_min_certificate(const blindid::ChannelVector& h, int Lp,
                                  double p, int num_samples, std::uint64_t seed) {
  const int delta = Lp - h.L;
  const Eigen::MatrixXd Ht = blindid::offset_matrix(h, Lp);
  const Eigen::VectorXd y = blindid::tail_offset(h, Lp);
  const auto fp = [&](const Eigen::VectorXd& g) {
    return (y + Ht * g).array().abs().pow(p).sum();
  };
  const double f0 = fp(Eigen::VectorXd::Zero(delta));
  for (double r = 1e-2; r >= 1e-10; r *= 0.5) {
    bool ok = true;
    blindid::Rng rng(seed);
    for (int s = 0; s < num_samples && ok; ++s) {
      Eigen::VectorXd g(delta);
      for (int j = 0; j < delta; ++j) g[j] = rng.normal();
      g *= r * std::pow(rng.uniform(), 1.0 / delta) / g.norm();  // uniform in the ball
      if (fp(g) < f0) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace oracles
