#include "blindid/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "blindid/errors.hpp"
#include "blindid/rng.hpp"

namespace blindid {

Covariance exact_covariance(const ChannelVector& h, int n, double sigma2) {
  if (n < h.L) throw std::invalid_argument("exact_covariance: n must be >= L");
  if (sigma2 < 0.0) throw std::invalid_argument("exact_covariance: sigma2 must be >= 0");
  const Eigen::MatrixXd T = filter_matrix(h, n);
  Eigen::MatrixXd R = T * T.transpose();
  R.diagonal().array() += sigma2;
  R = 0.5 * (R + R.transpose()).eval();
  return Covariance{std::move(R), n, sigma2, true, 0};
}

Covariance sample_covariance(const ChannelVector& h, int n, double sigma2,
                             long long num_samples, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample_covariance: n must be >= 0");
  if (sigma2 < 0.0) throw std::invalid_argument("sample_covariance: sigma2 must be >= 0");
  if (num_samples < 1)
    throw std::invalid_argument("sample_covariance: num_samples must be >= 1");
  const Eigen::MatrixXd T = filter_matrix(h, n);
  const int dim = static_cast<int>(T.rows());
  const int nsym = static_cast<int>(T.cols());
  const double noise_sd = std::sqrt(sigma2);

  Rng rng(seed);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd s(nsym), y(dim);
  for (long long t = 0; t < num_samples; ++t) {
    for (int i = 0; i < nsym; ++i) s[i] = (rng.next_u64() & 1u) ? 1.0 : -1.0;
    y = T * s;
    if (noise_sd > 0.0)
      for (int i = 0; i < dim; ++i) y[i] += noise_sd * rng.normal();
    R.selfadjointView<Eigen::Lower>().rankUpdate(y);
  }
  R /= static_cast<double>(num_samples);
  R.triangularView<Eigen::StrictlyUpper>() =
      R.triangularView<Eigen::StrictlyLower>().transpose();
  return Covariance{std::move(R), n, sigma2, false, num_samples};
}

NoiseProjector noise_projector(const Covariance& cov, int signal_dim) {
  const int dim = static_cast<int>(cov.R.rows());
  if (cov.R.cols() != dim)
    throw std::invalid_argument("noise_projector: covariance must be square");
  if (signal_dim < 0 || signal_dim >= dim)
    throw std::invalid_argument("noise_projector: need 0 <= signal_dim < dim");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.R);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("noise_projector: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const int noise_dim = dim - signal_dim;

  if (signal_dim > 0 && cov.exact) {
    const double gap = ev[noise_dim] - ev[noise_dim - 1];
    if (gap < 1e-12 * std::max(1.0, ev[dim - 1]))
      throw degenerate_split_error(
          "noise_projector: signal/noise eigenvalue split is degenerate");
  }

  const Eigen::MatrixXd N = es.eigenvectors().leftCols(noise_dim);
  Eigen::MatrixXd Pi = N * N.transpose();
  Pi = 0.5 * (Pi + Pi.transpose()).eval();
  return NoiseProjector{std::move(Pi), signal_dim};
}

Eigen::MatrixXd quadratic_form(const NoiseProjector& proj, int Lp, int M) {
  const int dim = static_cast<int>(proj.Pi.rows());
  if (M < 1 || dim % M != 0)
    throw std::invalid_argument("quadratic_form: projector dimension must be a multiple of M");
  const int n = dim / M - 1;
  if (Lp < 0 || n < Lp)
    throw std::invalid_argument("quadratic_form: projector stacking depth must satisfy n >= Lp");

  // Column c of T_n(f) places filter block b at block row c-b; lifting the
  // Gram matrix of the projected columns accumulates Pi'Pi sub-blocks.
  const Eigen::MatrixXd G = proj.Pi.transpose() * proj.Pi;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(M * (Lp + 1), M * (Lp + 1));
  for (int c = 0; c <= Lp + n; ++c) {
    const int bmin = std::max(0, c - n);
    const int bmax = std::min(Lp, c);
    for (int b = bmin; b <= bmax; ++b)
      for (int b2 = bmin; b2 <= bmax; ++b2)
        Q.block(b * M, b2 * M, M, M) += G.block((c - b) * M, (c - b2) * M, M, M);
  }
  Q = 0.5 * (Q + Q.transpose()).eval();
  return Q;
}

KernelBasis kernel_basis(const Eigen::MatrixXd& Q, int expected_dim) {
  const int dim = static_cast<int>(Q.rows());
  if (Q.cols() != dim)
    throw std::invalid_argument("kernel_basis: Q must be square");
  if (expected_dim < 1 || expected_dim > dim)
    throw std::invalid_argument("kernel_basis: need 1 <= expected_dim <= dim");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Q + Q.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("kernel_basis: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double norm = std::max({std::abs(ev[0]), std::abs(ev[dim - 1]), 1e-300});

  KernelBasis kb;
  kb.k = expected_dim;
  if (expected_dim < dim) {
    const double kept = ev[expected_dim - 1];
    const double next = ev[expected_dim];
    if (next < 1e-8 * norm)
      throw kernel_extraction_error(
          "kernel_basis: kernel larger than expected (over-model ambiguity)");
    if (kept > (1.0 - 1e-6) * next)
      throw kernel_extraction_error(
          "kernel_basis: no separating eigen-gap at the requested dimension");
    kb.gap_ratio = next / std::max(std::abs(kept), 1e-16 * norm);
  } else {
    kb.gap_ratio = 1.0;
  }
  kb.K = es.eigenvectors().leftCols(expected_dim);
  return kb;
}

double subspace_distance(const KernelBasis& kb, const Eigen::MatrixXd& H) {
  if (kb.K.rows() != H.rows())
    throw std::invalid_argument("subspace_distance: row dimensions must match");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(H);
  const int r = static_cast<int>(qr.rank());
  if (r == 0 || kb.k == 0) return 0.5 * 3.14159265358979323846;
  Eigen::MatrixXd U = Eigen::MatrixXd(qr.householderQ()).leftCols(r);

  const int q = std::min(kb.k, r);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kb.K.transpose() * U);
  const double cos_max_angle = std::min(1.0, std::max(0.0, svd.singularValues()(q - 1)));
  if (cos_max_angle * cos_max_angle < 0.5) return std::acos(cos_max_angle);

  // Small angle: cos loses half the digits, sin does not.
  Eigen::MatrixXd resid;
  if (r <= kb.k)
    resid = U - kb.K * (kb.K.transpose() * U);
  else
    resid = kb.K - U * (U.transpose() * kb.K);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_s(resid);
  const double sin_max_angle = std::min(1.0, svd_s.singularValues()(0));
  return std::asin(sin_max_angle);
}

}  // namespace blindid
