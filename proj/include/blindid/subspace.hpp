#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "blindid/channel.hpp"

namespace blindid {

// Second-order statistics of the stacked received vector.
struct Covariance {
  Eigen::MatrixXd R;  // symmetric M(n+1) x M(n+1)
  int n = 0;          // stacking depth
  double sigma2 = 0.0;
  bool exact = true;           // true: closed form; false: sample average
  long long num_samples = 0;   // only meaningful when !exact
};

// R = T T' + sigma2 I with T the order-n convolution matrix. Requires n >= L.
Covariance exact_covariance(const ChannelVector& h, int n, double sigma2);

// Empirical average of y y' over num_samples independent stacked windows;
// symbols are i.i.d. uniform +-1 (zero mean, unit variance), noise is white
// Gaussian with variance sigma2. Deterministic given seed.
Covariance sample_covariance(const ChannelVector& h, int n, double sigma2,
                             long long num_samples, std::uint64_t seed);

struct NoiseProjector {
  Eigen::MatrixXd Pi;  // orthogonal projector onto the noise eigenspace
  int signal_dim = 0;
};

// Projector onto the span of the dim - signal_dim smallest eigenvectors of R.
// For exact covariances a collapsed signal/noise eigenvalue gap raises
// degenerate_split_error.
NoiseProjector noise_projector(const Covariance& cov, int signal_dim);

// Symmetric PSD matrix Q of size M(Lp+1) realizing
//   f' Q f = || Pi * T_n(f) ||_F^2
// for every order-Lp filter f, built by accumulating the lifted Pi blocks
// over all column placements. Requires the projector's stacking depth
// n >= Lp.
Eigen::MatrixXd quadratic_form(const NoiseProjector& proj, int Lp, int M);

struct KernelBasis {
  Eigen::MatrixXd K;       // orthonormal columns spanning the numeric kernel
  int k = 0;               // kernel dimension
  double gap_ratio = 0.0;  // first kept-out eigenvalue over last kept one;
                           // large means a cleanly separated kernel
};

// Eigenvectors of the expected_dim smallest eigenvalues of Q. Raises
// kernel_extraction_error when the spectrum contradicts expected_dim: the
// next eigenvalue is still at kernel level (kernel larger than expected) or
// there is no separating gap at the split (no usable kernel).
KernelBasis kernel_basis(const Eigen::MatrixXd& Q, int expected_dim);

// Largest principal angle (radians) between span(K) and the column span of
// H. Uses the sine-based route for small angles so that numerically equal
// spans report ~0 rather than sqrt(eps).
double subspace_distance(const KernelBasis& kb, const Eigen::MatrixXd& H);

}  // namespace blindid
