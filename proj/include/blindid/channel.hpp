#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace blindid {

// SIMO impulse response: M antennas, L+1 vector taps h_0..h_L stored
// tap-major, so coeffs.segment(l*M, M) is tap l.
struct ChannelVector {
  int M = 0;
  int L = 0;
  Eigen::VectorXd coeffs;

  Eigen::VectorXd tap(int l) const { return coeffs.segment(l * M, M); }

  // Throws std::invalid_argument on M < 2, L < 1, size mismatch or an
  // all-zero response.
  void validate() const;
};

// i.i.d. Gaussian channel, zero mean, variance 1/(L+1) per entry. The
// variance is fixed by the channel normalization and deliberately not a
// parameter. Deterministic given seed.
ChannelVector gen_channel(int M, int L, std::uint64_t seed);

// Banded block-Toeplitz convolution operator of size M(n+1) x (L+n+1):
// block row r, block column c holds h_{c-r} for 0 <= c-r <= L. Maps a
// symbol window onto n+1 stacked received vectors.
Eigen::MatrixXd filter_matrix(const ChannelVector& h, int n);

// Shift matrix of size M(Lp+1) x (Lp-L+1); column j is the channel
// zero-padded to order Lp and shifted down by j blocks. Its range is the
// solution space of the over-modeled subspace equation.
Eigen::MatrixXd shift_matrix(const ChannelVector& h, int Lp);

struct ChannelPartition {
  Eigen::MatrixXd A;  // first M*L rows of the offset matrix, size ML x delta
  Eigen::MatrixXd B;  // last M*delta rows, block upper-triangular with h_L
                      // on the diagonal, size M*delta x delta
};

// Splits the offset matrix (shift matrix minus first column and first block
// row) at row M*L. Requires 1 <= delta = Lp-L <= L.
ChannelPartition partition_ab(const ChannelVector& h, int Lp);

// Offset matrix [A; B], size M*Lp x delta.
Eigen::MatrixXd offset_matrix(const ChannelVector& h, int Lp);

// Weighted sign vector of the channel tail [h_1; ...; h_L] (length ML).
// p = 1 gives plain entrywise signs with sign(0) = 0; p < 1 gives
// p*sign(x)*|x|^(p-1) and throws std::domain_error on any zero entry.
Eigen::VectorXd sign_vector(const ChannelVector& h, double p);

// True iff the smallest singular value of the order-L convolution matrix
// exceeds tol times the largest, i.e. the subchannels share no zeros.
bool check_diversity(const ChannelVector& h, double tol);

// Channel tail [h_1; ...; h_L], length M*L.
Eigen::VectorXd channel_tail(const ChannelVector& h);

// Channel zero-padded to order Lp, length M(Lp+1).
Eigen::VectorXd pad_to_order(const ChannelVector& h, int Lp);

// Fixed offset [h_1; ...; h_L; 0; ...; 0] of length M*Lp; the selection
// objective is ||tail_offset + offset_matrix * g||.
Eigen::VectorXd tail_offset(const ChannelVector& h, int Lp);

}  // namespace blindid
