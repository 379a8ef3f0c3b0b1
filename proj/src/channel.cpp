#include "blindid/channel.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "blindid/rng.hpp"

namespace blindid {

void ChannelVector::validate() const {
  if (M < 2) throw std::invalid_argument("channel: M must be >= 2");
  if (L < 1) throw std::invalid_argument("channel: L must be >= 1");
  if (coeffs.size() != static_cast<Eigen::Index>((L + 1) * M))
    throw std::invalid_argument("channel: coefficient vector must have (L+1)*M entries");
  if (coeffs.isZero(0.0))
    throw std::invalid_argument("channel: all-zero response is not a channel");
}

ChannelVector gen_channel(int M, int L, std::uint64_t seed) {
  if (M < 2) throw std::invalid_argument("gen_channel: M must be >= 2");
  if (L < 1) throw std::invalid_argument("gen_channel: L must be >= 1");
  Rng rng(seed);
  const double sd = std::sqrt(1.0 / (L + 1));
  ChannelVector h{M, L, Eigen::VectorXd((L + 1) * M)};
  for (Eigen::Index i = 0; i < h.coeffs.size(); ++i) h.coeffs[i] = sd * rng.normal();
  return h;
}

Eigen::MatrixXd filter_matrix(const ChannelVector& h, int n) {
  h.validate();
  if (n < 0) throw std::invalid_argument("filter_matrix: n must be >= 0");
  const int M = h.M, L = h.L;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(M * (n + 1), L + n + 1);
  for (int r = 0; r <= n; ++r)
    for (int c = r; c <= r + L; ++c)
      T.block(r * M, c, M, 1) = h.tap(c - r);
  return T;
}

Eigen::MatrixXd shift_matrix(const ChannelVector& h, int Lp) {
  h.validate();
  if (Lp < h.L) throw std::invalid_argument("shift_matrix: Lp must be >= L");
  const int M = h.M, L = h.L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(M * (Lp + 1), Lp - L + 1);
  for (int j = 0; j <= Lp - L; ++j)
    H.block(j * M, j, (L + 1) * M, 1) = h.coeffs;
  return H;
}

ChannelPartition partition_ab(const ChannelVector& h, int Lp) {
  h.validate();
  const int M = h.M, L = h.L;
  const int delta = Lp - L;
  if (delta < 1 || delta > L)
    throw std::invalid_argument("partition_ab: requires 1 <= Lp-L <= L");
  ChannelPartition part;
  part.A = Eigen::MatrixXd::Zero(M * L, delta);
  part.B = Eigen::MatrixXd::Zero(M * delta, delta);
  // A block (r, c) = h_{r-c}; B block (r, c) = h_{L-(c-r)}.
  for (int r = 0; r < L; ++r)
    for (int c = 0; c <= r && c < delta; ++c)
      part.A.block(r * M, c, M, 1) = h.tap(r - c);
  for (int r = 0; r < delta; ++r)
    for (int c = r; c < delta; ++c)
      part.B.block(r * M, c, M, 1) = h.tap(L - (c - r));
  return part;
}

Eigen::MatrixXd offset_matrix(const ChannelVector& h, int Lp) {
  const ChannelPartition part = partition_ab(h, Lp);
  Eigen::MatrixXd Ht(part.A.rows() + part.B.rows(), part.A.cols());
  Ht << part.A, part.B;
  return Ht;
}

Eigen::VectorXd sign_vector(const ChannelVector& h, double p) {
  h.validate();
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("sign_vector: p must lie in (0, 1]");
  const Eigen::VectorXd t = channel_tail(h);
  Eigen::VectorXd v(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double x = t[i];
    const double s = (x > 0.0) - (x < 0.0);
    if (p == 1.0) {
      v[i] = s;
    } else {
      if (x == 0.0)
        throw std::domain_error("sign_vector: zero tail entry, |x|^(p-1) undefined for p < 1");
      v[i] = p * s * std::pow(std::abs(x), p - 1.0);
    }
  }
  return v;
}

bool check_diversity(const ChannelVector& h, double tol) {
  const Eigen::MatrixXd T = filter_matrix(h, h.L);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > tol * sv(0);
}

Eigen::VectorXd channel_tail(const ChannelVector& h) {
  return h.coeffs.segment(h.M, h.M * h.L);
}

Eigen::VectorXd pad_to_order(const ChannelVector& h, int Lp) {
  if (Lp < h.L) throw std::invalid_argument("pad_to_order: Lp must be >= L");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(h.M * (Lp + 1));
  f.head(h.coeffs.size()) = h.coeffs;
  return f;
}

Eigen::VectorXd tail_offset(const ChannelVector& h, int Lp) {
  if (Lp < h.L) throw std::invalid_argument("tail_offset: Lp must be >= L");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(h.M * Lp);
  y.head(h.M * h.L) = channel_tail(h);
  return y;
}

}  // namespace blindid
