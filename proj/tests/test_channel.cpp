#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "blindid/channel.hpp"
#include "blindid/rng.hpp"

using namespace blindid;

namespace {

ChannelVector make_channel(int M, int L, std::initializer_list<double> coeffs) {
  ChannelVector h{M, L, Eigen::VectorXd(static_cast<Eigen::Index>(coeffs.size()))};
  Eigen::Index i = 0;
  for (double c : coeffs) h.coeffs[i++] = c;
  return h;
}

int numeric_rank(const Eigen::MatrixXd& A, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("generator is deterministic and rejects bad dimensions") {
  const ChannelVector a = gen_channel(2, 1, 77);
  const ChannelVector b = gen_channel(2, 1, 77);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.coeffs.size() == 4);
  CHECK(gen_channel(2, 1, 78).coeffs != a.coeffs);
  CHECK_THROWS_AS(gen_channel(1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_channel(2, 0, 0), std::invalid_argument);
}

TEST_CASE("generator entries have variance 1/(L+1)") {
  double sum = 0.0, sum2 = 0.0;
  const long long draws = 1000000;
  for (long long i = 0; i < draws; ++i) {
    const ChannelVector h = gen_channel(2, 1, Rng::derive(2024, i));
    sum += h.coeffs.sum();
    sum2 += h.coeffs.squaredNorm();
  }
  const double n = 4.0 * draws;
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(var - 0.5) < 0.005);
  CHECK(std::abs(mean) < 0.005);
}

TEST_CASE("filter matrix lays out the banded blocks") {
  const ChannelVector h = make_channel(2, 1, {1, 0, 0, 1});
  const Eigen::MatrixXd T = filter_matrix(h, 1);
  Eigen::MatrixXd want(4, 3);
  want << 1, 0, 0,
          0, 1, 0,
          0, 1, 0,
          0, 0, 1;
  CHECK(T == want);

  SUBCASE("n = 0 is the single block row [h_0 ... h_L]") {
    const Eigen::MatrixXd T0 = filter_matrix(h, 0);
    REQUIRE(T0.rows() == 2);
    REQUIRE(T0.cols() == 2);
    CHECK(T0.col(0) == h.tap(0));
    CHECK(T0.col(1) == h.tap(1));
  }
  SUBCASE("negative depth is rejected") {
    CHECK_THROWS_AS(filter_matrix(h, -1), std::invalid_argument);
  }
}

TEST_CASE("filter matrix has full column rank for diverse channels") {
  int tested = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const ChannelVector h = gen_channel(3, 2, Rng::derive(5150, trial));
    if (!check_diversity(h, 1e-10)) continue;
    ++tested;
    for (int n : {2, 3, 5})
      CHECK(numeric_rank(filter_matrix(h, n), 1e-10) == h.L + n + 1);
  }
  CHECK(tested >= 20);
}

TEST_CASE("shift matrix stacks shifted zero-paddings") {
  const ChannelVector h = make_channel(2, 1, {1, 2, 3, 4});

  SUBCASE("Lp = L collapses to a single column equal to h") {
    const Eigen::MatrixXd H = shift_matrix(h, 1);
    REQUIRE(H.cols() == 1);
    CHECK(H.col(0) == h.coeffs);
  }
  SUBCASE("hand-expanded Lp = 2 case") {
    const Eigen::MatrixXd H = shift_matrix(h, 2);
    REQUIRE(H.rows() == 6);
    REQUIRE(H.cols() == 2);
    Eigen::VectorXd c0(6), c1(6);
    c0 << 1, 2, 3, 4, 0, 0;
    c1 << 0, 0, 1, 2, 3, 4;
    CHECK(H.col(0) == c0);
    CHECK(H.col(1) == c1);
  }
  SUBCASE("Lp < L is rejected") {
    CHECK_THROWS_AS(shift_matrix(h, 0), std::invalid_argument);
  }
}

TEST_CASE("shift matrix columns are block shifts of each other") {
  const ChannelVector h = gen_channel(3, 2, 99);
  const int Lp = 5;
  const Eigen::MatrixXd H = shift_matrix(h, Lp);
  for (int j = 1; j < H.cols(); ++j) {
    CHECK(H.col(j).head(h.M).isZero(0.0));
    CHECK(H.col(j).tail(H.rows() - h.M) == H.col(j - 1).head(H.rows() - h.M));
  }
  CHECK(numeric_rank(H, 1e-10) == Lp - h.L + 1);
}

TEST_CASE("partition reproduces the sliced shift matrix") {
  SUBCASE("delta = 1 fixture: A = h_0, B = h_1") {
    const ChannelVector h = make_channel(2, 1, {1, 2, 3, 4});
    const ChannelPartition part = partition_ab(h, 2);
    CHECK(part.A == h.tap(0));
    CHECK(part.B == h.tap(1));
  }
  SUBCASE("delta = 2 fixture: B = [[h2, h1], [0, h2]]") {
    const ChannelVector h = gen_channel(2, 2, 4);
    const ChannelPartition part = partition_ab(h, 4);
    REQUIRE(part.B.rows() == 4);
    REQUIRE(part.B.cols() == 2);
    CHECK(part.B.block(0, 0, 2, 1) == h.tap(2));
    CHECK(part.B.block(0, 1, 2, 1) == h.tap(1));
    CHECK(part.B.block(2, 0, 2, 1).isZero(0.0));
    CHECK(part.B.block(2, 1, 2, 1) == h.tap(2));
  }
  SUBCASE("entry-for-entry agreement with the shift matrix slices") {
    for (int trial = 0; trial < 10; ++trial) {
      const ChannelVector h = gen_channel(3, 3, Rng::derive(611, trial));
      for (int delta = 1; delta <= 3; ++delta) {
        const int Lp = h.L + delta;
        const Eigen::MatrixXd H = shift_matrix(h, Lp);
        const Eigen::MatrixXd sliced =
            H.block(h.M, 1, H.rows() - h.M, H.cols() - 1);
        const ChannelPartition part = partition_ab(h, Lp);
        CHECK(part.A == sliced.topRows(h.M * h.L));
        CHECK(part.B == sliced.bottomRows(h.M * delta));
        CHECK(part.A.rows() + part.B.rows() == H.rows() - h.M);
        CHECK(offset_matrix(h, Lp) == sliced);
      }
    }
  }
  SUBCASE("delta outside [1, L] is rejected") {
    const ChannelVector h = gen_channel(2, 2, 4);
    CHECK_THROWS_AS(partition_ab(h, 2), std::invalid_argument);
    CHECK_THROWS_AS(partition_ab(h, 5), std::invalid_argument);
  }
}

TEST_CASE("sign vector") {
  const ChannelVector h = make_channel(2, 1, {9, 9, 2, -3});

  SUBCASE("p = 1 takes plain signs, sign(0) = 0") {
    Eigen::VectorXd want(2);
    want << 1, -1;
    CHECK(sign_vector(h, 1.0) == want);
    const ChannelVector hz = make_channel(2, 1, {9, 9, 0, -3});
    CHECK(sign_vector(hz, 1.0)[0] == 0.0);
  }
  SUBCASE("p < 1 weights by p |x|^(p-1)") {
    const ChannelVector ones = make_channel(2, 1, {9, 9, 1, 1});
    CHECK(sign_vector(ones, 0.5).isApproxToConstant(0.5));
    const ChannelVector four = make_channel(2, 1, {9, 9, 4, 1});
    CHECK(sign_vector(four, 0.5)[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("p < 1 with a zero tail entry is a domain error") {
    const ChannelVector hz = make_channel(2, 1, {9, 9, 0, -3});
    CHECK_THROWS_AS(sign_vector(hz, 0.5), std::domain_error);
  }
  SUBCASE("positive scaling leaves the p = 1 sign vector unchanged") {
    for (int trial = 0; trial < 10; ++trial) {
      ChannelVector g = gen_channel(2, 2, Rng::derive(31, trial));
      const Eigen::VectorXd v = sign_vector(g, 1.0);
      g.coeffs *= 7.25;
      CHECK(sign_vector(g, 1.0) == v);
    }
  }
  SUBCASE("p outside (0, 1] is rejected") {
    CHECK_THROWS_AS(sign_vector(h, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sign_vector(h, 1.5), std::invalid_argument);
  }
}

TEST_CASE("diversity check") {
  CHECK(check_diversity(make_channel(2, 1, {1, 0, 0, 1}), 1e-10));
  CHECK_FALSE(check_diversity(make_channel(2, 1, {1, 1, 1, 1}), 1e-10));

  // Gaussian channels are diverse except on a measure-zero set.
  int diverse = 0;
  for (int trial = 0; trial < 10000; ++trial)
    if (check_diversity(gen_channel(2, 2, Rng::derive(808, trial)), 1e-10)) ++diverse;
  CHECK(diverse == 10000);
}

TEST_CASE("padding helpers") {
  const ChannelVector h = make_channel(2, 1, {1, 2, 3, 4});
  const Eigen::VectorXd pad = pad_to_order(h, 3);
  REQUIRE(pad.size() == 8);
  CHECK(pad.head(4) == h.coeffs);
  CHECK(pad.tail(4).isZero(0.0));
  const Eigen::VectorXd off = tail_offset(h, 3);
  REQUIRE(off.size() == 6);
  CHECK(off.head(2) == h.tap(1));
  CHECK(off.tail(4).isZero(0.0));
  CHECK(channel_tail(h) == h.tap(1));
}

}  // TEST_SUITE
