#include "blindid/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blindid/errors.hpp"
#include "blindid/lp.hpp"
#include "blindid/rng.hpp"

namespace blindid {

Verdict classify_margin(double margin) {
  if (margin < 1.0 - kVerdictTol) return Verdict::identifiable;
  if (margin > 1.0 + kVerdictTol) return Verdict::not_identifiable;
  return Verdict::boundary;
}

IdentifiabilityReport check_condition(const ChannelVector& h, int Lp, double p) {
  const ChannelPartition part = partition_ab(h, Lp);  // validates 1 <= delta <= L
  const Eigen::VectorXd v = sign_vector(h, p);
  const int delta = static_cast<int>(part.B.cols());

  const ChebyshevSolution dual =
      solve_chebyshev(part.B.transpose(), part.A.transpose() * v);
  if (dual.status != LpStatus::optimal)
    throw std::runtime_error("check_condition: dual program did not reach optimality");

  IdentifiabilityReport report;
  report.margin = dual.value;
  report.verdict = classify_margin(dual.value);
  report.dual_certificate = dual.d;
  report.p = p;
  report.delta = delta;
  report.method = Method::lp_dual;
  return report;
}

double closed_form_delta1(const ChannelVector& h, double p) {
  const ChannelPartition part = partition_ab(h, h.L + 1);
  const Eigen::VectorXd v = sign_vector(h, p);
  const double denom = part.B.col(0).cwiseAbs().sum();
  if (denom == 0.0)
    throw std::domain_error("closed_form_delta1: last tap is zero, ratio degenerate");
  return std::abs(v.dot(part.A.col(0))) / denom;
}

double sup_ratio_sampling(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::VectorXd& v, int num_dirs,
                          std::uint64_t seed) {
  if (num_dirs < 1)
    throw std::invalid_argument("sup_ratio_sampling: num_dirs must be >= 1");
  if (A.cols() != B.cols() || v.size() != A.rows())
    throw std::invalid_argument("sup_ratio_sampling: dimension mismatch");
  const int delta = static_cast<int>(A.cols());

  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (int i = 0; i < num_dirs; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd g(delta);
    for (int j = 0; j < delta; ++j) g[j] = rng.normal();
    const double den = (B * g).cwiseAbs().sum();
    if (den <= 1e-300) continue;
    const double ratio = std::abs(v.dot(A * g)) / den;
    if (ratio > best) best = ratio;
  }
  return best;
}

double find_feasible_p(const ChannelVector& h, int Lp) {
  const int delta = Lp - h.L;
  if (delta < 1 || delta > h.L)
    throw std::invalid_argument("find_feasible_p: requires 1 <= Lp-L <= L");
  if ((channel_tail(h).array() == 0.0).any())
    throw std::domain_error("find_feasible_p: channel tail has zero entries");

  const auto identifiable_at = [&](double p) {
    return classify_margin(check_condition(h, Lp, p).margin) == Verdict::identifiable;
  };

  double last_margin = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double p = 1.0 - 0.05 * k;
    const IdentifiabilityReport rep = check_condition(h, Lp, p);
    last_margin = rep.margin;
    if (rep.verdict != Verdict::identifiable) continue;
    if (k == 0) return 1.0;
    // Bracket [p, p + 0.05] and bisect toward the largest feasible value.
    double lo = p, hi = p + 0.05;
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      if (identifiable_at(mid))
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
  throw feasible_p_not_found(
      "find_feasible_p: no feasible exponent on the grid down to 0.05 "
      "(margin at 0.05 stored on the exception)",
      last_margin);
}

}  // namespace blindid
