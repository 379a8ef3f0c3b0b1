#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "blindid/channel.hpp"

namespace blindid {

enum class Verdict { identifiable, boundary, not_identifiable };
enum class Method { lp_dual, closed_form, sampling };

// Margins within kVerdictTol of 1 are reported as boundary instead of being
// forced to either side.
inline constexpr double kVerdictTol = 1e-7;

Verdict classify_margin(double margin);

struct IdentifiabilityReport {
  double margin = 0.0;  // dual-norm value of the condition ratio supremum
  Verdict verdict = Verdict::identifiable;
  Eigen::VectorXd dual_certificate;  // d with B'd = A'v, ||d||_inf = margin
  double p = 1.0;
  int delta = 0;
  Method method = Method::lp_dual;
};

// Decides the sparsity-based identifiability condition for the channel at
// over-modeled order Lp with exponent p in (0, 1]: the channel is
// identifiable iff sup_g |v'Ag| / ||Bg||_1 stays below 1, evaluated exactly
// through the dual Chebyshev program. Requires 1 <= Lp-L <= L; throws
// rank_error when B is rank deficient and std::domain_error when p < 1 and
// the channel tail has zero entries.
IdentifiabilityReport check_condition(const ChannelVector& h, int Lp, double p);

// The delta = 1 margin in closed form, |v'A| / ||h_L||_1. Throws
// std::domain_error when h_L is the zero tap.
double closed_form_delta1(const ChannelVector& h, double p);

// Monte Carlo lower bound on the condition supremum: the best ratio over
// num_dirs random unit directions. Never exceeds the dual value.
double sup_ratio_sampling(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::VectorXd& v, int num_dirs,
                          std::uint64_t seed);

// Largest exponent on the grid {1, 0.95, ..., 0.05} for which the condition
// verdict is identifiable, refined by bisection to 1e-3. Throws
// feasible_p_not_found when even p = 0.05 fails.
double find_feasible_p(const ChannelVector& h, int Lp);

}  // namespace blindid
