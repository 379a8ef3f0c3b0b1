#pragma once

#include <Eigen/Dense>
#include <optional>

#include "blindid/channel.hpp"
#include "blindid/subspace.hpp"

namespace blindid {

struct RecoveryResult {
  Eigen::VectorXd f_hat;   // recovered filter, length M(Lp+1)
  Eigen::VectorXd g_star;  // offset coefficients, length delta
  double objective = 0.0;  // ||.||_1 for p = 1, sum |.|^p otherwise
  std::optional<double> correlation;  // |<f_hat, h_pad>| / (||f_hat|| ||h_pad||),
                                      // present whenever the true channel is known
  int iterations = 0;
};

// Objective of the offset parameterization, ||tail_offset + offset_matrix g||.
double objective_l1(const ChannelVector& h, int Lp, const Eigen::VectorXd& g);
double objective_lp(const ChannelVector& h, int Lp, double p,
                    const Eigen::VectorXd& g);

// Global l1 channel selection: minimizes ||tail_offset + offset_matrix g||_1
// over g and reassembles the full filter. Requires 1 <= Lp-L <= L.
RecoveryResult solve_p1(const ChannelVector& h, int Lp);

// Local lp descent (0 < p < 1) by iteratively reweighted l1: each step
// solves a weighted l1 regression with weights (|residual| + 1e-8)^(p-1) and
// is accepted only if the raw lp objective drops by more than 1e-12. Returns
// a stationary point; a local minimum is not guaranteed to be global.
RecoveryResult solve_pp_local(const ChannelVector& h, int Lp, double p,
                              const Eigen::VectorXd& g0, int max_iter);

// Sparse direction selection from an arbitrary kernel basis: minimizes
// ||Kc||_1 (refined to ||.||_p^p when p < 1) under a unit coordinate
// normalization, falling back deterministically to the next coordinate
// functional when the current one vanishes on the span. f_hat is returned
// with unit 2-norm. Throws normalization_error when every coordinate
// functional vanishes. correlation is filled when truth is given.
RecoveryResult recover_from_kernel(const KernelBasis& kb, double p,
                                   const ChannelVector* truth = nullptr);

// Shift-tolerant normalized correlation: the best alignment of f_hat with
// any of the delta+1 shifted embeddings of the channel. Blind recovery is
// ambiguous up to scale, and over-modeling admits shifted copies; all score
// as exact recovery.
double recovery_success(const Eigen::VectorXd& f_hat, const ChannelVector& h,
                        int Lp);

}  // namespace blindid
