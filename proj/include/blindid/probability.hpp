#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace blindid {

enum class Exec { serial, parallel };

// One grid point of the bound-versus-experiment study. Optional fields stay
// empty when the producing operation does not compute them (the closed-form
// bound carries no Monte Carlo data and vice versa; delta > 1 estimates are
// not bound-comparable and leave the bound empty).
struct BoundPoint {
  int M = 0;
  int L = 0;
  double p = 1.0;
  int delta = 1;
  std::optional<double> bound;
  std::optional<double> eps_star;
  std::optional<double> mc_estimate;
  std::optional<double> mc_halfwidth;  // 95% Wilson half-width
  std::optional<long long> trials;
  std::optional<std::uint64_t> seed;
};

// Lower incomplete gamma at a = 1/2: gamma(1/2, x) = sqrt(pi) * erf(sqrt(x)).
// Throws std::domain_error for x < 0.
double lower_incomplete_gamma_half(double x);

// Closed-form lower bound on the probability that a Gaussian channel of
// order L with M antennas satisfies the l1 identifiability condition at
// delta = 1:
//   max over eps in [0,1] of
//     (1 - exp(-M eps^2 / pi)) * gamma(1/2, M (1-eps)^2 / (pi L)) / sqrt(pi)
// maximized by a 1000-point grid scan refined with golden section.
BoundPoint bound_l1_delta1(int M, int L);

// 95% Wilson score half-width for successes out of n trials.
double wilson_halfwidth(long long successes, long long n);

// Fraction of seeded Gaussian channels whose identifiability verdict is
// identifiable, with Wilson half-width. Trials are seeded by a counter
// derived from the master seed, so the parallel kernel returns exactly the
// serial reference's estimate. delta = 1 (the default) uses the closed-form
// margin; larger delta (up to L) goes through the dual program and is not
// comparable against the closed-form bound.
BoundPoint monte_carlo_probability(int M, int L, double p, long long trials,
                                   std::uint64_t seed, int delta = 1,
                                   Exec exec = Exec::parallel);

// Cartesian (M, L) study: bound and Monte Carlo estimate per grid point,
// rows in ascending (M, L) lexicographic order with per-point derived seeds.
std::vector<BoundPoint> sweep(std::vector<int> M_list, std::vector<int> L_list,
                              double p, long long trials, std::uint64_t seed,
                              Exec exec = Exec::parallel);

// CSV schema: M,L,p,delta,bound,eps_star,mc_estimate,mc_halfwidth,trials,seed
// with empty fields for absent values, LF line endings.
void write_bound_csv(std::ostream& os, const std::vector<BoundPoint>& rows);

}  // namespace blindid
