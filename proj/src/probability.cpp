#include "blindid/probability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "blindid/channel.hpp"
#include "blindid/identifiability.hpp"
#include "blindid/rng.hpp"

namespace blindid {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

double bound_integrand(int M, int L, double eps) {
  const double tail = 1.0 - std::exp(-M * eps * eps / kPi);
  const double x = M * (1.0 - eps) * (1.0 - eps) / (kPi * L);
  return tail * lower_incomplete_gamma_half(x) / kSqrtPi;
}

// One seeded trial: draw a Gaussian channel and evaluate the condition
// margin. Measure-zero degenerate draws (zero last tap, rank-deficient B)
// count as unidentifiable so that the kernels never throw mid-loop.
bool trial_identifiable(int M, int L, double p, int delta, std::uint64_t trial_seed) {
  try {
    const ChannelVector h = gen_channel(M, L, trial_seed);
    const double margin = (delta == 1)
                              ? closed_form_delta1(h, p)
                              : check_condition(h, L + delta, p).margin;
    return classify_margin(margin) == Verdict::identifiable;
  } catch (const std::exception&) {
    return false;
  }
}

long long count_identifiable_serial(int M, int L, double p, int delta,
                                    long long trials, std::uint64_t seed) {
  long long count = 0;
  for (long long t = 0; t < trials; ++t)
    if (trial_identifiable(M, L, p, delta, Rng::derive(seed, static_cast<std::uint64_t>(t))))
      ++count;
  return count;
}

long long count_identifiable_parallel(int M, int L, double p, int delta,
                                      long long trials, std::uint64_t seed) {
  long long count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (long long t = 0; t < trials; ++t)
    if (trial_identifiable(M, L, p, delta, Rng::derive(seed, static_cast<std::uint64_t>(t))))
      ++count;
  return count;
}

void append_double(std::string& line, const std::optional<double>& v) {
  line.push_back(',');
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  line += buf;
}

}  // namespace

double lower_incomplete_gamma_half(double x) {
  if (x < 0.0)
    throw std::domain_error("lower_incomplete_gamma_half: x must be >= 0");
  return kSqrtPi * std::erf(std::sqrt(x));
}

double wilson_halfwidth(long long successes, long long n) {
  if (n < 1 || successes < 0 || successes > n)
    throw std::invalid_argument("wilson_halfwidth: need 0 <= successes <= n, n >= 1");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  return (z / (1.0 + z2 / nn)) *
         std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn));
}

BoundPoint bound_l1_delta1(int M, int L) {
  if (M < 2) throw std::invalid_argument("bound_l1_delta1: M must be >= 2");
  if (L < 1) throw std::invalid_argument("bound_l1_delta1: L must be >= 1");

  // Grid scan guards against a non-unimodal objective; golden section then
  // polishes the bracket around the best grid point.
  const int grid = 1000;
  double best_eps = 0.0, best_val = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double eps = static_cast<double>(i) / grid;
    const double val = bound_integrand(M, L, eps);
    if (val > best_val) {
      best_val = val;
      best_eps = eps;
    }
  }
  double lo = std::max(0.0, best_eps - 1.0 / grid);
  double hi = std::min(1.0, best_eps + 1.0 / grid);
  const double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = bound_integrand(M, L, x1);
  double f2 = bound_integrand(M, L, x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = bound_integrand(M, L, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = bound_integrand(M, L, x1);
    }
  }
  const double eps_star = 0.5 * (lo + hi);
  const double val_star = bound_integrand(M, L, eps_star);

  BoundPoint bp;
  bp.M = M;
  bp.L = L;
  bp.p = 1.0;
  bp.delta = 1;
  if (val_star >= best_val) {
    bp.bound = val_star;
    bp.eps_star = eps_star;
  } else {
    bp.bound = best_val;
    bp.eps_star = best_eps;
  }
  return bp;
}

BoundPoint monte_carlo_probability(int M, int L, double p, long long trials,
                                   std::uint64_t seed, int delta, Exec exec) {
  if (M < 2) throw std::invalid_argument("monte_carlo_probability: M must be >= 2");
  if (L < 1) throw std::invalid_argument("monte_carlo_probability: L must be >= 1");
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("monte_carlo_probability: p must lie in (0, 1]");
  if (trials < 100)
    throw std::invalid_argument("monte_carlo_probability: trials must be >= 100");
  if (delta < 1 || delta > L)
    throw std::invalid_argument("monte_carlo_probability: requires 1 <= delta <= L");

  const long long count = (exec == Exec::serial)
                              ? count_identifiable_serial(M, L, p, delta, trials, seed)
                              : count_identifiable_parallel(M, L, p, delta, trials, seed);
  BoundPoint bp;
  bp.M = M;
  bp.L = L;
  bp.p = p;
  bp.delta = delta;
  bp.mc_estimate = static_cast<double>(count) / static_cast<double>(trials);
  bp.mc_halfwidth = wilson_halfwidth(count, trials);
  bp.trials = trials;
  bp.seed = seed;
  return bp;
}

std::vector<BoundPoint> sweep(std::vector<int> M_list, std::vector<int> L_list,
                              double p, long long trials, std::uint64_t seed,
                              Exec exec) {
  if (M_list.empty() || L_list.empty())
    throw std::invalid_argument("sweep: grids must be nonempty");
  std::sort(M_list.begin(), M_list.end());
  M_list.erase(std::unique(M_list.begin(), M_list.end()), M_list.end());
  std::sort(L_list.begin(), L_list.end());
  L_list.erase(std::unique(L_list.begin(), L_list.end()), L_list.end());

  std::vector<BoundPoint> rows;
  rows.reserve(M_list.size() * L_list.size());
  for (int M : M_list) {
    for (int L : L_list) {
      // Per-point seed derived from the values, not the grid position, so a
      // row is reproducible regardless of which grid it appears in.
      const std::uint64_t point_seed =
          Rng::derive(Rng::derive(seed, static_cast<std::uint64_t>(M)),
                      static_cast<std::uint64_t>(L));
      BoundPoint bp = bound_l1_delta1(M, L);
      const BoundPoint mc = monte_carlo_probability(M, L, p, trials, point_seed, 1, exec);
      bp.p = p;
      bp.mc_estimate = mc.mc_estimate;
      bp.mc_halfwidth = mc.mc_halfwidth;
      bp.trials = mc.trials;
      bp.seed = point_seed;
      rows.push_back(std::move(bp));
    }
  }
  return rows;
}

void write_bound_csv(std::ostream& os, const std::vector<BoundPoint>& rows) {
  os << "M,L,p,delta,bound,eps_star,mc_estimate,mc_halfwidth,trials,seed\n";
  for (const BoundPoint& r : rows) {
    std::string line = std::to_string(r.M) + "," + std::to_string(r.L);
    append_double(line, r.p);
    line += "," + std::to_string(r.delta);
    append_double(line, r.bound);
    append_double(line, r.eps_star);
    append_double(line, r.mc_estimate);
    append_double(line, r.mc_halfwidth);
    line.push_back(',');
    if (r.trials) line += std::to_string(*r.trials);
    line.push_back(',');
    if (r.seed) line += std::to_string(*r.seed);
    os << line << "\n";
  }
}

}  // namespace blindid
