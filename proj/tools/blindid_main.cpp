#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "blindid/channel.hpp"
#include "blindid/identifiability.hpp"
#include "blindid/probability.hpp"
#include "blindid/serialize.hpp"
#include "blindid/sparse_select.hpp"
#include "blindid/subspace.hpp"

namespace {

using blindid::ChannelVector;

struct ChannelArgs {
  std::string channel_path;
  std::vector<int> random_ml;
  std::string save_path;
};

void add_channel_options(CLI::App* cmd, ChannelArgs& args) {
  auto* file = cmd->add_option("--channel", args.channel_path,
                               "channel JSON file {\"M\", \"L\", \"taps\"}")
                   ->check(CLI::ExistingFile);
  auto* rnd = cmd->add_option("--random", args.random_ml,
                              "draw a Gaussian channel with the given M L")
                  ->expected(2);
  file->excludes(rnd);
  cmd->add_option("--save-channel", args.save_path,
                  "write the channel actually used to this JSON file");
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value,
                           bool randomness_used = true) {
  if (opt->count() > 0 || !randomness_used) return value;
  std::random_device rd;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) | static_cast<std::uint64_t>(rd());
  std::cerr << "seed " << seed << "\n";
  return seed;
}

ChannelVector resolve_channel(const ChannelArgs& args, std::uint64_t seed) {
  ChannelVector h;
  if (!args.channel_path.empty()) {
    h = blindid::load_channel(args.channel_path);
  } else if (args.random_ml.size() == 2) {
    h = blindid::gen_channel(args.random_ml[0], args.random_ml[1], seed);
  } else {
    throw std::invalid_argument("provide either --channel FILE or --random M L");
  }
  if (!args.save_path.empty()) blindid::save_channel(h, args.save_path);
  return h;
}

void validate_p(double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("--p must lie in (0, 1]");
}

void emit_csv(const std::vector<blindid::BoundPoint>& rows, const std::string& out_path) {
  if (out_path.empty()) {
    blindid::write_bound_csv(std::cout, rows);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write output file: " + out_path);
  blindid::write_bound_csv(out, rows);
}

void summarize(const blindid::BoundPoint& r) {
  std::cerr << "M=" << r.M << " L=" << r.L;
  if (r.bound) std::cerr << " bound=" << *r.bound << " eps_star=" << *r.eps_star;
  if (r.mc_estimate)
    std::cerr << " mc=" << *r.mc_estimate << " +-" << *r.mc_halfwidth << " ("
              << *r.trials << " trials)";
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind SIMO channel identifiability under l1/lp sparsity: "
               "condition checks, sparse recovery, probability bounds and "
               "Monte Carlo sweeps"};
  app.require_subcommand(1);
  app.fallthrough();  // lets `blindid <cmd> --config ...` reach the app option
  app.set_config("--config", "",
                 "flat key=value config file with [subcommand] sections; "
                 "command-line flags take precedence over file values");

  // check
  auto* check = app.add_subcommand("check", "decide channel identifiability; "
                                            "exit 0 identifiable, 2 boundary, "
                                            "3 not identifiable, 1 error");
  ChannelArgs check_ch;
  add_channel_options(check, check_ch);
  int check_Lp = -1;
  double check_p = 1.0;
  std::uint64_t check_seed = 0;
  check->add_option("--Lp", check_Lp, "over-modeled order (default L+1)");
  check->add_option("--p", check_p, "sparsity exponent in (0, 1]");
  auto* check_seed_opt = check->add_option("--seed", check_seed, "seed for --random");

  // recover
  auto* recover = app.add_subcommand("recover", "solve the sparse channel "
                                                "selection problem; JSON result "
                                                "on stdout");
  ChannelArgs rec_ch;
  add_channel_options(recover, rec_ch);
  int rec_Lp = -1, rec_n = -1, rec_max_iter = 200;
  double rec_p = 1.0, rec_sigma2 = 0.0;
  long long rec_samples = 0;
  bool rec_pipeline = false;
  std::uint64_t rec_seed = 0;
  recover->add_option("--Lp", rec_Lp, "over-modeled order (default L+1)");
  recover->add_option("--p", rec_p, "sparsity exponent in (0, 1]");
  recover->add_flag("--pipeline", rec_pipeline,
                    "run the full covariance -> projector -> kernel chain "
                    "instead of solving from the true channel");
  recover->add_option("--n", rec_n, "covariance stacking depth (default Lp)");
  recover->add_option("--sigma2", rec_sigma2, "noise variance for the pipeline");
  recover->add_option("--samples", rec_samples,
                      "sample-covariance window count; 0 = exact covariance");
  recover->add_option("--max-iter", rec_max_iter, "reweighted-l1 iteration cap for p < 1");
  auto* rec_seed_opt = recover->add_option("--seed", rec_seed,
                                           "seed for --random and sampling");

  // bound
  auto* bound = app.add_subcommand("bound", "closed-form identifiability "
                                            "probability lower bound for one "
                                            "(M, L); CSV on stdout or --out");
  int bound_M = 0, bound_L = 0;
  std::string bound_out;
  bound->add_option("M", bound_M, "antenna count")->required();
  bound->add_option("L", bound_L, "channel order")->required();
  bound->add_option("--out", bound_out, "CSV output path (default stdout)");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Monte Carlo estimate of the "
                                              "identifiability probability; "
                                              "CSV on stdout or --out");
  int mc_M = 0, mc_L = 0, mc_Lp = -1;
  double mc_p = 1.0;
  long long mc_trials = 10000;
  std::uint64_t mc_seed = 0;
  std::string mc_out;
  bool mc_serial = false;
  mc->add_option("M", mc_M, "antenna count")->required();
  mc->add_option("L", mc_L, "channel order")->required();
  mc->add_option("--Lp", mc_Lp, "over-modeled order (default L+1)");
  mc->add_option("--p", mc_p, "sparsity exponent in (0, 1]");
  mc->add_option("--trials", mc_trials, "number of channel draws");
  auto* mc_seed_opt = mc->add_option("--seed", mc_seed, "master seed");
  mc->add_option("--out", mc_out, "CSV output path (default stdout)");
  mc->add_flag("--serial", mc_serial, "use the serial reference kernel");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "bound and Monte Carlo estimate "
                                            "over an (M, L) grid; CSV on "
                                            "stdout or --out");
  std::vector<int> sweep_M, sweep_L;
  double sweep_p = 1.0;
  long long sweep_trials = 10000;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  bool sweep_serial = false;
  sweep->add_option("--M-list", sweep_M, "antenna counts");
  sweep->add_option("--L-list", sweep_L, "channel orders");
  sweep->add_option("--p", sweep_p, "sparsity exponent in (0, 1]");
  sweep->add_option("--trials", sweep_trials, "trials per grid point");
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");
  sweep->add_flag("--serial", sweep_serial, "use the serial reference kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here too; anything else is a usage error and exits 1
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(check)) {
      validate_p(check_p);
      const std::uint64_t seed =
          resolve_seed(check_seed_opt, check_seed, !check_ch.random_ml.empty());
      const ChannelVector h = resolve_channel(check_ch, seed);
      const int Lp = check_Lp >= 0 ? check_Lp : h.L + 1;
      const auto report = blindid::check_condition(h, Lp, check_p);
      std::cout << blindid::report_to_json(report).dump(2) << "\n";
      switch (report.verdict) {
        case blindid::Verdict::identifiable: return 0;
        case blindid::Verdict::boundary: return 2;
        case blindid::Verdict::not_identifiable: return 3;
      }
      return 1;
    }

    if (app.got_subcommand(recover)) {
      validate_p(rec_p);
      const bool uses_randomness =
          !rec_ch.random_ml.empty() || (rec_pipeline && rec_samples > 0);
      const std::uint64_t seed = resolve_seed(rec_seed_opt, rec_seed, uses_randomness);
      const ChannelVector h = resolve_channel(rec_ch, seed);
      const int Lp = rec_Lp >= 0 ? rec_Lp : h.L + 1;
      blindid::RecoveryResult result;
      if (rec_pipeline) {
        const int n = rec_n >= 0 ? rec_n : Lp;
        const auto cov = rec_samples > 0
                             ? blindid::sample_covariance(h, n, rec_sigma2,
                                                          rec_samples, seed)
                             : blindid::exact_covariance(h, n, rec_sigma2);
        const auto proj = blindid::noise_projector(cov, h.L + n + 1);
        const auto Q = blindid::quadratic_form(proj, Lp, h.M);
        const auto kb = blindid::kernel_basis(Q, Lp - h.L + 1);
        result = blindid::recover_from_kernel(kb, rec_p, &h);
      } else if (rec_p == 1.0) {
        result = blindid::solve_p1(h, Lp);
      } else {
        const Eigen::VectorXd g0 = Eigen::VectorXd::Zero(Lp - h.L);
        result = blindid::solve_pp_local(h, Lp, rec_p, g0, rec_max_iter);
      }
      std::cout << blindid::recovery_to_json(result).dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(bound)) {
      const auto bp = blindid::bound_l1_delta1(bound_M, bound_L);
      summarize(bp);
      emit_csv({bp}, bound_out);
      return 0;
    }

    if (app.got_subcommand(mc)) {
      validate_p(mc_p);
      const std::uint64_t seed = resolve_seed(mc_seed_opt, mc_seed);
      const int delta = (mc_Lp >= 0 ? mc_Lp : mc_L + 1) - mc_L;
      const auto point = blindid::monte_carlo_probability(
          mc_M, mc_L, mc_p, mc_trials, seed, delta,
          mc_serial ? blindid::Exec::serial : blindid::Exec::parallel);
      summarize(point);
      emit_csv({point}, mc_out);
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      validate_p(sweep_p);
      const std::uint64_t seed = resolve_seed(sweep_seed_opt, sweep_seed);
      const auto rows = blindid::sweep(
          sweep_M, sweep_L, sweep_p, sweep_trials, seed,
          sweep_serial ? blindid::Exec::serial : blindid::Exec::parallel);
      for (const auto& r : rows) summarize(r);
      emit_csv(rows, sweep_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
