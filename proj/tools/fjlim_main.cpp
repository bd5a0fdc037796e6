#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fjlim/asymptotics.hpp"
#include "fjlim/campaign.hpp"
#include "fjlim/errors.hpp"
#include "fjlim/instance.hpp"
#include "fjlim/model.hpp"

namespace {

using namespace fjlim;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Missing arguments and other caller mistakes that CLI11 cannot catch.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string instance = "ex1";
  std::optional<double> sigma_max;
  std::vector<double> grid;
  int k_max = 100;
  std::uint64_t seed = 0;
  ImmunityOptions immunity;
};

ImmunityProfile make_profile(const Instance& inst, const CommonArgs& args) {
  const double sigma_max = args.sigma_max  ? *args.sigma_max
                           : inst.sigma_max ? *inst.sigma_max
                                            : throw UsageFailure(
                                                  "no sigma_max: pass "
                                                  "--sigma-max or set it in "
                                                  "the instance file");
  auto prof =
      ImmunityProfile::validated(sigma_max, inst.sigma_tilde, args.immunity);
  for (const auto& warning : prof.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
  return prof;
}

OpinionVector require_y0(const Instance& inst) {
  if (!inst.y0) {
    throw UsageFailure("instance has no y0; add it to the instance file");
  }
  auto y0 = OpinionVector::of(*inst.y0);
  for (const auto& warning : y0.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  return y0;
}

void print_csv_row(std::ostream& out, int k, const Vector& y) {
  out << k;
  for (Index i = 0; i < y.size(); ++i) {
    out << ',' << format_number(y(i));
  }
  out << '\n';
}

int cmd_validate(const CommonArgs& args) {
  Instance inst = load_instance(args.instance);
  if (args.sigma_max) inst.sigma_max = args.sigma_max;
  const ValidationReport report = validate_instance(inst, args.immunity);
  for (const auto& finding : report.findings) {
    std::cout << finding.name << ": " << (finding.ok ? "true" : "false")
              << "\n";
    if (!finding.ok && !finding.detail.empty()) {
      std::cerr << finding.name << ": " << finding.detail << "\n";
    }
  }
  if (report.assumptions_ok) {
    std::cout << "assumptions: satisfied\n";
    return kExitOk;
  }
  std::cout << "assumptions: violated (" << report.violated << ")\n";
  return kExitCheckFailed;
}

int cmd_simulate(const CommonArgs& args, const std::string& model) {
  const Instance inst = load_instance(args.instance);
  const auto w = InfluenceMatrix::validated(inst.w);
  const auto y0 = require_y0(inst);
  const Trajectory traj =
      model == "degroot"
          ? degroot_simulate(w, y0, args.k_max)
          : fj_simulate(w, make_profile(inst, args), y0, args.k_max);

  std::cout << "k";
  for (int i = 1; i <= w.size(); ++i) std::cout << ",y" << i;
  std::cout << '\n';
  for (int k = 0; k < traj.step_count(); ++k) {
    print_csv_row(std::cout, k, traj.steps[k]);
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const Instance inst = load_instance(args.instance);
  const auto w = InfluenceMatrix::validated(inst.w);
  const auto y0 = require_y0(inst);
  validate_grid(args.grid);

  const GainMatrix h_bar = limit_gain(w, inst.sigma_tilde);
  std::cout << "sigma_max,gain_gap,quasi_gap,settling_time\n";
  for (const double sigma_max : args.grid) {
    const auto prof =
        ImmunityProfile::validated(sigma_max, inst.sigma_tilde, args.immunity);
    const double gap = gain_gap(static_gain(w, prof), h_bar);
    const double quasi = quasi_consensus_gap(steady_state(w, prof, y0));
    const int settling = settling_steps(w, prof, y0);
    std::cout << format_number(sigma_max) << ',' << format_number(gap) << ','
              << format_number(quasi) << ',' << settling << '\n';
  }
  return kExitOk;
}

int cmd_compare(const CommonArgs& args) {
  const Instance inst = load_instance(args.instance);
  const auto w = InfluenceMatrix::validated(inst.w);
  const auto y0 = require_y0(inst);
  const Trajectory fj = fj_simulate(w, make_profile(inst, args), y0, args.k_max);
  const Trajectory dg = degroot_simulate(w, y0, args.k_max);

  std::cout << "k";
  for (int i = 1; i <= w.size(); ++i) std::cout << ",fj_y" << i;
  for (int i = 1; i <= w.size(); ++i) std::cout << ",dg_y" << i;
  std::cout << '\n';
  for (int k = 0; k < fj.step_count(); ++k) {
    std::cout << k;
    for (Index i = 0; i < fj.steps[k].size(); ++i) {
      std::cout << ',' << format_number(fj.steps[k](i));
    }
    for (Index i = 0; i < dg.steps[k].size(); ++i) {
      std::cout << ',' << format_number(dg.steps[k](i));
    }
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_campaign(int n, int count, std::uint64_t seed) {
  const CampaignSummary summary = run_campaign({n, count, seed});
  std::cout << "check,pass,fail\n";
  for (const auto& check : summary.checks) {
    std::cout << check.name << ',' << check.pass << ',' << check.fail << '\n';
  }
  return summary.all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Friedkin-Johnsen opinion dynamics: assumption validation, trajectory "
      "simulation, gain-gap sweeps, and seeded property campaigns"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string model = "fj";
  int campaign_n = 4;
  int campaign_count = 100;

  app.add_option("--instance", args.instance,
                 "Instance file path, or a built-in name (ex1, ex2)")
      ->capture_default_str();
  double sigma_max_flag = 0.0;
  auto* sigma_opt =
      app.add_option("--sigma-max", sigma_max_flag,
                     "Largest immunity coefficient sigma_max in (0, 1)");
  app.add_option("--grid", args.grid,
                 "Comma-separated, strictly decreasing sigma_max values")
      ->delimiter(',');
  app.add_option("--k-max", args.k_max, "Number of simulated steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--seed", args.seed, "Random campaign seed")
      ->capture_default_str();
  app.add_flag("--allow-zero-sigma", args.immunity.allow_zero,
               "Accept zero immunity for some (not all) agents");
  app.add_flag("--renormalize-sigma-tilde", args.immunity.renormalize,
               "Rescale sigma_tilde so its maximum is exactly 1");

  // Global flags may appear after the subcommand name.
  app.add_subcommand("validate", "Check the model assumptions and report "
                                 "per-assumption findings")
      ->fallthrough();
  auto* simulate =
      app.add_subcommand("simulate", "Print the trajectory as CSV (k,y1,...)");
  simulate->fallthrough();
  simulate
      ->add_option("--model", model, "Recursion to simulate: fj or degroot")
      ->check(CLI::IsMember({"fj", "degroot"}))
      ->capture_default_str();
  app.add_subcommand("sweep", "Gain gap, quasi-consensus gap, and settling "
                              "time per sigma_max grid point (CSV)")
      ->fallthrough();
  app.add_subcommand("compare", "FJ and DeGroot trajectories side by side "
                                "(CSV)")
      ->fallthrough();
  auto* campaign = app.add_subcommand(
      "campaign", "Run the invariant suites on seeded random instances");
  campaign->fallthrough();
  campaign->add_option("--n", campaign_n, "Number of agents per instance")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  campaign->add_option("--count", campaign_count, "Number of instances")
      ->check(CLI::Range(1, 100000000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (sigma_opt->count() > 0) args.sigma_max = sigma_max_flag;

    if (app.got_subcommand("validate")) return cmd_validate(args);
    if (app.got_subcommand("simulate")) return cmd_simulate(args, model);
    if (app.got_subcommand("sweep")) return cmd_sweep(args);
    if (app.got_subcommand("compare")) return cmd_compare(args);
    if (app.got_subcommand("campaign")) {
      return cmd_campaign(campaign_n, campaign_count, args.seed);
    }
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GridNotDecreasing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AssumptionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
