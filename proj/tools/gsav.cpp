// gsav: run, converge and verify the GSAV exponential integrators for
// Allen-Cahn gradient flows.
//
// Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 verification failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "gsav/harness.hpp"
#include "gsav/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kVerification = 3 };

struct Options {
  int grid_m = 128;
  double grid_l = 1.0;
  std::string boundary = "periodic";
  std::string potential = "double-well";
  double theta = 0.8;
  double theta_c = 1.6;
  std::string sigma = "exp";
  double sigma_a = 1.0;
  std::string scheme = "ei1";
  double eps = 0.01;
  std::optional<double> kappa;
  double tau = 0.01;
  bool adaptive = false;
  double tau_min = 1e-4;
  double tau_max = 0.1;
  double alpha = 1e5;
  double t_end = 1.0;
  std::string init = "sine";
  double amplitude = 0.1;
  double lo = -0.8;
  double hi = 0.8;
  std::uint64_t seed = 0;
  std::string out;
  long snapshot_every = 0;
  bool check_invariants = false;
  // converge
  std::vector<double> taus;
  std::optional<double> tau_ref;
  // verify
  std::vector<std::string> profiles{"lemmas", "invariants", "oracles"};
};

void add_problem_options(CLI::App& app, Options& o) {
  app.add_option("--grid-m", o.grid_m, "Points per dimension")->check(CLI::Range(2, 1 << 14));
  app.add_option("--grid-l", o.grid_l, "Domain side length")->check(CLI::PositiveNumber);
  app.add_option("--boundary", o.boundary)->check(CLI::IsMember({"periodic", "neumann"}));
  app.add_option("--potential", o.potential)->check(CLI::IsMember({"double-well", "flory-huggins"}));
  app.add_option("--theta", o.theta, "Flory-Huggins theta");
  app.add_option("--theta-c", o.theta_c, "Flory-Huggins theta_c");
  app.add_option("--sigma", o.sigma)->check(CLI::IsMember({"const", "exp", "arctan", "tanh"}));
  app.add_option("--sigma-a", o.sigma_a, "Rate a of sigma(x) = exp(a x)");
  app.add_option("--scheme", o.scheme)->check(CLI::IsMember({"ei1", "ei2", "stab1"}));
  app.add_option("--eps", o.eps, "Interface width epsilon")->check(CLI::PositiveNumber);
  app.add_option("--kappa", o.kappa, "Stabilizer (default ||f'||_{C[-beta,beta]})");
  app.add_option("--tau", o.tau, "Uniform time step")->check(CLI::PositiveNumber);
  app.add_flag("--adaptive", o.adaptive, "Energy-based adaptive time steps");
  app.add_option("--tau-min", o.tau_min)->check(CLI::PositiveNumber);
  app.add_option("--tau-max", o.tau_max)->check(CLI::PositiveNumber);
  app.add_option("--alpha", o.alpha)->check(CLI::PositiveNumber);
  app.add_option("--t-end", o.t_end)->check(CLI::PositiveNumber);
  app.add_option("--init", o.init)->check(CLI::IsMember({"sine", "random"}));
  app.add_option("--amplitude", o.amplitude);
  app.add_option("--lo", o.lo);
  app.add_option("--hi", o.hi);
  app.add_option("--seed", o.seed);
  app.add_option("--out", o.out, "Output directory");
}

gsav::RunConfig make_config(const Options& o) {
  using namespace gsav;
  const Boundary boundary = o.boundary == "neumann" ? Boundary::neumann : Boundary::periodic;
  Potential p = o.potential == "flory-huggins" ? Potential::flory_huggins(o.theta, o.theta_c)
                                               : Potential::double_well();
  Sigma sigma = o.sigma == "const"    ? Sigma::constant()
                : o.sigma == "arctan" ? Sigma::arctan_shift()
                : o.sigma == "tanh"   ? Sigma::tanh_shift()
                                      : Sigma::exp(o.sigma_a);
  RunConfig cfg;
  cfg.grid = GridSpec(o.grid_l, o.grid_m, boundary);
  cfg.scheme = SchemeConfig::make(std::move(p), sigma, scheme_from_string(o.scheme), o.eps);
  if (o.kappa) cfg.scheme.kappa = *o.kappa;
  if (o.adaptive)
    cfg.stepping = AdaptiveStep{o.tau_min, o.tau_max, o.alpha};
  else
    cfg.stepping = UniformStep{o.tau};
  cfg.t_end = o.t_end;
  if (o.init == "random")
    cfg.init = RandomInit{o.lo, o.hi, o.seed};
  else
    cfg.init = SineInit{o.amplitude};
  cfg.output = o.out;
  cfg.snapshot_every = o.snapshot_every;
  cfg.check_invariants = o.check_invariants;
  return cfg;
}

int cmd_run(const Options& o) {
  gsav::RunConfig cfg = make_config(o);
  if (cfg.output.empty()) cfg.output = "gsav_out";
  const auto result = gsav::run(cfg);
  const auto& last = result.rows.back();
  std::cout << "steps " << last.step << "  t " << gsav::format_real(last.t) << "  sup_norm "
            << gsav::format_real(last.sup_norm) << "  energy " << gsav::format_real(last.energy)
            << "\nwrote " << (cfg.output / "diagnostics.csv").string() << "\n";
  return kOk;
}

int cmd_converge(const Options& o) {
  const gsav::RunConfig cfg = make_config(o);
  std::vector<double> taus = o.taus;
  if (taus.empty())
    for (int k = 4; k <= 9; ++k) taus.push_back(std::ldexp(1.0, -k));
  double tau_min = taus.front();
  for (double t : taus) tau_min = std::min(tau_min, t);
  const double tau_ref = o.tau_ref.value_or(tau_min / 32.0);
  const auto result = gsav::converge(cfg, taus, tau_ref);
  const std::string csv = gsav::convergence_csv(result);
  std::cout << csv << "slope " << gsav::format_real(result.slope) << "\n";
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream(std::filesystem::path(o.out) / "convergence.csv", std::ios::binary) << csv;
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  std::vector<gsav::VerifyProfile> profiles;
  for (const auto& p : o.profiles)
    if (!p.empty()) profiles.push_back(gsav::profile_from_string(p));
  const auto report = gsav::verify(profiles);
  const std::string json = report.to_json();
  std::cout << json << "\n";
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream(std::filesystem::path(o.out) / "verify_report.json", std::ios::binary) << json
                                                                                          << "\n";
  }
  return report.passed() ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GSAV exponential integrators for Allen-Cahn gradient flows"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Integrate one trajectory and write diagnostics");
  add_problem_options(*run, o);
  run->add_option("--snapshot-every", o.snapshot_every, "Snapshot period in steps (0 = never)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--check-invariants", o.check_invariants,
                "Require kappa >= ||f'|| and assert MBP / energy decay every step");

  auto* conv = app.add_subcommand("converge", "Temporal convergence study against a fine reference");
  add_problem_options(*conv, o);
  conv->add_option("--taus", o.taus, "Step sizes (default 2^-4 .. 2^-9)")->delimiter(',');
  conv->add_option("--tau-ref", o.tau_ref, "Reference step (default min(taus)/32)");

  auto* ver = app.add_subcommand("verify", "Run the verification suites");
  ver->add_option("--profile", o.profiles, "Comma-separated: lemmas,invariants,oracles")
      ->delimiter(',');
  ver->add_option("--out", o.out, "Directory for verify_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*conv) return cmd_converge(o);
    if (*ver) return cmd_verify(o);
  } catch (const gsav::ContractViolation& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const gsav::VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const gsav::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const gsav::DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
