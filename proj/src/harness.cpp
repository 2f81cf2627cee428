#include "gsav/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gsav/random.hpp"

namespace gsav {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double time_tolerance(double t_end) { return 1e-12 * std::max(1.0, t_end); }

// Tolerances of the per-step invariant checks.
constexpr double kMbpSlack = 1e-12;
constexpr double kEnergySlack = 1e-10;

std::string describe(const DiagnosticsRow& r) {
  std::ostringstream os;
  os << "step=" << r.step << " t=" << format_real(r.t) << " tau=" << format_real(r.tau)
     << " sup_norm=" << format_real(r.sup_norm) << " energy=" << format_real(r.energy)
     << " modified_energy=" << format_real(r.modified_energy) << " s=" << format_real(r.s)
     << " g=" << format_real(r.g);
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  require(std::isfinite(t_end) && t_end > 0.0, "t_end must be positive");
  require(snapshot_every >= 0, "snapshot_every must be non-negative");
  const double beta = scheme.potential.beta();
  std::visit(overloaded{[&](const SineInit& s) {
                          require(std::abs(s.amplitude) <= beta,
                                  "sine amplitude must lie within [-beta, beta]");
                        },
                        [&](const RandomInit& r) {
                          require(r.lo <= r.hi, "random init requires lo <= hi");
                          require(r.lo >= -beta && r.hi <= beta,
                                  "random init range must lie within [-beta, beta]");
                        }},
             init);
  if (!scheme.kappa_meets_bound()) {
    if (check_invariants)
      throw ContractViolation("kappa = " + format_real(scheme.kappa) +
                              " is below ||f'||_{C[-beta,beta]} = " +
                              format_real(scheme.potential.lipschitz()) +
                              "; the maximum bound is not guaranteed");
    std::cerr << "warning: kappa " << scheme.kappa << " < ||f'|| = " << scheme.potential.lipschitz()
              << "; the maximum bound principle is not guaranteed\n";
  }
}

GridFunction init_sine(const GridSpec& spec, double amplitude) {
  GridFunction u(spec);
  const double k = 2.0 * std::numbers::pi / spec.length();
  for (int i = 0; i < spec.points(); ++i)
    for (int j = 0; j < spec.points(); ++j)
      u(i, j) = amplitude * std::sin(k * spec.coordinate(i)) * std::sin(k * spec.coordinate(j));
  return u;
}

GridFunction init_random(const GridSpec& spec, double lo, double hi, std::uint64_t seed) {
  require(lo <= hi, "init_random: lo must not exceed hi");
  GridFunction u(spec);
  CounterRng rng(seed);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = lo == hi ? lo : rng.uniform(lo, hi);
  return u;
}

GridFunction make_initial(const GridSpec& spec, const InitialCondition& init) {
  return std::visit(
      overloaded{[&](const SineInit& s) { return init_sine(spec, s.amplitude); },
                 [&](const RandomInit& r) { return init_random(spec, r.lo, r.hi, r.seed); }},
      init);
}

DiagnosticsRow diagnostics_row(const SchemeConfig& cfg, const SolverState& state, double tau) {
  const double grad = 0.5 * cfg.eps * cfg.eps * gradient_norm2_squared(state.u);
  const double e1 = bulk_energy(cfg.potential, state.u);
  return DiagnosticsRow{state.step,
                        state.t,
                        tau,
                        norm_inf(state.u),
                        grad + e1,
                        grad + state.s,
                        state.s,
                        g_ratio(cfg.sigma, state.s, e1)};
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.output.empty()) std::filesystem::create_directories(cfg.output);
  const SchemeConfig& sc = cfg.scheme;
  const double beta = sc.potential.beta();

  SolverState state = SolverState::initial(sc.potential, make_initial(cfg.grid, cfg.init));
  std::vector<DiagnosticsRow> rows;
  rows.push_back(diagnostics_row(sc, state, 0.0));
  const double initial_energy = rows.front().energy;

  auto snapshot = [&](const SolverState& st) {
    if (cfg.output.empty() || cfg.snapshot_every <= 0 || st.step % cfg.snapshot_every != 0) return;
    write_snapshot(cfg.output / ("u_" + std::to_string(st.step) + ".csv"), st.u);
  };
  auto fail = [&](const std::string& what, const DiagnosticsRow& row) {
    std::ostringstream os;
    os << "invariant violated: " << what << "\n  previous: " << describe(rows.back())
       << "\n  current:  " << describe(row);
    rows.push_back(row);
    throw VerificationFailure(os.str());
  };

  double max_predictor_s = -std::numeric_limits<double>::infinity();
  snapshot(state);
  StepController ctrl(cfg.stepping);
  try {
    while (cfg.t_end - state.t > time_tolerance(cfg.t_end)) {
      const double energy_now = rows.back().energy;
      const double tau = ctrl.propose(state.t, cfg.t_end, energy_now);
      const bool landing = tau >= cfg.t_end - state.t - time_tolerance(cfg.t_end);

      SolverState next = state;
      double predictor_s = -INFINITY;
      if (sc.scheme == Scheme::ei2) {
        auto detail = step_ei2_detailed(sc, state, tau);
        predictor_s = detail.predictor_s;
        max_predictor_s = std::max(max_predictor_s, predictor_s);
        next = std::move(detail.next);
      } else {
        next = step(sc, state, tau);
      }
      // Uniform times are n tau rather than a running sum, which drifts.
      if (const auto* u = std::get_if<UniformStep>(&cfg.stepping))
        next.t = static_cast<double>(next.step) * u->tau;
      if (landing) next.t = cfg.t_end;

      const DiagnosticsRow row = [&] {
        try {
          return diagnostics_row(sc, next, tau);
        } catch (const DomainError& e) {
          std::ostringstream os;
          os << "step " << next.step << " (t=" << format_real(next.t) << "): " << e.what();
          throw DomainError(os.str());
        }
      }();
      if (cfg.check_invariants) {
        if (row.sup_norm > beta + kMbpSlack) fail("sup norm exceeds beta = " + format_real(beta), row);
        if (row.modified_energy - rows.back().modified_energy > kEnergySlack)
          fail("modified energy increased", row);
        if (row.s > initial_energy + kEnergySlack || predictor_s > initial_energy + kEnergySlack)
          fail("auxiliary variable exceeds E_h(u0) = " + format_real(initial_energy), row);
      }
      rows.push_back(row);
      ctrl.accept(tau, energy_now, row.energy);
      state = std::move(next);
      snapshot(state);
    }
  } catch (...) {
    if (!cfg.output.empty()) write_diagnostics_csv(cfg.output / "diagnostics.csv", rows);
    throw;
  }
  if (!cfg.output.empty()) write_diagnostics_csv(cfg.output / "diagnostics.csv", rows);
  return RunResult{std::move(state), std::move(rows), max_predictor_s};
}

namespace {

long divide_exactly(double t_end, double tau, const char* what) {
  const long n = std::lround(t_end / tau);
  require(n > 0 && std::abs(static_cast<double>(n) * tau - t_end) <= time_tolerance(t_end),
          std::string(what) + " must divide t_end");
  return n;
}

}  // namespace

double fitted_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "fitted_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult converge_against(const RunConfig& cfg, std::span<const double> taus,
                                   const GridFunction& reference) {
  require(!taus.empty(), "converge: empty step list");
  const GridFunction u0 = make_initial(cfg.grid, cfg.init);
  require_same_grid(u0, reference);
  ConvergenceResult result{{}, 0.0};
  std::vector<double> log_tau, log_err;
  for (double tau : taus) {
    const long steps = divide_exactly(cfg.t_end, tau, "every tau");
    SolverState state = SolverState::initial(cfg.scheme.potential, u0);
    for (long n = 0; n < steps; ++n) state = step(cfg.scheme, state, tau);
    const GridFunction err = state.u - reference;
    result.rows.push_back({tau, norm2(err), norm_inf(err)});
    log_tau.push_back(std::log(tau));
    log_err.push_back(std::log(result.rows.back().l2_error));
  }
  result.slope = fitted_slope(log_tau, log_err);
  return result;
}

ConvergenceResult converge(const RunConfig& cfg, std::span<const double> taus, double tau_ref) {
  require(!taus.empty(), "converge: empty step list");
  double tau_min = taus.front();
  for (double t : taus) tau_min = std::min(tau_min, t);
  require(tau_ref <= tau_min / 32.0 * (1.0 + 1e-12), "converge: tau_ref must be <= min(tau) / 32");
  divide_exactly(cfg.t_end, tau_ref, "tau_ref");
  const SolverState ref = reference_solution(cfg.scheme, make_initial(cfg.grid, cfg.init),
                                             cfg.t_end, tau_ref);
  return converge_against(cfg, taus, ref.u);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string diagnostics_csv(std::span<const DiagnosticsRow> rows) {
  std::string out = kDiagnosticsHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.step);
    for (double v : {r.t, r.tau, r.sup_norm, r.energy, r.modified_energy, r.s, r.g}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

void write_diagnostics_csv(const std::filesystem::path& file, std::span<const DiagnosticsRow> rows) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + file.string());
  os << diagnostics_csv(rows);
}

void write_snapshot(const std::filesystem::path& file, const GridFunction& u) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + file.string());
  const int m = u.points();
  std::string line;
  for (int i = 0; i < m; ++i) {
    line.clear();
    for (int j = 0; j < m; ++j) {
      if (j > 0) line += ',';
      line += format_real(u(i, j));
    }
    line += '\n';
    os << line;
  }
}

GridFunction read_snapshot(const std::filesystem::path& file, const GridSpec& spec) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::vector<double> values;
  values.reserve(spec.size());
  std::string line, cell;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
  }
  return GridFunction(spec, std::move(values));
}

std::string convergence_csv(const ConvergenceResult& result) {
  std::string out = "tau,l2_error,inf_error\n";
  for (const auto& r : result.rows)
    out += format_real(r.tau) + ',' + format_real(r.l2_error) + ',' + format_real(r.inf_error) + '\n';
  return out;
}

}  // namespace gsav
