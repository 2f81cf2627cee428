#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gsav/schemes.hpp"
#include "gsav/timestep.hpp"

namespace gsav {

struct SineInit {
  double amplitude = 0.1;
};

struct RandomInit {
  double lo = -0.8;
  double hi = 0.8;
  std::uint64_t seed = 0;
};

using InitialCondition = std::variant<SineInit, RandomInit>;

struct RunConfig {
  GridSpec grid{1.0, 128};
  SchemeConfig scheme;
  StepController::Mode stepping = UniformStep{0.01};
  double t_end = 1.0;
  InitialCondition init = SineInit{};
  /// Directory for diagnostics.csv and snapshots; empty disables output.
  std::filesystem::path output;
  /// Write u_<step>.csv every this many steps (0 = never).
  long snapshot_every = 0;
  /// Verification profile: require kappa >= ||f'|| and assert the MBP, the
  /// modified-energy decay and the auxiliary bound after every step.
  bool check_invariants = false;

  void validate() const;
};

struct DiagnosticsRow {
  long step;
  double t;
  double tau;
  double sup_norm;
  double energy;
  double modified_energy;
  double s;
  double g;
};

struct RunResult {
  SolverState final_state;
  std::vector<DiagnosticsRow> rows;
  /// Largest GSAV-EI2 predictor value of s over the run (-inf otherwise).
  double max_predictor_s = -std::numeric_limits<double>::infinity();
};

/// amplitude * sin(2 pi x / L) sin(2 pi y / L) at the mesh points.
GridFunction init_sine(const GridSpec& spec, double amplitude);
/// i.i.d. uniform values in [lo, hi) from CounterRng(seed), row-major order.
GridFunction init_random(const GridSpec& spec, double lo, double hi, std::uint64_t seed);
GridFunction make_initial(const GridSpec& spec, const InitialCondition& init);

DiagnosticsRow diagnostics_row(const SchemeConfig& cfg, const SolverState& state, double tau);

RunResult run(const RunConfig& cfg);

struct ConvergenceRow {
  double tau;
  double l2_error;
  double inf_error;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(l2_error) against log(tau).
  double slope;
};

/// Errors at t_end of uniform runs with each tau against a GSAV-EI2
/// reference with step tau_ref <= min(taus) / 32.
ConvergenceResult converge(const RunConfig& cfg, std::span<const double> taus, double tau_ref);
/// Same, against a precomputed reference field at t_end.
ConvergenceResult converge_against(const RunConfig& cfg, std::span<const double> taus,
                                   const GridFunction& reference);

double fitted_slope(std::span<const double> x, std::span<const double> y);

/// Decimal form with 17 significant digits, used in every CSV.
std::string format_real(double x);

inline constexpr const char* kDiagnosticsHeader = "step,t,tau,sup_norm,energy,modified_energy,s,g";

std::string diagnostics_csv(std::span<const DiagnosticsRow> rows);
void write_diagnostics_csv(const std::filesystem::path& file, std::span<const DiagnosticsRow> rows);
/// M rows x M comma-separated values; row index i (x), column index j (y).
void write_snapshot(const std::filesystem::path& file, const GridFunction& u);
GridFunction read_snapshot(const std::filesystem::path& file, const GridSpec& spec);
std::string convergence_csv(const ConvergenceResult& result);

}  // namespace gsav
