#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsav/harness.hpp"

namespace gsav {

enum class VerifyProfile { lemmas, invariants, oracles };

VerifyProfile profile_from_string(const std::string& s);
const char* to_string(VerifyProfile p);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Largest observed violation measure (check specific; <= 0 means slack).
  double worst = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  /// {"passed": bool, "checks": [...], "failures": [names...]}
  std::string to_json() const;
};

/// |f(xi) + kappa xi| <= kappa beta + 1e-12 on `samples` random xi in [-beta, beta].
CheckResult check_stabilization_bound(const Potential& p, double kappa, int samples,
                                      std::uint64_t seed);
/// ||e^{a Delta_h - b I}||_inf <= e^{-b} + 1e-12 for random a, b >= 0 (dense).
CheckResult check_contraction(const GridSpec& spec, int trials, std::uint64_t seed);
/// 0 < 1 - e^{-a} < a, 0 < phi1(-a) < 1, 1 < (1 + a) phi1(-a) < 2 for a in (0, 50].
CheckResult check_phi_inequalities(int samples, std::uint64_t seed);
/// <v, Delta w> = -<grad v, grad w> = <Delta v, w>, relative 1e-12.
CheckResult check_summation_by_parts(const GridSpec& spec, int pairs, std::uint64_t seed);
/// Spectral eigenvalues against a dense symmetric eigensolve, 1e-12 relative.
CheckResult check_eigenvalues_dense(const GridSpec& spec);
/// Spectral apply_exp / apply_phi1 against the dense oracles, relative L2 <= 1e-9.
CheckResult check_exp_kernels_dense(const GridSpec& spec, int trials, std::uint64_t seed);
/// Spectral GSAV-EI1 step against the same formulas evaluated with dense matrices.
CheckResult check_ei1_step_dense(const GridSpec& spec, std::uint64_t seed);

struct TrajectoryCheck {
  CheckResult mbp;
  CheckResult energy;
  CheckResult auxiliary;
  long steps = 0;
  /// Diagnostics of the run, up to the abort point if it aborted.
  std::vector<DiagnosticsRow> rows;
};

/// Runs cfg (uniform or adaptive) and records the MBP (sup <= beta + 1e-12),
/// modified-energy decay (increase <= 1e-10) and auxiliary bound
/// (s, predictor s <= E_h(u0) + 1e-10) at every step. If kappa is below the
/// Lipschitz bound the MBP check fails with the violated hypothesis; a run
/// aborted by a numeric or domain error is reported rather than thrown.
TrajectoryCheck check_trajectory(const RunConfig& cfg);

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  /// Grid used by the trajectory checks in the invariants profile.
  int trajectory_points = 32;
  double trajectory_t_end = 5.0;
};

VerifyReport verify(std::span<const VerifyProfile> profiles, const VerifyOptions& opts = {});

}  // namespace gsav
