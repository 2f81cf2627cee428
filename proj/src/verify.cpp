#include "gsav/verify.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "gsav/random.hpp"

namespace gsav {

VerifyProfile profile_from_string(const std::string& s) {
  if (s == "lemmas") return VerifyProfile::lemmas;
  if (s == "invariants") return VerifyProfile::invariants;
  if (s == "oracles") return VerifyProfile::oracles;
  throw ContractViolation("unknown verification profile '" + s + "'");
}

const char* to_string(VerifyProfile p) {
  switch (p) {
    case VerifyProfile::lemmas: return "lemmas";
    case VerifyProfile::invariants: return "invariants";
    case VerifyProfile::oracles: return "oracles";
  }
  return "?";
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"worst", c.worst},
                           {"detail", c.detail}});
    if (!c.passed) j["failures"].push_back(c.name);
  }
  return j.dump(2);
}

namespace {

std::string grid_tag(const GridSpec& spec) {
  return std::string(to_string(spec.boundary())) + ",M=" + std::to_string(spec.points());
}

GridFunction random_field(const GridSpec& spec, CounterRng& rng, double lo = -1.0, double hi = 1.0) {
  GridFunction v(spec);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = rng.uniform(lo, hi);
  return v;
}

CheckResult make_result(std::string name, double worst, double limit, const std::string& what) {
  CheckResult r;
  r.name = std::move(name);
  r.worst = worst;
  r.passed = std::isfinite(worst) && worst <= limit;
  std::ostringstream os;
  os << what << ": worst " << format_real(worst) << " (limit " << format_real(limit) << ")";
  r.detail = os.str();
  return r;
}

double relative_l2(const GridFunction& a, const GridFunction& b) {
  const double denom = std::max(norm2(b), 1e-300);
  return norm2(a - b) / denom;
}

}  // namespace

CheckResult check_stabilization_bound(const Potential& p, double kappa, int samples,
                                      std::uint64_t seed) {
  CounterRng rng(seed);
  const double beta = p.beta();
  double worst = -INFINITY;
  for (int k = 0; k < samples + 2; ++k) {
    const double xi = k == 0 ? -beta : (k == 1 ? beta : rng.uniform(-beta, beta));
    worst = std::max(worst, std::abs(p.f(xi) + kappa * xi) - kappa * beta);
  }
  return make_result("lemma.stabilization_bound[" + p.name() + "]", worst, 1e-12,
                     "max |f(xi)+kappa xi| - kappa beta");
}

CheckResult check_contraction(const GridSpec& spec, int trials, std::uint64_t seed) {
  CounterRng rng(seed);
  const Eigen::MatrixXd lap = dense_laplacian(spec);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(lap.rows(), lap.cols());
  double worst = -INFINITY;
  for (int k = 0; k < trials; ++k) {
    const double a = rng.uniform(0.0, 1.0) * spec.h() * spec.h() * 10.0;
    const double b = rng.uniform(0.0, 5.0);
    const Eigen::MatrixXd e = dense_exp(a * lap - b * id, 1.0);
    const double norm = e.cwiseAbs().rowwise().sum().maxCoeff();
    worst = std::max(worst, norm - std::exp(-b));
  }
  return make_result("lemma.contraction[" + grid_tag(spec) + "]", worst, 1e-12,
                     "max ||e^{a Delta - b I}||_inf - e^{-b}");
}

CheckResult check_phi_inequalities(int samples, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = -INFINITY;
  for (int k = 0; k < samples; ++k) {
    // (0, 50]: 1 - U with U in [0, 1) keeps a strictly positive.
    const double a = 50.0 * (1.0 - rng.uniform());
    const double one_minus = -std::expm1(-a);
    const double p = phi1(-a);
    const double q = (1.0 + a) * p;
    // Each term is <= 0 exactly when its strict inequality holds or is tight.
    const double margins[] = {-one_minus, one_minus - a, -p, p - 1.0, 1.0 - q, q - 2.0};
    for (double m : margins) worst = std::max(worst, m);
  }
  CheckResult r = make_result("lemma.phi_inequalities", worst, 0.0,
                              "max violation of the strict phi_1 inequalities");
  r.passed = r.passed && worst < 0.0;
  return r;
}

CheckResult check_summation_by_parts(const GridSpec& spec, int pairs, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const GridFunction v = random_field(spec, rng);
    const GridFunction w = random_field(spec, rng);
    const auto [vx, vy] = gradient(v);
    const auto [wx, wy] = gradient(w);
    const double lhs = inner(v, laplacian(w));
    const double mid = -(inner(vx, wx) + inner(vy, wy));
    const double rhs = inner(laplacian(v), w);
    // Scale: Cauchy-Schwarz bound of the gradient pairing.
    const double scale = std::sqrt(gradient_norm2_squared(v) * gradient_norm2_squared(w));
    worst = std::max({worst, std::abs(lhs - mid) / scale, std::abs(rhs - mid) / scale});
  }
  return make_result("oracle.summation_by_parts[" + grid_tag(spec) + "]", worst, 1e-12,
                     "relative mismatch");
}

CheckResult check_eigenvalues_dense(const GridSpec& spec) {
  const Eigen::MatrixXd lap = dense_laplacian(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  std::vector<double> dense(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
  std::vector<double> formula;
  for (int k = 0; k < spec.points(); ++k)
    for (int l = 0; l < spec.points(); ++l) formula.push_back(laplacian_eigenvalue(spec, k, l));
  std::sort(dense.begin(), dense.end());
  std::sort(formula.begin(), formula.end());
  double scale = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    scale = std::max(scale, std::abs(dense[k]));
    worst = std::max(worst, std::abs(dense[k] - formula[k]));
  }
  return make_result("oracle.eigenvalues[" + grid_tag(spec) + "]", worst / scale, 1e-12,
                     "relative eigenvalue mismatch");
}

CheckResult check_exp_kernels_dense(const GridSpec& spec, int trials, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const StabilizedOperator op(rng.uniform(0.05, 10.0), rng.uniform(1e-4, 2e-2), spec);
    const double tau = 1.0 - rng.uniform();  // (0, 1]
    const GridFunction v = random_field(spec, rng);
    const Eigen::MatrixXd l = dense_matrix(op);
    const Eigen::VectorXd x = to_vector(v);
    const GridFunction e_dense = from_vector(spec, dense_exp(-l, tau) * x);
    const GridFunction p_dense = from_vector(spec, dense_phi1(l, tau) * x);
    worst = std::max({worst, relative_l2(apply_exp(op, tau, v), e_dense),
                      relative_l2(apply_phi1(op, tau, v), p_dense)});
  }
  return make_result("oracle.exp_kernels[" + grid_tag(spec) + "]", worst, 1e-9,
                     "relative L2 error vs dense");
}

CheckResult check_ei1_step_dense(const GridSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (const Potential& p : {Potential::double_well(), Potential::flory_huggins(0.8, 1.6)}) {
    SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(10.0), Scheme::ei1, 0.05);
    const double beta = p.beta();
    SolverState state = SolverState::initial(p, random_field(spec, rng, -beta, beta));
    state.s -= 0.01;  // g != 1
    const double tau = 0.1;
    const SolverState next = step_ei1(cfg, state, tau);

    const double g = g_ratio(cfg.sigma, state.s, bulk_energy(p, state.u));
    const GridFunction f = f_eval(p, state.u);
    GridFunction n(spec);
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = g * (f[k] + cfg.kappa * state.u[k]);
    const Eigen::MatrixXd l = dense_matrix(StabilizedOperator(cfg.kappa * g, cfg.eps * cfg.eps, spec));
    const Eigen::VectorXd u_next =
        dense_exp(-l, tau) * to_vector(state.u) + tau * (dense_phi1(l, tau) * to_vector(n));
    const GridFunction expected = from_vector(spec, u_next);
    const double s_expected = state.s - g * inner(f, expected - state.u);
    worst = std::max({worst, relative_l2(next.u, expected),
                      std::abs(next.s - s_expected) / std::max(1.0, std::abs(s_expected))});
  }
  return make_result("oracle.ei1_step[" + grid_tag(spec) + "]", worst, 1e-9,
                     "relative error vs dense evaluation");
}

TrajectoryCheck check_trajectory(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.check_invariants = false;
  const SchemeConfig& sc = cfg.scheme;
  const double beta = sc.potential.beta();
  std::ostringstream tag;
  tag << "[" << sc.potential.name() << "," << to_string(sc.scheme) << "," << sc.sigma.name() << ","
      << grid_tag(cfg.grid);
  if (const auto* u = std::get_if<UniformStep>(&cfg.stepping))
    tag << ",tau=" << u->tau;
  else
    tag << ",adaptive";
  tag << "]";

  TrajectoryCheck out;
  out.mbp.name = "invariant.mbp" + tag.str();
  out.energy.name = "invariant.energy_dissipation" + tag.str();
  out.auxiliary.name = "invariant.auxiliary_bound" + tag.str();

  std::string hypothesis;
  if (!sc.kappa_meets_bound()) {
    hypothesis = "hypothesis violated: kappa = " + format_real(sc.kappa) +
                 " < ||f'||_{C[-beta,beta]} = " + format_real(sc.potential.lipschitz());
  }

  RunResult result{SolverState::initial(sc.potential, make_initial(cfg.grid, cfg.init)), {}};
  std::string aborted;
  try {
    result = run(cfg);
  } catch (const std::exception& e) {
    aborted = std::string("run aborted: ") + e.what();
  }
  const auto& rows = result.rows;
  out.steps = rows.empty() ? 0 : rows.back().step;

  double sup = 0.0, energy_rise = -INFINITY, aux = -INFINITY;
  const double e0 = rows.empty() ? 0.0 : rows.front().energy;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    sup = std::max(sup, rows[k].sup_norm);
    aux = std::max(aux, rows[k].s - e0);
    if (k > 0) energy_rise = std::max(energy_rise, rows[k].modified_energy - rows[k - 1].modified_energy);
  }
  aux = std::max(aux, result.max_predictor_s - e0);

  out.mbp = make_result(out.mbp.name, sup - beta, 1e-12, "max sup_norm - beta");
  out.energy = make_result(out.energy.name, energy_rise, 1e-10, "max modified-energy increase");
  out.auxiliary = make_result(out.auxiliary.name, aux, 1e-10, "max s - E_h(u0)");
  for (CheckResult* c : {&out.mbp, &out.energy, &out.auxiliary}) {
    if (!aborted.empty()) {
      c->passed = false;
      c->detail += "; " + aborted;
    }
  }
  if (!hypothesis.empty()) {
    out.mbp.passed = false;
    out.mbp.detail = hypothesis + "; observed " + out.mbp.detail;
  }
  out.rows = std::move(result.rows);
  return out;
}

VerifyReport verify(std::span<const VerifyProfile> profiles, const VerifyOptions& opts) {
  VerifyReport report;
  auto add = [&](CheckResult r) { report.checks.push_back(std::move(r)); };
  const std::uint64_t seed = opts.seed;
  const GridSpec p8(1.0, 8, Boundary::periodic), n8(1.0, 8, Boundary::neumann);

  for (VerifyProfile profile : profiles) {
    switch (profile) {
      case VerifyProfile::lemmas: {
        for (const Potential& p : {Potential::double_well(), Potential::flory_huggins(0.8, 1.6)})
          add(check_stabilization_bound(p, p.lipschitz(), 10000, seed));
        add(check_contraction(p8, 50, seed + 1));
        add(check_contraction(n8, 50, seed + 2));
        add(check_contraction(GridSpec(1.0, 5, Boundary::periodic), 50, seed + 3));
        add(check_phi_inequalities(10000, seed + 4));
        break;
      }
      case VerifyProfile::oracles: {
        for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
          add(check_summation_by_parts(GridSpec(1.0, 16, b), 100, seed + 10));
          add(check_eigenvalues_dense(GridSpec(1.0, 6, b)));
          add(check_exp_kernels_dense(GridSpec(1.0, 8, b), 50, seed + 11));
          add(check_ei1_step_dense(GridSpec(1.0, 8, b), seed + 12));
        }
        break;
      }
      case VerifyProfile::invariants: {
        const GridSpec grid(1.0, opts.trajectory_points);
        for (const Potential& p : {Potential::double_well(), Potential::flory_huggins(0.8, 1.6)})
          for (Scheme s : {Scheme::ei1, Scheme::ei2})
            for (double tau : {0.01, 0.1, 1.0}) {
              RunConfig cfg;
              cfg.grid = grid;
              cfg.scheme = SchemeConfig::make(p, Sigma::exp(1.0), s);
              cfg.stepping = UniformStep{tau};
              cfg.t_end = opts.trajectory_t_end;
              cfg.init = RandomInit{-0.8, 0.8, seed + 20};
              TrajectoryCheck t = check_trajectory(cfg);
              add(std::move(t.mbp));
              add(std::move(t.energy));
              add(std::move(t.auxiliary));
            }
        {
          RunConfig cfg;
          cfg.grid = GridSpec(1.0, opts.trajectory_points, Boundary::neumann);
          cfg.scheme = SchemeConfig::make(Potential::flory_huggins(0.8, 1.6), Sigma::exp(1.0),
                                          Scheme::ei2);
          cfg.stepping = AdaptiveStep{1e-4, 0.1, 1e5};
          cfg.t_end = opts.trajectory_t_end;
          cfg.init = RandomInit{-0.8, 0.8, seed + 21};
          TrajectoryCheck t = check_trajectory(cfg);
          add(std::move(t.mbp));
          add(std::move(t.energy));
          add(std::move(t.auxiliary));
        }
        {
          // Constant sigma: g must be exactly 1 in every row.
          RunConfig cfg;
          cfg.grid = grid;
          cfg.scheme = SchemeConfig::make(Potential::double_well(), Sigma::constant(), Scheme::ei2);
          cfg.stepping = UniformStep{0.1};
          cfg.t_end = opts.trajectory_t_end;
          cfg.init = RandomInit{-0.8, 0.8, seed + 22};
          const RunResult r = run(cfg);
          long bad = 0;
          for (const auto& row : r.rows) bad += row.g != 1.0 ? 1 : 0;
          add(make_result("invariant.constant_sigma_g_is_one", static_cast<double>(bad), 0.0,
                          "rows with g != 1"));
        }
        {
          double worst = 0.0;
          for (Scheme s : {Scheme::ei1, Scheme::ei2, Scheme::stab1})
            for (double tau : {0.01, 1.0}) {
              const SchemeConfig cfg =
                  SchemeConfig::make(Potential::double_well(), Sigma::exp(1.0), s);
              SolverState st = SolverState::initial(cfg.potential, GridFunction(grid, 1.0));
              for (int n = 0; n < 10; ++n) st = step(cfg, st, tau);
              GridFunction diff = st.u - GridFunction(grid, 1.0);
              worst = std::max({worst, norm_inf(diff), std::abs(st.s)});
            }
          add(make_result("invariant.pure_state_fixed_point", worst, 1e-14,
                          "max deviation from u = 1, s = 0"));
        }
        break;
      }
    }
  }
  return report;
}

}  // namespace gsav
