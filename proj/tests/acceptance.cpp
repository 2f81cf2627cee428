// Acceptance runs: one PASS/FAIL line per criterion, details indented below.
//
//   gsav_acceptance            all criteria
//   gsav_acceptance 3 4 9      selected criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gsav/harness.hpp"
#include "gsav/verify.hpp"

using namespace gsav;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void note(const std::string& s) { notes.push_back(s); }
  void require(bool ok, const std::string& s) {
    passed = passed && ok;
    notes.push_back((ok ? "ok    " : "FAIL  ") + s);
  }
};

bool g_all_passed = true;

void report(int id, const std::string& title, const Outcome& o) {
  g_all_passed = g_all_passed && o.passed;
  std::printf("[%s] criterion %d: %s\n", o.passed ? "PASS" : "FAIL", id, title.c_str());
  for (const auto& n : o.notes) std::printf("         %s\n", n.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Potential potential(int which) {
  return which == 0 ? Potential::double_well() : Potential::flory_huggins(0.8, 1.6);
}

// Runs tasks on up to hardware_concurrency threads, preserving order.
template <class T>
std::vector<T> run_all(std::vector<std::function<T()>> tasks) {
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<T> out;
  for (std::size_t begin = 0; begin < tasks.size(); begin += width) {
    std::vector<std::future<T>> batch;
    for (std::size_t k = begin; k < std::min(tasks.size(), begin + width); ++k)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, tasks[k]));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1 and 2: temporal order.

struct Sweep {
  std::string label;
  ConvergenceResult ei1, ei2;
};

void temporal_order(bool want1, bool want2) {
  const auto t0 = Clock::now();
  std::vector<double> taus;
  for (int k = 4; k <= 9; ++k) taus.push_back(std::ldexp(1.0, -k));
  const double tau_ref = std::ldexp(1.0, -14);

  std::vector<std::function<Sweep()>> tasks;
  for (int p = 0; p < 2; ++p)
    for (double a : {1.0, 10.0, 100.0})
      tasks.push_back([=] {
        RunConfig cfg;
        cfg.grid = GridSpec(1.0, 128);
        cfg.scheme = SchemeConfig::make(potential(p), Sigma::exp(a), Scheme::ei2, 0.01);
        cfg.t_end = 2.0;
        cfg.init = SineInit{0.1};
        const GridFunction ref =
            reference_solution(cfg.scheme, make_initial(cfg.grid, cfg.init), cfg.t_end, tau_ref).u;
        Sweep s;
        s.label = cfg.scheme.potential.name() + ", a=" + fmt("%g", a);
        cfg.scheme.scheme = Scheme::ei1;
        s.ei1 = converge_against(cfg, taus, ref);
        cfg.scheme.scheme = Scheme::ei2;
        s.ei2 = converge_against(cfg, taus, ref);
        return s;
      });
  const std::vector<Sweep> sweeps = run_all(std::move(tasks));
  const double elapsed = seconds_since(t0);

  auto table = [](Outcome& o, const ConvergenceResult& r) {
    std::string line = "      errors:";
    for (const auto& row : r.rows) line += " " + fmt("%.3e", row.l2_error);
    o.note(line);
  };
  Outcome o1, o2;
  for (const auto& s : sweeps) {
    o1.require(s.ei1.slope >= 0.85 && s.ei1.slope <= 1.15, s.label + ": slope " + fmt("%.4f", s.ei1.slope));
    table(o1, s.ei1);
    o2.require(s.ei2.slope >= 1.85 && s.ei2.slope <= 2.15, s.label + ": slope " + fmt("%.4f", s.ei2.slope));
    table(o2, s.ei2);
  }
  o1.require(elapsed < 300.0, "references and both sweeps took " + fmt("%.1f", elapsed) +
                                  " s on " + std::to_string(std::max(1u, std::thread::hardware_concurrency())) +
                                  " thread(s) (target < 300 s)");
  if (want1) report(1, "GSAV-EI1 temporal order, slopes in [0.85, 1.15]", o1);
  if (want2) report(2, "GSAV-EI2 temporal order, slopes in [1.85, 2.15]", o2);
}

// ---------------------------------------------------------------------------
// 3 and 4: unconditional MBP and energy decay.

void unconditional(bool want3, bool want4) {
  std::vector<std::function<std::pair<std::string, TrajectoryCheck>()>> tasks;
  for (int p = 0; p < 2; ++p)
    for (Scheme scheme : {Scheme::ei1, Scheme::ei2})
      for (double tau : {0.01, 0.1, 1.0})
        tasks.push_back([=] {
          RunConfig cfg;
          cfg.grid = GridSpec(1.0, 128);
          cfg.scheme = SchemeConfig::make(potential(p), Sigma::exp(1.0), scheme, 0.01);
          cfg.stepping = UniformStep{tau};
          cfg.t_end = 50.0;
          cfg.init = RandomInit{-0.8, 0.8, 20240611};
          const std::string label = cfg.scheme.potential.name() + " " + to_string(scheme) +
                                    " tau=" + fmt("%g", tau);
          return std::pair{label, check_trajectory(cfg)};
        });
  const auto results = run_all(std::move(tasks));
  Outcome o3, o4;
  for (const auto& [label, t] : results) {
    o3.require(t.mbp.passed, label + ": " + t.mbp.detail);
    o4.require(t.energy.passed, label + ": " + t.energy.detail);
    o4.require(t.auxiliary.passed, label + ": " + t.auxiliary.detail);
  }
  if (want3) report(3, "MBP ||u^n|| <= beta + 1e-12 for every step, t in [0, 50]", o3);
  if (want4) report(4, "modified energy non-increasing (1e-10) and s^n <= E_h(u0) + 1e-10", o4);
}

// ---------------------------------------------------------------------------

void kernel_oracle() {
  Outcome o;
  for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
    const CheckResult r = check_exp_kernels_dense(GridSpec(1.0, 8, b), 50, 20240611);
    o.require(r.passed, std::string(to_string(b)) + ": " + r.detail);
  }
  report(5, "spectral exp/phi1 vs dense oracle, M=8, 50 triples, rel L2 <= 1e-9", o);
}

void lemma_suite() {
  Outcome o;
  const std::uint64_t seed = 20240611;
  for (int p = 0; p < 2; ++p) {
    const Potential pot = potential(p);
    const CheckResult r = check_stabilization_bound(pot, pot.lipschitz(), 10000, seed + p);
    o.require(r.passed, r.name + ": " + r.detail);
  }
  for (int m : {4, 5, 8})
    for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
      const CheckResult r = check_contraction(GridSpec(1.0, m, b), 50, seed + m);
      o.require(r.passed, r.name + ": " + r.detail);
    }
  const CheckResult r = check_phi_inequalities(10000, seed);
  o.require(r.passed, r.name + ": " + r.detail);
  report(6, "lemma suite (stabilization bound, contraction, phi1 inequalities)", o);
}

void adaptive() {
  const auto t0 = Clock::now();
  RunConfig cfg;
  cfg.grid = GridSpec(1.0, 128, Boundary::neumann);
  cfg.scheme = SchemeConfig::make(Potential::flory_huggins(0.8, 1.6), Sigma::exp(1.0), Scheme::ei2, 0.01);
  cfg.t_end = 200.0;
  cfg.init = RandomInit{-0.8, 0.8, 20240611};

  const AdaptiveStep mode{1e-4, 0.1, 1e5};
  RunConfig uniform = cfg;
  cfg.stepping = mode;
  uniform.stepping = UniformStep{0.01};

  std::vector<std::function<TrajectoryCheck()>> tasks{[&] { return check_trajectory(cfg); },
                                                      [&] { return check_trajectory(uniform); }};
  const auto results = run_all(std::move(tasks));
  const TrajectoryCheck& a = results[0];
  const TrajectoryCheck& u = results[1];

  Outcome o;
  o.require(a.mbp.passed, "adaptive MBP: " + a.mbp.detail);
  o.require(a.energy.passed, "adaptive energy: " + a.energy.detail);
  o.require(a.auxiliary.passed, "adaptive auxiliary: " + a.auxiliary.detail);
  o.require(u.mbp.passed && u.energy.passed && u.auxiliary.passed, "uniform tau=0.01 run keeps the invariants");

  double lo = INFINITY, hi = 0.0;
  for (std::size_t k = 1; k < a.rows.size(); ++k) {
    lo = std::min(lo, a.rows[k].tau);
    hi = std::max(hi, a.rows[k].tau);
  }
  o.require(lo >= mode.tau_min && hi <= mode.tau_max,
            "recorded tau in [" + fmt("%.3g", lo) + ", " + fmt("%.3g", hi) + "]");
  o.require(!a.rows.empty() && a.rows.back().t == cfg.t_end,
            "final time " + fmt("%.17g", a.rows.empty() ? 0.0 : a.rows.back().t));
  const double ratio = static_cast<double>(u.steps) / static_cast<double>(a.steps);
  o.require(3 * a.steps <= u.steps, "steps: adaptive " + std::to_string(a.steps) + ", uniform " +
                                        std::to_string(u.steps) + " (ratio " + fmt("%.2f", ratio) + ")");
  o.note("elapsed " + fmt("%.1f", seconds_since(t0)) + " s");
  report(7, "adaptive steps: tau in range, invariants hold, >= 3x fewer steps than tau=0.01", o);
}

void constant_sigma() {
  Outcome o;
  for (int p = 0; p < 2; ++p)
    for (Scheme scheme : {Scheme::ei1, Scheme::ei2, Scheme::stab1}) {
      RunConfig cfg;
      cfg.grid = GridSpec(1.0, 64);
      cfg.scheme = SchemeConfig::make(potential(p), Sigma::constant(), scheme, 0.01);
      cfg.stepping = UniformStep{0.1};
      cfg.t_end = 10.0;
      cfg.init = RandomInit{-0.8, 0.8, 7};
      const RunResult r = run(cfg);
      std::size_t bad = 0;
      for (const auto& row : r.rows) bad += row.g != 1.0;
      const std::string csv = diagnostics_csv(r.rows);
      std::size_t text_ones = 0;
      std::istringstream is(csv);
      std::string line;
      std::getline(is, line);
      while (std::getline(is, line)) text_ones += line.substr(line.rfind(',') + 1) == "1";
      o.require(bad == 0 && text_ones == r.rows.size(),
                cfg.scheme.potential.name() + " " + to_string(scheme) + ": " +
                    std::to_string(r.rows.size()) + " rows with g == 1.0");
    }
  report(8, "constant sigma gives g == 1.0 bitwise in every diagnostics row", o);
}

void fixed_points() {
  Outcome o;
  const SchemeConfig base = SchemeConfig::make(Potential::double_well(), Sigma::exp(1.0), Scheme::ei1, 0.01);
  for (Boundary b : {Boundary::periodic, Boundary::neumann})
    for (Scheme scheme : {Scheme::ei1, Scheme::ei2, Scheme::stab1})
      for (double tau : {0.01, 1.0}) {
        SchemeConfig cfg = base;
        cfg.scheme = scheme;
        const GridFunction one(GridSpec(1.0, 128, b), 1.0);
        SolverState st = SolverState::initial(cfg.potential, one);
        double worst = 0.0;
        for (int n = 0; n < 20; ++n) {
          st = step(cfg, st, tau);
          worst = std::max({worst, norm_inf(st.u - one), std::abs(st.s)});
        }
        o.require(worst <= 1e-14, std::string(to_string(b)) + " " + to_string(scheme) + " tau=" +
                                      fmt("%g", tau) + ": max deviation " + fmt("%.2e", worst));
      }
  report(9, "pure state u = 1 is a fixed point of ei1, ei2, stab1", o);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int k = 1; k < argc; ++k) want.insert(std::atoi(argv[k]));
  if (want.empty())
    for (int k = 1; k <= 9; ++k) want.insert(k);

  const auto t0 = Clock::now();
  try {
    if (want.count(5)) kernel_oracle();
    if (want.count(6)) lemma_suite();
    if (want.count(8)) constant_sigma();
    if (want.count(9)) fixed_points();
    if (want.count(3) || want.count(4)) unconditional(want.count(3), want.count(4));
    if (want.count(7)) adaptive();
    if (want.count(1) || want.count(2)) temporal_order(want.count(1), want.count(2));
  } catch (const std::exception& e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    g_all_passed = false;
  }
  std::printf("total %.1f s\n", seconds_since(t0));
  return g_all_passed ? 0 : 1;
}
