#include <doctest.h>

#include <cmath>
#include <string>

#include "gsav/harness.hpp"
#include "gsav/random.hpp"
#include "gsav/schemes.hpp"

using namespace gsav;

namespace {

GridFunction random_field(const GridSpec& spec, std::uint64_t seed, double bound) {
  CounterRng rng(seed);
  GridFunction v(spec);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = rng.uniform(-bound, bound);
  return v;
}

bool bitwise_equal(const GridFunction& a, const GridFunction& b) {
  return std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

// Dense evaluation of g_n, N and L for one first-order step.
struct DenseStep {
  Eigen::MatrixXd l;
  Eigen::VectorXd u, n, f;
  double g;
};

DenseStep dense_parts(const SchemeConfig& cfg, const SolverState& st) {
  const GridSpec& g = st.u.spec();
  const double h2 = g.h() * g.h();
  DenseStep d;
  d.u = to_vector(st.u);
  d.f.resize(d.u.size());
  double e1 = 0.0;
  for (Eigen::Index k = 0; k < d.u.size(); ++k) {
    d.f[k] = cfg.potential.f(d.u[k]);
    e1 += h2 * cfg.potential.F(d.u[k]);
  }
  d.g = cfg.sigma.value(st.s) / cfg.sigma.value(e1);
  d.n = d.g * (d.f + cfg.kappa * d.u);
  const Eigen::Index n = d.u.size();
  d.l = cfg.kappa * d.g * Eigen::MatrixXd::Identity(n, n) - cfg.eps * cfg.eps * dense_laplacian(g);
  return d;
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("scheme names round trip") {
  for (Scheme s : {Scheme::ei1, Scheme::ei2, Scheme::stab1})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(scheme_from_string("rk4"), ContractViolation);
}

TEST_CASE("initial auxiliary variable equals the bulk energy exactly") {
  const Potential p = Potential::flory_huggins(0.8, 1.6);
  const GridFunction u = random_field(GridSpec(1.0, 32), 3, 0.8);
  const SolverState st = SolverState::initial(p, u);
  CHECK(st.s == bulk_energy(p, u));
  CHECK(st.t == 0.0);
  CHECK(st.step == 0);
}

TEST_CASE("nonlinear term examples") {
  const GridSpec g(1.0, 8);
  const SchemeConfig cfg = SchemeConfig::make(Potential::double_well(), Sigma::exp(1.0), Scheme::ei1);
  const GridFunction one(g, 1.0);
  const GridFunction n1 = nonlinear_term(cfg, one, 0.0, 0.75);
  for (std::size_t k = 0; k < n1.size(); ++k) CHECK(n1[k] == cfg.kappa * 0.75);
  const GridFunction zero(g);
  CHECK(norm_inf(nonlinear_term(cfg, zero, bulk_energy(cfg.potential, zero), 1.3)) == 0.0);
}

TEST_CASE("nonlinear term respects the kappa beta g bound") {
  for (const Potential& p : {Potential::double_well(), Potential::flory_huggins(0.8, 1.6)}) {
    const SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(1.0), Scheme::ei1);
    const GridSpec g(1.0, 16);
    CounterRng rng(9);
    for (std::uint64_t t = 0; t < 20; ++t) {
      const GridFunction u = random_field(g, 50 + t, p.beta());
      const double s = bulk_energy(p, u) + rng.uniform(-0.5, 0.5);
      const double gv = g_ratio(cfg.sigma, s, bulk_energy(p, u));
      CHECK(norm_inf(nonlinear_term(cfg, u, s, gv)) <= cfg.kappa * p.beta() * gv * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("pure state and zero field are fixed points") {
  const SchemeConfig base = SchemeConfig::make(Potential::double_well(), Sigma::exp(1.0), Scheme::ei1);
  for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
    const GridSpec g(1.0, 16, b);
    for (Scheme scheme : {Scheme::ei1, Scheme::ei2, Scheme::stab1}) {
      SchemeConfig cfg = base;
      cfg.scheme = scheme;
      for (double tau : {0.01, 1.0}) {
        const SolverState one = SolverState::initial(cfg.potential, GridFunction(g, 1.0));
        CHECK(one.s == 0.0);
        const SolverState next = step(cfg, one, tau);
        CHECK(norm_inf(next.u - one.u) <= 1e-14);
        CHECK(std::abs(next.s) <= 1e-14);
        CHECK(next.t == tau);
        CHECK(next.step == 1);

        const SolverState zero = SolverState::initial(cfg.potential, GridFunction(g));
        const SolverState z1 = step(cfg, zero, tau);
        CHECK(norm_inf(z1.u) == 0.0);
        CHECK(z1.s == zero.s);
      }
    }
  }
}

TEST_CASE("ei1 step matches dense formulas at M=8") {
  for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
    for (const Potential& p : {Potential::double_well(), Potential::flory_huggins(0.8, 1.6)}) {
      const GridSpec g(1.0, 8, b);
      const SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(10.0), Scheme::ei1, 0.05);
      SolverState st = SolverState::initial(p, random_field(g, 12, 0.9 * p.beta()));
      st.s -= 0.01;
      const double tau = 0.3;
      const SolverState next = step_ei1(cfg, st, tau);

      const DenseStep d = dense_parts(cfg, st);
      const Eigen::VectorXd expected = dense_exp(-d.l, tau) * d.u + tau * dense_phi1(d.l, tau) * d.n;
      CHECK((to_vector(next.u) - expected).norm() <= 1e-9 * expected.norm());
      const double h2 = g.h() * g.h();
      const double s_expected = st.s - d.g * h2 * d.f.dot(expected - d.u);
      CHECK(next.s == doctest::Approx(s_expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("stab1 step matches a dense linear solve at M=8") {
  for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
    const GridSpec g(1.0, 8, b);
    const Potential p = Potential::flory_huggins(0.8, 1.6);
    const SchemeConfig cfg = SchemeConfig::make(p, Sigma::tanh_shift(), Scheme::stab1, 0.05);
    const SolverState st = SolverState::initial(p, random_field(g, 13, 0.8));
    for (double tau : {0.01, 0.5}) {
      const SolverState next = step_stab1(cfg, st, tau);
      const DenseStep d = dense_parts(cfg, st);
      const Eigen::Index n = d.u.size();
      const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + tau * d.l;
      const Eigen::VectorXd expected = a.partialPivLu().solve(d.u + tau * d.n);
      CHECK((to_vector(next.u) - expected).norm() <= 1e-10 * expected.norm());
    }
  }
}

TEST_CASE("ei2 with and without the shared transform are bitwise identical") {
  const Potential p = Potential::flory_huggins(0.8, 1.6);
  const SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(10.0), Scheme::ei2);
  for (Boundary b : {Boundary::periodic, Boundary::neumann}) {
    SolverState st = SolverState::initial(p, random_field(GridSpec(1.0, 32, b), 14, 0.8));
    for (int n = 0; n < 5; ++n) {
      const Ei2StepDetail a = step_ei2_detailed(cfg, st, 0.05, true);
      const Ei2StepDetail c = step_ei2_detailed(cfg, st, 0.05, false);
      CHECK(bitwise_equal(a.next.u, c.next.u));
      CHECK(a.next.s == c.next.s);
      CHECK(a.predictor_s == c.predictor_s);
      CHECK(bitwise_equal(a.predictor_u, step_ei1(cfg, st, 0.05).u));
      st = a.next;
    }
  }
}

TEST_CASE("constant sigma makes ei1 independent of the auxiliary value") {
  const SchemeConfig cfg = SchemeConfig::make(Potential::double_well(), Sigma::constant(), Scheme::ei1);
  SolverState st = SolverState::initial(cfg.potential, random_field(GridSpec(1.0, 16), 15, 0.8));
  const SolverState a = step_ei1(cfg, st, 0.1);
  st.s += 0.37;
  const SolverState b = step_ei1(cfg, st, 0.1);
  CHECK(bitwise_equal(a.u, b.u));
}

TEST_CASE("ei2 local error is third order") {
  const Potential p = Potential::double_well();
  const SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(1.0), Scheme::ei2);
  const GridSpec g(1.0, 64);
  const SolverState start = reference_solution(cfg, init_sine(g, 0.1), 0.25, 1.0 / 1024);
  auto one_step_error = [&](double tau) {
    SolverState ref = start;
    const long fine = 256;
    for (long n = 0; n < fine; ++n) ref = step_ei2(cfg, ref, tau / fine);
    return norm2(step_ei2(cfg, start, tau).u - ref.u);
  };
  const double e1 = one_step_error(0.125), e2 = one_step_error(0.0625);
  const double ratio = e1 / e2;
  MESSAGE("local error ratio " << ratio);
  CHECK(ratio >= 6.5);
  CHECK(ratio <= 9.5);
}

TEST_CASE("reference solution examples and Richardson self-consistency") {
  const Potential p = Potential::double_well();
  const SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(1.0), Scheme::ei2);
  const GridSpec g(1.0, 32);
  const GridFunction u0 = init_sine(g, 0.1);

  const SolverState same = reference_solution(cfg, u0, 0.0, 0.01);
  CHECK(bitwise_equal(same.u, u0));
  const SolverState pure = reference_solution(cfg, GridFunction(g, 1.0), 0.5, 0.01);
  CHECK(norm_inf(pure.u - GridFunction(g, 1.0)) <= 1e-14);
  CHECK_THROWS_AS(reference_solution(cfg, u0, 1.0, 0.3), ContractViolation);

  const double t_end = 1.0;
  const GridFunction a = reference_solution(cfg, u0, t_end, 1.0 / 32).u;
  const GridFunction b = reference_solution(cfg, u0, t_end, 1.0 / 64).u;
  const GridFunction c = reference_solution(cfg, u0, t_end, 1.0 / 128).u;
  const double d1 = norm2(a - b), d2 = norm2(b - c);
  MESSAGE("Richardson ratio " << d1 / d2);
  CHECK(d1 / d2 >= 3.5);
  CHECK(d1 / d2 <= 4.5);
  CHECK(d1 <= 10.0 * (1.0 / 32) * (1.0 / 32));
}

TEST_CASE("failures carry the step context") {
  const Potential p = Potential::flory_huggins(0.8, 1.6);
  SchemeConfig cfg = SchemeConfig::make(p, Sigma::exp(100.0), Scheme::ei1);
  SolverState st = SolverState::initial(p, random_field(GridSpec(1.0, 8), 16, 0.5));
  st.s += 20.0;  // exp(100 * 20) overflows
  st.step = 41;
  try {
    step_ei1(cfg, st, 0.1);
    FAIL("expected a numeric failure");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("step 42") != std::string::npos);
  }

  SchemeConfig weak = SchemeConfig::make(p, Sigma::exp(1.0), Scheme::ei1);
  GridFunction bad(GridSpec(1.0, 8), 0.5);
  bad(3, 3) = 1.0;
  CHECK_THROWS_AS(step_ei1(weak, SolverState{bad, 0.0, 0.0, 0}, 0.1), DomainError);
  CHECK_THROWS_AS(step_ei1(weak, SolverState::initial(p, GridFunction(GridSpec(1.0, 8))), 0.0),
                  ContractViolation);
}

}  // TEST_SUITE
