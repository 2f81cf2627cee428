#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsav/errors.hpp"
#include "gsav/random.hpp"
#include "gsav/timestep.hpp"

using namespace gsav;

TEST_SUITE("timestep") {

TEST_CASE("next_tau examples") {
  const AdaptiveStep a{1e-4, 0.1, 1e5};
  CHECK(next_tau(a, 2.0, 2.0, 0.01) == 0.1);
  CHECK(next_tau(a, 0.0, std::numeric_limits<double>::infinity(), 0.01) == 1e-4);
  CHECK(next_tau(a, 0.0, 1e200, 1e-200) == 1e-4);
  const double rate = std::sqrt(3.0 / 1e5);
  CHECK(next_tau(a, 1.0, 1.0 - rate * 0.02, 0.02) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(next_tau(a, 1.0, 1.0, 0.0), ContractViolation);
}

TEST_CASE("next_tau stays in range and is monotone in the energy rate") {
  const AdaptiveStep a{1e-3, 0.5, 1e3};
  CounterRng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const double r1 = rng.uniform(0.0, 5.0), r2 = rng.uniform(0.0, 5.0);
    const double t1 = next_tau(a, 0.0, -r1 * 0.1, 0.1), t2 = next_tau(a, 0.0, -r2 * 0.1, 0.1);
    CHECK(t1 >= a.tau_min);
    CHECK(t1 <= a.tau_max);
    if (r1 <= r2) CHECK(t1 >= t2);
  }
}

TEST_CASE("controller rejects invalid modes") {
  CHECK_THROWS_AS(StepController(UniformStep{0.0}), ContractViolation);
  CHECK_THROWS_AS(StepController(AdaptiveStep{0.2, 0.1, 1.0}), ContractViolation);
  CHECK_THROWS_AS(StepController(AdaptiveStep{0.0, 0.1, 1.0}), ContractViolation);
  CHECK_THROWS_AS(StepController(AdaptiveStep{0.01, 0.1, 0.0}), ContractViolation);
}

TEST_CASE("uniform controller lands on t_end") {
  StepController c(UniformStep{0.3});
  CHECK(c.propose(0.0, 1.0, 0.0) == 0.3);
  CHECK(c.propose(0.9, 1.0, 0.0) == doctest::Approx(0.1));
  // A remainder within rounding of tau is one nominal step.
  CHECK(c.propose(0.7 - 1e-15, 1.0, 0.0) == 0.3);
  CHECK_THROWS_AS(c.propose(1.0, 1.0, 0.0), ContractViolation);
}

TEST_CASE("adaptive controller starts at tau_min and follows the energy") {
  const AdaptiveStep a{1e-4, 0.1, 1e5};
  StepController c(a);
  CHECK(c.propose(0.0, 10.0, 1.0) == 1e-4);
  c.accept(1e-4, 1.0, 1.0);
  CHECK(c.propose(1e-4, 10.0, 1.0) == 0.1);
  c.accept(0.1, 1.0, 0.5);
  CHECK(c.propose(0.1001, 10.0, 0.5) == next_tau(a, 1.0, 0.5, 0.1));
  CHECK(c.last_tau().value() == 0.1);
  CHECK(c.last_energy().value() == 0.5);
}

TEST_CASE("adaptive final step avoids slivers shorter than tau_min") {
  const AdaptiveStep a{0.01, 0.1, 1.0};
  StepController c(a);
  c.accept(0.01, 1.0, 1.0);  // zero rate: next proposal is tau_max
  CHECK(c.propose(0.0, 0.05, 1.0) == 0.05);
  CHECK(c.propose(0.0, 0.105, 1.0) == 0.105 * 0.5);
  CHECK(c.propose(0.0, 0.2, 1.0) == 0.1);
  CHECK(c.propose(0.0, 0.1 + 0.005, 1.0) >= a.tau_min);
}

}  // TEST_SUITE
