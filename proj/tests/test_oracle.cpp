#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/ode.hpp"
#include "sqrtwell/oracle.hpp"
#include "sqrtwell/scattering.hpp"
#include "sqrtwell/states.hpp"

using namespace sqrtwell;

namespace {

const PhysParams kWell4{1.0, 1.0, 4.0, 2.0};
const PhysParams kWell6{1.0, 1.0, 6.0, 2.0};
const PhysParams kWell10{1.0, 1.0, 10.0, 2.0};
const PhysParams kWell15{1.0, 1.0, 15.0, 2.0};

const std::vector<double> kLevels4 = {-2.1680511386371134, -0.41663274319365738,
                                      -0.029469505337756805};
const std::vector<double> kLevels6 = {-4.3389492514156982, -1.1206681165856933,
                                      -0.23848954351610664,
                                      -0.0055271765899563699};

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace

TEST_CASE("adaptive integrator: decay, rotation, both directions", "[oracle]") {
  // Pure exponential decay, forward.
  std::array<double, 1> y1 = {1.0};
  ode_integrate<1>(
      [](double, const std::array<double, 1>& y, std::array<double, 1>& d) {
        d[0] = -y[0];
      },
      0.0, 5.0, y1, OdeOptions{});
  CHECK(std::fabs(y1[0] - std::exp(-5.0)) < 1e-9 * std::exp(-5.0));

  // And backward.
  ode_integrate<1>(
      [](double, const std::array<double, 1>& y, std::array<double, 1>& d) {
        d[0] = -y[0];
      },
      5.0, 0.0, y1, OdeOptions{});
  CHECK(std::fabs(y1[0] - 1.0) < 1e-8);

  // One full turn of the harmonic rotation returns the state.
  std::array<double, 2> y2 = {1.0, 0.0};
  ode_integrate<2>(
      [](double, const std::array<double, 2>& y, std::array<double, 2>& d) {
        d[0] = y[1];
        d[1] = -y[0];
      },
      0.0, 2.0 * pi, y2, OdeOptions{});
  CHECK(std::fabs(y2[0] - 1.0) < 1e-8);
  CHECK(std::fabs(y2[1]) < 1e-8);

  CHECK_THROWS_AS(
      ode_integrate<1>(
          [](double, const std::array<double, 1>&, std::array<double, 1>& d) {
            d[0] = 0.0;
          },
          0.0, 1.0, y1, OdeOptions{.rtol = -1.0}),
      DomainError);
}

TEST_CASE("shooting survives exponential growth via rescaling", "[oracle]") {
  // A deep off-eigenvalue shot grows like e^{kappa x} with kappa*X ~ 400;
  // the in-flight rescaling must keep the state finite with the node count
  // intact.
  const PotentialFn V = [](double x) { return potential(kWell4, x); };
  const detail::Shot s = detail::shoot(V, 2.0, -15.0, 2e-8, 80.0, 1e-10);
  CHECK(std::isfinite(s.end_value));
  CHECK(s.nodes == 0);
}

TEST_CASE("self-test: half-line harmonic oscillator and free particle",
          "[oracle]") {
  // psi(0) = 0 keeps only the odd oscillator states: E = 1.5, 3.5, 5.5.
  const PotentialFn ho = [](double x) { return 0.5 * x * x; };
  ShootingConfig cfg;
  cfg.x0 = 1e-8;
  cfg.X_max = 12.0;
  cfg.rtol = 1e-11;
  const std::vector<double> lv =
      oracle_eigenvalues_custom(ho, 2.0, 0.5, 6.9, cfg);
  REQUIRE(lv.size() == 3);
  CHECK(std::fabs(lv[0] - 1.5) < 1e-8);
  CHECK(std::fabs(lv[1] - 3.5) < 1e-8);
  CHECK(std::fabs(lv[2] - 5.5) < 1e-8);

  // No potential: the regular solution is exactly sin(kx)/k, zero phase.
  const PotentialFn free_p = [](double) { return 0.0; };
  ShootingConfig fcfg;
  fcfg.x0 = 1e-8;
  fcfg.X_max = 60.0;
  CHECK(std::fabs(oracle_far_field_phase_custom(free_p, 2.0, 1.0,
                                                std::sqrt(2.0), fcfg)) < 1e-6);
}

TEST_CASE("well eigenvalues match the analytic spectra", "[oracle]") {
  const std::vector<double> e4 = oracle_eigenvalues(kWell4);
  REQUIRE(e4.size() == kLevels4.size());
  for (std::size_t i = 0; i < e4.size(); ++i) {
    CHECK(rel_err(e4[i], kLevels4[i]) < 1e-5);
    CHECK(rel_err(e4[i], kLevels4[i]) < 1e-6);  // actually much tighter
    CHECK(e4[i] < 0.0);
  }

  const std::vector<double> e6 = oracle_eigenvalues(kWell6);
  REQUIRE(e6.size() == kLevels6.size());
  for (std::size_t i = 0; i < e6.size(); ++i)
    CHECK(rel_err(e6[i], kLevels6[i]) < 1e-5);

  // Counts for the two deeper wells agree with the threshold node count.
  CHECK(static_cast<int>(oracle_eigenvalues(kWell10).size()) ==
        zero_energy_node_count(kWell10));
  CHECK(static_cast<int>(oracle_eigenvalues(kWell15).size()) ==
        zero_energy_node_count(kWell15));
}

TEST_CASE("eigenvalues insensitive to tolerance and inner start", "[oracle]") {
  const std::vector<double> base = oracle_eigenvalues(kWell4);

  ShootingConfig tight;
  tight.rtol = 5e-11;
  const std::vector<double> fine = oracle_eigenvalues(kWell4, tight);
  REQUIRE(fine.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(rel_err(fine[i], base[i]) < 1e-7);

  ShootingConfig shifted;
  shifted.x0 = 1e-6 * kWell4.sigma;
  const std::vector<double> moved = oracle_eigenvalues(kWell4, shifted);
  REQUIRE(moved.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(rel_err(moved[i], base[i]) < 1e-6);
}

TEST_CASE("far-field phases: frozen values and analytic cross-check",
          "[oracle]") {
  CHECK(std::fabs(oracle_far_field_phase(kWell4, 0.5) - (-1.4326583)) < 1e-6);
  CHECK(std::fabs(oracle_scattering_phase(kWell4, 0.5) - 0.13813802) < 1e-6);
  CHECK(std::fabs(oracle_far_field_phase(kWell4, 2.0) - (-2.9680912)) < 1e-6);
  CHECK(std::fabs(oracle_scattering_phase(kWell4, 2.0) - (-1.3972949)) < 1e-6);

  // The independent paths agree modulo pi.
  for (double E : {0.5, 1.0, 2.0, 5.0}) {
    const double diff =
        reduce_phase(oracle_scattering_phase(kWell4, E) -
                     phase_shift(kWell4, E).delta);
    CHECK(std::fabs(diff) < 1e-4);
  }

  // Far-field maturity: doubling the cutoff barely moves the phase.
  ShootingConfig wide;
  wide.X_max = 160.0;
  const double d1 = oracle_scattering_phase(kWell4, 1.0);
  const double d2 = oracle_scattering_phase(kWell4, 1.0, wide);
  CHECK(std::fabs(reduce_phase(d2 - d1)) < 1e-5);
}

TEST_CASE("oracle input validation and fit failure", "[oracle]") {
  ShootingConfig bad;
  bad.x0 = 5.0;
  bad.X_max = 1.0;
  CHECK_THROWS_AS(oracle_eigenvalues(kWell4, bad), DomainError);

  ShootingConfig neg;
  neg.rtol = -1.0;
  CHECK_THROWS_AS(oracle_eigenvalues(kWell4, neg), DomainError);

  CHECK_THROWS_AS(oracle_eigenvalues(PhysParams{1.0, 1.0, 4.0, 2.0, 1.0}),
                  DomainError);
  CHECK_THROWS_AS(oracle_scattering_phase(kWell4, -1.0), DomainError);
  CHECK_THROWS_AS(oracle_scattering_phase(kWell4, 0.0), DomainError);

  ShootingConfig unset;  // custom entry points refuse implicit extents
  CHECK_THROWS_AS(
      oracle_eigenvalues_custom([](double) { return 0.0; }, 2.0, -1.0, 1.0,
                                unset),
      DomainError);

  // A deliberately wrong fit frequency cannot represent the tail.
  const PotentialFn free_p = [](double) { return 0.0; };
  ShootingConfig fcfg;
  fcfg.x0 = 1e-8;
  fcfg.X_max = 60.0;
  CHECK_THROWS_AS(oracle_far_field_phase_custom(free_p, 2.0, 1.0,
                                                1.05 * std::sqrt(2.0), fcfg),
                  FitError);

  // A window too short to hold enough samples.
  ShootingConfig tiny;
  tiny.x0 = 1e-8;
  tiny.X_max = 0.2;
  CHECK_THROWS_AS(
      oracle_far_field_phase_custom(free_p, 2.0, 1.0, std::sqrt(2.0), tiny),
      FitError);
}
