#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sqrtwell/model.hpp"
#include "sqrtwell/util.hpp"

using namespace sqrtwell;

namespace {
const PhysParams kWell4{1.0, 1.0, 4.0, 2.0};  // V1 defaults to -4
}

TEST_CASE("PhysParams defaults V1 to -V0 and validates", "[model]") {
  CHECK(kWell4.V1 == -4.0);
  CHECK(kWell4.coupling() == Catch::Approx(8.0));
  const PhysParams custom{1.0, 1.0, 4.0, 2.0, 1.5};
  CHECK(custom.V1 == 1.5);
  CHECK_THROWS_AS(validate(PhysParams{-1.0, 1.0, 4.0, 2.0}), DomainError);
  CHECK_THROWS_AS(validate(PhysParams{1.0, 0.0, 4.0, 2.0}), DomainError);
  CHECK_THROWS_AS(validate(PhysParams{1.0, 1.0, 4.0, -2.0}), DomainError);
  CHECK(is_vanishing_well(kWell4));
  CHECK_FALSE(is_vanishing_well(custom));
  CHECK_FALSE(is_vanishing_well(PhysParams{1.0, 1.0, 0.0, 2.0}));
}

TEST_CASE("potential reproduces closed-form values", "[model]") {
  // At x = sigma ln(4/3): exp(-x/sigma) = 3/4, sqrt(1-3/4) = 1/2, V = 4 - 8 = -4.
  const double x_half = 2.0 * std::log(4.0 / 3.0);
  CHECK(potential(kWell4, x_half) == Catch::Approx(-4.0).epsilon(1e-14));

  const PhysParams null_well{1.0, 1.0, 0.0, 2.0};
  CHECK(potential(null_well, 0.7) == 0.0);

  // Far field: V ~ -(V0/2) exp(-x/sigma) within 1% at x = 20.
  const double v20 = potential(kWell4, 20.0);
  const double far = -2.0 * std::exp(-10.0);
  CHECK(std::fabs(v20 - far) / std::fabs(far) < 0.01);

  CHECK_THROWS_AS(potential(kWell4, 0.0), DomainError);
  CHECK_THROWS_AS(potential(kWell4, -1.0), DomainError);
}

TEST_CASE("potential is strictly increasing for the attractive well", "[model]") {
  double prev = potential(kWell4, 1e-6);
  for (double x = 1e-3; x < 80.0; x *= 1.18) {
    const double v = potential(kWell4, x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("potential approaches V0 + V1 far out", "[model]") {
  const PhysParams p{2.0, 1.5, 3.0, 1.0, 0.5};
  const double limit = p.V0 + p.V1;
  CHECK(std::fabs(potential(p, 61.0 * p.sigma) - limit) < 1e-12);
  CHECK(std::fabs(potential(kWell4, 61.0 * kWell4.sigma) - 0.0) < 1e-12);
}

TEST_CASE("x V(x) is absolutely integrable", "[model]") {
  // The tail quadrature of |x V(x)| must converge as the upper limit grows.
  auto tail_integral = [](double X0, double X1) {
    const auto xs = linspace(X0, X1, 2001);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(std::fabs(x * potential(kWell4, x)));
    return simpson_nonuniform(xs, ys);
  };
  // Stay inside the range where the exponentially small tail is still
  // representable (V underflows to exactly zero beyond roughly 36 sigma).
  const double t1 = tail_integral(10.0, 20.0);
  const double t2 = tail_integral(20.0, 40.0);
  const double t3 = tail_integral(40.0, 70.0);
  CHECK(t2 < 0.05 * t1);
  CHECK(t3 < 1e-4 * t2);
  // Near-origin part is integrable too: x * x^{-1/2} = x^{1/2}.
  const auto xs = graded_mesh(1.0, 1.0, 4000, 1);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::fabs(x * potential(kWell4, x)));
  CHECK(std::isfinite(simpson_nonuniform(xs, ys)));
}

TEST_CASE("coordinate map hits its anchor points", "[model]") {
  CHECK(coord_map(kWell4, 0.0) == 0.0);
  CHECK(coord_map(kWell4, 2.0 * std::log(4.0 / 3.0)) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(coord_map(kWell4, -0.1), DomainError);

  // Far tail: the complement stays meaningful where z itself rounds to 1.
  const double comp = coord_map_complement(kWell4, 40.0 * kWell4.sigma);
  CHECK(comp > 0.0);
  CHECK(comp < 1e-17);
  CHECK(comp == Catch::Approx(std::exp(-40.0) / 2.0).epsilon(1e-12));
  CHECK(coord_map(kWell4, 40.0 * kWell4.sigma) <= 1.0);
}

TEST_CASE("coordinate inverse round-trips", "[model]") {
  CHECK(coord_inverse(kWell4, 0.0) == 0.0);
  CHECK(coord_inverse(kWell4, 0.5) == Catch::Approx(2.0 * std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(coord_inverse(kWell4, 1.0), DomainError);
  CHECK_THROWS_AS(coord_inverse(kWell4, -0.2), DomainError);

  const double x = 3.7;
  const double x_rt = coord_inverse(kWell4, coord_map(kWell4, x));
  CHECK(std::fabs(x - x_rt) < 1e-12 * x);

  // Bijection on [1e-6 sigma, 50 sigma] within 1e-12 relative.  The far tail
  // only carries enough precision through the complement 1 - z, so the
  // complement pair is exercised over the whole range and the direct pair
  // where z retains full accuracy.
  for (double xx : logspace(1e-6 * kWell4.sigma, 50.0 * kWell4.sigma, 60)) {
    const double c = coord_map_complement(kWell4, xx);
    const double back_c = coord_inverse_complement(kWell4, c);
    CHECK(std::fabs(back_c - xx) <= 1e-12 * std::max(1.0, xx));
    if (xx <= 10.0 * kWell4.sigma) {
      const double z = coord_map(kWell4, xx);
      REQUIRE(z < 1.0);
      const double back = coord_inverse(kWell4, z);
      CHECK(std::fabs(back - xx) <= 1e-12 * std::max(1.0, xx));
    }
  }
  CHECK(coord_inverse_complement(kWell4, 1.0) == 0.0);
  CHECK_THROWS_AS(coord_inverse_complement(kWell4, 0.0), DomainError);
  CHECK_THROWS_AS(coord_inverse_complement(kWell4, 1.5), DomainError);
}

TEST_CASE("asymptotes match the potential in their regimes", "[model]") {
  // The near-origin relative deviation scales like sqrt(x/sigma), so it is
  // ~7.5% at x = 0.01 and drops below 5% by x = 0.004.
  const auto near = asymptotes(kWell4, 0.01);
  CHECK(near.near_origin == Catch::Approx(-4.0 / std::sqrt(0.005)).epsilon(1e-14));
  const double v = potential(kWell4, 0.01);
  CHECK(std::fabs(v - near.near_origin) / std::fabs(v) < 0.08);
  const auto nearer = asymptotes(kWell4, 0.004);
  const double v2 = potential(kWell4, 0.004);
  CHECK(std::fabs(v2 - nearer.near_origin) / std::fabs(v2) < 0.05);

  const auto far = asymptotes(kWell4, 30.0);
  CHECK(far.far_field == Catch::Approx(-2.0 * std::exp(-15.0)).epsilon(1e-14));
  CHECK(std::fabs(potential(kWell4, 30.0) / far.far_field - 1.0) < 1e-6);

  const PhysParams null_well{1.0, 1.0, 0.0, 2.0};
  const auto zero = asymptotes(null_well, 1.0);
  CHECK(zero.near_origin == 0.0);
  CHECK(zero.far_field == 0.0);

  CHECK_THROWS_AS(asymptotes(PhysParams{1.0, 1.0, 4.0, 2.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(asymptotes(kWell4, 0.0), DomainError);
}
