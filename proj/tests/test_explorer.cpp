#include <cmath>

#include <doctest.h>

#include "lgosc/closed_form.hpp"
#include "lgosc/explorer.hpp"
#include "lgosc/special_math.hpp"

using namespace lgosc;

TEST_CASE("grids") {
  const auto lin = linspace(0.0, 1.0, 5);
  REQUIRE(lin.size() == 5);
  CHECK(lin[1] == 0.25);
  CHECK(lin.back() == 1.0);
  const auto lg = logspace(1.0, 100.0, 3);
  CHECK(lg[1] == doctest::Approx(10.0));
  CHECK(lg.back() == 100.0);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), DomainError);
}

TEST_CASE("maximum over the phase") {
  const LgMaximum flat = lg_max_over_phi({0.9, 1.0});
  CHECK(flat.lg == 2.0);

  const LgMaximum best = lg_max_over_phi({0.99, 7.6});
  CHECK(best.lg > 2.0);
  CHECK(best.phi > 0.0);
  CHECK(best.phi < 1.0);
  // golden-section result beats a dense scan
  for (double phi = 0.0005; phi < kPi / 2; phi += 0.0005) CHECK(lg_value({0.99, 7.6}, phi) <= best.lg + 1e-12);
  CHECK_THROWS_AS(lg_max_over_phi({0.99, 7.6}, {0.5, 4.0}), DomainError);
}

TEST_CASE("optimal squeezing") {
  const OptimalGamma opt = optimal_gamma_for_s(0.99);
  CHECK(opt.gamma == doctest::Approx(7.6).epsilon(0.3 / 7.6));
  CHECK(opt.lg > 2.0);
  CHECK(opt.violation);

  CHECK(!optimal_gamma_for_s(0.9).violation);
  CHECK(optimal_gamma_for_s(0.9).lg <= 2.0);

  // gamma* grows like (1 - s)^{-1/2}
  double prev_gamma = 0, first_scaled = 0;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    const OptimalGamma o = optimal_gamma_for_s(1 - eps);
    CHECK(o.gamma > prev_gamma);
    prev_gamma = o.gamma;
    const double scaled = o.gamma * std::sqrt(eps);
    if (first_scaled == 0) first_scaled = scaled;
    CHECK(std::abs(scaled / first_scaled - 1) < 0.15);
  }
  CHECK_THROWS_AS(optimal_gamma_for_s(1.0), DomainError);
}

TEST_CASE("violation region on a coarse grid") {
  RegionOptions options;
  options.search.grid = 200;
  const ViolationRegion region = violation_region(linspace(0.95, 0.999, 15), linspace(2.0, 20.0, 15), options);
  REQUIRE(region.s_cr.has_value());
  REQUIRE(region.gamma_cr.has_value());
  CHECK(*region.s_cr >= 0.980);
  CHECK(*region.s_cr <= 0.986);
  CHECK(*region.gamma_cr >= 3.0);
  CHECK(*region.gamma_cr <= 3.4);
  CHECK(region.best_lg > 2.0);
  CHECK(!region.violation(0, 0));

  const ViolationRegion low = violation_region({0.9}, linspace(1.5, 30.0, 20), options);
  CHECK(!low.s_cr.has_value());
  CHECK(!low.gamma_cr.has_value());
  CHECK(low.max_lg.maxCoeff() <= 2.0);
}

TEST_CASE("scaling limit") {
  const ScalingTable table = scaling_convergence({0.1, 0.24, 0.6, 1.5}, {1e-3, 1e-4, 1e-5, 1e-6});
  REQUIRE(table.rows.size() == 16);
  CHECK(table.sup_decreasing);
  for (const ScalingRow& row : table.rows) {
    CHECK(row.abs_error == doctest::Approx(std::abs(row.lg - row.lambda)));
    CHECK(scaling_variable(row.phi, row.gamma, row.one_minus_s) == doctest::Approx(row.x).epsilon(1e-12));
    if (row.one_minus_s == 1e-6 && row.x == 0.24) CHECK(std::abs(row.lg - 2.106) < 5e-3);
  }
  // each fixed x converges monotonically
  for (int ix = 0; ix < 4; ++ix)
    for (int k = 1; k < 4; ++k) CHECK(table.rows[k * 4 + ix].abs_error < table.rows[(k - 1) * 4 + ix].abs_error);

  CHECK_THROWS_AS(scaling_convergence({0.0}, {1e-3}), DomainError);
  CHECK_THROWS_AS(scaling_convergence({0.2}, {1e-4, 1e-3}), DomainError);

  const LgMaximum path = scaling_path_maximum(1e-6);
  CHECK(path.lg == doctest::Approx(2.106).epsilon(0.005 / 2.106));
  const LgMaximum lam = lambda_maximum();
  CHECK(lam.phi == doctest::Approx(0.24).epsilon(0.02 / 0.24));
  CHECK(lam.lg == doctest::Approx(2.106).epsilon(0.001));
}

TEST_CASE("verify passes at the default tolerance") {
  const VerifyReport report = verify();
  for (const VerifyCheck& c : report.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  CHECK(report.all_passed());
  CHECK(report.checks.size() >= 10);
}

TEST_CASE("verify catches a corrupted closed form") {
  VerifyOptions options;
  options.closed = [](const MeasurementParams& p, double phi) {
    if (p.s() == 1.0 || p.gamma() == 1.0) return 1.0;
    CorrelationTerms t = correlation_terms(p.s(), p.gamma(), phi);
    t.b_plus = t.b_minus;
    t.m = 2 * (t.b_minus - t.b_plus) * t.a / ((t.b_minus - t.a) * (t.b_plus + t.a));
    return correlation_from_terms(t);
  };
  const VerifyReport report = verify(options);
  CHECK(!report.all_passed());
  bool symmetry_failed = false;
  for (const VerifyCheck& c : report.checks)
    if (c.name.rfind("symmetry_", 0) == 0 && !c.passed) symmetry_failed = true;
  CHECK(symmetry_failed);
}

TEST_CASE("verify with zero tolerance fails everything") {
  VerifyOptions options;
  options.tol = 0.0;
  const VerifyReport report = verify(options);
  for (const VerifyCheck& c : report.checks) {
    CAPTURE(c.name);
    CHECK(!c.passed);
  }
}
