#include <doctest.h>

#include <cmath>

#include "epflow/quadrature.hpp"
#include "test_support.hpp"

using epflow::QuadratureConfig;
namespace quad = epflow::quad;

namespace {

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); }

}  // namespace

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.abs_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), epflow::invalid_input);
  cfg = {};
  cfg.max_panels = 4;
  CHECK_THROWS_AS(cfg.validate(), epflow::invalid_input);
  cfg = {};
  cfg.tail_sigma_multiplier = 2.0;
  CHECK_THROWS_AS(cfg.validate(), epflow::invalid_input);
}

TEST_CASE("gaussian mass, second moment, and entropy integrals") {
  QuadratureConfig cfg;
  auto mass = quad::integrate_hint<double>([](double x) { return std_normal_pdf(x); }, 0.0, 1.0, cfg);
  CHECK(std::fabs(mass.value - 1.0) < 1e-12);
  CHECK(mass.error_estimate < 1e-10);

  auto second =
      quad::integrate_hint<double>([](double x) { return x * x * std_normal_pdf(x); }, 0.0, 1.0, cfg);
  CHECK(std::fabs(second.value - 1.0) < 1e-12);

  // closed-form Gaussian entropy integral: -(log(2 pi) + 1)/2
  auto ent = quad::integrate_hint<double>(
      [](double x) {
        const double p = std_normal_pdf(x);
        return p > 0 ? p * std::log(p) : 0.0;
      },
      0.0, 1.0, cfg);
  const double expected = -0.5 * std::log(2 * M_PI) - 0.5;
  CHECK(ent.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-1.4189385).epsilon(1e-7));
}

TEST_CASE("error estimates are honest under tolerance tightening") {
  QuadratureConfig loose;
  loose.abs_tol = 1e-8;
  loose.rel_tol = 1e-6;
  QuadratureConfig tight;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 1e-13;

  auto f = [](double x) { return std::exp(-x * x / 2.7) * std::cos(3 * x); };
  auto coarse = quad::integrate<double>(f, -12.0, 12.0, loose);
  auto fine = quad::integrate<double>(f, -12.0, 12.0, tight);
  CHECK(std::fabs(coarse.value - fine.value) <= coarse.error_estimate);
  CHECK(fine.error_estimate < coarse.error_estimate + 1e-15);
}

TEST_CASE("oscillatory integrand still converges") {
  QuadratureConfig cfg;
  auto res = quad::integrate<double>([](double x) { return std::sin(40 * x); }, 0.0, 1.0, cfg);
  const double expected = (1.0 - std::cos(40.0)) / 40.0;
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(res.panels >= 16);
}

TEST_CASE("non-convergence raises an accuracy error carrying the best estimate") {
  QuadratureConfig cfg;
  cfg.max_panels = 8;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-15;
  bool raised = false;
  try {
    quad::integrate<double>([](double x) { return std::sqrt(std::fabs(x)); }, -1.0, 1.0, cfg);
  } catch (const epflow::accuracy_error& e) {
    raised = true;
    // true value is 4/3; the salvage estimate must be in the neighborhood
    CHECK(std::fabs(e.best_value() - 4.0 / 3.0) < 0.05);
    CHECK(e.error_estimate() > 0.0);
  }
  CHECK(raised);
}

TEST_CASE("degenerate and inverted intervals") {
  QuadratureConfig cfg;
  auto zero = quad::integrate<double>([](double) { return 1.0; }, 2.0, 2.0, cfg);
  CHECK(zero.value == 0.0);
  CHECK_THROWS_AS(quad::integrate<double>([](double) { return 1.0; }, 3.0, 2.0, cfg),
                  epflow::invalid_input);
}

TEST_CASE("non-finite integrand values are reported") {
  QuadratureConfig cfg;
  CHECK_THROWS_AS(quad::integrate<double>([](double x) { return 1.0 / x; }, -1.0, 1.0, cfg),
                  epflow::accuracy_error);
}

TEST_CASE("long double instantiation reaches tighter floors") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-16;
  cfg.rel_tol = 1e-16;
  auto mass = quad::integrate<long double>(
      [](long double x) {
        return std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
      },
      -14.0L, 14.0L, cfg);
  CHECK(static_cast<double>(std::fabs(mass.value - 1.0L)) < 1e-15);
}
