#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "epflow/bell.hpp"
#include "test_support.hpp"

using epflow::bigint;
using epflow::rational;
namespace bell = epflow::bell;

namespace {

std::span<const rational> rspan(const std::vector<rational>& v) { return {v.data(), v.size()}; }
std::span<const double> dspan(const std::vector<double>& v) { return {v.data(), v.size()}; }

}  // namespace

TEST_CASE("binomial coefficients are exact Pascal entries") {
  CHECK(bell::binomial(0, 0) == 1);
  CHECK(bell::binomial(4, 2) == 6);
  CHECK(bell::binomial(10, 3) == 120);
  CHECK(bell::binomial(5, 7) == 0);
  CHECK(bell::binomial(5, -1) == 0);
  // past the 64-bit factorial overflow point
  CHECK(bell::binomial(64, 32) == bigint("1832624140942590534"));
  CHECK(bell::factorial_exact(21) == bigint("51090942171709440000"));
}

TEST_CASE("bell_complete_all: base cases and small closed forms") {
  std::vector<rational> x1{rational(7, 3)};
  auto b1 = bell::bell_complete_all(rspan(x1), 1);
  CHECK(b1[0] == 1);
  CHECK(b1[1] == rational(7, 3));

  // B_n(1,...,1) is the n-th Bell number
  std::vector<rational> ones{1, 1, 1};
  auto b = bell::bell_complete_all(rspan(ones), 3);
  CHECK(b == std::vector<rational>{1, 1, 2, 5});

  // B_2(a, b) = a^2 + b, expanded by hand from the recurrence
  rational a(3, 2), c(-2, 5);
  std::vector<rational> ab{a, c};
  auto b2 = bell::bell_complete_all(rspan(ab), 2);
  CHECK(b2[1] == a);
  CHECK(b2[2] == a * a + c);

  // empty sequence supports only B_0
  std::vector<rational> empty;
  auto b0 = bell::bell_complete_all(rspan(empty), 0);
  CHECK(b0 == std::vector<rational>{1});
}

TEST_CASE("bell_complete_all rejects n_max beyond the sequence") {
  std::vector<rational> x{1, 2};
  CHECK_THROWS_AS(bell::bell_complete_all(rspan(x), 3), epflow::invalid_input);
}

TEST_CASE("partition oracle: frozen enumeration values") {
  std::vector<rational> x{rational(5, 2)};
  CHECK(bell::bell_partition_oracle(rspan(x), 1) == rational(5, 2));

  // 15 set partitions of a 4-element set
  std::vector<rational> ones{1, 1, 1, 1};
  CHECK(bell::bell_partition_oracle(rspan(ones), 4) == 15);

  // with X_2 = X_3 = 0 only the all-singletons partition survives
  std::vector<rational> spike{2, 0, 0};
  CHECK(bell::bell_partition_oracle(rspan(spike), 3) == 8);

  CHECK(bell::bell_partition_oracle(rspan(ones), 0) == 1);
}

TEST_CASE("partition oracle refuses past the enumeration guard") {
  std::vector<rational> big(13, rational(1));
  CHECK_THROWS_AS(bell::bell_partition_oracle(rspan(big), 13), epflow::invalid_input);
}

TEST_CASE("recurrence agrees exactly with the partition oracle") {
  auto rng = testsupport::make_rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 9;  // 0..8
    auto seq = testsupport::random_rational_sequence(rng, n);
    auto all = bell::bell_complete_all(rspan(seq), n);
    for (int k = 0; k <= n; ++k) {
      CHECK(all[static_cast<std::size_t>(k)] == bell::bell_partition_oracle(rspan(seq), k));
    }
  }
}

TEST_CASE("scaling identity B_n(b X_1, b^2 X_2, ...) = b^n B_n(X)") {
  auto rng = testsupport::make_rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    auto seq = testsupport::random_rational_sequence(rng, n);
    rational beta = testsupport::random_rational(rng, 5, 3);
    auto scaled = bell::bell_scale(rspan(seq), beta);
    auto bs = bell::bell_complete_all(rspan(scaled), n);
    auto b = bell::bell_complete_all(rspan(seq), n);
    rational beta_pow(1);
    for (int k = 1; k <= n; ++k) {
      beta_pow *= beta;
      CHECK(bs[static_cast<std::size_t>(k)] == beta_pow * b[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("bell_scale with beta = 1 is the identity") {
  std::vector<rational> seq{rational(1, 2), rational(-3), rational(4, 7)};
  CHECK(bell::bell_scale(rspan(seq), rational(1)) == seq);
}

TEST_CASE("bell_scale beta = -1 flips odd slots") {
  rational x1(3), x2(5);
  std::vector<rational> seq{x1, x2};
  auto flipped = bell::bell_scale(rspan(seq), rational(-1));
  CHECK(flipped == std::vector<rational>{-x1, x2});
  // B_2(-x1, x2) = x1^2 + x2 = (-1)^2 B_2(x1, x2)
  auto b = bell::bell_complete_all(rspan(flipped), 2);
  CHECK(b[2] == x1 * x1 + x2);
}

TEST_CASE("sign_flip applies (-1)^k and matches bell_scale at beta = -1") {
  std::vector<rational> derivs{rational(2), rational(-7, 3), rational(1, 4)};
  auto y = bell::sign_flip(rspan(derivs));
  CHECK(y == std::vector<rational>{-rational(2), rational(-7, 3), -rational(1, 4)});
  CHECK(y == bell::bell_scale(rspan(derivs), rational(-1)));

  // Gaussian flow at sigma_t^2 = 1: (1, -1, 2) -> (-1, -1, -2)
  std::vector<double> g{1, -1, 2};
  auto yg = bell::sign_flip(dspan(g));
  CHECK(yg == std::vector<double>{-1, -1, -2});
}

TEST_CASE("sign identity (-1)^{m-1} B_m(derivs) = -B_m(sign_flip(derivs))") {
  auto rng = testsupport::make_rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    auto derivs = testsupport::random_rational_sequence(rng, n);
    auto flipped = bell::sign_flip(rspan(derivs));
    auto b = bell::bell_complete_all(rspan(derivs), n);
    auto bf = bell::bell_complete_all(rspan(flipped), n);
    for (int m = 1; m <= n; ++m) {
      rational lhs = (m % 2 == 1 ? b[static_cast<std::size_t>(m)] : -b[static_cast<std::size_t>(m)]);
      CHECK(lhs == -bf[static_cast<std::size_t>(m)]);
    }
  }
}

TEST_CASE("faa_di_bruno_exp: chain rule anchors") {
  // m = 1: e^y y'
  std::vector<double> d1{0.75};
  CHECK(bell::faa_di_bruno_exp(0.3, dspan(d1), 1) == doctest::Approx(std::exp(0.3) * 0.75));

  // Gaussian sigma_t^2 = 1: N(t) = 2 pi e sigma_t^2 is affine, second derivative 0
  std::vector<double> d2{1.0, -1.0};
  const double y = std::log(2 * M_PI * std::exp(1.0));
  CHECK(bell::faa_di_bruno_exp(y, dspan(d2), 2) == doctest::Approx(0.0).epsilon(1e-12));

  // m = 0 returns e^y
  CHECK(bell::faa_di_bruno_exp(1.5, dspan(d1), 0) == doctest::Approx(std::exp(1.5)));
}

TEST_CASE("faa_di_bruno_exp matches numerical differentiation of e^{y(t)}") {
  // y(t) = sin t, derivatives of y known in closed form
  const double t0 = 0.4;
  std::vector<double> derivs{std::cos(t0), -std::sin(t0), -std::cos(t0)};
  const double analytic = bell::faa_di_bruno_exp(std::sin(t0), dspan(derivs), 3);
  auto f = [](long double t) { return std::exp(std::sin(t)); };
  const double numeric = static_cast<double>(testsupport::refined_difference(f, t0, 3, 0.05L));
  CHECK(analytic == doctest::Approx(numeric).epsilon(1e-8));
}

TEST_CASE("log derivatives: frozen examples") {
  // p = e^t at t = 0: log p = t
  std::vector<rational> pexp{1, 1, 1};
  auto f = bell::log_derivatives_from_function_derivatives(rspan(pexp), 2);
  CHECK(f == std::vector<rational>{1, 0});

  // p(t) = (1+t)^2 at t = 0
  std::vector<rational> psq{1, 2, 2, 0};
  auto f3 = bell::log_derivatives_from_function_derivatives(rspan(psq), 3);
  CHECK(f3 == std::vector<rational>{2, -2, 4});

  // first order is p'/p
  std::vector<double> pd{2.0, 0.5};
  auto fd = bell::log_derivatives_from_function_derivatives(dspan(pd), 1);
  CHECK(fd[0] == doctest::Approx(0.25));
}

TEST_CASE("log derivatives reject nonpositive density") {
  std::vector<double> bad{0.0, 1.0};
  CHECK_THROWS_AS(bell::log_derivatives_from_function_derivatives(dspan(bad), 1),
                  epflow::invalid_input);
  std::vector<double> neg{-1.0, 1.0};
  CHECK_THROWS_AS(bell::log_derivatives_from_function_derivatives(dspan(neg), 1),
                  epflow::invalid_input);
}

TEST_CASE("round trip: log derivatives then exponential chain rule, exact") {
  auto rng = testsupport::make_rng(1234);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + trial % 5;
    // p > 0 at the point; remaining derivatives arbitrary
    std::vector<rational> p(static_cast<std::size_t>(n) + 1);
    p[0] = rational(1 + (trial % 5), 1 + (trial % 3));
    for (int k = 1; k <= n; ++k) p[static_cast<std::size_t>(k)] = testsupport::random_rational(rng);

    auto f = bell::log_derivatives_from_function_derivatives(rspan(p), n);
    // recompose: p^{(m)} = p * B_m(f', f'', ...)
    auto b = bell::bell_complete_all(rspan(f), n);
    for (int m = 0; m <= n; ++m) {
      CHECK(p[static_cast<std::size_t>(m)] == p[0] * b[static_cast<std::size_t>(m)]);
    }
  }
}

TEST_CASE("round trip in floating point stays within 1e-12 relative") {
  auto rng = testsupport::make_rng(4321);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> p(static_cast<std::size_t>(n) + 1);
    p[0] = 0.5 + 2.0 * std::abs(u(rng));
    for (int k = 1; k <= n; ++k) p[static_cast<std::size_t>(k)] = u(rng);
    auto f = bell::log_derivatives_from_function_derivatives(dspan(p), n);
    auto b = bell::bell_complete_all(dspan(f), n);
    for (int m = 1; m <= n; ++m) {
      const double recomposed = p[0] * b[static_cast<std::size_t>(m)];
      CHECK(testsupport::rel_err(recomposed, p[static_cast<std::size_t>(m)], 1e-6) < 1e-12);
    }
  }
}

TEST_CASE("lemma1_check: zero sequence holds with equality") {
  std::vector<rational> zero{0, 0, 0};
  auto rep = bell::lemma1_check_exact(rspan(zero), 3);
  CHECK(rep.premises_all_hold);
  CHECK(rep.conclusions_all_hold);
  CHECK(rep.implication_holds);
  for (const auto& m : rep.premise_margin) CHECK(m == 0);
  for (const auto& m : rep.conclusion_margin) CHECK(m == 0);
}

TEST_CASE("lemma1_check: Gaussian sequence saturates every inequality") {
  // sigma_t^2 = 1: Y_k = -(k-1)!
  std::vector<rational> y{-1, -1, -2, -6};
  auto rep = bell::lemma1_check_exact(rspan(y), 4);
  CHECK(rep.premises_all_hold);
  CHECK(rep.conclusions_all_hold);
  // B_n(Y) = 0 for n >= 2 and conclusions are equalities: zero margin everywhere
  for (int n = 2; n <= 4; ++n) CHECK(rep.premise_margin[static_cast<std::size_t>(n) - 1] == 0);
  for (const auto& m : rep.conclusion_margin) CHECK(m == 0);
}

TEST_CASE("lemma1_check flags premise failures without claiming violations") {
  std::vector<rational> y{rational(1), rational(0), rational(0)};
  auto rep = bell::lemma1_check_exact(rspan(y), 3);
  CHECK_FALSE(rep.premises_all_hold);
  CHECK(rep.implication_holds);  // vacuous
}

TEST_CASE("lemma1 implication on rejection-sampled premise-satisfying sequences") {
  auto rng = testsupport::make_rng(20250101);
  int accepted_perturbed = 0;
  int accepted_slack = 0;
  int attempts = 0;
  while ((accepted_perturbed < 150 || accepted_slack < 150) && attempts < 100000) {
    ++attempts;
    const bool perturbed = accepted_perturbed < 150;
    auto y = perturbed ? testsupport::propose_perturbed_sequence(rng, 6)
                       : testsupport::propose_slack_solved_sequence(rng, 6);
    auto rep = bell::lemma1_check_exact(rspan(y), 6);
    if (!rep.premises_all_hold) continue;
    (perturbed ? accepted_perturbed : accepted_slack) += 1;
    CHECK(rep.conclusions_all_hold);
    CHECK(rep.implication_holds);
  }
  // both proposal families must contribute premise-satisfying sequences
  CHECK(accepted_perturbed >= 100);
  CHECK(accepted_slack >= 100);
}

TEST_CASE("lemma1_check float mode tolerates roundoff near equality") {
  std::vector<double> y{-1.0, -1.0 + 1e-12, -2.0, -6.0 - 1e-12};
  auto rep = bell::lemma1_check<double>(dspan(y), 4, bell::kLemma1FloatTolerance);
  CHECK(rep.premises_all_hold);
  CHECK(rep.conclusions_all_hold);
}
