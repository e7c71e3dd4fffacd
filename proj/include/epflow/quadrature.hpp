#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "epflow/errors.hpp"

// Adaptive quadrature over the real line for smooth, Gaussian-tailed
// integrands: fixed 15-point Gauss-Legendre per panel, bisection driven by
// the whole-vs-halves discrepancy, Neumaier-compensated accumulation. The
// returned error estimate is the sum of accepted panel discrepancies plus a
// roundoff floor proportional to the absolute integrand mass.

namespace epflow {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 4096;
  double tail_sigma_multiplier = 12.0;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
      throw invalid_input("quadrature tolerances must be positive");
    }
    if (max_panels < 8) throw invalid_input("max_panels must be at least 8");
    if (!(tail_sigma_multiplier >= 6.0)) {
      throw invalid_input("tail_sigma_multiplier must be at least 6");
    }
  }
};

template <class Real>
struct IntegralResult {
  Real value = 0;
  Real error_estimate = 0;
  int panels = 0;
};

namespace quad {

inline constexpr int kPanelOrder = 15;

// Nodes and weights on [-1, 1], computed once by Newton iteration on the
// Legendre recurrence (in long double, then narrowed).
template <class Real>
const std::array<std::pair<Real, Real>, kPanelOrder>& gauss_legendre_nodes() {
  static const std::array<std::pair<Real, Real>, kPanelOrder> table = [] {
    std::array<std::pair<Real, Real>, kPanelOrder> out{};
    constexpr int n = kPanelOrder;
    for (int i = 0; i < n; ++i) {
      long double x = std::cos(3.14159265358979323846264338327950288L * (i + 0.75L) / (n + 0.5L));
      long double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      const long double w = 2.0L / ((1 - x * x) * dp * dp);
      out[static_cast<std::size_t>(i)] = {static_cast<Real>(x), static_cast<Real>(w)};
    }
    return out;
  }();
  return table;
}

// Neumaier-compensated accumulator.
template <class Real>
struct Accumulator {
  Real sum = 0;
  Real comp = 0;
  void add(Real v) {
    const Real t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  Real total() const { return sum + comp; }
};

template <class Real, class F>
std::pair<Real, Real> panel(F&& f, Real a, Real b) {
  const auto& nw = gauss_legendre_nodes<Real>();
  const Real c = (a + b) / 2;
  const Real h = (b - a) / 2;
  Accumulator<Real> acc, mass;
  for (const auto& [x, w] : nw) {
    const Real fx = f(c + h * x);
    if (!std::isfinite(fx)) {
      throw accuracy_error("integrand produced a non-finite value at x = " +
                               std::to_string(static_cast<double>(c + h * x)),
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());
    }
    acc.add(w * fx);
    mass.add(w * std::fabs(fx));
  }
  return {h * acc.total(), h * mass.total()};
}

template <class Real, class F>
IntegralResult<Real> integrate(F&& f, Real a, Real b, const QuadratureConfig& cfg) {
  static_assert(std::is_floating_point_v<Real>);
  cfg.validate();
  IntegralResult<Real> out;
  if (a == b) return out;
  if (!(a < b)) throw invalid_input("integrate: interval bounds out of order");

  struct Segment {
    Real a, b, value, mass;
  };

  const Real total_width = b - a;

  // Initial uniform split before adaptivity: a single whole-interval panel
  // can self-cancel on symmetric integrands and fake early convergence.
  constexpr int kInitialSplit = 8;
  std::vector<Segment> work;
  work.reserve(kInitialSplit);
  Real rough = 0;
  for (int i = 0; i < kInitialSplit; ++i) {
    const Real lo = a + total_width * Real(i) / kInitialSplit;
    const Real hi = (i + 1 == kInitialSplit) ? b : a + total_width * Real(i + 1) / kInitialSplit;
    auto [v, m] = panel<Real>(f, lo, hi);
    work.push_back({lo, hi, v, m});
    rough += v;
  }

  Accumulator<Real> accepted, error_acc, mass_acc;
  int panels = kInitialSplit;
  Real best_scale = std::fabs(rough);

  while (!work.empty()) {
    const Segment seg = work.back();
    work.pop_back();
    const Real mid = (seg.a + seg.b) / 2;
    auto [left, left_mass] = panel<Real>(f, seg.a, mid);
    auto [right, right_mass] = panel<Real>(f, mid, seg.b);
    ++panels;
    const Real refined = left + right;
    const Real discrepancy = std::fabs(seg.value - refined);
    best_scale = std::max(best_scale, std::fabs(refined));

    const Real local_budget =
        std::max(Real(cfg.abs_tol), Real(cfg.rel_tol) * best_scale) * ((seg.b - seg.a) / total_width);
    const Real width_floor = std::fabs(mid) * std::numeric_limits<Real>::epsilon() * 4;
    if (discrepancy <= local_budget || (seg.b - seg.a) <= width_floor) {
      accepted.add(left);
      accepted.add(right);
      error_acc.add(discrepancy);
      mass_acc.add(left_mass);
      mass_acc.add(right_mass);
      continue;
    }
    if (panels >= cfg.max_panels) {
      // salvage the best available estimate for the error report
      Accumulator<Real> rest, rest_mass;
      rest.add(accepted.total());
      rest.add(refined);
      rest_mass.add(discrepancy);
      for (const auto& s : work) {
        rest.add(s.value);
        rest_mass.add(std::fabs(s.value));
      }
      throw accuracy_error("integrate: no convergence within " + std::to_string(cfg.max_panels) +
                               " panels",
                           static_cast<double>(rest.total()),
                           static_cast<double>(error_acc.total() + rest_mass.total()));
    }
    work.push_back({seg.a, mid, left, left_mass});
    work.push_back({mid, seg.b, right, right_mass});
  }

  out.value = accepted.total();
  const Real roundoff_floor =
      mass_acc.total() * std::numeric_limits<Real>::epsilon() * Real(8);
  out.error_estimate = error_acc.total() + roundoff_floor;
  out.panels = panels;
  return out;
}

// Integrate with a (center, spread) support hint: the window is
// center +- tail_sigma_multiplier * spread.
template <class Real, class F>
IntegralResult<Real> integrate_hint(F&& f, Real center, Real spread, const QuadratureConfig& cfg) {
  if (!(spread > 0)) throw invalid_input("integrate_hint: spread must be positive");
  const Real k = Real(cfg.tail_sigma_multiplier);
  return integrate<Real>(std::forward<F>(f), center - k * spread, center + k * spread, cfg);
}

}  // namespace quad
}  // namespace epflow
