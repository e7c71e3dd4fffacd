#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "epflow/bell.hpp"
#include "epflow/mixture.hpp"
#include "epflow/quadrature.hpp"

// Entropy-flow functionals of a flowed mixture, in the sign convention
//   H(mu) = integral of p log p   (negative differential entropy)
//   I(mu) = integral of p (d/dx log p)^2
//   y = -2H,  ydot = I,  N = e^y.
//
// Time derivatives of H are computed analytically: differentiate p log p
// under the integral, expand by the Leibniz rule over p and log p, take
// d^k/dt^k p from the heat equation in closed form and d^k/dt^k log p from
// the inverse exponential chain rule. No numerical differentiation in t
// happens on this path; the spectral module provides the independent oracle.

namespace epflow::functionals {

// Hull of the component windows [m_i - K s_i, m_i + K s_i]. Every integrand
// used here decays like the density; K = 12 puts the truncated tail mass
// below 1e-25 of the total.
template <class Real>
std::pair<Real, Real> integration_domain(const FlowedMixture& fm, double k_sigma) {
  Real lo = std::numeric_limits<Real>::infinity();
  Real hi = -std::numeric_limits<Real>::infinity();
  for (const auto& c : fm.spec.components()) {
    const Real s = std::sqrt(Real(c.variance) + Real(fm.t));
    lo = std::min(lo, Real(c.mean) - Real(k_sigma) * s);
    hi = std::max(hi, Real(c.mean) + Real(k_sigma) * s);
  }
  return {lo, hi};
}

// Below this log-density the integrands are identically negligible: every
// term carries a factor p against polynomially bounded ratios.
inline constexpr double kLogDensityCutoff = -600.0;

template <class Real>
IntegralResult<Real> normalization(const FlowedMixture& fm, const QuadratureConfig& cfg) {
  auto [a, b] = integration_domain<Real>(fm, cfg.tail_sigma_multiplier);
  return quad::integrate<Real>(
      [&](Real x) { return mixture::density<Real>(fm, x); }, a, b, cfg);
}

template <class Real>
IntegralResult<Real> entropy(const FlowedMixture& fm, const QuadratureConfig& cfg) {
  auto [a, b] = integration_domain<Real>(fm, cfg.tail_sigma_multiplier);
  return quad::integrate<Real>(
      [&](Real x) {
        const Real lp = mixture::log_density<Real>(fm, x);
        if (lp < Real(kLogDensityCutoff)) return Real(0);
        return std::exp(lp) * lp;
      },
      a, b, cfg);
}

template <class Real>
IntegralResult<Real> fisher_information(const FlowedMixture& fm, const QuadratureConfig& cfg) {
  auto [a, b] = integration_domain<Real>(fm, cfg.tail_sigma_multiplier);
  return quad::integrate<Real>(
      [&](Real x) {
        const auto pt = mixture::evaluate_point<Real>(fm, x, 0);
        if (pt.log_p < Real(kLogDensityCutoff)) return Real(0);
        return std::exp(pt.log_p) * pt.score * pt.score;
      },
      a, b, cfg);
}

// d^m/dt^m (p log p) at a point, from the shared evaluation. Leibniz over
// p * log p with q_j = (d/dt)^j p / p and L_j = (d/dt)^j log p:
//   d^m(p log p) = p * [ q_m log p + sum_{j=0}^{m-1} C(m,j) q_j L_{m-j} ].
template <class Real>
Real entropy_flux_integrand(const FlowedMixture& fm, Real x, int m) {
  const auto pt = mixture::evaluate_point<Real>(fm, x, m);
  if (pt.log_p < Real(kLogDensityCutoff)) return Real(0);
  const std::vector<Real> log_derivs = bell::log_derivatives_from_function_derivatives<Real>(
      {pt.t_ratios.data(), pt.t_ratios.size()}, m);
  Real bracket = pt.t_ratios[static_cast<std::size_t>(m)] * pt.log_p;
  for (int j = 0; j <= m - 1; ++j) {
    bracket += scalar_from_bigint<Real>(bell::binomial(m, j)) *
               pt.t_ratios[static_cast<std::size_t>(j)] *
               log_derivs[static_cast<std::size_t>(m - j) - 1];
  }
  return std::exp(pt.log_p) * bracket;
}

// d^m H / dt^m for m = 1..order.
template <class Real>
std::vector<IntegralResult<Real>> entropy_time_derivatives(const FlowedMixture& fm, int order,
                                                           const QuadratureConfig& cfg) {
  if (order < 1 || order > kMaxDerivativeOrder) {
    throw invalid_input("entropy_time_derivatives: order must be in 1.." +
                        std::to_string(kMaxDerivativeOrder));
  }
  auto [a, b] = integration_domain<Real>(fm, cfg.tail_sigma_multiplier);
  std::vector<IntegralResult<Real>> out;
  out.reserve(static_cast<std::size_t>(order));
  for (int m = 1; m <= order; ++m) {
    try {
      out.push_back(quad::integrate<Real>(
          [&](Real x) { return entropy_flux_integrand<Real>(fm, x, m); }, a, b, cfg));
    } catch (const accuracy_error& e) {
      throw accuracy_error("entropy_time_derivatives: order " + std::to_string(m) + ": " +
                               e.what(),
                           e.best_value(), e.error_estimate());
    }
  }
  return out;
}

struct DerivativeEntry {
  double value = 0;
  double error_estimate = 0;
};

// One-stop evaluation at a single flow time: H, I, y, ydot, the analytic
// H-derivatives, and the ydot-derivative list ready for the Bell machinery
// (ydot^{(k)} = -2 d^{k+1}H/dt^{k+1}, D = 1 convention).
struct FlowFunctionals {
  double t = 0;
  double entropy_value = 0;
  double entropy_error = 0;
  double fisher_value = 0;
  double fisher_error = 0;
  double y = 0;
  double y_dot = 0;
  std::vector<DerivativeEntry> entropy_derivs;  // index m-1 holds d^m H/dt^m
  std::vector<DerivativeEntry> ydot_derivs;     // index k holds ydot^{(k)}, k = 0..order-1
  double de_bruijn_residual = 0;                // dH/dt + I/2
  double de_bruijn_error = 0;
};

FlowFunctionals flow_functionals(const FlowedMixture& fm, int order, const QuadratureConfig& cfg);

}  // namespace epflow::functionals
