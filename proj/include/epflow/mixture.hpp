#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "epflow/errors.hpp"

// Finite 1-D Gaussian mixtures and their evolution under the heat semigroup.
// Flowing to time t shifts every component variance by t, so the density and
// all of its x- and t-derivatives stay in closed form:
//   d^n/dx^n phi(x; m, s^2) = (-1)^n s^-n He_n((x-m)/s) phi(x; m, s^2)
//   d^k/dt^k p = 2^-k d^{2k}/dx^{2k} p            (heat equation, iterated)
// with He_n the probabilists' Hermite polynomials.

namespace epflow {

struct MixtureComponent {
  double weight;
  double mean;
  double variance;
};

// Highest derivative order the numeric pipeline is rated for; x-derivatives
// are capped at 2*kMaxDerivativeOrder + 2 accordingly.
inline constexpr int kMaxDerivativeOrder = 6;
inline constexpr int kMaxHermiteOrder = 2 * kMaxDerivativeOrder + 2;

class MixtureSpec {
 public:
  // Validates and normalizes. Weights must be strictly positive and sum to 1
  // within `max_weight_sum_error`; variances must be strictly positive (a
  // point mass would only become a valid density for t > 0, and is rejected
  // uniformly). Errors name the offending component, 1-based.
  explicit MixtureSpec(std::vector<MixtureComponent> components,
                       double max_weight_sum_error = 1e-3);

  const std::vector<MixtureComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  // |input weight sum - 1| before normalization; callers warn when this
  // exceeds kWeightSumExact.
  double weight_sum_deviation() const { return weight_sum_deviation_; }

  struct Moments {
    double mean;
    double variance;
  };
  Moments moments() const;

 private:
  std::vector<MixtureComponent> components_;
  double weight_sum_deviation_ = 0.0;
};

inline constexpr double kWeightSumExact = 1e-12;

// The mixture pushed through the heat flow to time t >= 0.
struct FlowedMixture {
  MixtureSpec spec;
  double t = 0.0;

  FlowedMixture(MixtureSpec s, double time) : spec(std::move(s)), t(time) {
    if (!(t >= 0.0)) throw invalid_input("FlowedMixture: time must be nonnegative");
  }

  double component_variance(std::size_t i) const { return spec.components()[i].variance + t; }
  double min_component_variance() const;
  double max_component_variance() const;
};

namespace mixture {

// He_0..He_n at z, by the recurrence He_{n+1} = z He_n - n He_{n-1}.
template <class Real>
std::vector<Real> hermite_all(Real z, int n_max) {
  std::vector<Real> he(static_cast<std::size_t>(n_max) + 1);
  he[0] = Real(1);
  if (n_max >= 1) he[1] = z;
  for (int n = 1; n < n_max; ++n) {
    he[static_cast<std::size_t>(n) + 1] =
        z * he[static_cast<std::size_t>(n)] - Real(n) * he[static_cast<std::size_t>(n) - 1];
  }
  return he;
}

template <class Real>
Real log_density(const FlowedMixture& fm, Real x) {
  static_assert(std::is_floating_point_v<Real>);
  const auto& comps = fm.spec.components();
  Real max_log = -std::numeric_limits<Real>::infinity();
  std::vector<Real> logs(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Real s2 = Real(comps[i].variance) + Real(fm.t);
    const Real z = (x - Real(comps[i].mean)) / std::sqrt(s2);
    logs[i] = std::log(Real(comps[i].weight)) - Real(0.5) * z * z -
              Real(0.5) * std::log(Real(2) * std::numbers::pi_v<Real> * s2);
    max_log = std::max(max_log, logs[i]);
  }
  Real acc = 0;
  for (Real l : logs) acc += std::exp(l - max_log);
  return max_log + std::log(acc);
}

template <class Real>
Real density(const FlowedMixture& fm, Real x) {
  return std::exp(log_density(fm, x));
}

// d^n/dx^n p_t(x), exact in formula. n = 0 reproduces the density.
template <class Real>
Real density_x_derivative(const FlowedMixture& fm, Real x, int n) {
  static_assert(std::is_floating_point_v<Real>);
  if (n < 0 || n > kMaxHermiteOrder) {
    throw invalid_input("density_x_derivative: order " + std::to_string(n) +
                        " outside supported range 0.." + std::to_string(kMaxHermiteOrder));
  }
  const auto& comps = fm.spec.components();
  Real acc = 0;
  for (const auto& c : comps) {
    const Real s2 = Real(c.variance) + Real(fm.t);
    const Real s = std::sqrt(s2);
    const Real z = (x - Real(c.mean)) / s;
    const Real phi = std::exp(-Real(0.5) * z * z) /
                     std::sqrt(Real(2) * std::numbers::pi_v<Real> * s2);
    const auto he = hermite_all<Real>(z, n);
    const Real sign = (n % 2 == 0) ? Real(1) : Real(-1);
    acc += Real(c.weight) * sign * std::pow(s, Real(-n)) * he[static_cast<std::size_t>(n)] * phi;
  }
  return acc;
}

// d^k/dt^k p_t(x) = 2^-k d^{2k}/dx^{2k} p_t(x).
template <class Real>
Real density_t_derivative(const FlowedMixture& fm, Real x, int k) {
  if (k < 0 || k > kMaxDerivativeOrder + 1) {
    throw invalid_input("density_t_derivative: order outside supported range");
  }
  return std::ldexp(density_x_derivative<Real>(fm, x, 2 * k), -k);
}

// Shared per-point evaluation for the entropy-derivative integrands: the log
// density, the x-score, and the normalized t-derivatives q_k = (d/dt)^k p / p
// for k = 0..k_max. Component contributions are combined through their
// posterior weights u_i = w_i phi_i / p, which stays stable deep in the tails
// where the raw density underflows.
template <class Real>
struct PointEval {
  Real log_p;
  Real score;
  std::vector<Real> t_ratios;
};

template <class Real>
PointEval<Real> evaluate_point(const FlowedMixture& fm, Real x, int k_max) {
  static_assert(std::is_floating_point_v<Real>);
  if (k_max < 0 || k_max > kMaxDerivativeOrder + 1) {
    throw invalid_input("evaluate_point: t-derivative order outside supported range");
  }
  const auto& comps = fm.spec.components();
  const std::size_t nc = comps.size();

  std::vector<Real> logs(nc), zs(nc), s2s(nc);
  Real max_log = -std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < nc; ++i) {
    s2s[i] = Real(comps[i].variance) + Real(fm.t);
    zs[i] = (x - Real(comps[i].mean)) / std::sqrt(s2s[i]);
    logs[i] = std::log(Real(comps[i].weight)) - Real(0.5) * zs[i] * zs[i] -
              Real(0.5) * std::log(Real(2) * std::numbers::pi_v<Real> * s2s[i]);
    max_log = std::max(max_log, logs[i]);
  }
  Real norm = 0;
  for (Real l : logs) norm += std::exp(l - max_log);

  PointEval<Real> out;
  out.log_p = max_log + std::log(norm);
  out.score = 0;
  out.t_ratios.assign(static_cast<std::size_t>(k_max) + 1, Real(0));
  out.t_ratios[0] = Real(1);

  for (std::size_t i = 0; i < nc; ++i) {
    const Real u = std::exp(logs[i] - out.log_p);  // posterior weight, in (0, 1]
    const Real s = std::sqrt(s2s[i]);
    out.score += u * (-zs[i] / s);
    const auto he = hermite_all<Real>(zs[i], 2 * k_max);
    Real s_pow = Real(1);  // s^{-2k}
    for (int k = 1; k <= k_max; ++k) {
      s_pow /= s2s[i];
      out.t_ratios[static_cast<std::size_t>(k)] +=
          u * std::ldexp(s_pow * he[static_cast<std::size_t>(2 * k)], -k);
    }
  }
  return out;
}

}  // namespace mixture
}  // namespace epflow
