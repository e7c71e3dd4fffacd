#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "epflow/errors.hpp"

// Chebyshev interpolation on an interval and spectral differentiation of the
// fitted series. Functions of the flow time are analytic for t > 0, so the
// coefficients decay geometrically and high-order t-derivatives can be read
// off the series; this is the numerical-differentiation oracle that
// cross-validates the analytic pipeline.

namespace epflow::tderiv {

template <class Real>
struct SampledCurve {
  Real a = 0;
  Real b = 0;
  int degree = 0;
  std::vector<Real> values;  // f at the Chebyshev points of the 2nd kind, j = 0..degree
  std::vector<Real> coeffs;  // series coefficients c_0..c_degree

  Real halfwidth() const { return (b - a) / 2; }
  Real center() const { return (a + b) / 2; }
  Real to_unit(Real t) const { return (t - center()) / halfwidth(); }

  // max |c_k| over the trailing quarter relative to the overall max; the
  // decay gauge used to decide whether derivatives are trustworthy.
  Real coefficient_tail() const {
    Real all = 0, tail = 0;
    const std::size_t cut = coeffs.size() - coeffs.size() / 4;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      all = std::max(all, std::fabs(coeffs[k]));
      if (k >= cut) tail = std::max(tail, std::fabs(coeffs[k]));
    }
    if (all == Real(0)) return Real(0);
    return tail / all;
  }

  bool tail_trusted(Real threshold = Real(1e-12)) const {
    return coefficient_tail() <= threshold;
  }

  // Copy with trailing coefficients below the roundoff plateau removed.
  // Converged series flatten into a noise floor; differentiating the floor
  // only injects noise weighted by k^{2m}, so derivatives improve when the
  // cut falls where the decay meets the plateau. Keeps at least
  // 2*order + 2 coefficients so an order-m derivative stays well posed.
  SampledCurve trimmed_for_derivative(int order) const {
    Real signal_max = 0;
    for (Real c : coeffs) signal_max = std::max(signal_max, std::fabs(c));
    Real plateau = 0;
    for (std::size_t k = coeffs.size() - coeffs.size() / 4; k < coeffs.size(); ++k) {
      plateau = std::max(plateau, std::fabs(coeffs[k]));
    }
    const Real threshold = std::max(plateau * 2,
                                    signal_max * std::numeric_limits<Real>::epsilon() * 16);
    std::size_t cut = coeffs.size();
    while (cut > 0 && std::fabs(coeffs[cut - 1]) <= threshold) --cut;
    cut = std::max<std::size_t>({cut, static_cast<std::size_t>(2 * order + 2), 4});
    cut = std::min(cut, coeffs.size());

    SampledCurve out = *this;
    out.coeffs.resize(cut);
    out.degree = static_cast<int>(cut) - 1;
    return out;
  }
};

// Builds the series from samples already taken at the Chebyshev points of
// the second kind (values[j] = f at cos(j pi / degree) mapped to [a, b]).
template <class Real>
SampledCurve<Real> chebyshev_from_values(Real a, Real b, std::vector<Real> values) {
  static_assert(std::is_floating_point_v<Real>);
  if (!(a < b)) throw invalid_input("chebyshev_from_values: interval bounds out of order");
  if (values.size() < 3) throw invalid_input("chebyshev_from_values: need degree >= 2");

  SampledCurve<Real> curve;
  curve.a = a;
  curve.b = b;
  curve.degree = static_cast<int>(values.size()) - 1;
  curve.values = std::move(values);

  const int n = curve.degree;
  const Real pi = std::numbers::pi_v<Real>;
  curve.coeffs.assign(static_cast<std::size_t>(n) + 1, Real(0));
  for (int k = 0; k <= n; ++k) {
    Real acc = 0;
    for (int j = 0; j <= n; ++j) {
      const Real term = curve.values[static_cast<std::size_t>(j)] *
                        std::cos(pi * Real(k) * Real(j) / Real(n));
      acc += (j == 0 || j == n) ? term / 2 : term;
    }
    acc *= Real(2) / Real(n);
    if (k == 0 || k == n) acc /= 2;
    curve.coeffs[static_cast<std::size_t>(k)] = acc;
  }
  return curve;
}

// Interpolates f at the Chebyshev points of the second kind mapped to [a, b]
// and converts the samples to series coefficients by the cosine sums.
template <class Real, class F>
SampledCurve<Real> chebyshev_fit(F&& f, Real a, Real b, int degree) {
  static_assert(std::is_floating_point_v<Real>);
  if (!(a < b)) throw invalid_input("chebyshev_fit: interval bounds out of order");
  if (degree < 2) throw invalid_input("chebyshev_fit: degree must be at least 2");

  const Real center = (a + b) / 2;
  const Real halfwidth = (b - a) / 2;
  const Real pi = std::numbers::pi_v<Real>;
  std::vector<Real> values(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    const Real xj = std::cos(pi * Real(j) / Real(degree));
    const Real tj = center + halfwidth * xj;
    const Real fj = f(tj);
    if (!std::isfinite(fj)) {
      throw accuracy_error("chebyshev_fit: sample failed at t = " +
                               std::to_string(static_cast<double>(tj)),
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());
    }
    values[static_cast<std::size_t>(j)] = fj;
  }
  return chebyshev_from_values<Real>(a, b, std::move(values));
}

// Clenshaw evaluation of a coefficient vector at unit coordinate xi.
template <class Real>
Real clenshaw(std::span<const Real> c, Real xi) {
  Real b1 = 0, b2 = 0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const Real b0 = 2 * xi * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return xi * b1 - b2 + (c.empty() ? Real(0) : c[0]);
}

template <class Real>
Real chebyshev_eval(const SampledCurve<Real>& curve, Real t) {
  return clenshaw<Real>(curve.coeffs, curve.to_unit(t));
}

// One differentiation pass in coefficient space, including the interval map
// factor: if f = sum c_k T_k(xi(t)), the returned d satisfies
// f' = sum d_k T_k(xi(t)) with d/dt = (1/halfwidth) d/dxi.
template <class Real>
std::vector<Real> differentiate_coefficients(std::span<const Real> c, Real halfwidth) {
  const std::size_t n = c.empty() ? 0 : c.size() - 1;
  if (n == 0) return {Real(0)};
  // d_{k-1} = d_{k+1} + 2k c_k, downward from d_n = d_{n+1} = 0; d_0 halved
  std::vector<Real> d(n + 2, Real(0));
  for (std::size_t k = n; k >= 1; --k) {
    d[k - 1] = d[k + 1] + 2 * Real(k) * c[k];
  }
  d[0] /= 2;
  d.resize(n);
  for (auto& v : d) v /= halfwidth;
  return d;
}

inline constexpr double kTrustedCenterFraction = 0.6;

template <class Real>
struct SpectralValue {
  Real value = 0;
  bool low_confidence = false;  // coefficient tail above the decay threshold
};

// m-th derivative of the fitted function at t. Refuses t outside the central
// fraction of the interval, where edge effects dominate differentiation.
template <class Real>
SpectralValue<Real> spectral_derivative(const SampledCurve<Real>& curve, int order, Real t,
                                        double trusted_center_fraction = kTrustedCenterFraction) {
  if (order < 0) throw invalid_input("spectral_derivative: negative order");
  if (order > curve.degree / 2) {
    throw invalid_input("spectral_derivative: order " + std::to_string(order) +
                        " too high for degree " + std::to_string(curve.degree));
  }
  const Real xi = curve.to_unit(t);
  if (std::fabs(xi) > Real(trusted_center_fraction)) {
    throw invalid_input(
        "spectral_derivative: t = " + std::to_string(static_cast<double>(t)) +
        " lies outside the trusted central region of [" +
        std::to_string(static_cast<double>(curve.a)) + ", " +
        std::to_string(static_cast<double>(curve.b)) +
        "] (|unit coordinate| = " + std::to_string(static_cast<double>(std::fabs(xi))) + " > " +
        std::to_string(trusted_center_fraction) + "); refit on a wider interval");
  }
  std::vector<Real> c(curve.coeffs);
  for (int pass = 0; pass < order; ++pass) {
    c = differentiate_coefficients<Real>(c, curve.halfwidth());
  }
  SpectralValue<Real> out;
  out.value = clenshaw<Real>(std::span<const Real>(c), xi);
  out.low_confidence = !curve.tail_trusted();
  return out;
}

}  // namespace epflow::tderiv
