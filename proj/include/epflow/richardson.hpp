#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "epflow/errors.hpp"

// Richardson-extrapolated central finite differences: the coarser of the two
// numerical-differentiation oracles. Three step levels, two extrapolations,
// error estimated from the disagreement of the last two extrapolants plus a
// roundoff floor.

namespace epflow::tderiv {

struct RichardsonResult {
  double value = 0;
  double error_estimate = 0;
};

inline constexpr int kRichardsonMaxOrder = 4;

namespace detail {

// O(h^2) central stencils; widest point offset is 2h for m = 3, 4.
inline double central_stencil(const std::function<double(double)>& f, double t, int m, double h,
                              double& sample_scale) {
  auto probe = [&](double x) {
    const double v = f(x);
    sample_scale = std::max(sample_scale, std::fabs(v));
    return v;
  };
  switch (m) {
    case 1:
      return (probe(t + h) - probe(t - h)) / (2 * h);
    case 2:
      return (probe(t + h) - 2 * probe(t) + probe(t - h)) / (h * h);
    case 3:
      return (probe(t + 2 * h) - 2 * probe(t + h) + 2 * probe(t - h) - probe(t - 2 * h)) /
             (2 * h * h * h);
    default:
      return (probe(t + 2 * h) - 4 * probe(t + h) + 6 * probe(t) - 4 * probe(t - h) +
              probe(t - 2 * h)) /
             (h * h * h * h);
  }
}

}  // namespace detail

inline RichardsonResult richardson_derivative(const std::function<double(double)>& f, int order,
                                              double t, double h0) {
  if (order < 1 || order > kRichardsonMaxOrder) {
    throw invalid_input("richardson_derivative: order must be in 1.." +
                        std::to_string(kRichardsonMaxOrder));
  }
  if (!(h0 > 0)) throw invalid_input("richardson_derivative: step must be positive");
  if (!(t - order * h0 > 0)) {
    throw invalid_input("richardson_derivative: stencil would cross t = 0; shrink the step");
  }
  if (t + 2 * h0 == t) {
    throw accuracy_error("richardson_derivative: step underflowed at t = " + std::to_string(t), 0,
                         std::numeric_limits<double>::infinity());
  }

  double sample_scale = 0;
  const double d1 = detail::central_stencil(f, t, order, h0, sample_scale);
  const double d2 = detail::central_stencil(f, t, order, h0 / 2, sample_scale);
  const double d4 = detail::central_stencil(f, t, order, h0 / 4, sample_scale);
  const double r1 = (4 * d2 - d1) / 3;
  const double r2 = (4 * d4 - d2) / 3;
  const double value = (16 * r2 - r1) / 15;

  const double h_min = h0 / 4;
  const double roundoff =
      32 * std::numeric_limits<double>::epsilon() * sample_scale / std::pow(h_min, order);
  const double estimate = std::fabs(r2 - r1) + roundoff;

  if (!std::isfinite(value) || (estimate > std::fabs(value) && estimate > 1e3 * roundoff &&
                                std::fabs(d1 - d2) > std::fabs(d1))) {
    throw accuracy_error("richardson_derivative: extrapolation did not converge", value, estimate);
  }
  return {value, estimate};
}

}  // namespace epflow::tderiv
