#include "epflow/functionals.hpp"

namespace epflow::functionals {

FlowFunctionals flow_functionals(const FlowedMixture& fm, int order, const QuadratureConfig& cfg) {
  if (order < 1) throw invalid_input("flow_functionals: order must be at least 1");
  FlowFunctionals out;
  out.t = fm.t;

  const auto h = entropy<double>(fm, cfg);
  out.entropy_value = h.value;
  out.entropy_error = h.error_estimate;
  out.y = -2.0 * h.value;

  const auto fisher = fisher_information<double>(fm, cfg);
  out.fisher_value = fisher.value;
  out.fisher_error = fisher.error_estimate;
  out.y_dot = fisher.value;

  const auto derivs = entropy_time_derivatives<double>(fm, order, cfg);
  out.entropy_derivs.reserve(derivs.size());
  out.ydot_derivs.reserve(derivs.size());
  for (const auto& d : derivs) {
    out.entropy_derivs.push_back({d.value, d.error_estimate});
    out.ydot_derivs.push_back({-2.0 * d.value, 2.0 * d.error_estimate});
  }

  out.de_bruijn_residual = derivs[0].value + fisher.value / 2.0;
  out.de_bruijn_error = derivs[0].error_estimate + fisher.error_estimate / 2.0;
  return out;
}

}  // namespace epflow::functionals
