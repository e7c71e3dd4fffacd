#include "epflow/mixture.hpp"

#include <algorithm>
#include <cmath>

namespace epflow {

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components, double max_weight_sum_error) {
  if (components.empty()) throw invalid_input("mixture must have at least one component");
  double sum = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string where = "component " + std::to_string(i + 1);
    if (!std::isfinite(c.weight) || !std::isfinite(c.mean) || !std::isfinite(c.variance)) {
      throw invalid_input(where + ": parameters must be finite");
    }
    if (!(c.weight > 0.0)) throw invalid_input(where + ": weight must be strictly positive");
    if (!(c.variance > 0.0)) {
      throw invalid_input(where + ": variance must be strictly positive" +
                          (c.variance == 0.0
                               ? std::string(" (a point mass only becomes a density for t > 0)")
                               : std::string()));
    }
    sum += c.weight;
  }
  weight_sum_deviation_ = std::fabs(sum - 1.0);
  if (weight_sum_deviation_ > max_weight_sum_error) {
    throw invalid_input("mixture weights sum to " + std::to_string(sum) +
                        "; expected 1 within " + std::to_string(max_weight_sum_error));
  }
  for (auto& c : components) c.weight /= sum;
  components_ = std::move(components);
}

MixtureSpec::Moments MixtureSpec::moments() const {
  double mean = 0.0;
  for (const auto& c : components_) mean += c.weight * c.mean;
  double second = 0.0;
  for (const auto& c : components_) second += c.weight * (c.variance + c.mean * c.mean);
  return {mean, second - mean * mean};
}

double FlowedMixture::min_component_variance() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& c : spec.components()) v = std::min(v, c.variance + t);
  return v;
}

double FlowedMixture::max_component_variance() const {
  double v = 0.0;
  for (const auto& c : spec.components()) v = std::max(v, c.variance + t);
  return v;
}

}  // namespace epflow
