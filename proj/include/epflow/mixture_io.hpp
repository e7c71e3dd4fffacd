#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epflow/mixture.hpp"

// Mixture specification files: a forgiving plain-text key/value format.
//
//   # comments run to end of line
//   name = two-bump                  (optional label)
//   component = 0.5  -2.0  1.0       (weight mean variance; repeatable)
//   component = 0.5   2.0  1.0
//
// Weights are auto-normalized when they sum to 1 within 1e-3 (a warning is
// emitted unless they are exact to 1e-12) and rejected beyond that.
// Validation errors name the offending component.

namespace epflow::io {

struct LoadedMixture {
  MixtureSpec spec;
  std::string name;
  std::vector<std::string> warnings;
};

LoadedMixture parse_mixture_spec(std::istream& in, const std::string& origin = "<stream>");
LoadedMixture load_mixture_spec(const std::string& path);

// Canonical text form; parses back to the same spec.
std::string format_mixture_spec(const MixtureSpec& spec, const std::string& name = "");

}  // namespace epflow::io
