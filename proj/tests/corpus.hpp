#pragma once

#include <string>
#include <vector>

#include "epflow/mixture.hpp"

// The evidence corpus: five bimodal or asymmetric mixtures exercised by the
// acceptance suite. data/mixtures/ ships the same five as spec files.

namespace testsupport {

struct CorpusEntry {
  std::string name;
  epflow::MixtureSpec spec;
};

inline std::vector<CorpusEntry> corpus() {
  using epflow::MixtureSpec;
  std::vector<CorpusEntry> out;
  out.push_back({"wide-pair", MixtureSpec({{0.5, -2.0, 1.0}, {0.5, 2.0, 1.0}})});
  out.push_back({"lopsided-pair", MixtureSpec({{0.3, -1.5, 0.8}, {0.7, 1.0, 1.2}})});
  out.push_back({"three-bumps",
                 MixtureSpec({{0.25, -2.5, 1.0}, {0.45, 0.2, 0.9}, {0.3, 2.4, 1.1}})});
  out.push_back(
      {"skewed-tail", MixtureSpec({{0.6, 0.0, 1.0}, {0.3, 1.5, 2.0}, {0.1, 3.5, 1.5}})});
  out.push_back({"near-gaussian", MixtureSpec({{0.45, -0.3, 1.0}, {0.55, 0.25, 1.05}})});
  return out;
}

}  // namespace testsupport
