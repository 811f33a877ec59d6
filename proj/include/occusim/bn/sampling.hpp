#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "occusim/bn/inference.hpp"
#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

struct SampleOptions {
  std::size_t rejection_cap = 100000;
};

namespace detail {

inline void ancestral_pass(const Network& net, Rng& rng, std::vector<int>& values) {
  std::vector<int> parent_values;
  for (int v : net.topological_order()) {
    const auto& node = net.node(v);
    parent_values.resize(node.parents.size());
    for (std::size_t p = 0; p < node.parents.size(); ++p) {
      parent_values[p] = values[static_cast<std::size_t>(node.parents[p])];
    }
    const std::size_t offset = net.row_offset(v, parent_values);
    const int card = net.cardinality(v);
    const double u = uniform01(rng);
    double cum = 0.0;
    int chosen = card - 1;
    for (int k = 0; k < card; ++k) {
      cum += node.cpt[offset + static_cast<std::size_t>(k)];
      if (u < cum) {
        chosen = k;
        break;
      }
    }
    values[static_cast<std::size_t>(v)] = chosen;
  }
}

}  // namespace detail

// Ancestral sampling in topological order. With evidence, draws are repeated
// until all evidence variables match (unbiased rejection sampling); the retry
// cap guards against near-zero-probability evidence. Identical seeds yield
// identical assignments.
inline Assignment sample_assignment(const Network& net, const Evidence& evidence, Rng& rng,
                                    const SampleOptions& options = {}) {
  auto fixed = detail::resolve_evidence(net, evidence);
  std::vector<int> values(static_cast<std::size_t>(net.variable_count()), -1);

  const std::size_t attempts = fixed.empty() ? 1 : options.rejection_cap;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    detail::ancestral_pass(net, rng, values);
    bool consistent = true;
    for (const auto& [v, value] : fixed) {
      if (values[static_cast<std::size_t>(v)] != value) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      Assignment out;
      for (int v = 0; v < net.variable_count(); ++v) {
        out[net.node(v).name] = net.node(v).labels[static_cast<std::size_t>(values[static_cast<std::size_t>(v)])];
      }
      return out;
    }
  }
  throw Error(ErrorCode::RejectionCapExceeded,
              "no sample consistent with the evidence after " + std::to_string(options.rejection_cap) + " attempts");
}

}  // namespace occusim::bn
