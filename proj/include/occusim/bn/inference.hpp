#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "occusim/bn/factor.hpp"
#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

namespace detail {

inline Factor cpt_factor(const Network& net, int variable) {
  const auto& node = net.node(variable);
  Factor f;
  // Axes in CPT layout order (parents then child); multiply() re-sorts by id.
  std::vector<int> layout = node.parents;
  layout.push_back(variable);

  f.vars = layout;
  f.cards.reserve(layout.size());
  for (int v : layout) f.cards.push_back(net.cardinality(v));
  f.values = node.cpt;

  // Bring vars/cards/values into ascending-id order.
  std::vector<std::size_t> perm(layout.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return layout[a] < layout[b]; });
  bool sorted = true;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) sorted = false;
  }
  if (sorted) return f;

  Factor out;
  out.vars.resize(layout.size());
  out.cards.resize(layout.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.vars[i] = f.vars[perm[i]];
    out.cards[i] = f.cards[perm[i]];
  }
  out.values.assign(f.values.size(), 0.0);

  std::vector<std::size_t> src_strides(layout.size(), 1);
  for (std::size_t i = layout.size(); i-- > 1;) {
    src_strides[i - 1] = src_strides[i] * static_cast<std::size_t>(f.cards[i]);
  }
  for (std::size_t out_idx = 0; out_idx < out.values.size(); ++out_idx) {
    std::size_t rest = out_idx;
    std::size_t src = 0;
    for (std::size_t i = layout.size(); i-- > 0;) {
      src += src_strides[perm[i]] * (rest % static_cast<std::size_t>(out.cards[i]));
      rest /= static_cast<std::size_t>(out.cards[i]);
    }
    out.values[out_idx] = f.values[src];
  }
  return out;
}

inline std::map<int, int> resolve_evidence(const Network& net, const Evidence& evidence) {
  std::map<int, int> fixed;
  for (const auto& [name, label] : evidence) {
    int v = net.index_of(name);
    fixed[v] = net.value_of(v, label);
  }
  return fixed;
}

}  // namespace detail

// Exact posterior P(query | evidence) by variable elimination. Query variables
// are reported in declaration order regardless of the order given.
inline Distribution infer_posterior(const Network& net, const Evidence& evidence,
                                    const std::vector<std::string>& query) {
  if (query.empty()) throw Error(ErrorCode::ConfigError, "query variable set is empty");

  auto fixed = detail::resolve_evidence(net, evidence);
  std::vector<int> keep;
  for (const auto& name : query) {
    int v = net.index_of(name);
    if (fixed.count(v)) {
      throw Error(ErrorCode::QueryEvidenceOverlap, "variable '" + name + "' is both query and evidence");
    }
    if (std::find(keep.begin(), keep.end(), v) != keep.end()) {
      throw Error(ErrorCode::ConfigError, "query lists variable '" + name + "' twice");
    }
    keep.push_back(v);
  }
  std::sort(keep.begin(), keep.end());

  std::vector<Factor> factors;
  factors.reserve(static_cast<std::size_t>(net.variable_count()));
  for (int v = 0; v < net.variable_count(); ++v) {
    factors.push_back(reduce(detail::cpt_factor(net, v), fixed));
  }
  Factor joint = eliminate(std::move(factors), keep);

  double z = 0.0;
  for (double p : joint.values) z += p;
  if (z == 0.0) throw Error(ErrorCode::ZeroProbabilityEvidence, "evidence has probability zero");

  Distribution dist;
  for (int v : joint.vars) {
    dist.variables.push_back(net.node(v).name);
    dist.domains.push_back(net.node(v).labels);
  }
  dist.probabilities.resize(joint.values.size());
  for (std::size_t i = 0; i < joint.values.size(); ++i) dist.probabilities[i] = joint.values[i] / z;
  return dist;
}

}  // namespace occusim::bn
