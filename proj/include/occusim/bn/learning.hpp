#pragma once

#include <string>
#include <vector>

#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

namespace detail {

// Uniform-filled copy of a structure-only spec. Serves two purposes: it lets
// the structure be validated/compiled before counting, and it enumerates the
// row keys the learned tables must contain.
inline NetworkSpec uniform_filled(const NetworkSpec& structure) {
  NetworkSpec out = structure;
  for (auto& cpt : out.cpts) {
    cpt.rows.clear();
    const VariableSpec* child = nullptr;
    std::vector<const VariableSpec*> parents;
    bool resolved = true;
    for (const auto& var : out.variables) {
      if (var.name == cpt.child) child = &var;
    }
    if (child == nullptr) resolved = false;
    for (const auto& parent : cpt.parents) {
      const VariableSpec* found = nullptr;
      for (const auto& var : out.variables) {
        if (var.name == parent) found = &var;
      }
      if (found == nullptr) {
        resolved = false;
        break;
      }
      parents.push_back(found);
    }
    if (!resolved) continue;  // left empty; validate_network reports the bad reference

    const double u = 1.0 / static_cast<double>(child->domain.size());
    std::vector<std::size_t> digits(parents.size(), 0);
    while (true) {
      std::vector<std::string> labels(parents.size());
      for (std::size_t p = 0; p < parents.size(); ++p) labels[p] = parents[p]->domain[digits[p]];
      cpt.rows[join_labels(labels)] = std::vector<double>(child->domain.size(), u);
      std::size_t axis = parents.size();
      while (axis-- > 0) {
        if (++digits[axis] < parents[axis]->domain.size()) break;
        digits[axis] = 0;
      }
      if (axis == static_cast<std::size_t>(-1)) break;
    }
  }
  return out;
}

}  // namespace detail

// Fills the CPTs of a structure-only spec from complete observations. Each row
// becomes (count + prior_strength) / (row total + prior_strength * domain
// size): maximum likelihood at prior_strength 0, Dirichlet smoothing
// otherwise. Rows never observed under a zero prior fall back to uniform.
inline NetworkSpec learn_cpts(const NetworkSpec& structure, const std::vector<Assignment>& observations,
                              double prior_strength) {
  if (prior_strength < 0.0) throw Error(ErrorCode::ConfigError, "prior_strength must be >= 0");

  const Network net = compile_network(detail::uniform_filled(structure));
  const int n = net.variable_count();

  // counts[v] mirrors the flattened CPT layout of node v.
  std::vector<std::vector<double>> counts(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) counts[static_cast<std::size_t>(v)].assign(net.node(v).cpt.size(), 0.0);

  std::vector<int> values(static_cast<std::size_t>(n), -1);
  std::vector<int> parent_values;
  for (std::size_t record = 0; record < observations.size(); ++record) {
    const auto& observation = observations[record];
    std::fill(values.begin(), values.end(), -1);
    for (const auto& [name, label] : observation) {
      if (!net.contains(name)) {
        throw Error(ErrorCode::UnknownVariable,
                    "record " + std::to_string(record) + " assigns unknown variable '" + name + "'");
      }
      const int v = net.index_of(name);
      const auto& labels = net.node(v).labels;
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) {
        throw Error(ErrorCode::LabelOutOfDomain, "record " + std::to_string(record) + ": label '" + label +
                                                     "' is not in the domain of '" + name + "'");
      }
      values[static_cast<std::size_t>(v)] = static_cast<int>(it - labels.begin());
    }
    for (int v = 0; v < n; ++v) {
      if (values[static_cast<std::size_t>(v)] < 0) {
        throw Error(ErrorCode::PartialAssignment,
                    "record " + std::to_string(record) + " misses variable '" + net.node(v).name + "'");
      }
    }
    for (int v = 0; v < n; ++v) {
      const auto& node = net.node(v);
      parent_values.resize(node.parents.size());
      for (std::size_t p = 0; p < node.parents.size(); ++p) {
        parent_values[p] = values[static_cast<std::size_t>(node.parents[p])];
      }
      counts[static_cast<std::size_t>(v)][net.row_offset(v, parent_values) +
                                          static_cast<std::size_t>(values[static_cast<std::size_t>(v)])] += 1.0;
    }
  }

  NetworkSpec learned = detail::uniform_filled(structure);
  for (auto& cpt : learned.cpts) {
    const int v = net.index_of(cpt.child);
    const std::size_t card = net.node(v).labels.size();
    for (auto& [key, row] : cpt.rows) {
      // Row order of the std::map (lexicographic by key) differs from the
      // mixed-radix layout, so recover the offset from the key itself.
      std::vector<int> parent_values(net.node(v).parents.size());
      if (!parent_values.empty()) {
        std::size_t pos = 0;
        for (std::size_t p = 0; p < parent_values.size(); ++p) {
          std::size_t sep = key.find(kRowKeySeparator, pos);
          const std::string label = key.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
          parent_values[p] = net.value_of(net.node(v).parents[p], label);
          pos = (sep == std::string::npos) ? key.size() : sep + 1;
        }
      }
      const std::size_t offset = net.row_offset(v, parent_values);
      double total = 0.0;
      for (std::size_t k = 0; k < card; ++k) total += counts[static_cast<std::size_t>(v)][offset + k];
      const double denom = total + prior_strength * static_cast<double>(card);
      for (std::size_t k = 0; k < card; ++k) {
        row[k] = (denom == 0.0) ? 1.0 / static_cast<double>(card)
                                : (counts[static_cast<std::size_t>(v)][offset + k] + prior_strength) / denom;
      }
    }
  }
  return learned;
}

}  // namespace occusim::bn
