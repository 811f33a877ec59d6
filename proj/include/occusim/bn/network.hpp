#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "occusim/common.hpp"

namespace occusim::bn {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr char kRowKeySeparator = '|';

// Variable label assignments keyed by variable name. Evidence may be partial;
// an Assignment used with joint_probability must cover every variable.
using Evidence = std::map<std::string, std::string>;
using Assignment = std::map<std::string, std::string>;

struct VariableSpec {
  std::string name;
  std::vector<std::string> domain;  // ordered category labels, >= 2, distinct
};

// Conditional probability table. Rows are keyed by the parent labels joined
// with '|' in declared parent order; a root node has a single row keyed "".
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::map<std::string, std::vector<double>> rows;
};

struct NetworkSpec {
  std::vector<VariableSpec> variables;
  std::vector<Cpt> cpts;
};

inline std::string join_labels(const std::vector<std::string>& labels) {
  std::string key;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) key += kRowKeySeparator;
    key += labels[i];
  }
  return key;
}

// Validated, index-based form of a NetworkSpec. Immutable once built and safe
// to share across threads.
class Network {
 public:
  struct Node {
    std::string name;
    std::vector<std::string> labels;
    std::vector<int> parents;  // indices into nodes(), CPT axis order
    // Flattened table: row-major over parents (last parent fastest), then the
    // child value. Size = prod(parent cards) * card(child).
    std::vector<double> cpt;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int index) const { return nodes_[static_cast<std::size_t>(index)]; }
  int variable_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<int>& topological_order() const { return topo_order_; }

  int cardinality(int index) const { return static_cast<int>(node(index).labels.size()); }

  int index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorCode::UnknownVariable, "variable '" + name + "' is not declared");
    return it->second;
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  int value_of(int variable, const std::string& label) const {
    const auto& labels = node(variable).labels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      throw Error(ErrorCode::UnknownLabel,
                  "label '" + label + "' is not in the domain of '" + node(variable).name + "'");
    }
    return static_cast<int>(it - labels.begin());
  }

  // CPT row offset for the given parent values (mixed radix, last parent fastest).
  std::size_t row_offset(int variable, const std::vector<int>& parent_values) const {
    const Node& n = node(variable);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n.parents.size(); ++i) {
      row = row * static_cast<std::size_t>(cardinality(n.parents[i])) + static_cast<std::size_t>(parent_values[i]);
    }
    return row * static_cast<std::size_t>(cardinality(variable));
  }

  double cpt_entry(int variable, const std::vector<int>& parent_values, int value) const {
    return node(variable).cpt[row_offset(variable, parent_values) + static_cast<std::size_t>(value)];
  }

  friend std::optional<Network> build_network(const NetworkSpec&, std::vector<ValidationIssue>&);

 private:
  std::vector<Node> nodes_;
  std::vector<int> topo_order_;
  std::unordered_map<std::string, int> index_;
};

namespace detail {

inline bool find_cycle(const std::vector<std::vector<int>>& children, std::vector<int>& cycle_out) {
  const int n = static_cast<int>(children.size());
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 unseen, 1 in stack, 2 done
  std::vector<int> stack;
  // Iterative DFS keeping the current path so the cycle can be reported.
  std::vector<std::pair<int, std::size_t>> frames;
  for (int start = 0; start < n; ++start) {
    if (state[static_cast<std::size_t>(start)] != 0) continue;
    frames.push_back({start, 0});
    state[static_cast<std::size_t>(start)] = 1;
    stack.push_back(start);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < children[static_cast<std::size_t>(v)].size()) {
        int child = children[static_cast<std::size_t>(v)][next++];
        if (state[static_cast<std::size_t>(child)] == 1) {
          auto it = std::find(stack.begin(), stack.end(), child);
          cycle_out.assign(it, stack.end());
          cycle_out.push_back(child);
          return true;
        }
        if (state[static_cast<std::size_t>(child)] == 0) {
          state[static_cast<std::size_t>(child)] = 1;
          stack.push_back(child);
          frames.push_back({child, 0});
        }
      } else {
        state[static_cast<std::size_t>(v)] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return false;
}

}  // namespace detail

// Core validation + compilation. Appends one issue per violation; returns the
// compiled network only when no issue was found.
inline std::optional<Network> build_network(const NetworkSpec& spec, std::vector<ValidationIssue>& issues) {
  const std::size_t initial_issue_count = issues.size();

  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    const auto& var = spec.variables[i];
    if (var.name.empty()) {
      issues.push_back({ErrorCode::InvalidSpec, "variable #" + std::to_string(i) + " has an empty name"});
      continue;
    }
    if (!index.emplace(var.name, static_cast<int>(i)).second) {
      issues.push_back({ErrorCode::InvalidSpec, "variable '" + var.name + "' is declared more than once"});
    }
    if (var.domain.size() < 2) {
      issues.push_back({ErrorCode::InvalidSpec, "variable '" + var.name + "' needs at least 2 labels"});
    }
    std::map<std::string, int> seen;
    for (const auto& label : var.domain) {
      if (label.find(kRowKeySeparator) != std::string::npos) {
        issues.push_back({ErrorCode::InvalidSpec,
                          "label '" + label + "' of '" + var.name + "' contains the reserved '|' separator"});
      }
      if (++seen[label] == 2) {
        issues.push_back({ErrorCode::InvalidSpec, "label '" + label + "' duplicated in domain of '" + var.name + "'"});
      }
    }
  }

  // One CPT per declared variable, references resolved.
  std::vector<const Cpt*> cpt_of(spec.variables.size(), nullptr);
  for (const auto& cpt : spec.cpts) {
    auto it = index.find(cpt.child);
    if (it == index.end()) {
      issues.push_back({ErrorCode::UnknownVariable, "cpt child '" + cpt.child + "' is not declared"});
      continue;
    }
    if (cpt_of[static_cast<std::size_t>(it->second)] != nullptr) {
      issues.push_back({ErrorCode::InvalidSpec, "variable '" + cpt.child + "' has more than one cpt"});
      continue;
    }
    cpt_of[static_cast<std::size_t>(it->second)] = &cpt;
  }
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    if (cpt_of[i] == nullptr) {
      issues.push_back({ErrorCode::IncompleteCpt, "variable '" + spec.variables[i].name + "' has no cpt"});
    }
  }

  std::vector<std::vector<int>> parent_ids(spec.variables.size());
  std::vector<bool> resolvable(spec.variables.size(), false);
  std::vector<std::vector<int>> children(spec.variables.size());
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    if (cpt_of[i] == nullptr) continue;
    const Cpt& cpt = *cpt_of[i];
    std::vector<int> parents;
    bool ok = true;
    for (const auto& parent : cpt.parents) {
      auto it = index.find(parent);
      if (it == index.end()) {
        issues.push_back({ErrorCode::UnknownVariable,
                          "cpt of '" + cpt.child + "' references unknown parent '" + parent + "'"});
        ok = false;
        continue;
      }
      if (std::find(parents.begin(), parents.end(), it->second) != parents.end()) {
        issues.push_back({ErrorCode::InvalidSpec, "cpt of '" + cpt.child + "' lists parent '" + parent + "' twice"});
        ok = false;
        continue;
      }
      parents.push_back(it->second);
    }
    if (!ok) continue;
    parent_ids[i] = parents;
    resolvable[i] = spec.variables[i].domain.size() >= 2;
    for (int p : parents) children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
  }

  std::vector<int> cycle;
  if (detail::find_cycle(children, cycle)) {
    std::string path;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) path += " -> ";
      path += spec.variables[static_cast<std::size_t>(cycle[i])].name;
    }
    issues.push_back({ErrorCode::CycleDetected, "cycle: " + path});
  }

  // Table completeness and row normalization, for every cpt whose references
  // resolved (independent of cycles elsewhere, so all violations surface).
  std::vector<std::vector<double>> tables(spec.variables.size());
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    if (!resolvable[i]) continue;
    const Cpt& cpt = *cpt_of[i];
    const std::size_t card = spec.variables[i].domain.size();
    std::size_t row_count = 1;
    for (int p : parent_ids[i]) row_count *= spec.variables[static_cast<std::size_t>(p)].domain.size();
    std::vector<double> table(row_count * card, -1.0);

    std::vector<std::size_t> radix(parent_ids[i].size());
    for (std::size_t p = 0; p < parent_ids[i].size(); ++p) {
      radix[p] = spec.variables[static_cast<std::size_t>(parent_ids[i][p])].domain.size();
    }

    for (const auto& [key, row] : cpt.rows) {
      // Decode the key back to per-parent label indices.
      std::vector<std::string> labels;
      if (!key.empty() || !parent_ids[i].empty()) {
        std::size_t pos = 0;
        while (true) {
          std::size_t sep = key.find(kRowKeySeparator, pos);
          labels.push_back(key.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos));
          if (sep == std::string::npos) break;
          pos = sep + 1;
        }
      }
      if (labels.size() != parent_ids[i].size()) {
        issues.push_back({ErrorCode::IncompleteCpt,
                          "cpt of '" + cpt.child + "': row key '" + key + "' has " +
                              std::to_string(labels.size()) + " labels, expected " +
                              std::to_string(parent_ids[i].size())});
        continue;
      }
      std::size_t row_index = 0;
      bool key_ok = true;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        const auto& domain = spec.variables[static_cast<std::size_t>(parent_ids[i][p])].domain;
        auto it = std::find(domain.begin(), domain.end(), labels[p]);
        if (it == domain.end()) {
          issues.push_back({ErrorCode::IncompleteCpt,
                            "cpt of '" + cpt.child + "': row key '" + key + "' uses unknown label '" + labels[p] +
                                "' for parent '" + cpt.parents[p] + "'"});
          key_ok = false;
          break;
        }
        row_index = row_index * radix[p] + static_cast<std::size_t>(it - domain.begin());
      }
      if (!key_ok) continue;

      if (row.size() != card) {
        issues.push_back({ErrorCode::IncompleteCpt,
                          "cpt of '" + cpt.child + "': row '" + key + "' has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(card)});
        continue;
      }
      if (table[row_index * card] >= 0.0) {
        issues.push_back({ErrorCode::InvalidSpec, "cpt of '" + cpt.child + "': row '" + key + "' appears twice"});
        continue;
      }
      double sum = 0.0;
      bool range_ok = true;
      for (double v : row) {
        if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) range_ok = false;
        sum += v;
      }
      if (!range_ok) {
        issues.push_back({ErrorCode::RowNotNormalized,
                          "cpt of '" + cpt.child + "': row '" + key + "' has entries outside [0,1]"});
        continue;
      }
      if (std::fabs(sum - 1.0) > kRowSumTolerance) {
        issues.push_back({ErrorCode::RowNotNormalized,
                          "cpt of '" + cpt.child + "': row '" + key + "' sums to " + std::to_string(sum)});
        continue;
      }
      std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(row_index * card));
    }

    // Report missing rows by reconstructing their keys.
    for (std::size_t r = 0; r < row_count; ++r) {
      if (table[r * card] >= 0.0) continue;
      std::vector<std::string> labels(parent_ids[i].size());
      std::size_t rest = r;
      for (std::size_t p = parent_ids[i].size(); p-- > 0;) {
        const auto& domain = spec.variables[static_cast<std::size_t>(parent_ids[i][p])].domain;
        labels[p] = domain[rest % domain.size()];
        rest /= domain.size();
      }
      issues.push_back({ErrorCode::IncompleteCpt,
                        "cpt of '" + cpt.child + "': missing row for parent tuple '" + join_labels(labels) + "'"});
    }
    tables[i] = std::move(table);
  }
  if (issues.size() != initial_issue_count) return std::nullopt;

  Network net;
  net.index_ = std::move(index);
  net.nodes_.resize(spec.variables.size());
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    net.nodes_[i].name = spec.variables[i].name;
    net.nodes_[i].labels = spec.variables[i].domain;
    net.nodes_[i].parents = parent_ids[i];
    net.nodes_[i].cpt = std::move(tables[i]);
  }
  // Kahn topological order, stable in declaration order.
  std::vector<int> indegree(spec.variables.size(), 0);
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    indegree[i] = static_cast<int>(parent_ids[i].size());
  }
  std::vector<int> ready;
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  }
  while (!ready.empty()) {
    int v = ready.front();
    ready.erase(ready.begin());
    net.topo_order_.push_back(v);
    for (int c : children[static_cast<std::size_t>(v)]) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
  }
  return net;
}

// Reports every violation found in the spec; an empty result means valid.
// Pure function: safe to call repeatedly, never mutates the spec.
inline std::vector<ValidationIssue> validate_network(const NetworkSpec& spec) {
  std::vector<ValidationIssue> issues;
  build_network(spec, issues);
  return issues;
}

// Compiles a spec for inference and sampling; throws with the full issue list
// if any invariant fails.
inline Network compile_network(const NetworkSpec& spec) {
  std::vector<ValidationIssue> issues;
  auto net = build_network(spec, issues);
  if (!net) throw Error(issues.empty() ? ErrorCode::InvalidSpec : issues.front().code, join_issues(issues));
  return std::move(*net);
}

// Joint probability of a full assignment via the chain-rule factorization.
inline double joint_probability(const Network& net, const Assignment& assignment) {
  std::vector<int> values(static_cast<std::size_t>(net.variable_count()), -1);
  for (const auto& [name, label] : assignment) {
    int v = net.index_of(name);
    values[static_cast<std::size_t>(v)] = net.value_of(v, label);
  }
  for (int v = 0; v < net.variable_count(); ++v) {
    if (values[static_cast<std::size_t>(v)] < 0) {
      throw Error(ErrorCode::PartialAssignment, "assignment misses variable '" + net.node(v).name + "'");
    }
  }
  double product = 1.0;
  std::vector<int> parent_values;
  for (int v = 0; v < net.variable_count(); ++v) {
    const auto& node = net.node(v);
    parent_values.resize(node.parents.size());
    for (std::size_t p = 0; p < node.parents.size(); ++p) {
      parent_values[p] = values[static_cast<std::size_t>(node.parents[p])];
    }
    product *= net.cpt_entry(v, parent_values, values[static_cast<std::size_t>(v)]);
  }
  return product;
}

}  // namespace occusim::bn
