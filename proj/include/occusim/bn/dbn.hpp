#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "occusim/bn/factor.hpp"
#include "occusim/bn/inference.hpp"
#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

inline constexpr std::string_view kPreviousPrefix = "previous:";

// Two-slice dynamic network. `prior` gives the slice-0 CPTs; `transition`
// gives one CPT per variable for slice t, where a parent name carrying the
// "previous:" prefix binds to the same variable at slice t-1.
struct TwoSliceSpec {
  std::vector<VariableSpec> variables;
  std::vector<Cpt> prior;
  std::vector<Cpt> transition;
};

inline bool is_previous_ref(const std::string& parent) {
  return parent.rfind(kPreviousPrefix, 0) == 0;
}

inline std::string strip_previous(const std::string& parent) {
  return parent.substr(kPreviousPrefix.size());
}

inline NetworkSpec prior_network(const TwoSliceSpec& spec) {
  return NetworkSpec{spec.variables, spec.prior};
}

// Interface variables: those referenced through "previous:" by any transition
// CPT, in declaration order. Their joint distribution is the filtering state.
inline std::vector<std::string> interface_variables(const TwoSliceSpec& spec) {
  std::set<std::string> named;
  for (const auto& cpt : spec.transition) {
    for (const auto& parent : cpt.parents) {
      if (is_previous_ref(parent)) named.insert(strip_previous(parent));
    }
  }
  std::vector<std::string> out;
  for (const auto& var : spec.variables) {
    if (named.count(var.name)) out.push_back(var.name);
  }
  return out;
}

inline std::vector<ValidationIssue> validate_two_slice(const TwoSliceSpec& spec) {
  std::vector<ValidationIssue> issues;

  for (const auto& cpt : spec.prior) {
    for (const auto& parent : cpt.parents) {
      if (is_previous_ref(parent)) {
        issues.push_back({ErrorCode::InvalidSpec,
                          "prior cpt of '" + cpt.child + "' must not use inter-slice parent '" + parent + "'"});
      }
    }
  }
  if (issues.empty()) {
    auto prior_issues = validate_network(prior_network(spec));
    issues.insert(issues.end(), prior_issues.begin(), prior_issues.end());
  }

  // The transition slice validates as a static network once every
  // "previous:<name>" parent is materialized as a root variable. This covers
  // intra-slice acyclicity, table completeness and row normalization, and by
  // construction inter-slice edges can only point from t-1 to t.
  NetworkSpec slice;
  slice.variables = spec.variables;
  std::set<std::string> declared;
  for (const auto& var : spec.variables) declared.insert(var.name);
  std::set<std::string> prev_added;
  for (const auto& cpt : spec.transition) {
    for (const auto& parent : cpt.parents) {
      if (!is_previous_ref(parent)) continue;
      const std::string base = strip_previous(parent);
      if (!declared.count(base)) {
        issues.push_back({ErrorCode::UnknownVariable,
                          "transition cpt of '" + cpt.child + "' references unknown variable '" + parent + "'"});
        continue;
      }
      if (prev_added.insert(parent).second) {
        auto it = std::find_if(spec.variables.begin(), spec.variables.end(),
                               [&](const VariableSpec& v) { return v.name == base; });
        VariableSpec ghost{parent, it->domain};
        slice.variables.push_back(ghost);
        Cpt uniform{parent, {}, {}};
        uniform.rows[""] = std::vector<double>(it->domain.size(), 1.0 / static_cast<double>(it->domain.size()));
        slice.cpts.push_back(uniform);
      }
    }
  }
  if (prev_added.empty()) {
    issues.push_back({ErrorCode::InvalidSpec, "two-slice model has no inter-slice edge; the model is static"});
  }
  slice.cpts.insert(slice.cpts.end(), spec.transition.begin(), spec.transition.end());
  if (std::none_of(issues.begin(), issues.end(),
                   [](const ValidationIssue& i) { return i.code == ErrorCode::UnknownVariable; })) {
    auto slice_issues = validate_network(slice);
    issues.insert(issues.end(), slice_issues.begin(), slice_issues.end());
  }
  return issues;
}

// Unrolls the two-slice model into a static network over T slices. Slice-t
// copies are renamed "<name>@t"; slice 0 uses the prior CPTs, later slices the
// transition CPTs with "previous:" parents bound to slice t-1.
inline NetworkSpec unroll_dbn(const TwoSliceSpec& spec, std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::ConfigError, "unroll horizon must be >= 1");
  auto issues = validate_two_slice(spec);
  if (!issues.empty()) throw Error(issues.front().code, join_issues(issues));

  const auto at = [](const std::string& name, std::size_t t) { return name + "@" + std::to_string(t); };

  NetworkSpec out;
  for (std::size_t t = 0; t < horizon; ++t) {
    for (const auto& var : spec.variables) {
      out.variables.push_back({at(var.name, t), var.domain});
    }
    const auto& cpts = (t == 0) ? spec.prior : spec.transition;
    for (const auto& cpt : cpts) {
      Cpt copy;
      copy.child = at(cpt.child, t);
      for (const auto& parent : cpt.parents) {
        copy.parents.push_back(is_previous_ref(parent) ? at(strip_previous(parent), t - 1) : at(parent, t));
      }
      copy.rows = cpt.rows;
      out.cpts.push_back(copy);
    }
  }
  auto unrolled_issues = validate_network(out);
  if (!unrolled_issues.empty()) {
    throw Error(unrolled_issues.front().code, join_issues(unrolled_issues));
  }
  return out;
}

// Compiled two-slice model for forward filtering. The factor id space puts the
// current slice at the variable's declaration index and the previous-slice
// interface copies after all current variables.
class TwoSlice {
 public:
  static TwoSlice compile(const TwoSliceSpec& spec) {
    auto issues = validate_two_slice(spec);
    if (!issues.empty()) throw Error(issues.front().code, join_issues(issues));

    TwoSlice model;
    model.spec_ = spec;
    model.prior_ = compile_network(prior_network(spec));
    model.interface_names_ = interface_variables(spec);

    const int n = static_cast<int>(spec.variables.size());
    for (int i = 0; i < n; ++i) model.var_ids_[spec.variables[static_cast<std::size_t>(i)].name] = i;
    for (std::size_t k = 0; k < model.interface_names_.size(); ++k) {
      model.prev_ids_[model.interface_names_[k]] = n + static_cast<int>(k);
      model.interface_ids_.push_back(model.var_ids_.at(model.interface_names_[k]));
    }

    for (const auto& cpt : spec.transition) {
      model.transition_factors_.push_back(model.transition_factor(cpt));
    }
    return model;
  }

  const Network& prior() const { return prior_; }
  const TwoSliceSpec& spec() const { return spec_; }
  const std::vector<std::string>& interface_names() const { return interface_names_; }

  // Belief after slice 0: P(interface@0 | evidence_0).
  Distribution initial_belief(const Evidence& evidence0) const {
    return infer_posterior(prior_, evidence0, interface_names_);
  }

  // One forward step: P(interface@t | evidence up to t) from the belief over
  // interface@t-1 and the evidence observed at t. Exact because the interface
  // separates slice t from everything before t-1.
  Distribution filter(const Distribution& belief, const Evidence& evidence_t) const {
    check_belief(belief);

    std::map<int, int> fixed;
    std::vector<Factor> indicators;
    for (const auto& [name, label] : evidence_t) {
      auto it = var_ids_.find(name);
      if (it == var_ids_.end()) throw Error(ErrorCode::UnknownVariable, "variable '" + name + "' is not declared");
      const int value = value_of(name, label);
      if (std::find(interface_ids_.begin(), interface_ids_.end(), it->second) != interface_ids_.end()) {
        // Interface variables stay in the returned belief, so observe them
        // through an indicator factor instead of slicing them away.
        Factor ind;
        ind.vars = {it->second};
        ind.cards = {static_cast<int>(domain_of(name).size())};
        ind.values.assign(static_cast<std::size_t>(ind.cards[0]), 0.0);
        ind.values[static_cast<std::size_t>(value)] = 1.0;
        indicators.push_back(std::move(ind));
      } else {
        fixed[it->second] = value;
      }
    }

    std::vector<Factor> factors;
    factors.reserve(transition_factors_.size() + indicators.size() + 1);
    for (const auto& f : transition_factors_) factors.push_back(reduce(f, fixed));
    for (auto& f : indicators) factors.push_back(std::move(f));
    factors.push_back(belief_factor(belief));

    Factor joint = eliminate(std::move(factors), interface_ids_);
    double z = 0.0;
    for (double p : joint.values) z += p;
    if (z == 0.0) throw Error(ErrorCode::ZeroProbabilityEvidence, "evidence has probability zero");

    Distribution out;
    for (int v : joint.vars) {
      const auto& var = spec_.variables[static_cast<std::size_t>(v)];
      out.variables.push_back(var.name);
      out.domains.push_back(var.domain);
    }
    out.probabilities.resize(joint.values.size());
    for (std::size_t i = 0; i < joint.values.size(); ++i) out.probabilities[i] = joint.values[i] / z;
    return out;
  }

 private:
  int value_of(const std::string& name, const std::string& label) const {
    const auto& var = spec_.variables[static_cast<std::size_t>(var_ids_.at(name))];
    auto it = std::find(var.domain.begin(), var.domain.end(), label);
    if (it == var.domain.end()) {
      throw Error(ErrorCode::UnknownLabel, "label '" + label + "' is not in the domain of '" + name + "'");
    }
    return static_cast<int>(it - var.domain.begin());
  }

  Factor transition_factor(const Cpt& cpt) const {
    std::vector<int> layout;
    std::vector<int> cards;
    for (const auto& parent : cpt.parents) {
      const std::string base = is_previous_ref(parent) ? strip_previous(parent) : parent;
      const int id = is_previous_ref(parent) ? prev_ids_.at(base) : var_ids_.at(base);
      layout.push_back(id);
      cards.push_back(static_cast<int>(domain_of(base).size()));
    }
    layout.push_back(var_ids_.at(cpt.child));
    cards.push_back(static_cast<int>(domain_of(cpt.child).size()));

    // Fill values in CPT layout order from the row map, then delegate the
    // axis sort to multiply() by building through a unit factor.
    Factor f;
    f.vars = layout;
    f.cards = cards;
    f.values.assign(detail::table_size(cards), 0.0);
    for (const auto& [key, row] : cpt.rows) {
      std::vector<std::string> labels;
      if (!key.empty() || !cpt.parents.empty()) {
        std::size_t pos = 0;
        while (true) {
          std::size_t sep = key.find(kRowKeySeparator, pos);
          labels.push_back(key.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos));
          if (sep == std::string::npos) break;
          pos = sep + 1;
        }
      }
      std::size_t row_index = 0;
      for (std::size_t p = 0; p < labels.size(); ++p) {
        const std::string base = is_previous_ref(cpt.parents[p]) ? strip_previous(cpt.parents[p]) : cpt.parents[p];
        const auto& domain = domain_of(base);
        auto it = std::find(domain.begin(), domain.end(), labels[p]);
        row_index = row_index * domain.size() + static_cast<std::size_t>(it - domain.begin());
      }
      const std::size_t card = row.size();
      std::copy(row.begin(), row.end(), f.values.begin() + static_cast<std::ptrdiff_t>(row_index * card));
    }
    return multiply(f, Factor::constant(1.0));
  }

  Factor belief_factor(const Distribution& belief) const {
    Factor f;
    std::vector<int> layout;
    std::vector<int> cards;
    for (std::size_t i = 0; i < belief.variables.size(); ++i) {
      layout.push_back(prev_ids_.at(belief.variables[i]));
      cards.push_back(static_cast<int>(belief.domains[i].size()));
    }
    f.vars = layout;
    f.cards = cards;
    f.values = belief.probabilities;
    return multiply(f, Factor::constant(1.0));
  }

  void check_belief(const Distribution& belief) const {
    std::set<std::string> expected(interface_names_.begin(), interface_names_.end());
    std::set<std::string> given(belief.variables.begin(), belief.variables.end());
    if (expected != given || belief.variables.size() != interface_names_.size()) {
      throw Error(ErrorCode::BeliefVariableMismatch,
                  "belief must cover exactly the interface variables {" + join_labels(interface_names_) + "}");
    }
    for (std::size_t i = 0; i < belief.variables.size(); ++i) {
      if (belief.domains[i] != domain_of(belief.variables[i])) {
        throw Error(ErrorCode::BeliefVariableMismatch,
                    "belief domain of '" + belief.variables[i] + "' does not match the model");
      }
    }
  }

  const std::vector<std::string>& domain_of(const std::string& name) const {
    return spec_.variables[static_cast<std::size_t>(var_ids_.at(name))].domain;
  }

  TwoSliceSpec spec_;
  Network prior_;
  std::vector<std::string> interface_names_;
  std::vector<int> interface_ids_;  // current-slice ids, ascending
  std::map<std::string, int> var_ids_;
  std::map<std::string, int> prev_ids_;
  std::vector<Factor> transition_factors_;
};

// Spec-level convenience wrapper; compiles on every call. Prefer TwoSlice for
// repeated filtering.
inline Distribution filter_step(const TwoSliceSpec& spec, const Distribution& belief, const Evidence& evidence_t) {
  return TwoSlice::compile(spec).filter(belief, evidence_t);
}

}  // namespace occusim::bn
