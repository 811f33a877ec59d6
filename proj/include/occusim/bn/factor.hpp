#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "occusim/bn/network.hpp"
#include "occusim/common.hpp"

namespace occusim::bn {

// Joint distribution over one or more named variables, indexed mixed-radix
// with the last variable varying fastest.
struct Distribution {
  std::vector<std::string> variables;
  std::vector<std::vector<std::string>> domains;
  std::vector<double> probabilities;

  std::size_t index_of(const Assignment& assignment) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < variables.size(); ++i) {
      auto it = assignment.find(variables[i]);
      if (it == assignment.end()) {
        throw Error(ErrorCode::PartialAssignment, "assignment misses variable '" + variables[i] + "'");
      }
      auto pos = std::find(domains[i].begin(), domains[i].end(), it->second);
      if (pos == domains[i].end()) {
        throw Error(ErrorCode::UnknownLabel,
                    "label '" + it->second + "' is not in the domain of '" + variables[i] + "'");
      }
      idx = idx * domains[i].size() + static_cast<std::size_t>(pos - domains[i].begin());
    }
    return idx;
  }

  Assignment assignment_at(std::size_t index) const {
    Assignment out;
    for (std::size_t i = variables.size(); i-- > 0;) {
      out[variables[i]] = domains[i][index % domains[i].size()];
      index /= domains[i].size();
    }
    return out;
  }

  double probability_of(const Assignment& assignment) const { return probabilities[index_of(assignment)]; }

  // Marginal over a single variable of this distribution.
  std::vector<double> marginal(const std::string& variable) const {
    auto it = std::find(variables.begin(), variables.end(), variable);
    if (it == variables.end()) {
      throw Error(ErrorCode::UnknownVariable, "distribution does not cover '" + variable + "'");
    }
    const std::size_t axis = static_cast<std::size_t>(it - variables.begin());
    std::vector<double> out(domains[axis].size(), 0.0);
    std::size_t tail = 1;
    for (std::size_t i = axis + 1; i < variables.size(); ++i) tail *= domains[i].size();
    for (std::size_t idx = 0; idx < probabilities.size(); ++idx) {
      out[(idx / tail) % domains[axis].size()] += probabilities[idx];
    }
    return out;
  }
};

// Point-mass distribution with the same variables/domains as `like`.
inline Distribution point_mass(const Distribution& like, const Assignment& assignment) {
  Distribution out{like.variables, like.domains, std::vector<double>(like.probabilities.size(), 0.0)};
  out.probabilities[out.index_of(assignment)] = 1.0;
  return out;
}

// Categorical draw from a joint distribution using the shared uniform01 stream.
inline Assignment sample_from(const Distribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  std::size_t chosen = dist.probabilities.size() - 1;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    cum += dist.probabilities[i];
    if (u < cum) {
      chosen = i;
      break;
    }
  }
  return dist.assignment_at(chosen);
}

// Table over a set of integer variable ids (kept sorted ascending), mixed-radix
// with the last id fastest. The id space is supplied by the caller: network
// node indices for static inference, a prev/current scheme for filtering.
struct Factor {
  std::vector<int> vars;
  std::vector<int> cards;
  std::vector<double> values;

  static Factor constant(double value) { return Factor{{}, {}, {value}}; }
};

namespace detail {

inline std::size_t table_size(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Strides of `sub.vars` inside an iteration over `vars` (0 where absent).
inline std::vector<std::size_t> strides_in(const std::vector<int>& vars, const Factor& sub) {
  std::vector<std::size_t> strides(vars.size(), 0);
  std::vector<std::size_t> own(sub.vars.size(), 1);
  for (std::size_t i = sub.vars.size(); i-- > 1;) {
    own[i - 1] = own[i] * static_cast<std::size_t>(sub.cards[i]);
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = std::find(sub.vars.begin(), sub.vars.end(), vars[i]);
    if (it != sub.vars.end()) strides[i] = own[static_cast<std::size_t>(it - sub.vars.begin())];
  }
  return strides;
}

}  // namespace detail

inline Factor multiply(const Factor& a, const Factor& b) {
  Factor out;
  out.vars = a.vars;
  out.cards = a.cards;
  for (std::size_t i = 0; i < b.vars.size(); ++i) {
    if (std::find(out.vars.begin(), out.vars.end(), b.vars[i]) == out.vars.end()) {
      out.vars.push_back(b.vars[i]);
      out.cards.push_back(b.cards[i]);
    }
  }
  // Keep ids sorted so factor identity is independent of multiplication order.
  std::vector<std::size_t> perm(out.vars.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return out.vars[x] < out.vars[y]; });
  std::vector<int> vars(out.vars.size()), cards(out.vars.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    vars[i] = out.vars[perm[i]];
    cards[i] = out.cards[perm[i]];
  }
  out.vars = std::move(vars);
  out.cards = std::move(cards);

  out.values.assign(detail::table_size(out.cards), 0.0);
  const auto sa = detail::strides_in(out.vars, a);
  const auto sb = detail::strides_in(out.vars, b);

  std::vector<int> digits(out.vars.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t idx = 0;; ++idx) {
    out.values[idx] = a.values[ia] * b.values[ib];
    // Odometer increment, last axis fastest.
    std::size_t axis = out.vars.size();
    while (axis-- > 0) {
      ++digits[axis];
      ia += sa[axis];
      ib += sb[axis];
      if (digits[axis] < out.cards[axis]) break;
      ia -= sa[axis] * static_cast<std::size_t>(out.cards[axis]);
      ib -= sb[axis] * static_cast<std::size_t>(out.cards[axis]);
      digits[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

inline Factor sum_out(const Factor& f, int var) {
  auto it = std::find(f.vars.begin(), f.vars.end(), var);
  if (it == f.vars.end()) return f;
  const std::size_t axis = static_cast<std::size_t>(it - f.vars.begin());

  Factor out;
  out.vars = f.vars;
  out.cards = f.cards;
  out.vars.erase(out.vars.begin() + static_cast<std::ptrdiff_t>(axis));
  out.cards.erase(out.cards.begin() + static_cast<std::ptrdiff_t>(axis));
  out.values.assign(detail::table_size(out.cards), 0.0);

  std::size_t tail = 1;
  for (std::size_t i = axis + 1; i < f.vars.size(); ++i) tail *= static_cast<std::size_t>(f.cards[i]);
  const std::size_t card = static_cast<std::size_t>(f.cards[axis]);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    const std::size_t head = idx / (tail * card);
    const std::size_t rest = idx % tail;
    out.values[head * tail + rest] += f.values[idx];
  }
  return out;
}

// Slices the factor on fixed values (id -> value); fixed variables are removed.
inline Factor reduce(const Factor& f, const std::map<int, int>& fixed) {
  bool touched = false;
  for (int v : f.vars) {
    if (fixed.count(v)) {
      touched = true;
      break;
    }
  }
  if (!touched) return f;

  Factor out;
  std::vector<int> keep_axis;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (!fixed.count(f.vars[i])) {
      out.vars.push_back(f.vars[i]);
      out.cards.push_back(f.cards[i]);
      keep_axis.push_back(static_cast<int>(i));
    }
  }
  out.values.assign(detail::table_size(out.cards), 0.0);

  std::vector<std::size_t> strides(f.vars.size(), 1);
  for (std::size_t i = f.vars.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * static_cast<std::size_t>(f.cards[i]);
  }
  std::size_t base = 0;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    auto it = fixed.find(f.vars[i]);
    if (it != fixed.end()) base += strides[i] * static_cast<std::size_t>(it->second);
  }
  for (std::size_t out_idx = 0; out_idx < out.values.size(); ++out_idx) {
    std::size_t rest = out_idx;
    std::size_t src = base;
    for (std::size_t i = out.vars.size(); i-- > 0;) {
      src += strides[static_cast<std::size_t>(keep_axis[i])] * (rest % static_cast<std::size_t>(out.cards[i]));
      rest /= static_cast<std::size_t>(out.cards[i]);
    }
    out.values[out_idx] = f.values[src];
  }
  return out;
}

// Sum-product variable elimination. Eliminates everything not in `keep` using
// the min-degree heuristic on the interaction graph, ties broken by the lower
// variable id (declaration order), so the schedule is deterministic. Returns
// an unnormalized factor whose vars are exactly the kept ids, ascending.
inline Factor eliminate(std::vector<Factor> factors, const std::vector<int>& keep) {
  std::set<int> keep_set(keep.begin(), keep.end());
  std::set<int> to_eliminate;
  for (const auto& f : factors) {
    for (int v : f.vars) {
      if (!keep_set.count(v)) to_eliminate.insert(v);
    }
  }

  while (!to_eliminate.empty()) {
    // Interaction graph over remaining variables.
    std::map<int, std::set<int>> neighbors;
    for (int v : to_eliminate) neighbors[v];
    for (const auto& f : factors) {
      for (int a : f.vars) {
        if (!to_eliminate.count(a)) continue;
        for (int b : f.vars) {
          if (b != a) neighbors[a].insert(b);
        }
      }
    }
    int best = -1;
    std::size_t best_degree = 0;
    for (const auto& [v, adj] : neighbors) {
      if (best < 0 || adj.size() < best_degree) {
        best = v;
        best_degree = adj.size();
      }
    }

    std::vector<Factor> rest;
    Factor product = Factor::constant(1.0);
    bool any = false;
    for (auto& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end()) {
        product = any ? multiply(product, f) : std::move(f);
        any = true;
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(sum_out(product, best));
    factors = std::move(rest);
    to_eliminate.erase(best);
  }

  Factor result = Factor::constant(1.0);
  for (auto& f : factors) result = multiply(result, f);
  return result;
}

}  // namespace occusim::bn
