// Seeded random generators shared by the unit, property and acceptance tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epsdist/formula.hpp"
#include "epsdist/modalities.hpp"
#include "epsdist/systems.hpp"

namespace epsdist::testing {

using Rng = std::mt19937_64;

/// The six system kinds exercised by the randomized suites.
inline const std::vector<SystemType>& all_types() {
  static const std::vector<SystemType> types{SystemType::MarkovChain, SystemType::LabelledMarkovChain,
                                             SystemType::Gpts,        SystemType::FuzzyTs,
                                             SystemType::MetricTs,    SystemType::ConvexMc};
  return types;
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// k/den with k uniform in [lo, den].
inline Value grid_value(Rng& rng, unsigned long den, unsigned long lo = 0) {
  return Value::ratio(static_cast<long>(uniform(rng, lo, den)), den);
}

/// A value from a small mixed grid of denominators.
inline Value random_value(Rng& rng) {
  static const unsigned long dens[] = {2, 3, 4, 5, 10};
  return grid_value(rng, dens[uniform(rng, 0, 4)]);
}

inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, std::size_t max_size) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(n, uniform(rng, 1, max_size)));
  std::sort(all.begin(), all.end());
  return all;
}

/// Weights in multiples of 1/den on a random support; total exactly 1 when
/// `full`, otherwise at most 1.
inline WeightMap random_weights(Rng& rng, std::size_t n, std::size_t max_support, bool full,
                                unsigned long den = 10) {
  const auto states = random_subset(rng, n, max_support);
  const unsigned long total = full ? den : uniform(rng, 0, den);
  std::vector<unsigned long> cuts{0, total};
  for (std::size_t i = 1; i < states.size(); ++i) cuts.push_back(uniform(rng, 0, total));
  std::sort(cuts.begin(), cuts.end());
  WeightMap w;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto k = cuts[i + 1] - cuts[i];
    if (k > 0) w.emplace_back(states[i], Value::ratio(static_cast<long>(k), den));
  }
  return w;
}

inline const std::vector<Label>& label_pool() {
  static const std::vector<Label> labels{"a", "b", "c"};
  return labels;
}

/// A metric on {a,b,c} induced by random points on a line.
inline LabelMetric random_line_metric(Rng& rng) {
  std::vector<long> pos;
  for (std::size_t i = 0; i < 3; ++i) pos.push_back(static_cast<long>(uniform(rng, 0, 10)));
  std::map<std::pair<Label, Label>, Value> dist;
  const auto& ls = label_pool();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      dist[{ls[i], ls[j]}] = Value::ratio(std::abs(pos[i] - pos[j]), 10);
  return LabelMetric::table(ls, dist);
}

inline Payload random_payload(Rng& rng, SystemType t, std::size_t n) {
  const std::size_t max_support = std::min<std::size_t>(n, 3);
  switch (t) {
    case SystemType::MarkovChain:
      return SubDist{random_weights(rng, n, max_support, coin(rng, 0.3))};
    case SystemType::LabelledMarkovChain: {
      LabelledSubDist d;
      for (const auto& l : {"a", "b"})
        if (coin(rng, 0.7)) d.slices[l] = random_weights(rng, n, max_support, coin(rng, 0.3));
      return d;
    }
    case SystemType::Gpts: {
      // Split one full distribution over two labels.
      auto w = random_weights(rng, n * 2, max_support + 1, true);
      LabelDist d;
      for (const auto& [s, v] : w) d.slices[s < n ? "a" : "b"].emplace_back(s % n, v);
      for (auto& [l, slice] : d.slices) slice = normalize(slice);
      return d;
    }
    case SystemType::FuzzyTs: {
      FuzzySet f;
      for (auto s : random_subset(rng, n, max_support)) f.degrees.emplace_back(s, random_value(rng));
      f.degrees = normalize(f.degrees);
      return f;
    }
    case SystemType::MetricTs: {
      LabelledEdgeSet e;
      const std::size_t k = uniform(rng, 0, 3);
      for (std::size_t i = 0; i < k; ++i) {
        auto& targets = e.edges[label_pool()[uniform(rng, 0, 2)]];
        targets.push_back(uniform(rng, 0, n - 1));
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      }
      return e;
    }
    case SystemType::ConvexMc: {
      ConvexSet c;
      const std::size_t k = uniform(rng, 1, 2);
      for (std::size_t i = 0; i < k; ++i) c.vertices.push_back(random_weights(rng, n, max_support, true));
      return c;
    }
  }
  return SubDist{};
}

inline System random_system(Rng& rng, SystemType t, std::size_t n, const LabelMetric* metric = nullptr,
                            const std::string& prefix = "s") {
  std::vector<std::string> names;
  std::vector<Payload> payloads;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(prefix + std::to_string(i));
    payloads.push_back(random_payload(rng, t, n));
  }
  std::optional<LabelMetric> m;
  if (t == SystemType::MetricTs) m = metric ? *metric : random_line_metric(rng);
  return System(t, std::move(names), std::move(payloads), m);
}

/// A left/right pair of the same type sharing one label metric.
struct SystemPair {
  System left;
  System right;
};

inline SystemPair random_pair(Rng& rng, SystemType t, std::size_t max_states) {
  const auto metric = random_line_metric(rng);
  auto left = random_system(rng, t, uniform(rng, 1, max_states), &metric, "x");
  auto right = random_system(rng, t, uniform(rng, 1, max_states), &metric, "y");
  return {std::move(left), std::move(right)};
}

/// Default modalities, optionally closed under duals.
inline ModalitySet random_lambda(Rng& rng, const System& left, const System& right) {
  auto l = default_modalities(left, right);
  if (coin(rng)) l = close_under_duals(l);
  return l;
}

/// Every modality a system type admits over labels a, b, c, with duals.
inline ModalitySet all_modalities(SystemType t) {
  std::vector<ModalityId> ms;
  for (auto f : {Family::P, Family::PLabel, Family::DiaLabel, Family::FuzzyDia, Family::MetricDia,
                 Family::ConvexDia}) {
    if (system_type_for(f) != t) continue;
    if (is_labelled(f)) {
      for (const auto& l : label_pool()) ms.push_back(ModalityId{f, l, false});
    } else {
      ms.push_back(ModalityId{f, "", false});
    }
  }
  return close_under_duals(make_modality_set(ms));
}

inline NodeId random_formula2(Rng& rng, Dag2& dag, const ModalitySet& lambda, int depth) {
  const auto pick = uniform(rng, 0, depth <= 0 ? 1 : 5);
  switch (pick) {
    case 0:
      return dag.top();
    case 1:
      return coin(rng, 0.8) ? dag.top() : dag.bot();
    case 2:
      return dag.conj(random_formula2(rng, dag, lambda, depth - 1), random_formula2(rng, dag, lambda, depth - 1));
    case 3:
      return dag.disj(random_formula2(rng, dag, lambda, depth - 1), random_formula2(rng, dag, lambda, depth - 1));
    default:
      return dag.mod(lambda[uniform(rng, 0, lambda.size() - 1)], random_value(rng),
                     random_formula2(rng, dag, lambda, depth - 1));
  }
}

inline NodeId random_formulaQ(Rng& rng, DagQ& dag, const ModalitySet& lambda, int depth) {
  const auto pick = uniform(rng, 0, depth <= 0 ? 1 : 6);
  switch (pick) {
    case 0:
      return dag.top();
    case 1:
      return dag.bot();
    case 2:
      return dag.conj(random_formulaQ(rng, dag, lambda, depth - 1), random_formulaQ(rng, dag, lambda, depth - 1));
    case 3:
      return dag.disj(random_formulaQ(rng, dag, lambda, depth - 1), random_formulaQ(rng, dag, lambda, depth - 1));
    case 4:
      return coin(rng) ? dag.shift_up(random_formulaQ(rng, dag, lambda, depth - 1), random_value(rng))
                       : dag.shift_down(random_formulaQ(rng, dag, lambda, depth - 1), random_value(rng));
    default:
      return dag.sugeno(lambda[uniform(rng, 0, lambda.size() - 1)],
                        random_formulaQ(rng, dag, lambda, depth - 1));
  }
}

/// Random [0,1]-valued relation on a mixed grid.
inline ValueMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ValueMatrix r(rows, cols);
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) r.at(x, y) = random_value(rng);
  return r;
}

inline Relation random_relation(Rng& rng, std::size_t rows, std::size_t cols, double density = 0.5) {
  Relation s(rows, cols);
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y)
      if (coin(rng, density)) s.insert(x, y);
  return s;
}

/// x loops with probability 1; y loops with probability 9/10.
inline SystemPair loop_pair() {
  return {load_system_text(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":"1"}}})"),
          load_system_text(R"({"type":"markov_chain","states":["y"],"transitions":{"y":{"y":"0.9"}}})")};
}

inline ModalityId mod(std::string_view text) { return parse_modality(text); }

inline Value v(std::string_view text) { return Value::parse(text); }

}  // namespace epsdist::testing
