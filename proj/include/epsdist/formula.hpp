#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epsdist/modalities.hpp"
#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"
#include "epsdist/values.hpp"
#include "json.hpp"

namespace epsdist {

using NodeId = std::uint32_t;

/// L2(Lambda): tt | ff | φ ∧ ψ | φ ∨ ψ | λ_q φ
struct Node2 {
  enum class Kind : std::uint8_t { Top, Bot, And, Or, Mod };
  Kind kind = Kind::Top;
  NodeId left = 0;
  NodeId right = 0;
  ModalityId modality;
  Value q;

  friend bool operator==(const Node2&, const Node2&) = default;
};

/// L(<Lambda>): tt | ff | φ ∧ ψ | φ ∨ ψ | φ ⊕ q | φ ⊖ q | <λ> φ
struct NodeQ {
  enum class Kind : std::uint8_t { Top, Bot, And, Or, ShiftUp, ShiftDown, Sugeno };
  Kind kind = Kind::Top;
  NodeId left = 0;
  NodeId right = 0;
  ModalityId modality;
  Value q;

  friend bool operator==(const NodeQ&, const NodeQ&) = default;
};

template <class Node>
struct NodeHash {
  std::size_t operator()(const Node& n) const noexcept {
    std::size_t h = static_cast<std::size_t>(n.kind);
    const auto mix = [&](std::size_t v) { h = h * 0x9e3779b97f4a7c15ULL ^ (v + (h >> 17)); };
    mix(n.left);
    mix(n.right);
    mix(static_cast<std::size_t>(n.modality.family));
    mix(std::hash<std::string>{}(n.modality.label));
    mix(n.modality.dual ? 1 : 0);
    mix(hash_rational(n.q.rational()));
    return h;
  }
};

/// Hash-consed node store. Children always have smaller ids than parents, so
/// ascending id order is a topological order. Not thread-safe for insertion.
template <class Node>
class Dag {
 public:
  using Kind = typename Node::Kind;

  NodeId intern(const Node& n) {
    if (const auto it = index_.find(n); it != index_.end()) return it->second;
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(n, id);
    return id;
  }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }

  static Node make(Kind k, NodeId l = 0, NodeId r = 0) {
    Node n;
    n.kind = k;
    n.left = l;
    n.right = r;
    return n;
  }

  NodeId top() { return intern(make(Kind::Top)); }
  NodeId bot() { return intern(make(Kind::Bot)); }
  NodeId conj(NodeId a, NodeId b) { return intern(make(Kind::And, a, b)); }
  NodeId disj(NodeId a, NodeId b) { return intern(make(Kind::Or, a, b)); }

  /// Left fold; empty gives tt, a singleton gives itself.
  NodeId big_and(const std::vector<NodeId>& xs) {
    if (xs.empty()) return top();
    auto acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = conj(acc, xs[i]);
    return acc;
  }
  /// Left fold; empty gives ff, a singleton gives itself.
  NodeId big_or(const std::vector<NodeId>& xs) {
    if (xs.empty()) return bot();
    auto acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = disj(acc, xs[i]);
    return acc;
  }

  /// Children of a node (0, 1 or 2 of them).
  std::vector<NodeId> children(NodeId id) const {
    const auto& n = node(id);
    switch (arity(n.kind)) {
      case 2: return {n.left, n.right};
      case 1: return {n.left};
      default: return {};
    }
  }

  /// Nodes reachable from `roots`, ascending.
  std::vector<NodeId> reachable(const std::vector<NodeId>& roots) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeId> stack;
    for (auto r : roots) {
      if (!seen.at(r)) {
        seen[r] = true;
        stack.push_back(r);
      }
    }
    while (!stack.empty()) {
      const auto id = stack.back();
      stack.pop_back();
      for (auto c : children(id)) {
        if (!seen[c]) {
          seen[c] = true;
          stack.push_back(c);
        }
      }
    }
    std::vector<NodeId> out;
    for (NodeId i = 0; i < nodes_.size(); ++i)
      if (seen[i]) out.push_back(i);
    return out;
  }

  static int arity(Kind k);

 private:
  std::vector<Node> nodes_;
  std::unordered_map<Node, NodeId, NodeHash<Node>> index_;
};

template <>
inline int Dag<Node2>::arity(Kind k) {
  switch (k) {
    case Kind::And:
    case Kind::Or: return 2;
    case Kind::Mod: return 1;
    default: return 0;
  }
}

template <>
inline int Dag<NodeQ>::arity(Kind k) {
  switch (k) {
    case Kind::And:
    case Kind::Or: return 2;
    case Kind::ShiftUp:
    case Kind::ShiftDown:
    case Kind::Sugeno: return 1;
    default: return 0;
  }
}

class Dag2 : public Dag<Node2> {
 public:
  NodeId mod(const ModalityId& m, const Value& q, NodeId child) {
    return intern(Node2{Node2::Kind::Mod, child, 0, m, q});
  }
};

class DagQ : public Dag<NodeQ> {
 public:
  NodeId shift_up(NodeId child, const Value& q) {
    return intern(NodeQ{NodeQ::Kind::ShiftUp, child, 0, {}, q});
  }
  NodeId shift_down(NodeId child, const Value& q) {
    return intern(NodeQ{NodeQ::Kind::ShiftDown, child, 0, {}, q});
  }
  NodeId sugeno(const ModalityId& m, NodeId child) {
    return intern(NodeQ{NodeQ::Kind::Sugeno, child, 0, m, {}});
  }
};

struct FormulaMetrics {
  std::size_t dag_size = 0;
  /// Saturates at UINT64_MAX.
  std::uint64_t tree_size = 0;
  std::size_t modal_rank = 0;

  friend bool operator==(const FormulaMetrics&, const FormulaMetrics&) = default;
};

FormulaMetrics metrics(const Dag2& dag, NodeId root);
FormulaMetrics metrics(const DagQ& dag, NodeId root);

/// Memoizing evaluator for ⟦-⟧_eps over one system. Every node is computed at
/// most once per evaluator.
class Eval2 {
 public:
  /// Throws ContractError if a modality does not apply to `sys`.
  Eval2(const Dag2& dag, const System& sys, const Value& eps, LabelMetric metric);
  const StateSet& operator()(NodeId root);

 private:
  const Dag2& dag_;
  const System& sys_;
  Value eps_;
  LabelMetric metric_;
  std::vector<std::optional<StateSet>> memo_;
};

class EvalQ {
 public:
  EvalQ(const DagQ& dag, const System& sys, LabelMetric metric);
  const std::vector<Value>& operator()(NodeId root);

 private:
  const DagQ& dag_;
  const System& sys_;
  LabelMetric metric_;
  std::vector<std::optional<std::vector<Value>>> memo_;
};

/// One-shot helpers using the system's own metric.
StateSet eval2(const Dag2& dag, NodeId root, const System& sys, const Value& eps);
std::vector<Value> evalQ(const DagQ& dag, NodeId root, const System& sys);

/// Lowers every threshold by delta (truncated at 0).
NodeId relax(Dag2& dag, NodeId root, const Value& delta);

/// ⟦negateQ φ⟧ = 1 - ⟦φ⟧. Throws ContractError if a needed dual is not in `lambda`.
NodeId negateQ(DagQ& dag, NodeId root, const ModalitySet& lambda);

/// Throws ParseError (with position) on syntax errors, unknown modalities and
/// thresholds outside [0,1].
NodeId parse_formula2(Dag2& dag, std::string_view text);
NodeId parse_formulaQ(DagQ& dag, std::string_view text);

std::string print_formula(const Dag2& dag, NodeId root);
std::string print_formula(const DagQ& dag, NodeId root);

/// Topologically sorted node list of the sub-dag at `root`:
/// {"logic": ..., "nodes": [{"op": ..., "args": [...], ...}], "root": k}.
nlohmann::json dag_to_json(const Dag2& dag, NodeId root);
nlohmann::json dag_to_json(const DagQ& dag, NodeId root);
/// Throws ValidationError with a JSON pointer relative to `path`.
NodeId dag_from_json(Dag2& dag, const nlohmann::json& j, const std::string& path = "");
NodeId dag_from_json(DagQ& dag, const nlohmann::json& j, const std::string& path = "");

/// Modalities mentioned in the formula.
ModalitySet modalities_of(const Dag2& dag, NodeId root);
ModalitySet modalities_of(const DagQ& dag, NodeId root);

}  // namespace epsdist
