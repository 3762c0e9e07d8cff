#include "epsdist/formula.hpp"

#include <algorithm>
#include <limits>

#include "epsdist/errors.hpp"

namespace epsdist {

using nlohmann::json;

namespace {

template <class Node>
FormulaMetrics metrics_of(const Dag<Node>& dag, NodeId root, typename Node::Kind modal_kind) {
  const auto ids = dag.reachable({root});
  std::vector<std::uint64_t> tree(dag.size(), 0);
  std::vector<std::size_t> rank(dag.size(), 0);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (auto id : ids) {
    std::uint64_t t = 1;
    std::size_t r = 0;
    for (auto c : dag.children(id)) {
      t = (t > kMax - tree[c]) ? kMax : t + tree[c];
      r = std::max(r, rank[c]);
    }
    tree[id] = t;
    rank[id] = r + (dag.node(id).kind == modal_kind ? 1 : 0);
  }
  return {ids.size(), tree[root], rank[root]};
}

/// Unevaluated nodes reachable from root, ascending.
template <class Node, class Memo>
std::vector<NodeId> pending_nodes(const Dag<Node>& dag, NodeId root, const Memo& memo) {
  std::vector<NodeId> out;
  std::vector<bool> seen(dag.size(), false);
  std::vector<NodeId> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    if (memo[id]) continue;
    out.push_back(id);
    for (auto c : dag.children(id)) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string op_name(Node2::Kind k) {
  switch (k) {
    case Node2::Kind::Top: return "tt";
    case Node2::Kind::Bot: return "ff";
    case Node2::Kind::And: return "and";
    case Node2::Kind::Or: return "or";
    case Node2::Kind::Mod: return "mod";
  }
  return "?";
}

std::string op_name(NodeQ::Kind k) {
  switch (k) {
    case NodeQ::Kind::Top: return "tt";
    case NodeQ::Kind::Bot: return "ff";
    case NodeQ::Kind::And: return "and";
    case NodeQ::Kind::Or: return "or";
    case NodeQ::Kind::ShiftUp: return "shift_up";
    case NodeQ::Kind::ShiftDown: return "shift_down";
    case NodeQ::Kind::Sugeno: return "sugeno";
  }
  return "?";
}

template <class Kind>
std::optional<Kind> kind_from(std::string_view op, std::initializer_list<Kind> kinds) {
  for (auto k : kinds)
    if (op_name(k) == op) return k;
  return std::nullopt;
}

bool has_modality(Node2::Kind k) { return k == Node2::Kind::Mod; }
bool has_modality(NodeQ::Kind k) { return k == NodeQ::Kind::Sugeno; }
bool has_q(Node2::Kind k) { return k == Node2::Kind::Mod; }
bool has_q(NodeQ::Kind k) { return k == NodeQ::Kind::ShiftUp || k == NodeQ::Kind::ShiftDown; }

template <class Node>
json to_json_impl(const Dag<Node>& dag, NodeId root, const char* logic) {
  const auto ids = dag.reachable({root});
  std::unordered_map<NodeId, std::size_t> index;
  json nodes = json::array();
  for (auto id : ids) {
    const auto& n = dag.node(id);
    json o;
    o["id"] = nodes.size();
    o["op"] = op_name(n.kind);
    if (has_modality(n.kind)) o["modality"] = to_string(n.modality);
    if (has_q(n.kind)) o["q"] = n.q.str();
    const auto cs = dag.children(id);
    if (!cs.empty()) {
      json args = json::array();
      for (auto c : cs) args.push_back(index.at(c));
      o["args"] = args;
    }
    index[id] = nodes.size();
    nodes.push_back(o);
  }
  return {{"logic", logic}, {"nodes", nodes}, {"root", index.at(root)}};
}

template <class Node, class Kind>
NodeId from_json_impl(Dag<Node>& dag, const json& j, const std::string& path, const char* logic,
                      std::initializer_list<Kind> kinds) {
  if (!j.is_object()) throw ValidationError(path.empty() ? "/" : path, "expected an object");
  if (!j.contains("logic") || j["logic"] != logic) {
    throw ValidationError(path + "/logic", std::string("expected \"") + logic + "\"");
  }
  if (!j.contains("nodes") || !j["nodes"].is_array() || j["nodes"].empty()) {
    throw ValidationError(path + "/nodes", "expected a nonempty array");
  }
  std::vector<NodeId> ids;
  const auto& nodes = j["nodes"];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto np = path + "/nodes/" + std::to_string(i);
    const auto& o = nodes[i];
    if (!o.is_object() || !o.contains("op") || !o["op"].is_string()) {
      throw ValidationError(np, "node needs an \"op\" string");
    }
    const auto kind = kind_from<Kind>(o["op"].get<std::string>(), kinds);
    if (!kind) throw ValidationError(np + "/op", "unknown op '" + o["op"].get<std::string>() + "'");
    Node n = Dag<Node>::make(*kind);
    const auto arity = static_cast<std::size_t>(Dag<Node>::arity(*kind));
    const json args = o.contains("args") ? o["args"] : json::array();
    if (!args.is_array() || args.size() != arity) {
      throw ValidationError(np + "/args", "expected " + std::to_string(arity) + " child indices");
    }
    for (std::size_t a = 0; a < arity; ++a) {
      if (!args[a].is_number_unsigned() || args[a].get<std::size_t>() >= i) {
        throw ValidationError(np + "/args/" + std::to_string(a),
                              "child index must refer to an earlier node");
      }
      (a == 0 ? n.left : n.right) = ids[args[a].get<std::size_t>()];
    }
    if (has_modality(*kind)) {
      if (!o.contains("modality") || !o["modality"].is_string()) {
        throw ValidationError(np + "/modality", "missing");
      }
      try {
        n.modality = parse_modality(o["modality"].get<std::string>());
      } catch (const ParseError& e) {
        throw ValidationError(np + "/modality", e.what());
      }
    }
    if (has_q(*kind)) {
      if (!o.contains("q") || !o["q"].is_string()) throw ValidationError(np + "/q", "missing");
      try {
        n.q = Value::parse(o["q"].get<std::string>());
      } catch (const ParseError& e) {
        throw ValidationError(np + "/q", e.what());
      }
    }
    ids.push_back(dag.intern(n));
  }
  if (!j.contains("root") || !j["root"].is_number_unsigned() ||
      j["root"].get<std::size_t>() >= ids.size()) {
    throw ValidationError(path + "/root", "expected a node index");
  }
  return ids[j["root"].get<std::size_t>()];
}

template <class Node>
ModalitySet modalities_impl(const Dag<Node>& dag, NodeId root) {
  std::vector<ModalityId> out;
  for (auto id : dag.reachable({root}))
    if (has_modality(dag.node(id).kind)) out.push_back(dag.node(id).modality);
  return make_modality_set(std::move(out));
}

}  // namespace

FormulaMetrics metrics(const Dag2& dag, NodeId root) {
  return metrics_of(dag, root, Node2::Kind::Mod);
}

FormulaMetrics metrics(const DagQ& dag, NodeId root) {
  return metrics_of(dag, root, NodeQ::Kind::Sugeno);
}

Eval2::Eval2(const Dag2& dag, const System& sys, const Value& eps, LabelMetric metric)
    : dag_(dag), sys_(sys), eps_(eps), metric_(std::move(metric)) {}

const StateSet& Eval2::operator()(NodeId root) {
  memo_.resize(dag_.size());
  const auto n = sys_.size();
  for (auto id : pending_nodes(dag_, root, memo_)) {
    const auto& node = dag_.node(id);
    StateSet out(n);
    switch (node.kind) {
      case Node2::Kind::Top: out = StateSet::full(n); break;
      case Node2::Kind::Bot: break;
      case Node2::Kind::And: out = *memo_[node.left] & *memo_[node.right]; break;
      case Node2::Kind::Or: out = *memo_[node.left] | *memo_[node.right]; break;
      case Node2::Kind::Mod: {
        check_compatible(node.modality, sys_.type());
        const auto threshold = truncated_sub(node.q, eps_);
        const auto& child = *memo_[node.left];
        for (std::size_t x = 0; x < n; ++x)
          if (evaluate(node.modality, child, sys_.payload(x), metric_) >= threshold) out.insert(x);
        break;
      }
    }
    memo_[id] = std::move(out);
  }
  return *memo_[root];
}

EvalQ::EvalQ(const DagQ& dag, const System& sys, LabelMetric metric)
    : dag_(dag), sys_(sys), metric_(std::move(metric)) {}

const std::vector<Value>& EvalQ::operator()(NodeId root) {
  memo_.resize(dag_.size());
  const auto n = sys_.size();
  for (auto id : pending_nodes(dag_, root, memo_)) {
    const auto& node = dag_.node(id);
    std::vector<Value> out(n);
    switch (node.kind) {
      case NodeQ::Kind::Top: out.assign(n, Value::one()); break;
      case NodeQ::Kind::Bot: break;
      case NodeQ::Kind::And:
      case NodeQ::Kind::Or: {
        const auto& l = *memo_[node.left];
        const auto& r = *memo_[node.right];
        for (std::size_t x = 0; x < n; ++x)
          out[x] = node.kind == NodeQ::Kind::And ? meet(l[x], r[x]) : join(l[x], r[x]);
        break;
      }
      case NodeQ::Kind::ShiftUp:
      case NodeQ::Kind::ShiftDown: {
        const auto& c = *memo_[node.left];
        for (std::size_t x = 0; x < n; ++x)
          out[x] = node.kind == NodeQ::Kind::ShiftUp ? truncated_add(c[x], node.q)
                                                     : truncated_sub(c[x], node.q);
        break;
      }
      case NodeQ::Kind::Sugeno: {
        check_compatible(node.modality, sys_.type());
        const auto& c = *memo_[node.left];
        for (std::size_t x = 0; x < n; ++x)
          out[x] = sugeno_evaluate(node.modality, c, sys_.payload(x), metric_);
        break;
      }
    }
    memo_[id] = std::move(out);
  }
  return *memo_[root];
}

StateSet eval2(const Dag2& dag, NodeId root, const System& sys, const Value& eps) {
  return Eval2(dag, sys, eps, effective_metric(sys))(root);
}

std::vector<Value> evalQ(const DagQ& dag, NodeId root, const System& sys) {
  return EvalQ(dag, sys, effective_metric(sys))(root);
}

NodeId relax(Dag2& dag, NodeId root, const Value& delta) {
  if (delta.is_zero()) return root;
  std::unordered_map<NodeId, NodeId> image;
  for (auto id : dag.reachable({root})) {
    const Node2 n = dag.node(id);
    NodeId out = id;
    switch (n.kind) {
      case Node2::Kind::Top:
      case Node2::Kind::Bot: break;
      case Node2::Kind::And: out = dag.conj(image.at(n.left), image.at(n.right)); break;
      case Node2::Kind::Or: out = dag.disj(image.at(n.left), image.at(n.right)); break;
      case Node2::Kind::Mod:
        out = dag.mod(n.modality, truncated_sub(n.q, delta), image.at(n.left));
        break;
    }
    image[id] = out;
  }
  return image.at(root);
}

NodeId negateQ(DagQ& dag, NodeId root, const ModalitySet& lambda) {
  std::unordered_map<NodeId, NodeId> neg;
  for (auto id : dag.reachable({root})) {
    const NodeQ n = dag.node(id);
    NodeId out = 0;
    switch (n.kind) {
      case NodeQ::Kind::Top: out = dag.bot(); break;
      case NodeQ::Kind::Bot: out = dag.top(); break;
      case NodeQ::Kind::And: out = dag.disj(neg.at(n.left), neg.at(n.right)); break;
      case NodeQ::Kind::Or: out = dag.conj(neg.at(n.left), neg.at(n.right)); break;
      case NodeQ::Kind::ShiftUp: out = dag.shift_down(neg.at(n.left), n.q); break;
      case NodeQ::Kind::ShiftDown: out = dag.shift_up(neg.at(n.left), n.q); break;
      case NodeQ::Kind::Sugeno: {
        const auto d = dual(n.modality);
        if (!contains(lambda, d)) {
          throw ContractError("cannot negate: dual " + to_string(d) + " is not available");
        }
        out = dag.sugeno(d, neg.at(n.left));
        break;
      }
    }
    neg[id] = out;
  }
  return neg.at(root);
}

json dag_to_json(const Dag2& dag, NodeId root) { return to_json_impl(dag, root, "two-valued"); }
json dag_to_json(const DagQ& dag, NodeId root) { return to_json_impl(dag, root, "quantitative"); }

NodeId dag_from_json(Dag2& dag, const json& j, const std::string& path) {
  using K = Node2::Kind;
  return from_json_impl(dag, j, path, "two-valued", {K::Top, K::Bot, K::And, K::Or, K::Mod});
}

NodeId dag_from_json(DagQ& dag, const json& j, const std::string& path) {
  using K = NodeQ::Kind;
  return from_json_impl(dag, j, path, "quantitative",
                        {K::Top, K::Bot, K::And, K::Or, K::ShiftUp, K::ShiftDown, K::Sugeno});
}

ModalitySet modalities_of(const Dag2& dag, NodeId root) { return modalities_impl(dag, root); }
ModalitySet modalities_of(const DagQ& dag, NodeId root) { return modalities_impl(dag, root); }

}  // namespace epsdist
