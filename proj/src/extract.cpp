#include "epsdist/extract.hpp"

#include <algorithm>
#include <numeric>

#include "epsdist/errors.hpp"

namespace epsdist {

namespace {

/// Won positions ordered by stage, then by (x, y).
std::vector<std::pair<std::size_t, std::size_t>> by_stage(const GameSolution& sol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < sol.spoiler_wins.rows(); ++x)
    for (auto y : sol.spoiler_wins.row(x).members()) out.emplace_back(x, y);
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return sol.stage(a.first, a.second) < sol.stage(b.first, b.second);
  });
  return out;
}

/// The replies Duplicator may choose after Spoiler plays (A, B) at (x0, y0).
struct Replies {
  std::vector<std::size_t> xs;
  std::vector<std::size_t> ys;
};

Replies replies(const GameConfig& cfg, const Witness& w, std::size_t x0, std::size_t y0) {
  auto a = w.a & cfg.left.support(x0);
  auto ys = cfg.right.support(y0);
  ys.subtract(w.b);
  return {a.members(), ys.members()};
}

void check_stage_order(const GameSolution& sol, std::size_t x0, std::size_t y0, std::size_t x,
                       std::size_t y) {
  if (!sol.won(x, y) || sol.stage(x, y) >= sol.stage(x0, y0)) {
    throw ContractError("internal error: strategy at stage " + std::to_string(sol.stage(x0, y0)) +
                        " refers to a position not won earlier");
  }
}

}  // namespace

std::string_view to_string(Logic l) {
  return l == Logic::TwoValued ? "two-valued" : "quantitative";
}

std::optional<Logic> logic_from_string(std::string_view s) {
  if (s == "two-valued") return Logic::TwoValued;
  if (s == "quantitative") return Logic::Quantitative;
  return std::nullopt;
}

NodeId Extraction::root(std::size_t x, std::size_t y) const {
  const auto& r = roots.at(x * cols + y);
  if (!r) throw ContractError("position is not in Spoiler's winning region");
  return *r;
}

std::size_t Extraction::total_dag_size() const {
  std::vector<NodeId> all;
  for (const auto& r : roots)
    if (r) all.push_back(*r);
  if (all.empty()) return 0;
  return logic == Logic::TwoValued ? dag2->reachable(all).size() : dagq->reachable(all).size();
}

Extraction extract_two_valued(const GameSolution& sol, const GameConfig& cfg) {
  const auto metric = prepare(cfg);
  Extraction ex;
  ex.logic = Logic::TwoValued;
  ex.dag2 = std::make_shared<Dag2>();
  ex.cols = cfg.right.size();
  ex.roots.assign(cfg.left.size() * cfg.right.size(), std::nullopt);
  auto& dag = *ex.dag2;
  for (const auto& [x0, y0] : by_stage(sol)) {
    const auto& w = sol.strategy(x0, y0);
    const auto r = replies(cfg, w, x0, y0);
    std::vector<NodeId> disjuncts;
    for (auto x : r.xs) {
      std::vector<NodeId> conjuncts;
      for (auto y : r.ys) {
        check_stage_order(sol, x0, y0, x, y);
        conjuncts.push_back(ex.root(x, y));
      }
      disjuncts.push_back(dag.big_and(conjuncts));
    }
    const auto q = evaluate(w.modality, w.a, cfg.left.payload(x0), metric);
    ex.roots[x0 * ex.cols + y0] = dag.mod(w.modality, q, dag.big_or(disjuncts));
  }
  return ex;
}

Extraction extract_quantitative(const GameSolution& sol, const GameConfig& cfg) {
  const auto metric = prepare(cfg);
  Extraction ex;
  ex.logic = Logic::Quantitative;
  ex.dagq = std::make_shared<DagQ>();
  ex.cols = cfg.right.size();
  ex.roots.assign(cfg.left.size() * cfg.right.size(), std::nullopt);
  auto& dag = *ex.dagq;
  EvalQ left_eval(dag, cfg.left, metric);
  for (const auto& [x0, y0] : by_stage(sol)) {
    const auto& w = sol.strategy(x0, y0);
    const auto r = replies(cfg, w, x0, y0);
    const auto q = evaluate(w.modality, w.a, cfg.left.payload(x0), metric);
    std::vector<NodeId> disjuncts;
    for (auto x : r.xs) {
      std::vector<NodeId> conjuncts;
      for (auto y : r.ys) {
        check_stage_order(sol, x0, y0, x, y);
        const auto child = ex.root(x, y);
        const auto v = left_eval(child)[x];
        if (v < q) {
          conjuncts.push_back(dag.shift_up(child, truncated_sub(q, v)));
        } else if (v > q) {
          conjuncts.push_back(dag.shift_down(child, truncated_sub(v, q)));
        } else {
          conjuncts.push_back(child);
        }
      }
      disjuncts.push_back(dag.big_and(conjuncts));
    }
    ex.roots[x0 * ex.cols + y0] = dag.sugeno(w.modality, dag.big_or(disjuncts));
  }
  return ex;
}

FormulaMetrics Certificate::metrics() const {
  return logic == Logic::TwoValued ? epsdist::metrics(*dag2, root) : epsdist::metrics(*dagq, root);
}

std::string Certificate::text() const {
  return logic == Logic::TwoValued ? print_formula(*dag2, root) : print_formula(*dagq, root);
}

Certificate make_certificate(const Extraction& ex, const GameConfig& cfg, std::size_t x,
                             std::size_t y) {
  const auto metric = prepare(cfg);
  Certificate c;
  c.x = x;
  c.y = y;
  c.eps = cfg.eps;
  c.logic = ex.logic;
  c.dag2 = ex.dag2;
  c.dagq = ex.dagq;
  c.root = ex.root(x, y);
  if (ex.logic == Logic::TwoValued) {
    c.left_holds = Eval2(*ex.dag2, cfg.left, Value::zero(), metric)(c.root).contains(x);
    c.right_holds = Eval2(*ex.dag2, cfg.right, cfg.eps, metric)(c.root).contains(y);
  } else {
    c.left_value = EvalQ(*ex.dagq, cfg.left, metric)(c.root)[x];
    c.right_value = EvalQ(*ex.dagq, cfg.right, metric)(c.root)[y];
  }
  return c;
}

}  // namespace epsdist
