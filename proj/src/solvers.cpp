#include "epsdist/solvers.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "epsdist/flow.hpp"

namespace epsdist {

namespace {

using RelPred = std::function<bool(std::size_t, std::size_t)>;

/// One primal witness problem: find A' ⊆ supp(p) with
/// lambda(rel[A'])(q) < lambda(A')(p) - eps, lambda the primal lifting of m.
struct Primal {
  const Payload& p;
  const Payload& q;
  std::size_t p_universe;
  std::size_t q_universe;
  RelPred rel;
  const Value& eps;
  const ModalityId& m;
  const LabelMetric& metric;
};

const WeightMap* slice_of(const Payload& pl, const ModalityId& m) {
  static const WeightMap empty;
  switch (m.family) {
    case Family::P:
      if (const auto* d = std::get_if<SubDist>(&pl)) return &d->weights;
      break;
    case Family::PLabel:
      if (const auto* d = std::get_if<LabelledSubDist>(&pl)) {
        const auto it = d->slices.find(m.label);
        return it == d->slices.end() ? &empty : &it->second;
      }
      break;
    case Family::DiaLabel:
      if (const auto* d = std::get_if<LabelDist>(&pl)) {
        const auto it = d->slices.find(m.label);
        return it == d->slices.end() ? &empty : &it->second;
      }
      break;
    default:
      break;
  }
  throw ContractError("modality " + to_string(m) + " does not apply to this payload");
}

std::optional<StateSet> primal_probability(const Primal& pr) {
  const auto& mu = *slice_of(pr.p, pr.m);
  const auto& nu = *slice_of(pr.q, pr.m);
  const Rational total = mass(mu);
  if (cmp(total - pr.eps.rational(), 0) <= 0) return std::nullopt;
  FlowNetwork net;
  net.left_universe = pr.p_universe;
  net.right_universe = pr.q_universe;
  for (const auto& [x, v] : mu) {
    net.left.push_back(x);
    net.source_cap.push_back(v.rational());
  }
  for (const auto& [y, v] : nu) {
    net.right.push_back(y);
    net.sink_cap.push_back(v.rational());
  }
  for (std::size_t i = 0; i < net.left.size(); ++i)
    for (std::size_t j = 0; j < net.right.size(); ++j)
      if (pr.rel(net.left[i], net.right[j])) net.middle.emplace_back(i, j);
  const auto cut = max_flow_min_cut(net);
  if (cmp(cut.flow, total - pr.eps.rational()) >= 0) return std::nullopt;
  return extract_witness(net, cut).a;
}

std::optional<StateSet> primal_fuzzy(const Primal& pr) {
  const auto* g = std::get_if<FuzzySet>(&pr.p);
  const auto* h = std::get_if<FuzzySet>(&pr.q);
  if (g == nullptr || h == nullptr) {
    throw ContractError("modality " + to_string(pr.m) + " does not apply to this payload");
  }
  for (const auto& [x, gx] : g->degrees) {
    const Rational target = gx.rational() - pr.eps.rational();
    if (sgn(target) <= 0) continue;
    Rational best;
    for (const auto& [y, hy] : h->degrees)
      if (pr.rel(x, y) && cmp(hy.rational(), best) > 0) best = hy.rational();
    if (cmp(best, target) < 0) {
      StateSet a(pr.p_universe);
      a.insert(x);
      return a;
    }
  }
  return std::nullopt;
}

std::optional<StateSet> primal_metric(const Primal& pr) {
  const auto* s = std::get_if<LabelledEdgeSet>(&pr.p);
  const auto* t = std::get_if<LabelledEdgeSet>(&pr.q);
  if (s == nullptr || t == nullptr) {
    throw ContractError("modality " + to_string(pr.m) + " does not apply to this payload");
  }
  for (const auto& [b, xs] : s->edges) {
    const Rational target = 1 - pr.metric.distance(pr.m.label, b).rational() - pr.eps.rational();
    if (sgn(target) <= 0) continue;
    for (auto x : xs) {
      Rational best;
      for (const auto& [b2, ys] : t->edges) {
        if (std::none_of(ys.begin(), ys.end(), [&](std::size_t y) { return pr.rel(x, y); })) continue;
        const Rational v = 1 - pr.metric.distance(pr.m.label, b2).rational();
        if (cmp(v, best) > 0) best = v;
      }
      if (cmp(best, target) < 0) {
        StateSet a(pr.p_universe);
        a.insert(x);
        return a;
      }
    }
  }
  return std::nullopt;
}

std::optional<StateSet> solve_primal(const Primal& pr) {
  switch (pr.m.family) {
    case Family::P:
    case Family::PLabel:
    case Family::DiaLabel:
      return primal_probability(pr);
    case Family::FuzzyDia:
      return primal_fuzzy(pr);
    case Family::MetricDia:
      return primal_metric(pr);
    case Family::ConvexDia:
      break;
  }
  throw NoPolynomialSolver("no polynomial solver for " + to_string(pr.m));
}

Witness checked(const WitnessQuery& q, Witness w) {
  if (!is_witness(q, w)) {
    throw ContractError("internal error: solver produced an invalid witness for " +
                        to_string(w.modality));
  }
  return w;
}

/// Sets X ⊆ universe of the given members, size k, in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const auto k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool skippable_metric_label(const WitnessQuery& q, const ModalityId& m) {
  if (m.family != Family::MetricDia) return false;
  std::set<Label> occurring;
  for (const auto& l : labels_of(q.a)) occurring.insert(l);
  for (const auto& l : labels_of(q.b)) occurring.insert(l);
  if (occurring.contains(m.label)) return false;
  return std::all_of(occurring.begin(), occurring.end(), [&](const Label& l) {
    return contains(q.lambda, ModalityId{Family::MetricDia, l, m.dual});
  });
}

}  // namespace

StateSet complement_image(const Relation& s, const StateSet& a) {
  StateSet out(s.cols());
  const auto full = StateSet::full(s.cols());
  for (auto x : a.members()) {
    auto row = full;
    row.subtract(s.row(x));
    out |= row;
    if (out == full) break;
  }
  return out;
}

bool is_witness(const WitnessQuery& q, const Witness& w) {
  if (w.a.universe() != q.s.rows() || w.b.universe() != q.s.cols()) return false;
  for (auto x : w.a.members()) {
    auto outside = w.b.complement();
    if (!outside.is_subset_of(q.s.row(x))) return false;
  }
  const Rational lhs = evaluate(w.modality, w.b, q.b, q.metric).rational() + q.eps.rational();
  return cmp(lhs, evaluate(w.modality, w.a, q.a, q.metric).rational()) < 0;
}

std::optional<Witness> solve_one(const WitnessQuery& q, const ModalityId& m) {
  const auto nx = q.s.rows();
  const auto ny = q.s.cols();
  if (!m.dual) {
    Primal pr{q.a, q.b, nx, ny,
              [&](std::size_t x, std::size_t y) { return !q.s.contains(x, y); },
              q.eps, m, q.metric};
    auto a = solve_primal(pr);
    if (!a) return std::nullopt;
    auto b = complement_image(q.s, *a);
    return checked(q, Witness{m, std::move(*a), std::move(b)});
  }
  // The dual problem is the primal one on (b, a, R°).
  const ModalityId primal_m = dual(m);
  Primal pr{q.b, q.a, ny, nx,
            [&](std::size_t y, std::size_t x) { return !q.s.contains(x, y); },
            q.eps, primal_m, q.metric};
  const auto b_prime = solve_primal(pr);
  if (!b_prime) return std::nullopt;
  StateSet a = support(q.a, nx);
  for (auto x : a.members()) {
    auto r_row = StateSet::full(ny);
    r_row.subtract(q.s.row(x));
    if (r_row.intersects(*b_prime)) a.erase(x);
  }
  auto b = complement_image(q.s, a);
  return checked(q, Witness{m, std::move(a), std::move(b)});
}

std::optional<Witness> solve(const WitnessQuery& q) {
  for (const auto& m : q.lambda) {
    if (skippable_metric_label(q, m)) continue;
    if (auto w = solve_one(q, m)) return w;
  }
  return std::nullopt;
}

std::optional<Witness> brute_force_one(const WitnessQuery& q, const ModalityId& m,
                                       std::size_t cap) {
  const auto nx = q.s.rows();
  const auto supp_a = support(q.a, nx).members();
  const auto combined = supp_a.size() + support(q.b, q.s.cols()).count();
  if (combined > cap) {
    throw CapExceeded("brute force needs " + std::to_string(combined) +
                      " support states, cap is " + std::to_string(cap));
  }
  const auto n = supp_a.size();
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    do {
      StateSet a(nx);
      for (auto i : idx) a.insert(supp_a[i]);
      Witness w{m, a, complement_image(q.s, a)};
      if (is_witness(q, w)) return w;
    } while (k > 0 && next_combination(idx, n));
  }
  return std::nullopt;
}

std::optional<Witness> brute_force_solve(const WitnessQuery& q, std::size_t cap) {
  for (const auto& m : q.lambda)
    if (auto w = brute_force_one(q, m, cap)) return w;
  return std::nullopt;
}

std::optional<Witness> solve_with_fallback(const WitnessQuery& q, std::size_t cap) {
  for (const auto& m : q.lambda) {
    if (skippable_metric_label(q, m)) continue;
    std::optional<Witness> w;
    try {
      w = solve_one(q, m);
    } catch (const NoPolynomialSolver&) {
      w = brute_force_one(q, m, cap);
    }
    if (w) return w;
  }
  return std::nullopt;
}

}  // namespace epsdist
