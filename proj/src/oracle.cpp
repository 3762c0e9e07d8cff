#include "epsdist/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "epsdist/errors.hpp"

namespace epsdist::oracle {

namespace {

/// Calls `fn` on every subset of `members` (as a StateSet over `universe`).
template <class Fn>
void for_each_subset(const std::vector<std::size_t>& members, std::size_t universe, Fn fn) {
  const std::uint64_t count = std::uint64_t{1} << members.size();
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    StateSet a(universe);
    for (std::size_t i = 0; i < members.size(); ++i)
      if ((bits >> i) & 1U) a.insert(members[i]);
    fn(a);
  }
}

void check_support_cap(const StateSet& sa, const StateSet& sb, std::size_t cap) {
  if (sa.count() + sb.count() > cap) {
    throw CapExceeded("oracle needs " + std::to_string(sa.count() + sb.count()) +
                      " support states, cap is " + std::to_string(cap));
  }
}

/// max over lambda, A ⊆ supp(a) of lambda(A)(a) - lambda(R[A])(b), untruncated.
Rational max_violation(const Relation& rel, const Payload& a, const Payload& b,
                       const StateSet& supp_a, const ModalitySet& lambda,
                       const LabelMetric& metric) {
  Rational best = -1;
  const auto members = supp_a.members();
  for (const auto& m : lambda) {
    for_each_subset(members, rel.rows(), [&](const StateSet& set) {
      const Rational d = evaluate(m, set, a, metric).rational() -
                         evaluate(m, rel.image(set), b, metric).rational();
      if (cmp(d, best) > 0) best = d;
    });
  }
  return best;
}

}  // namespace

void check_cap(const System& left, const System& right, std::size_t cap) {
  if (left.size() + right.size() > cap) {
    throw CapExceeded("oracle is limited to " + std::to_string(cap) + " states in total, got " +
                      std::to_string(left.size() + right.size()));
  }
}

Relation greatest_simulation(const System& left, const System& right, const ModalitySet& lambda,
                             const Value& eps, std::size_t cap) {
  check_cap(left, right, cap);
  check_compatible(lambda, left);
  check_compatible(lambda, right);
  const auto metric = effective_metric(left, right);
  auto rel = Relation::full(left.size(), right.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < left.size(); ++x) {
      for (std::size_t y = 0; y < right.size(); ++y) {
        if (!rel.contains(x, y)) continue;
        const auto v = max_violation(rel, left.payload(x), right.payload(y), left.support(x),
                                     lambda, metric);
        if (cmp(v, eps.rational()) > 0) {
          rel.erase(x, y);
          changed = true;
        }
      }
    }
  }
  return rel;
}

Value exact_lax(const ValueMatrix& r, const Payload& a, const Payload& b,
                const ModalitySet& lambda, const LabelMetric& metric, std::size_t cap) {
  const auto supp_a = support(a, r.rows());
  const auto supp_b = support(b, r.cols());
  check_support_cap(supp_a, supp_b, cap);
  std::set<Value> cuts{Value::zero()};
  for (auto x : supp_a.members())
    for (auto y : supp_b.members()) cuts.insert(r.at(x, y));
  const std::vector<Value> v(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto m = max_violation(r.cut(v[i]), a, b, supp_a, lambda, metric);
    const Rational candidate = cmp(m, v[i].rational()) > 0 ? m : v[i].rational();
    if (i + 1 == v.size() || cmp(candidate, v[i + 1].rational()) < 0) {
      return Value::from_rational(candidate);
    }
  }
  return Value::one();
}

ValueMatrix exact_distance(const System& left, const System& right, const ModalitySet& lambda,
                           std::size_t cap) {
  check_cap(left, right, cap);
  check_compatible(lambda, left);
  check_compatible(lambda, right);
  const auto metric = effective_metric(left, right);
  ValueMatrix r(left.size(), right.size());
  std::set<Value> seen{Value::zero()};
  const auto cells = left.size() * right.size();
  for (std::size_t iteration = 1;; ++iteration) {
    ValueMatrix next(left.size(), right.size());
    for (std::size_t x = 0; x < left.size(); ++x)
      for (std::size_t y = 0; y < right.size(); ++y) {
        next.at(x, y) = exact_lax(r, left.payload(x), right.payload(y), lambda, metric, cap);
        seen.insert(next.at(x, y));
      }
    if (next == r) return r;
    r = std::move(next);
    if (iteration > seen.size() * cells + 1) {
      throw ContractError("internal error: distance iteration does not stabilize");
    }
  }
}

KantorovichResult kantorovich(const ValueMatrix& r, const Payload& a, const Payload& b,
                              const ModalitySet& lambda, const LabelMetric& metric,
                              std::size_t samples, std::uint64_t seed, std::size_t cap) {
  const auto supp_a = support(a, r.rows());
  check_support_cap(supp_a, support(b, r.cols()), cap);
  const auto least_partner = [&](const std::vector<Value>& f) {
    std::vector<Value> g(r.cols());
    for (std::size_t y = 0; y < r.cols(); ++y)
      for (std::size_t x = 0; x < r.rows(); ++x) g[y] = join(g[y], truncated_sub(f[x], r.at(x, y)));
    return g;
  };
  const auto gap = [&](const ModalityId& m, const std::vector<Value>& f) {
    return truncated_sub(sugeno_evaluate(m, f, a, metric),
                         sugeno_evaluate(m, least_partner(f), b, metric));
  };

  KantorovichResult out;
  const auto members = supp_a.members();
  for (const auto& m : lambda) {
    for_each_subset(members, r.rows(), [&](const StateSet& set) {
      const auto level = evaluate(m, set, a, metric);
      std::vector<Value> f(r.rows());
      for (auto x : set.members()) f[x] = level;
      out.value = join(out.value, gap(m, f));
    });
  }

  std::mt19937_64 rng(seed);
  constexpr long kGrid = 12;
  std::uniform_int_distribution<long> cell(0, kGrid);
  std::uniform_int_distribution<std::size_t> pick(0, lambda.empty() ? 0 : lambda.size() - 1);
  for (std::size_t i = 0; i < samples && !lambda.empty(); ++i) {
    std::vector<Value> f(r.rows());
    for (auto x : members) f[x] = Value::ratio(cell(rng), kGrid);
    out.sampled = join(out.sampled, gap(lambda[pick(rng)], f));
    ++out.samples;
  }
  return out;
}

}  // namespace epsdist::oracle
