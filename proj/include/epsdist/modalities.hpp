#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"
#include "epsdist/values.hpp"

namespace epsdist {

enum class Family {
  P,          // P         mu(A)
  PLabel,     // P[a]      f(a)(A)
  DiaLabel,   // dia[a]    mu({a} x A)
  FuzzyDia,   // fdia      sup_{x in A} g(x)
  MetricDia,  // mdia[a]   sup_{(b,x) in S, x in A} 1 - d(a,b)
  ConvexDia,  // cdia      sup_{mu in V} mu(A)
};

bool is_labelled(Family f);
SystemType system_type_for(Family f);

struct ModalityId {
  Family family = Family::P;
  Label label;
  bool dual = false;

  friend auto operator<=>(const ModalityId&, const ModalityId&) = default;
  friend bool operator==(const ModalityId&, const ModalityId&) = default;
};

/// Same family and label, dual flag flipped.
ModalityId dual(ModalityId m);

/// "P", "~P", "P[a]", "dia[a]", "fdia", "mdia[a]", "cdia".
std::string to_string(const ModalityId& m);
/// Throws ParseError.
ModalityId parse_modality(std::string_view text);

/// Sorted, duplicate-free.
using ModalitySet = std::vector<ModalityId>;

ModalitySet make_modality_set(std::vector<ModalityId> ms);
ModalitySet close_under_duals(const ModalitySet& ms);
bool contains(const ModalitySet& ms, const ModalityId& m);
/// Comma-separated modality names. Throws ParseError.
ModalitySet parse_modality_set(std::string_view text);

/// The default set for comparing `left` against `right`; labelled families
/// get one modality per label occurring in either system.
ModalitySet default_modalities(const System& left, const System& right);

/// Throws ContractError unless `m` applies to systems of type `t`.
void check_compatible(const ModalityId& m, SystemType t);
void check_compatible(const ModalitySet& ms, const System& sys);

/// The metric used by mdia on one system: its table, or the discrete metric.
LabelMetric effective_metric(const System& sys);
/// Merged metric for a pair. Throws ContractError on disagreement.
LabelMetric effective_metric(const System& left, const System& right);

/// lambda(A)(a). Throws ContractError on a payload mismatch.
Value evaluate(const ModalityId& m, const StateSet& a_set, const Payload& a,
               const LabelMetric& metric = {});

/// <lambda>(f)(a) = max_c c /\ lambda(f_c)(a) with c ranging over {0, 1} and
/// the values of f on the support of a. `f` is indexed by state.
Value sugeno_evaluate(const ModalityId& m, const std::vector<Value>& f, const Payload& a,
                      const LabelMetric& metric = {});

}  // namespace epsdist
