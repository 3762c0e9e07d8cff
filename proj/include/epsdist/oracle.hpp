#pragma once

#include <cstddef>
#include <cstdint>

#include "epsdist/modalities.hpp"
#include "epsdist/solvers.hpp"
#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"

/// Exponential-time reference implementations. None of these call the
/// polynomial solvers or the game; they enumerate subsets of supports.
namespace epsdist::oracle {

/// Throws CapExceeded if |X| + |Y| > cap.
void check_cap(const System& left, const System& right, std::size_t cap);

/// The greatest eps-Lambda-simulation, by deleting violating pairs from X x Y.
Relation greatest_simulation(const System& left, const System& right, const ModalitySet& lambda,
                             const Value& eps, std::size_t cap = kDefaultBruteForceCap);

/// L_Lambda r (a, b) = min { eps | a L_{eps,Lambda} r_eps b }.
/// Throws CapExceeded if |supp a| + |supp b| > cap.
Value exact_lax(const ValueMatrix& r, const Payload& a, const Payload& b,
                const ModalitySet& lambda, const LabelMetric& metric = {},
                std::size_t cap = kDefaultBruteForceCap);

/// Least fixpoint of r ↦ L_Lambda r (ξx, ζy).
ValueMatrix exact_distance(const System& left, const System& right, const ModalitySet& lambda,
                           std::size_t cap = kDefaultBruteForceCap);

struct KantorovichResult {
  /// Max over the witness family f = eps_A on A (else 0), g = ⋁_x f(x) ⊖ r(x,-).
  Value value;
  /// Best gap over randomly sampled grid-valued r-preserved pairs.
  Value sampled;
  std::size_t samples = 0;
};

KantorovichResult kantorovich(const ValueMatrix& r, const Payload& a, const Payload& b,
                              const ModalitySet& lambda, const LabelMetric& metric = {},
                              std::size_t samples = 32, std::uint64_t seed = 1,
                              std::size_t cap = kDefaultBruteForceCap);

}  // namespace epsdist::oracle
