#pragma once

#include <cstddef>
#include <optional>

#include "epsdist/errors.hpp"
#include "epsdist/modalities.hpp"
#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"

namespace epsdist {

/// Find lambda in Lambda and A, B with lambda(B)(b) < lambda(A)(a) - eps and
/// A x (Y \ B) ⊆ S. `s` is an X x Y relation.
struct WitnessQuery {
  const Payload& a;
  const Payload& b;
  const Relation& s;
  const Value& eps;
  const ModalitySet& lambda;
  const LabelMetric& metric;
};

struct Witness {
  ModalityId modality;
  StateSet a;
  StateSet b;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Checks both defining conditions with `evaluate`.
bool is_witness(const WitnessQuery& q, const Witness& w);

/// R[A] for R = (X x Y) \ S.
StateSet complement_image(const Relation& s, const StateSet& a);

class NoPolynomialSolver : public Error {
 public:
  using Error::Error;
};

constexpr std::size_t kDefaultBruteForceCap = 12;

/// Polynomial solver for one modality. Throws NoPolynomialSolver for cdia.
std::optional<Witness> solve_one(const WitnessQuery& q, const ModalityId& m);
/// First modality of Lambda (in set order) that admits a witness.
std::optional<Witness> solve(const WitnessQuery& q);

/// Enumerates A ⊆ supp(a) by size, then lexicographically, with B = R[A].
/// Throws CapExceeded when |supp a| + |supp b| > cap.
std::optional<Witness> brute_force_one(const WitnessQuery& q, const ModalityId& m,
                                       std::size_t cap = kDefaultBruteForceCap);
std::optional<Witness> brute_force_solve(const WitnessQuery& q,
                                         std::size_t cap = kDefaultBruteForceCap);

/// `solve`, falling back to brute force for modalities without a polynomial solver.
std::optional<Witness> solve_with_fallback(const WitnessQuery& q,
                                           std::size_t cap = kDefaultBruteForceCap);

}  // namespace epsdist
