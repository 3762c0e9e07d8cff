#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"

namespace epsdist {

/// N(mu, nu, R): source -> x with capacity mu(x), x -> y with capacity 1 for
/// (x,y) in R, y -> sink with capacity nu(y). Only support states get nodes.
struct FlowNetwork {
  std::vector<std::size_t> left;   // state ids of supp(mu)
  std::vector<std::size_t> right;  // state ids of supp(nu)
  std::vector<Rational> source_cap;
  std::vector<Rational> sink_cap;
  std::vector<std::pair<std::size_t, std::size_t>> middle;  // indices into left/right
  std::size_t left_universe = 0;
  std::size_t right_universe = 0;
};

FlowNetwork build_network(const WeightMap& mu, const WeightMap& nu, const Relation& r);

struct MinCut {
  Rational flow;
  /// Membership of each left/right node in U, the nodes reachable from the
  /// source in the residual graph.
  std::vector<bool> left_in_u;
  std::vector<bool> right_in_u;
};

/// Shortest augmenting paths; exact.
MinCut max_flow_min_cut(const FlowNetwork& net);

/// Capacity of the edges leaving U.
Rational cut_capacity(const FlowNetwork& net, const MinCut& cut);

struct WitnessSets {
  StateSet a;
  StateSet b;
};

/// A = U ∩ X, B = U ∩ Y as state sets of the two systems.
WitnessSets extract_witness(const FlowNetwork& net, const MinCut& cut);

}  // namespace epsdist
