#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "epsdist/modalities.hpp"
#include "epsdist/solvers.hpp"
#include "epsdist/state_set.hpp"
#include "epsdist/systems.hpp"

namespace epsdist {

struct GameConfig {
  const System& left;
  const System& right;
  ModalitySet lambda;
  Value eps;
  /// Cap for the brute-force fallback used by modalities without a polynomial solver.
  std::size_t brute_force_cap = kDefaultBruteForceCap;
};

struct GameSolution {
  Relation spoiler_wins;
  /// stage(x,y) = number of Spoiler moves needed; 0 outside the winning region.
  std::vector<std::size_t> stages;
  std::vector<std::optional<Witness>> moves;
  std::size_t rounds = 0;
  /// Positions whose witness problem was solved, summed over all rounds.
  std::size_t queries = 0;

  bool won(std::size_t x, std::size_t y) const { return spoiler_wins.contains(x, y); }
  std::size_t stage(std::size_t x, std::size_t y) const { return stages[x * spoiler_wins.cols() + y]; }
  /// Throws ContractError outside the winning region.
  const Witness& strategy(std::size_t x, std::size_t y) const;
  std::size_t max_stage() const;
};

/// Validates that Lambda applies to both systems and returns the label metric
/// used for mdia. Throws ContractError.
LabelMetric prepare(const GameConfig& cfg);

/// Least fixpoint of S ↦ {(x,y) | a witness exists for (ξx, ζy, S)} by Kleene
/// iteration from the empty relation. Only positions whose successor block
/// changed in the previous round are re-examined.
GameSolution solve_game(const GameConfig& cfg);

/// true iff Duplicator wins from (x,y), i.e. d(x,y) <= eps.
bool check_similar(const GameConfig& cfg, std::size_t x, std::size_t y);

struct DistanceInterval {
  Value lo;
  Value hi;
};

/// Value::ratio(1, 1 << 20)
Value default_tolerance();

/// Bracket d(x,y) with hi - lo <= tol: Spoiler wins at lo (unless lo = hi = 0)
/// and Duplicator wins at hi.
DistanceInterval distance_bisect(const System& left, const System& right, std::size_t x,
                                 std::size_t y, const ModalitySet& lambda, const Value& tol);

/// Exact distance through the oracle, confirmed by the game: similar at d and
/// not similar just below d. Throws CapExceeded beyond the oracle cap.
Value distance_exact(const System& left, const System& right, std::size_t x, std::size_t y,
                     const ModalitySet& lambda, std::size_t cap = kDefaultBruteForceCap);

}  // namespace epsdist
