#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epsdist/formula.hpp"
#include "epsdist/game.hpp"
#include "json.hpp"

namespace epsdist {

enum class Logic { TwoValued, Quantitative };

std::string_view to_string(Logic l);
std::optional<Logic> logic_from_string(std::string_view s);

/// Distinguishing formulae for every position of Spoiler's winning region,
/// stored in one shared dag.
struct Extraction {
  Logic logic = Logic::TwoValued;
  std::shared_ptr<Dag2> dag2;
  std::shared_ptr<DagQ> dagq;
  std::size_t cols = 0;
  std::vector<std::optional<NodeId>> roots;

  bool has(std::size_t x, std::size_t y) const { return roots[x * cols + y].has_value(); }
  /// Throws ContractError outside the winning region.
  NodeId root(std::size_t x, std::size_t y) const;
  /// Distinct nodes reachable from all roots.
  std::size_t total_dag_size() const;
};

/// φ_{x0 y0} = λ_q (⋁_{x ∈ A'} ⋀_{y ∈ Y'} φ_xy), q = λ(A)(ξ x0), where
/// A' = A ∩ supp(ξ x0) and Y' = supp(ζ y0) \ B.
Extraction extract_two_valued(const GameSolution& sol, const GameConfig& cfg);

/// As above with <λ> at the root, each child shifted so that it evaluates to
/// exactly q at its left state.
Extraction extract_quantitative(const GameSolution& sol, const GameConfig& cfg);

struct Certificate {
  std::size_t x = 0;
  std::size_t y = 0;
  Value eps;
  Logic logic = Logic::TwoValued;
  std::shared_ptr<Dag2> dag2;
  std::shared_ptr<DagQ> dagq;
  NodeId root = 0;
  /// Two-valued: x ⊨_0 φ and y ⊨_eps φ.
  bool left_holds = false;
  bool right_holds = false;
  /// Quantitative: ⟦φ⟧(x) and ⟦φ⟧(y).
  Value left_value;
  Value right_value;

  FormulaMetrics metrics() const;
  std::string text() const;
};

/// Evaluates the formula for (x,y) on both systems and records the results.
Certificate make_certificate(const Extraction& ex, const GameConfig& cfg, std::size_t x,
                             std::size_t y);

/// Fresh evaluation on both systems: the distinguishing condition holds and the
/// recorded results match. Evaluation errors count as failure.
bool recheck(const Certificate& cert, const System& left, const System& right);

/// Formula text is included when the tree size is at most `text_limit`.
nlohmann::json certificate_to_json(const Certificate& cert, const System& left,
                                   const System& right, std::uint64_t text_limit = 4096);
/// Throws ValidationError.
Certificate certificate_from_json(const nlohmann::json& j, const System& left,
                                  const System& right);

}  // namespace epsdist
