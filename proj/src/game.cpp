#include "epsdist/game.hpp"

#include <algorithm>

#include "epsdist/errors.hpp"
#include "epsdist/oracle.hpp"

namespace epsdist {

const Witness& GameSolution::strategy(std::size_t x, std::size_t y) const {
  const auto& w = moves[x * spoiler_wins.cols() + y];
  if (!w) throw ContractError("position is not in Spoiler's winning region");
  return *w;
}

std::size_t GameSolution::max_stage() const {
  return stages.empty() ? 0 : *std::max_element(stages.begin(), stages.end());
}

LabelMetric prepare(const GameConfig& cfg) {
  if (cfg.lambda.empty()) throw ContractError("the modality set is empty");
  check_compatible(cfg.lambda, cfg.left);
  check_compatible(cfg.lambda, cfg.right);
  return effective_metric(cfg.left, cfg.right);
}

GameSolution solve_game(const GameConfig& cfg) {
  const auto metric = prepare(cfg);
  const auto nx = cfg.left.size();
  const auto ny = cfg.right.size();

  GameSolution sol;
  sol.spoiler_wins = Relation(nx, ny);
  sol.stages.assign(nx * ny, 0);
  sol.moves.assign(nx * ny, std::nullopt);

  std::vector<std::pair<std::size_t, std::size_t>> pending;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) pending.emplace_back(x, y);

  for (std::size_t round = 1; !pending.empty(); ++round) {
    sol.rounds = round;
    std::vector<std::pair<std::size_t, std::size_t>> won;
    for (const auto& [x, y] : pending) {
      ++sol.queries;
      const WitnessQuery q{cfg.left.payload(x), cfg.right.payload(y), sol.spoiler_wins,
                           cfg.eps, cfg.lambda, metric};
      if (auto w = solve_with_fallback(q, cfg.brute_force_cap)) {
        sol.moves[x * ny + y] = std::move(*w);
        sol.stages[x * ny + y] = round;
        won.emplace_back(x, y);
      }
    }
    for (const auto& [x, y] : won) sol.spoiler_wins.insert(x, y);

    // A position's witness problem only reads S on supp(ξx) x supp(ζy).
    Relation dirty(nx, ny);
    for (const auto& [x2, y2] : won)
      for (auto x : cfg.left.predecessors(x2))
        for (auto y : cfg.right.predecessors(y2))
          if (!sol.spoiler_wins.contains(x, y)) dirty.insert(x, y);
    pending.clear();
    for (std::size_t x = 0; x < nx; ++x)
      for (auto y : dirty.row(x).members()) pending.emplace_back(x, y);
    if (pending.empty()) sol.rounds = won.empty() ? round : round + 1;
  }
  return sol;
}

bool check_similar(const GameConfig& cfg, std::size_t x, std::size_t y) {
  if (x >= cfg.left.size() || y >= cfg.right.size()) throw ContractError("state out of range");
  return !solve_game(cfg).won(x, y);
}

Value default_tolerance() { return Value::ratio(1, 1UL << 20); }

DistanceInterval distance_bisect(const System& left, const System& right, std::size_t x,
                                 std::size_t y, const ModalitySet& lambda, const Value& tol) {
  if (tol.is_zero()) throw ContractError("bisection tolerance must be positive");
  const auto similar = [&](const Value& eps) {
    return check_similar(GameConfig{left, right, lambda, eps}, x, y);
  };
  if (similar(Value::zero())) return {Value::zero(), Value::zero()};
  Value lo = Value::zero();
  Value hi = Value::one();
  while (hi.rational() - lo.rational() > tol.rational()) {
    const auto mid = Value::from_rational((lo.rational() + hi.rational()) / 2);
    (similar(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

Value distance_exact(const System& left, const System& right, std::size_t x, std::size_t y,
                     const ModalitySet& lambda, std::size_t cap) {
  if (x >= left.size() || y >= right.size()) throw ContractError("state out of range");
  const auto d = oracle::exact_distance(left, right, lambda, cap).at(x, y);
  bool consistent = check_similar(GameConfig{left, right, lambda, d, cap}, x, y);
  if (consistent && !d.is_zero()) {
    const Rational eta = d.rational() < Rational(1, 1 << 20) ? d.rational() / 2 : Rational(1, 1 << 20);
    consistent = !check_similar(GameConfig{left, right, lambda, Value::from_rational(d.rational() - eta), cap}, x, y);
  }
  if (!consistent) {
    throw ContractError("internal error: oracle distance " + d.str() + " disagrees with the game");
  }
  return d;
}

}  // namespace epsdist
