#include "doctest.h"
#include "epsdist/errors.hpp"
#include "epsdist/extract.hpp"
#include "support.hpp"

using namespace epsdist;
using epsdist::testing::mod;
using epsdist::testing::v;

namespace {

/// A three-state chain and a copy with 2/10 of every step diverted to a sink.
testing::SystemPair chain_and_perturbed() {
  return {load_system_text(R"({"type":"markov_chain","states":["a","b","c"],
            "transitions":{"a":{"b":"1"},"b":{"c":"1"},"c":{"c":"1"}}})"),
          load_system_text(R"({"type":"markov_chain","states":["a","b","c","sink"],
            "transitions":{"a":{"b":"0.8","sink":"0.2"},"b":{"c":"0.8","sink":"0.2"},"c":{"c":"1"}}})")};
}

}  // namespace

TEST_SUITE("extract") {
  TEST_CASE("loop pair, two-valued") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/20")};
    const auto ex = extract_two_valued(solve_game(cfg), cfg);
    const auto cert = make_certificate(ex, cfg, 0, 0);
    CHECK(cert.text() == "[P>=1] tt");
    CHECK(cert.left_holds);
    CHECK_FALSE(cert.right_holds);
    CHECK(recheck(cert, p.left, p.right));
  }

  TEST_CASE("loop pair, quantitative") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/20")};
    const auto ex = extract_quantitative(solve_game(cfg), cfg);
    const auto cert = make_certificate(ex, cfg, 0, 0);
    CHECK(cert.text() == "<P> tt");
    CHECK(cert.left_value == Value::one());
    CHECK(cert.right_value == v("9/10"));
    CHECK(recheck(cert, p.left, p.right));
  }

  TEST_CASE("positions outside the winning region have no certificate") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.left, {mod("P")}, Value::zero()};
    const auto ex = extract_quantitative(solve_game(cfg), cfg);
    CHECK_FALSE(ex.has(0, 0));
    CHECK_THROWS_AS(make_certificate(ex, cfg, 0, 0), ContractError);
  }

  TEST_CASE("perturbed chain") {
    const auto p = chain_and_perturbed();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/10")};
    const auto sol = solve_game(cfg);
    REQUIRE(sol.won(0, 0));
    for (auto* extract : {&extract_two_valued, &extract_quantitative}) {
      const auto ex = (*extract)(sol, cfg);
      for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 4; ++y)
          if (sol.won(x, y)) CHECK(recheck(make_certificate(ex, cfg, x, y), p.left, p.right));
    }
  }

  TEST_CASE("stage-one positions with an empty reply set use tt") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/20")};
    const auto ex = extract_two_valued(solve_game(cfg), cfg);
    const auto& n = ex.dag2->node(ex.root(0, 0));
    CHECK(n.left == ex.dag2->top());
  }

  TEST_CASE("recheck rejects tampering") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/20")};
    const auto sol = solve_game(cfg);
    for (auto* extract : {&extract_two_valued, &extract_quantitative}) {
      auto cert = make_certificate((*extract)(sol, cfg), cfg, 0, 0);
      CHECK(recheck(cert, p.left, p.right));
      auto wider = cert;
      wider.eps = v("1/5");
      CHECK_FALSE(recheck(wider, p.left, p.right));
      CHECK_FALSE(recheck(cert, p.right, p.left));
      auto lied = cert;
      lied.left_value = v("1/2");
      lied.left_holds = false;
      CHECK_FALSE(recheck(lied, p.left, p.right));
    }
  }

  TEST_CASE("certificate JSON round-trips") {
    testing::Rng rng(71);
    for (auto t : testing::all_types()) {
      for (int i = 0; i < 10; ++i) {
        const auto p = testing::random_pair(rng, t, 4);
        const auto lambda = testing::random_lambda(rng, p.left, p.right);
        const GameConfig cfg{p.left, p.right, lambda, testing::random_value(rng)};
        const auto sol = solve_game(cfg);
        for (auto* extract : {&extract_two_valued, &extract_quantitative}) {
          const auto ex = (*extract)(sol, cfg);
          for (std::size_t x = 0; x < p.left.size(); ++x) {
            for (std::size_t y = 0; y < p.right.size(); ++y) {
              if (!sol.won(x, y)) continue;
              const auto cert = make_certificate(ex, cfg, x, y);
              const auto j = certificate_to_json(cert, p.left, p.right);
              const auto back = certificate_from_json(j, p.left, p.right);
              CHECK(recheck(back, p.left, p.right));
              CHECK(certificate_to_json(back, p.left, p.right) == j);
            }
          }
        }
      }
    }
  }

  TEST_CASE("malformed certificates are rejected with a path") {
    const auto p = testing::loop_pair();
    const GameConfig cfg{p.left, p.right, {mod("P")}, v("1/20")};
    const auto cert = make_certificate(extract_two_valued(solve_game(cfg), cfg), cfg, 0, 0);
    auto j = certificate_to_json(cert, p.left, p.right);
    j["pair"]["left"] = "nope";
    try {
      certificate_from_json(j, p.left, p.right);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.path() == "/pair/left");
    }
    j = certificate_to_json(cert, p.left, p.right);
    j["logic"] = "fuzzy";
    CHECK_THROWS_AS(certificate_from_json(j, p.left, p.right), ValidationError);
  }

  TEST_CASE("children are shared across certificates") {
    testing::Rng rng(73);
    const auto p = testing::random_pair(rng, SystemType::MarkovChain, 6);
    const GameConfig cfg{p.left, p.right, {mod("P"), mod("~P")}, v("1/20")};
    const auto sol = solve_game(cfg);
    const auto ex = extract_two_valued(sol, cfg);
    std::size_t sum = 0;
    for (std::size_t x = 0; x < p.left.size(); ++x)
      for (std::size_t y = 0; y < p.right.size(); ++y)
        if (sol.won(x, y)) sum += metrics(*ex.dag2, ex.root(x, y)).dag_size;
    CHECK(ex.total_dag_size() <= sum);
    CHECK(ex.total_dag_size() == ex.dag2->size());
  }
}
