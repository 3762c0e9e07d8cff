#include "doctest.h"
#include "epsdist/errors.hpp"
#include "epsdist/modalities.hpp"
#include "support.hpp"

using namespace epsdist;
using epsdist::testing::mod;
using epsdist::testing::v;

TEST_SUITE("modalities") {
  TEST_CASE("names parse and print") {
    for (const char* name : {"P", "~P", "P[a]", "~P[b]", "dia[a]", "fdia", "~fdia", "mdia[c]", "cdia"}) {
      CHECK(to_string(parse_modality(name)) == name);
    }
    CHECK_THROWS_AS(parse_modality("Q"), ParseError);
    CHECK_THROWS_AS(parse_modality("P[]"), ParseError);
    CHECK_THROWS_AS(parse_modality("dia"), ParseError);
    CHECK_THROWS_AS(parse_modality("fdia[a]"), ParseError);
    CHECK(parse_modality_set("P, ~P").size() == 2);
  }

  TEST_CASE("probability evaluation") {
    const Payload mu = SubDist{{{0, v("1/2")}, {1, v("1/4")}}};
    CHECK(evaluate(mod("P"), StateSet(2, {0}), mu) == v("1/2"));
    // dual: 1 - mu(X \ A)
    CHECK(evaluate(mod("~P"), StateSet(2, {0}), mu) == v("3/4"));
    const Payload full = SubDist{{{0, v("1/2")}, {1, v("1/2")}}};
    testing::Rng rng(1);
    for (int i = 0; i < 50; ++i) {
      const auto a = StateSet::of(2, testing::random_subset(rng, 2, 2));
      CHECK(evaluate(mod("P"), a, full) == evaluate(mod("~P"), a, full));
    }
  }

  TEST_CASE("labelled evaluation") {
    LabelledSubDist d;
    d.slices["a"] = {{0, v("1/3")}};
    CHECK(evaluate(mod("P[a]"), StateSet(1, {0}), d) == v("1/3"));
    CHECK(evaluate(mod("P[b]"), StateSet(1, {0}), d) == Value::zero());
    LabelDist g;
    g.slices["a"] = {{0, v("1/5")}};
    g.slices["b"] = {{0, v("4/5")}};
    CHECK(evaluate(mod("dia[b]"), StateSet(1, {0}), g) == v("4/5"));
  }

  TEST_CASE("fuzzy and metric diamonds") {
    const Payload g = FuzzySet{{{0, v("1/2")}, {1, v("3/4")}}};
    CHECK(evaluate(mod("fdia"), StateSet(2), g) == Value::zero());
    CHECK(evaluate(mod("fdia"), StateSet(2, {0, 1}), g) == v("3/4"));
    const auto metric = LabelMetric::table({"a", "b"}, {{{"a", "b"}, v("3/10")}});
    LabelledEdgeSet s;
    s.edges["b"] = {0};
    CHECK(evaluate(mod("mdia[a]"), StateSet(1, {0}), s, metric) == v("7/10"));
    CHECK(evaluate(mod("mdia[a]"), StateSet(1, {0}), s) == Value::zero());
  }

  TEST_CASE("convex diamond takes the best vertex") {
    const Payload c = ConvexSet{{{{0, v("1/4")}, {1, v("3/4")}}, {{0, v("2/3")}, {1, v("1/3")}}}};
    CHECK(evaluate(mod("cdia"), StateSet(2, {0}), c) == v("2/3"));
    CHECK(evaluate(mod("~cdia"), StateSet(2, {0}), c) == v("1/4"));
  }

  TEST_CASE("payload mismatch is a contract error") {
    CHECK_THROWS_AS(evaluate(mod("fdia"), StateSet(1), SubDist{}), ContractError);
  }

  TEST_CASE("dual closure") {
    const auto c = close_under_duals(make_modality_set({mod("P")}));
    CHECK(c == make_modality_set({mod("P"), mod("~P")}));
    CHECK(close_under_duals(c) == c);
    CHECK(close_under_duals(make_modality_set({mod("fdia")})) ==
          make_modality_set({mod("fdia"), mod("~fdia")}));
    CHECK(dual(dual(mod("mdia[a]"))) == mod("mdia[a]"));
  }

  TEST_CASE("default modalities by system type") {
    const auto lmc = load_system_text(
        R"({"type":"labelled_markov_chain","states":["x"],"transitions":{"x":{"b":{"x":"1"},"a":{}}}})");
    // Empty slices are dropped on load, so only b counts as occurring.
    CHECK(default_modalities(lmc, lmc) == make_modality_set({mod("P[b]")}));
    const auto mc = load_system_text(R"({"type":"markov_chain","states":["x"],"transitions":{}})");
    CHECK(default_modalities(mc, mc) == make_modality_set({mod("P")}));
    CHECK_THROWS_AS(default_modalities(mc, lmc), ContractError);
    CHECK_THROWS_AS(check_compatible(mod("fdia"), SystemType::MarkovChain), ContractError);
  }

  TEST_CASE("Sugeno evaluation examples") {
    const Payload mu = SubDist{{{0, Value::one()}}};
    CHECK(sugeno_evaluate(mod("P"), {Value::one()}, mu) == Value::one());
    const Payload uniform = SubDist{{{0, v("1/2")}, {1, v("1/2")}}};
    CHECK(sugeno_evaluate(mod("P"), {v("3/5"), v("1/5")}, uniform) == v("1/2"));
    const Payload nine = SubDist{{{0, v("9/10")}}};
    CHECK(sugeno_evaluate(mod("P"), {Value::one()}, nine) == v("9/10"));
    CHECK(sugeno_evaluate(mod("~P"), {Value::zero()}, nine) == v("1/10"));
  }

  TEST_CASE("monotonicity and naturality on random payloads") {
    testing::Rng rng(21);
    for (auto t : testing::all_types()) {
      const auto ms = testing::all_modalities(t);
      for (int i = 0; i < 100; ++i) {
        const std::size_t n = testing::uniform(rng, 1, 5);
        const auto pl = testing::random_payload(rng, t, n);
        const auto metric = testing::random_line_metric(rng);
        const auto m = ms[testing::uniform(rng, 0, ms.size() - 1)];
        const auto a = StateSet::of(n, testing::random_subset(rng, n, n));
        auto b = a;
        b.insert(testing::uniform(rng, 0, n - 1));
        CHECK(evaluate(m, a, pl, metric) <= evaluate(m, b, pl, metric));
        CHECK(evaluate(m, a, pl, metric) == evaluate(m, a & support(pl, n), pl, metric));
        CHECK(evaluate(dual(dual(m)), a, pl, metric) == evaluate(m, a, pl, metric));
      }
    }
  }

  TEST_CASE("candidate scan equals a grid supremum") {
    testing::Rng rng(23);
    for (auto t : testing::all_types()) {
      const auto ms = testing::all_modalities(t);
      for (int i = 0; i < 60; ++i) {
        const std::size_t n = testing::uniform(rng, 1, 4);
        const auto pl = testing::random_payload(rng, t, n);
        const auto metric = testing::random_line_metric(rng);
        const auto m = ms[testing::uniform(rng, 0, ms.size() - 1)];
        std::vector<Value> f;
        for (std::size_t s = 0; s < n; ++s) f.push_back(testing::random_value(rng));
        // The grid 0, 1/60, ..., 1 contains every value of f.
        Value best;
        for (long k = 0; k <= 60; ++k) {
          const auto c = Value::ratio(k, 60);
          StateSet cut(n);
          for (std::size_t s = 0; s < n; ++s)
            if (f[s] >= c) cut.insert(s);
          best = join(best, meet(c, evaluate(m, cut, pl, metric)));
        }
        CHECK(sugeno_evaluate(m, f, pl, metric) == best);
      }
    }
  }
}
