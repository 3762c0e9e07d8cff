#include "doctest.h"
#include "epsdist/errors.hpp"
#include "epsdist/systems.hpp"
#include "support.hpp"

using namespace epsdist;
using epsdist::testing::v;

namespace {

std::string validation_path(std::string_view text) {
  try {
    load_system_text(text);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("systems") {
  TEST_CASE("one-state loops") {
    const auto s = load_system_text(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":"1"}}})");
    CHECK(s.size() == 1);
    CHECK(s.type() == SystemType::MarkovChain);
    const auto& d = std::get<SubDist>(s.payload(0));
    REQUIRE(d.weights.size() == 1);
    CHECK(d.weights[0].second == Value::one());

    const auto t = load_system_text(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":"0.9"}}})");
    CHECK(mass(std::get<SubDist>(t.payload(0)).weights) == Rational(9, 10));
  }

  TEST_CASE("label distribution must have total mass 1") {
    const auto text = R"({"type":"gpts","states":["x"],
      "transitions":{"x":{"a":{"x":"0.5"},"b":{"x":"0.49"}}}})";
    CHECK_THROWS_AS(load_system_text(text), ValidationError);
    CHECK(validation_path(text) == "/transitions/x");
  }

  TEST_CASE("schema violations carry a path") {
    CHECK(validation_path(R"({"type":"nope","states":[],"transitions":{}})") == "/type");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"z":"1"}}})") ==
          "/transitions/x/z");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":"0.6"},"w":{}}})") ==
          "/transitions/w");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x","y"],"transitions":{"x":{"x":"0.6","y":"0.6"}}})") ==
          "/transitions/x");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x","x"],"transitions":{}})") == "/states/1");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":1}}})") ==
          "/transitions/x/x");
    CHECK(validation_path(R"({"type":"markov_chain","states":["x"],"transitions":{},"extra":1})") == "/extra");
    CHECK_THROWS_AS(load_system_text("{not json"), ParseError);
  }

  TEST_CASE("missing transitions are empty payloads") {
    const auto s = load_system_text(R"({"type":"fuzzy_ts","states":["x","y"],"transitions":{"x":{"y":"1/2"}}})");
    CHECK(std::get<FuzzySet>(s.payload(1)).degrees.empty());
    CHECK(s.support(0) == StateSet(2, {1}));
    CHECK(s.predecessors(1) == std::vector<std::size_t>{0});
  }

  TEST_CASE("label metric axioms are validated") {
    const auto base = [](std::string dist) {
      return R"({"type":"metric_ts","states":["x"],"transitions":{"x":{"a":["x"]}},
        "label_metric":{"labels":["a","b","c"],"dist":)" + dist + "}}";
    };
    CHECK_NOTHROW(load_system_text(base(R"({"a,b":"1/2","b,c":"1/2","a,c":"1"})")));
    CHECK(validation_path(base(R"({"a,b":"1/10","b,c":"1/10","a,c":"1"})")) == "/label_metric/dist");
    CHECK(validation_path(base(R"({"a,b":"1/2","b,a":"1/3","b,c":"1/2","a,c":"1"})")) ==
          "/label_metric/dist/b,a");
    CHECK(validation_path(base(R"({"a,a":"1/2","a,b":"1/2","b,c":"1/2","a,c":"1"})")) ==
          "/label_metric/dist/a,a");
    CHECK(validation_path(base(R"({"a,b":"1/2","b,c":"1/2"})")) == "/label_metric/dist");
  }

  TEST_CASE("every system type loads and round-trips") {
    testing::Rng rng(3);
    for (auto t : testing::all_types()) {
      for (int i = 0; i < 20; ++i) {
        const auto s = testing::random_system(rng, t, testing::uniform(rng, 1, 5));
        const auto j = to_json(s);
        const auto back = load_system(j);
        CHECK(to_json(back) == j);
        CHECK(back.type() == t);
      }
    }
  }

  TEST_CASE("relational image") {
    Relation r(2, 2);
    r.insert(0, 1);
    CHECK(r.image(StateSet(2, {0})) == StateSet(2, {1}));
    CHECK(r.image(StateSet(2)).empty());
    CHECK(Relation::full(2, 3).image(StateSet(2, {1})) == StateSet::full(3));
    CHECK(r.preimage(StateSet(2, {1})) == StateSet(2, {0}));
    CHECK(r.converse().contains(1, 0));
  }

  TEST_CASE("cut relation") {
    ValueMatrix r(1, 1, v("1/2"));
    CHECK(r.cut(v("1/2")).contains(0, 0));
    CHECK_FALSE(r.cut(v("2/5")).contains(0, 0));
    testing::Rng rng(5);
    const auto m = testing::random_matrix(rng, 3, 4);
    CHECK(m.cut(Value::one()) == Relation::full(3, 4));
    ValueMatrix pos(2, 2, v("1/10"));
    CHECK(pos.cut(Value::zero()).count() == 0);
    for (int i = 0; i < 100; ++i) {
      auto e1 = testing::random_value(rng);
      auto e2 = testing::random_value(rng);
      if (e2 < e1) std::swap(e1, e2);
      CHECK(m.cut(e1).is_subset_of(m.cut(e2)));
    }
  }

  TEST_CASE("image is monotone in relation and set") {
    testing::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
      const auto r = testing::random_relation(rng, 5, 5);
      auto r2 = r;
      r2.insert(testing::uniform(rng, 0, 4), testing::uniform(rng, 0, 4));
      const auto a = StateSet::of(5, testing::random_subset(rng, 5, 3));
      auto a2 = a;
      a2.insert(testing::uniform(rng, 0, 4));
      CHECK(r.image(a).is_subset_of(r2.image(a)));
      CHECK(r.image(a).is_subset_of(r.image(a2)));
    }
  }

  TEST_CASE("state lookup") {
    const auto s = load_system_text(R"({"type":"markov_chain","states":["p","q"],"transitions":{}})");
    CHECK(s.index_of("q") == 1);
    CHECK_FALSE(s.find("r").has_value());
    CHECK_THROWS_AS(s.index_of("r"), ContractError);
  }
}
