#include <algorithm>
#include <fstream>

#include "cli_runner.hpp"
#include "doctest.h"
#include "epsdist/systems.hpp"
#include "json.hpp"
#include "support.hpp"

using nlohmann::json;
using epsdist::testing::run_cli;
using epsdist::testing::Workspace;

TEST_SUITE("cli") {
  TEST_CASE("check and distance") {
    Workspace ws;
    auto r = run_cli("check --eps 1/10" + ws.pair());
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["result"] == "similar");
    r = run_cli("--human check --eps 1/20" + ws.pair());
    CHECK(r.code == 1);
    CHECK(r.out == "not-similar\n");
    r = run_cli("distance --mode exact" + ws.pair());
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["distance"] == "1/10");
    r = run_cli("distance --mode bisect:1/1000" + ws.pair());
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["tolerance"] == "1/1000");
  }

  TEST_CASE("distinguish and validate") {
    Workspace ws;
    const auto cert = ws.path("cert.json");
    auto r = run_cli("distinguish --eps 1/20 --logic quantitative --out " + cert + ws.pair());
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["certificate"]["text"] == "<P> tt");
    CHECK(j["certificate"]["evaluation"]["left"] == "1");
    CHECK(j["certificate"]["evaluation"]["right"] == "9/10");
    r = run_cli("validate --cert " + cert + " --left " + ws.left + " --right " + ws.right);
    CHECK(r.code == 0);

    auto doc = json::parse(std::ifstream(cert));
    doc["eps"] = "1/5";
    const auto tampered = ws.write("tampered.json", doc.dump());
    r = run_cli("validate --cert " + tampered + " --left " + ws.left + " --right " + ws.right);
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["valid"] == false);

    r = run_cli("distinguish --eps 1/10" + ws.pair());
    CHECK(r.code == 2);
  }

  TEST_CASE("eval") {
    Workspace ws;
    const auto f2 = ws.write("f2.txt", "[P>=1] tt\n");
    auto r = run_cli("eval --formula-file " + f2 + " --system " + ws.left + " --eps 0");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["satisfied"] == json::array({"x"}));
    const auto fq = ws.write("fq.txt", "<P> tt (-) 1/2");
    r = run_cli("eval --formula-file " + fq + " --system " + ws.right);
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["values"]["y"] == "2/5");
  }

  TEST_CASE("oracle") {
    Workspace ws;
    auto r = run_cli("oracle --eps 1/10 --left " + ws.left + " --right " + ws.right);
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["distance"]["x"]["y"] == "1/10");
    CHECK(j["simulation"] == json::array({json::array({"x", "y"})}));
    r = run_cli("oracle --cap 1 --left " + ws.left + " --right " + ws.right);
    CHECK(r.code == 66);
  }

  TEST_CASE("error classes map to exit codes") {
    Workspace ws;
    CHECK(run_cli("check --eps 1/10 --left missing.json --right " + ws.right + " --lx x --ry y").code == 64);
    const auto broken = ws.write("broken.json", "{\"type\": ");
    CHECK(run_cli("check --eps 1/10 --left " + broken + " --right " + ws.right + " --lx x --ry y").code == 64);
    CHECK(run_cli("check --eps 3/2" + ws.pair()).code == 64);
    CHECK(run_cli("check --eps 1/10 --lx x" + ws.pair()).code == 64);
    CHECK(run_cli("check --eps 1/10 --modalities fdia" + ws.pair()).code == 65);
    CHECK(run_cli("eval --logic two-valued --formula-file x --system " + ws.left).code == 64);
    const auto bad = ws.write("bad.txt", "[P>=1] tt tt");
    CHECK(run_cli("eval --formula-file " + bad + " --system " + ws.left + " --eps 0").code == 64);
  }

  TEST_CASE("output is deterministic") {
    Workspace ws;
    const auto a = run_cli("distinguish --eps 1/20 --logic two-valued --bisim" + ws.pair());
    const auto b = run_cli("distinguish --eps 1/20 --logic two-valued --bisim" + ws.pair());
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("check and oracle agree, emitted certificates validate") {
    Workspace ws;
    epsdist::testing::Rng rng(71);
    for (auto t : epsdist::testing::all_types()) {
      for (int i = 0; i < 2; ++i) {
        const auto p = epsdist::testing::random_pair(rng, t, 3);
        const auto left = ws.write("l.json", epsdist::to_json(p.left).dump());
        const auto right = ws.write("r.json", epsdist::to_json(p.right).dump());
        const std::string files = " --left " + left + " --right " + right;
        const std::string eps = epsdist::testing::grid_value(rng, 10).str();
        auto r = run_cli("oracle --eps " + eps + files);
        REQUIRE(r.code == 0);
        const auto sim = json::parse(r.out)["simulation"];
        for (std::size_t x = 0; x < p.left.size(); ++x) {
          for (std::size_t y = 0; y < p.right.size(); ++y) {
            const std::string pos = files + " --lx " + p.left.name(x) + " --ry " + p.right.name(y);
            const bool related = std::find(sim.begin(), sim.end(),
                                           json::array({p.left.name(x), p.right.name(y)})) != sim.end();
            r = run_cli("check --eps " + eps + pos);
            CHECK(r.code == (related ? 0 : 1));
            if (related) continue;
            for (const char* logic : {"two-valued", "quantitative"}) {
              const auto cert = ws.path("c.json");
              CHECK(run_cli("distinguish --eps " + eps + " --logic " + logic + " --out " + cert + pos).code == 0);
              CHECK(run_cli("validate --cert " + cert + files).code == 0);
            }
          }
        }
      }
    }
  }
}
