#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pdgal3/cli.hpp"

using namespace pdgal3;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pdgal3");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PDGAL3_DATA_DIR) + "/systems/" + name; }

}  // namespace

TEST_CASE("analyze") {
  auto r = run({"analyze", data("semisimple_diag.json")});
  REQUIRE(r.code == cli::kOk);
  json j = r.report();
  CHECK(j["schema"] == "pdgal3/1");
  CHECK(j["case"]["label"] == "SEMISIMPLE");
  CHECK(j["group"]["family"] == "torus");
  CHECK(j["checks"]["normal_form_series"] == true);
  CHECK(j["flags"][0] == "complete");
  CHECK(r.err.find("SEMISIMPLE") != std::string::npos);
  // Every emitted matrix parses back.
  CHECK(cli::matrix_from_json(j["case"]["normal_form"]) == cli::matrix_from_json(j["input"]["matrix"]));

  auto p = run({"analyze", data("cq_nc_prolongation.json")});
  REQUIRE(p.code == cli::kOk);
  CHECK(p.report()["case"]["label"] == "(CQ,NC)-prolongation");
  CHECK(p.report()["group"]["kind"] == "pullback");
  CHECK_FALSE(p.report()["group"]["components"].empty());
}

TEST_CASE("analyze errors") {
  auto two = run({"analyze", data("nc_plane.json")});
  CHECK(two.code == cli::kUnsupported);
  CHECK(two.err.find("dim must be 3") != std::string::npos);
  CHECK(run({"analyze", "[[t/x, 0, 0], [0, 1/(x-, 0], [0, 0, 0]]"}).code == cli::kParseError);
  CHECK(run({"analyze", "no/such/file.json"}).code == cli::kParseError);
  auto irr = run({"analyze", data("irregular.json")});
  CHECK(irr.code == cli::kUnsupported);
  CHECK(irr.err.find("certificates") != std::string::npos);
  CHECK(run({"frobnicate"}).code == cli::kParseError);
}

TEST_CASE("config resolution") {
  cli::SystemFile f = cli::load_system(data("nc_nc_commutative.json"));
  CHECK(f.flag);
  cli::Config none;
  CHECK(cli::resolve(none, {}, nullptr).max_order == 4);
  CHECK(cli::resolve(none, {}, &f).max_order == 3);
  cli::Config flags;
  flags.max_order = 6;
  CHECK(cli::resolve(flags, {"max-order"}, &f).max_order == 6);
  setenv("PDGAL3_MAX_ORDER", "2", 1);
  CHECK(cli::resolve(none, {}, nullptr).max_order == 2);
  CHECK(cli::resolve(none, {}, &f).max_order == 3);
  auto r = run({"check", "telescoper", "1/(x-t)"});
  CHECK(r.report()["config"]["max_order"] == 2);
  unsetenv("PDGAL3_MAX_ORDER");
  CHECK(run({"--max-order", "5", "check", "telescoper", "1/x"}).report()["config"]["max_order"] == 5);
}

TEST_CASE("construct") {
  auto p = run({"construct", "prolong", "[[t/x]]"});
  REQUIRE(p.code == cli::kOk);
  CHECK(cli::matrix_from_json(p.report()["matrix"]) == cli::parse_matrix_literal("[[t/x, 1/x], [0, t/x]]"));
  CHECK(run({"construct", "dual", "[[t/x]]"}).report()["matrix"] == json::parse(R"([["-t/x"]])"));
  CHECK(cli::matrix_from_json(run({"construct", "tensor", "[[1/x]]", "[[t/(x-1)]]"}).report()["matrix"]) ==
        cli::parse_matrix_literal("[[1/x + t/(x-1)]]"));
  CHECK(run({"construct", "directsum", "[[1/x]]", "[[t]]"}).report()["dim"] == 2);
  CHECK(run({"construct", "wedge", "[[1/x, x], [0, 2/x]]"}).report()["matrix"] == json::parse(R"([["3/x"]])"));
  CHECK(run({"construct", "gauge", "[[t/x]]", "[[x]]"}).report()["matrix"] == json::parse(R"([["(t + 1)/x"]])"));
  CHECK(run({"construct", "dual", "[[1]]", "[[2]]"}).code == cli::kParseError);
  CHECK(run({"construct", "bogus", "[[1]]"}).code == cli::kParseError);

  // Output is itself a system file.
  auto prolonged = run({"construct", "prolong", "[[t/x, 1/(x-1)], [0, 0]]"});
  const std::string path = "cli_test_prolonged.json";
  {
    std::ofstream f(path);
    f << prolonged.out;
  }
  CHECK(cli::load_system(path).matrix.rows() == 4);
  std::remove(path.c_str());
}

TEST_CASE("check") {
  auto c = run({"check", "constancy", "[[1/x, x], [1/(x-1), 0]]"});
  REQUIRE(c.code == cli::kOk);
  CHECK(c.report()["result"]["constant"] == true);
  CHECK(c.report()["result"]["verified"] == true);
  CHECK(c.report()["result"]["witness"] == json::parse(R"([["0", "0"], ["0", "0"]])"));
  CHECK(run({"check", "constancy", "[[t/x]]"}).report()["result"]["constant"] == false);

  CHECK(run({"check", "classify2", data("nc_plane.json")}).report()["result"]["type"] == "NC");
  // [[t/x, 1], [0, 0]] splits: the complement absorbs 1 = d_x(x).
  CHECK(run({"check", "classify2", "[[t/x, 1], [0, 0]]"}).report()["result"]["type"] == "CR");
  CHECK(run({"check", "classify2", "[[1/x, 1/(x-1)], [0, 0]]"}).report()["result"]["type"] == "CQ");

  auto inv = run({"check", "invariant", "[[1/x, x], [0, 2/x]]", "[[1], [0]]"});
  CHECK(inv.report()["result"]["invariant"] == true);
  CHECK(run({"check", "invariant", "[[1/x, x], [0, 2/x]]", "[[0], [1]]"}).report()["result"]["invariant"] == false);

  auto t = run({"check", "telescoper", "1/(x-t)"});
  CHECK(t.report()["result"]["operator"] == "δ");
  CHECK(t.report()["result"]["verified"] == true);
  CHECK(run({"check", "nothing", "1"}).code == cli::kParseError);
}

TEST_CASE("out and pretty") {
  const std::string path = "cli_test_report.json";
  auto r = run({"--pretty", "--out", path, "analyze", data("nc_nc_commutative.json")});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  json j = json::parse(f);
  CHECK(j["case"]["label"] == "(NC,NC)-commutative");
  CHECK(j["config"]["max_order"] == 3);
  std::remove(path.c_str());
  CHECK(run({"--json", "--pretty", "check", "telescoper", "1/x"}).code == cli::kParseError);
}
