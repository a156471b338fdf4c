#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "symkit/catalog.hpp"
#include "symkit/lts.hpp"
#include "symkit/serialize.hpp"
#include "symkit/symspace.hpp"

using namespace symkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return Run{code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("symkit_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"verify", "--model", "nope"}).code == cli::kUsage);
  CHECK(run({"verify", "--model", "sphere(-1)"}).code == cli::kUsage);
  CHECK(run({"verify", "--model", "sphere(2)", "--format", "xml"}).code == cli::kUsage);
  CHECK(run({"trotter", "--model", "sphere(2)", "--x", "1,abc", "--y", "0,1"}).code == cli::kUsage);
  CHECK(run({"trotter", "--model", "sphere(2)", "--x", "1,2,3", "--y", "0,1"}).code == cli::kUsage);
  CHECK(run({"quotient", "--model", "sphere(2)"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kPass);
}

TEST_CASE("params flag composes with the model name") {
  const Run a = run({"models", "--model", "grassmann", "--params", "1,3"});
  REQUIRE(a.code == 0);
  CHECK(Json::parse(a.out)["models"][0]["spec"] == "grassmann(1,3)");
  CHECK(run({"models", "--model", "grassmann(1,3)", "--params", "1,3"}).code == cli::kUsage);
}

TEST_CASE("verify passes on every default model") {
  for (const auto& spec : default_model_specs()) {
    CAPTURE(spec);
    const Run r = run({"verify", "--model", spec, "--samples", "10"});
    CHECK(r.code == cli::kPass);
    const Json j = Json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() >= 10);
  }
}

TEST_CASE("verify on a tensor file") {
  const auto good = scratch("good.json");
  const auto bad = scratch("bad.json");
  const auto broken = scratch("broken.json");
  const LieTripleSystem m = lts_of_pair(*sphere_pair(2));
  {
    std::ofstream(good) << to_json(m).dump();
    std::vector<double> t = m.tensor();
    t[1] += 0.5;  // breaks antisymmetry in the first two slots
    std::ofstream(bad) << Json{{"dim", m.dim()}, {"tensor", t}}.dump();
    std::ofstream(broken) << R"({"dim": 2, "tensor": [1, 2, 3]})";
  }
  CHECK(run({"verify", "--tensor", good.string()}).code == cli::kPass);
  const Run r = run({"verify", "--tensor", bad.string()});
  CHECK(r.code == cli::kCheckFailure);
  CHECK(Json::parse(r.out)["checks"][0]["passed"] == false);
  CHECK(run({"verify", "--tensor", broken.string()}).code == cli::kUsage);
  CHECK(run({"verify", "--tensor", scratch("missing.json").string()}).code == cli::kUsage);
}

TEST_CASE("trotter tables") {
  const Run sum = run({"trotter", "--model", "spd(2)", "--x", "1,0,0", "--y", "0,0,1", "--k-min", "2", "--k-max", "4"});
  REQUIRE(sum.code == 0);
  CHECK(sum.out.rfind("k,error\n", 0) == 0);
  CHECK(std::count(sum.out.begin(), sum.out.end(), '\n') == 4);

  const Run br = run({"trotter", "--model", "spd(2)", "--x", "1,0,0", "--y", "0,0,1", "--z", "0,1,0", "--k-max", "3",
                      "--format", "json"});
  REQUIRE(br.code == 0);
  const Json j = Json::parse(br.out);
  CHECK(j["formula"] == "bracket");
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["l"] == 8);

  const Run empty = run({"trotter", "--model", "spd(2)", "--x", "1,0,0", "--y", "0,0,1", "--k-min", "6", "--k-max", "3"});
  CHECK(empty.code == 0);
  CHECK(empty.out == "k,error\n");
}

TEST_CASE("quotient exit codes") {
  const Run ok = run({"quotient", "--model", "product(sphere(2),sphere(2))", "--ideal", "second_factor"});
  CHECK(ok.code == cli::kPass);
  const Json j = Json::parse(ok.out);
  CHECK(j["verdict"] == "quotient");
  CHECK(j["rank_checks"]["l_dim"] == 3);
  CHECK(j["quotient_pair"]["minus_dim"] == 2);

  const Run rejected = run({"quotient", "--model", "torus_abelian", "--ideal", "dense_line"});
  CHECK(rejected.code == cli::kGateRejected);
  CHECK(rejected.err.find("not a symmetric subspace") != std::string::npos);
  const Json w = Json::parse(rejected.out)["density_witness"];
  CHECK(w["lattice_point"][0] == "985");
  CHECK(w["lattice_point"][1] == "1393");
  CHECK(w["below_bound"] == true);

  CHECK(run({"quotient", "--model", "sphere(2)", "--ideal", "1,0"}).code == cli::kCheckFailure);
  CHECK(run({"quotient", "--model", "spd(2)", "--ideal", "zero"}).code == cli::kCheckFailure);
  CHECK(run({"quotient", "--model", "spd(2)", "--ideal", "1,1,0"}).code == cli::kPass);
}

TEST_CASE("subspace command") {
  const Run r = run({"subspace", "--model", "torus_abelian"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["subspaces"][0]["certified"] == true);
  CHECK(j["subspaces"][0]["symmetric"] == false);
  const Json s = Json::parse(run({"subspace", "--model", "sphere(2)"}).out);
  CHECK(s["subspaces"][0]["symmetric"] == true);
  CHECK(run({"subspace", "--model", "sphere(2)", "--subspace", "nope"}).code == cli::kUsage);
}

TEST_CASE("reports are deterministic and --out writes the same bytes") {
  const std::vector<std::string> args{"verify", "--model", "grassmann(1,3)", "--samples", "5", "--seed", "42"};
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  const auto path = scratch("out.json");
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path.string()});
  const Run c = run(with_out);
  CHECK(c.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == a.out);
}

}
