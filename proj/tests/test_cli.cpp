#include <doctest.h>

#include "fusion/cli.hpp"
#include "fusion/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace fusion;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  Json report() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "fusionctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(FUSION_EXAMPLES_DIR) + "/" + name; }

}  // namespace

TEST_CASE("analyze the truncated example family") {
  const Outcome o = run({"analyze", data("truncated_exact.json")});
  REQUIRE(o.code == cli::kExitOk);
  const Json r = o.report();
  CHECK(r["command"] == "analyze");
  CHECK(r["bounds"]["C"].get<double>() == doctest::Approx(1.0));
  CHECK(r["bounds"]["D"].get<double>() == doctest::Approx(2.0));
  CHECK(r["flags"]["exact"] == true);
  CHECK(r["flags"]["riesz_decomposition"] == false);
  CHECK(r["flags"]["complete"] == true);
  CHECK(r["flags"]["minimal"] == false);
  CHECK(r["provenance"]["version"] == cli::kVersion);
  CHECK(r["exit_code"] == 0);
}

TEST_CASE("check exits 0 or 1 with the property value") {
  CHECK(run({"check", data("onb.json"), "--property", "parseval"}).code == cli::kExitOk);
  CHECK(run({"check", data("onb.json"), "--property", "onb"}).code == cli::kExitOk);
  const Outcome no = run({"check", data("truncated_exact.json"), "--property", "parseval"});
  CHECK(no.code == cli::kExitFalse);
  CHECK(no.report()["value"] == false);
  CHECK(run({"check", data("nonframe.json"), "--property", "frame"}).code == cli::kExitFalse);
  CHECK(run({"check", data("nonframe.json"), "--property", "bessel"}).code == cli::kExitOk);
  CHECK(run({"check", data("onb.json"), "--property", "shiny"}).code == cli::kExitInvalid);
}

TEST_CASE("reconstruct") {
  const Outcome o = run({"reconstruct", data("truncated_exact.json"), "--vector", data("vec5.json")});
  REQUIRE(o.code == cli::kExitOk);
  const Json rec = o.report()["reconstruction"];
  const std::vector<double> expected = {1, -2, 0.5, 3, 4};
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(rec[k].get<double>() == doctest::Approx(expected[k]));
  CHECK(run({"reconstruct", data("nonframe.json"), "--vector", data("vec3.json")}).code == cli::kExitFailure);
  CHECK(run({"reconstruct", data("truncated_exact.json"), "--vector", data("vec3.json")}).code == cli::kExitInvalid);
}

TEST_CASE("invalid input and usage errors exit 2") {
  const Outcome bad = run({"analyze", data("bad_weight.json")});
  CHECK(bad.code == cli::kExitInvalid);
  CHECK(bad.err.find("subspaces[0].weight") != std::string::npos);
  CHECK(run({"analyze", data("missing.json")}).code == cli::kExitInvalid);
  const Outcome flag = run({"analyze", data("onb.json"), "--frobnicate"});
  CHECK(flag.code == cli::kExitInvalid);
  CHECK_FALSE(flag.err.empty());
  CHECK(run({}).code == cli::kExitInvalid);
  CHECK(run({"gabor", "--length", "100"}).code == cli::kExitInvalid);
}

TEST_CASE("dual, complex input and --out") {
  const auto path = std::filesystem::temp_directory_path() / "fusionctl_dual_report.json";
  const Outcome o = run({"dual", data("complex_lines.json"), "--out", path.string()});
  REQUIRE(o.code == cli::kExitOk);
  const Json r = o.report();
  CHECK(r["field"] == "complex");
  const double c = r["bounds"]["C"].get<double>(), d = r["bounds"]["D"].get<double>();
  CHECK(r["dual_bounds"]["C"].get<double>() >= c * c * c / (d * d) * (1 - 1e-9));
  CHECK(r["dual_bounds"]["D"].get<double>() <= d * d * d / (c * c) * (1 + 1e-9));
  CHECK(load_json_file(path.string()) == r);
  std::filesystem::remove(path);
}

TEST_CASE("assemble, partition and enrich") {
  const Outcome a = run({"assemble", data("locals.json")});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.report()["flags"]["predicates_agree"] == true);
  CHECK(a.report()["flat_bounds"]["D_g"].get<double>() == doctest::Approx(2.0));

  const Outcome p = run({"partition", data("mercedes_partition.json")});
  REQUIRE(p.code == cli::kExitOk);
  CHECK(p.report()["flags"]["frame"] == true);

  const Outcome e = run({"enrich", data("truncated_exact.json"), "--vectors", data("identity5.json")});
  REQUIRE(e.code == cli::kExitOk);
  CHECK(e.report()["flat_bounds"]["is_frame"] == true);
}

TEST_CASE("resolution reports") {
  const Outcome f = run({"resolution", data("truncated_exact.json"), "--seed", "4"});
  REQUIRE(f.code == cli::kExitOk);
  const Json r = f.report();
  CHECK(r["resolves"] == true);
  CHECK(r["subset_lower"]["pass"] == true);
  CHECK(r["subset_lower"]["probes"].get<int>() >= 100);
  CHECK(r["sandwich"]["applicable"] == true);
  CHECK(r["provenance"]["seed"] == 4);

  const Outcome l2 = run({"resolution", data("onb.json"), "--l2-bound", "1"});
  CHECK(l2.code == cli::kExitOk);
  CHECK(l2.report()["l2"]["pass"] == true);

  CHECK(run({"resolution", data("nonframe.json")}).code == cli::kExitFailure);
}

TEST_CASE("harmonic and gabor") {
  const Outcome h = run({"harmonic", data("rotation_orbit.json")});
  REQUIRE(h.code == cli::kExitOk);
  CHECK(h.report()["bounds"]["C"].get<double>() == doctest::Approx(2.0));
  const Outcome gen = run({"harmonic", "--block-dim", "2", "--blocks", "3", "--seed", "9"});
  REQUIRE(gen.code == cli::kExitOk);
  CHECK(gen.report()["wraparound"]["holds"] == true);

  const Outcome g = run({"gabor", "--length", "8", "--q", "2", "--seed", "1"});
  REQUIRE(g.code == cli::kExitOk);
  CHECK(g.report()["harmonic"]["pass"] == true);
  CHECK(run({"gabor", "--length", "8", "--q", "3"}).code == cli::kExitInvalid);
}

TEST_CASE("rieszcert") {
  const Outcome o = run({"rieszcert", data("onb.json"), "--lower", "1", "--upper", "1"});
  REQUIRE(o.code == cli::kExitOk);
  CHECK(o.report()["pass"] == true);
  CHECK(o.report()["subsets_checked"] == 3);
  CHECK(run({"rieszcert", data("truncated_exact.json"), "--upper", "1.5"}).code == cli::kExitFalse);
}

TEST_CASE("a seed makes randomized reports reproducible") {
  const Outcome a = run({"gabor", "--length", "6", "--q", "3", "--seed", "17"});
  const Outcome b = run({"gabor", "--length", "6", "--q", "3", "--seed", "17"});
  CHECK(a.out == b.out);
}
