#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spherecx/arc_oracle.hpp"
#include "spherecx/experiments.hpp"

using namespace spherecx;
using nlohmann::json;

TEST_CASE("config parsing") {
  auto d = ExperimentConfig::defaults();
  CHECK(d.checks.size() == 12);
  auto c = ExperimentConfig::from_json(json{{"n", 2}, {"weight", 3}, {"checks", {"step_distance"}}});
  CHECK(c.weight == 3);
  CHECK(c.checks == std::vector<std::string>{"step_distance"});
  auto rt = ExperimentConfig::from_json(c.to_json());
  CHECK(rt.to_json() == c.to_json());
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"bogus", 1}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"n", 9}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"weight", "x"}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"checks", {"nope"}}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"scaffold", "theta"}, {"n", 3}}), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), Error);
}

TEST_CASE("empty check list passes with an empty report") {
  auto c = ExperimentConfig::from_json(json{{"checks", json::array()}});
  auto r = run_acceptance(c);
  CHECK(r.results.empty());
  CHECK(r.passed());
}

TEST_CASE("reports replay identically") {
  auto c = ExperimentConfig::from_json(
      json{{"instances", 60}, {"corpus_ranks", {2}}, {"checks", {"strict_decrease", "step_distance", "combing"}}});
  auto a = run_acceptance(c).to_json().dump();
  auto b = run_acceptance(c).to_json().dump();
  CHECK(a == b);
  c.seed = 2;
  CHECK(run_acceptance(c).to_json().dump() != a);
}

TEST_CASE("a corrupted constant only moves the diameter checks") {
  auto base = json{{"instances", 80},
                   {"corpus_ranks", {2}},
                   {"checks", {"strict_decrease", "contraction"}}};
  auto good = run_acceptance(ExperimentConfig::from_json(base));
  base["C1"] = 0;  // C2 = 4 instead of 40
  auto bad = run_acceptance(ExperimentConfig::from_json(base));
  CHECK(good.results[0].pass == bad.results[0].pass);
  CHECK(bad.results[0].detail["violations"] == 0);
  CHECK(bad.results[1].detail["C2"] == 4);
}

TEST_CASE("instance sources") {
  std::mt19937_64 rng(1);
  // surgery from enumerated systems stays inside the enumeration; the doubled
  // arcs reach beyond it
  auto sc = surface_preset(1, 1).scaffold;
  auto inst = generate_instances(sc, 0, 40, rng);
  std::set<std::string> sources, sigs;
  for (const auto& i : inst) {
    sources.insert(i.source);
    CHECK(sigs.insert(i.system.signature()).second);
    CHECK(is_valid_system(i.system));
  }
  CHECK(sources.count("enumeration"));
  CHECK(sources.count("arcs"));
  CHECK(sources.count("closure"));
}

TEST_CASE("reports are written") {
  auto dir = std::filesystem::temp_directory_path() / "spherecx_report_test";
  std::filesystem::remove_all(dir);
  auto c = ExperimentConfig::from_json(json{{"checks", {"arc_double"}}, {"out", dir.string()}});
  auto r = run_acceptance(c);
  CHECK(write_reports(r) == 0);
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::ifstream in(dir / "report.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "id,name,pass,summary");
  std::filesystem::remove_all(dir);
}
