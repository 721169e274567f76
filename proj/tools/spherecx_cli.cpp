// spherecx: command line front end for the sphere complex engine.
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "spherecx/arc_oracle.hpp"
#include "spherecx/combing.hpp"
#include "spherecx/complement.hpp"
#include "spherecx/enumerate.hpp"
#include "spherecx/experiments.hpp"
#include "spherecx/projection.hpp"

using namespace spherecx;
using nlohmann::json;

namespace {

struct Common {
  int n = 2;
  std::string scaffold = "default";  // theta at rank 2, the first enumerated scaffold otherwise
  int weight = 2;
  std::uint64_t seed = 1;
  std::string policy = "lex";
  std::string out;
  std::string format = "json";
};

void emit(const Common& c, const json& j, const std::string& csv = "") {
  std::string text = c.format == "csv" && !csv.empty() ? csv : j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(c.out) << text;
  }
}

std::set<int> parse_target(const std::string& s, const Scaffold& sc) {
  std::set<int> t;
  if (s.empty() || s == "all") return all_scaffold_spheres(sc);
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    int e = std::stoi(tok);
    if (e < 0 || e >= sc.sphere_count()) throw Error(ErrorCode::IndexOutOfRange, "target sphere " + tok);
    t.insert(e);
  }
  return t;
}

// A system from a JSON file, or the given index in the enumeration up to the weight.
NormalSystem load_system(const Common& c, const ScaffoldPtr& sc, const std::string& file, int index) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + file);
    json raw;
    try {
      raw = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    auto v = validate(sc, raw);
    if (!v.ok()) {
      std::string why;
      for (const auto& x : v.violations) why += std::string(to_string(x.code)) + " " + x.message + "; ";
      throw Error(v.violations.empty() ? ErrorCode::ParseError : v.violations.front().code, why);
    }
    return *v.system;
  }
  auto all = enumerate_systems(sc, c.weight);
  if (index < 0 || index >= static_cast<int>(all.size()))
    throw Error(ErrorCode::IndexOutOfRange,
                "system index " + std::to_string(index) + " of " + std::to_string(all.size()));
  return all[index];
}

void print_lines(const AcceptanceReport& r) {
  for (const auto& c : r.results)
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.id << " " << c.name << ": " << c.summary
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("SPHERECX_THREADS")) omp_set_num_threads(std::max(1, std::atoi(t)));

  CLI::App app{"Sphere systems in normal coordinates: surgery paths, combing, projections"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("--n", c.n, "rank of the free group")->check(CLI::Range(2, 4));
    s->add_option("--scaffold", c.scaffold, "theta | dumbbell | all | index");
    s->add_option("--weight", c.weight, "bound on circles with the scaffold")->check(CLI::Range(0, 8));
    s->add_option("--seed", c.seed);
    s->add_option("--policy", c.policy)->check(CLI::IsMember({"lex", "seeded", "min-result"}));
    s->add_option("--out", c.out, "output file (directory for accept)");
    s->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
  };

  auto* scaffold = app.add_subcommand("scaffold", "print scaffolds");
  common(scaffold);

  auto* enumerate = app.add_subcommand("enumerate", "list canonical systems up to the weight");
  common(enumerate);

  std::string file, target;
  int index = 0, other = 0;
  auto* path = app.add_subcommand("path", "surgery path toward scaffold spheres");
  common(path);
  path->add_option("--system", file, "system JSON file");
  path->add_option("--index", index, "index into the enumeration");
  path->add_option("--target", target, "comma separated scaffold spheres (default all)");

  auto* comb = app.add_subcommand("comb", "combing diagram over a random zig-zag column");
  common(comb);
  comb->add_option("--index", index);
  comb->add_option("--to", other, "index of the far end of the column");
  comb->add_option("--target", target);

  std::string mode = "exact";
  auto* project_cmd = app.add_subcommand("project", "projection of a system onto a surgery path");
  common(project_cmd);
  project_cmd->add_option("--index", index, "path start");
  project_cmd->add_option("--of", other, "projected system");
  project_cmd->add_option("--target", target);
  project_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exact", "upper"}));

  std::string which;
  int instances = 300;
  auto* check = app.add_subcommand("check", "run one property check");
  common(check);
  check->add_option("which", which)
      ->required()
      ->check(CLI::IsMember({"retract", "lipschitz", "contract", "lemma51", "prop52", "doubling"}));
  check->add_option("--instances", instances);

  std::string config;
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  accept->add_option("--config", config, "JSON config (defaults otherwise)");
  accept->add_option("--out", c.out, "report directory");
  accept->add_option("--seed", c.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scaffold) {
      json j = json::array();
      std::string csv = "index,id,pieces,spheres\n";
      int i = 0;
      for (auto& sc : select_scaffolds(c.n, c.scaffold == "default" ? "all" : c.scaffold)) {
        j.push_back(sc->to_json());
        csv += std::to_string(i++) + ",\"" + sc->id() + "\"," + std::to_string(sc->piece_count()) + "," +
               std::to_string(sc->sphere_count()) + "\n";
      }
      emit(c, j, csv);
      return 0;
    }
    if (c.scaffold == "default") c.scaffold = c.n == 2 ? "theta" : "0";
    auto sc = select_scaffolds(c.n, c.scaffold).front();
    if (*enumerate) {
      auto all = enumerate_systems(sc, c.weight);
      json j = json::array();
      std::string csv = "index,spheres,weight,signature\n";
      for (size_t i = 0; i < all.size(); ++i) {
        j.push_back(to_json(all[i]));
        csv += std::to_string(i) + "," + std::to_string(all[i].size()) + "," +
               std::to_string(intersection_number(all[i])) + ",\"" + all[i].signature() + "\"\n";
      }
      emit(c, j, csv);
      return 0;
    }
    std::mt19937_64 rng(c.seed);
    if (*path) {
      auto s = load_system(c, sc, file, index);
      auto p = surgery_path(s, parse_target(target, *sc), make_policy(c.policy, rng));
      std::string csv = "t,intersection,signature\n";
      for (int t = 0; t <= p.K(); ++t)
        csv += std::to_string(t) + "," + std::to_string(intersection_number(p.at(t), p.target)) +
               ",\"" + p.at(t).signature() + "\"\n";
      emit(c, to_json(p), csv);
      return 0;
    }
    if (*comb) {
      auto a = load_system(c, sc, "", index), b = load_system(c, sc, "", other);
      auto base = surgery_path(a, parse_target(target, *sc), make_policy(c.policy, rng));
      auto z = zigzag_between(a, b, 8);
      auto d = build_combing_diagram(z.entries, base);
      auto chk = check_diagram(d, z.entries);
      json j{{"diagram", to_json(d)}, {"zigzag_length", z.found_length}, {"k", z.k},
             {"check", {{"ok", chk.ok}, {"why", chk.why}}}};
      emit(c, j);
      return chk.ok ? 0 : 1;
    }
    if (*project_cmd) {
      auto a = load_system(c, sc, "", index), s = load_system(c, sc, "", other);
      auto g = surgery_path(a, parse_target(target, *sc), make_policy(c.policy, rng));
      auto r = project(s, g, mode == "exact" ? ProjectionMode::Exact : ProjectionMode::CertifiedUpper);
      json spheres = json::array();
      for (const auto& sp : r.spheres)
        spheres.push_back({{"key", sp.key}, {"k", sp.k}, {"verified", verify(sp, g)}, {"coupling", sp.coupling}});
      emit(c, {{"k", r.k}, {"fell_back", r.fell_back}, {"states", r.states}, {"spheres", spheres},
               {"path", to_json(g)}});
      return 0;
    }
    if (*check) {
      static const std::map<std::string, std::string> name{
          {"retract", "coarse_retraction"},      {"lipschitz", "masur_minsky"},
          {"contract", "contraction"},           {"lemma51", "complexity_monotonicity"},
          {"prop52", "diameter_bound"},          {"doubling", "arc_double"}};
      auto cfg = ExperimentConfig::defaults();
      cfg.n = c.n;
      cfg.corpus_ranks = {c.n};
      cfg.scaffold = c.scaffold == "default" ? "all" : c.scaffold;
      cfg.weight = c.weight;
      cfg.seed = c.seed;
      cfg.policy = c.policy;
      cfg.instances = instances;
      cfg.checks = {name.at(which)};
      auto r = run_acceptance(cfg);
      print_lines(r);
      if (!c.out.empty()) std::ofstream(c.out) << (c.format == "csv" ? r.to_csv() : r.to_json().dump(2) + "\n");
      return r.passed() ? 0 : 1;
    }
    if (*accept) {
      auto cfg = ExperimentConfig::defaults();
      if (!config.empty()) {
        std::ifstream in(config);
        if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open " + config);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw Error(ErrorCode::ConfigInvalid, e.what());
        }
        cfg = ExperimentConfig::from_json(j);
      }
      if (accept->count("--seed")) cfg.seed = c.seed;
      if (!c.out.empty()) cfg.out = c.out;
      auto r = run_acceptance(cfg);
      print_lines(r);
      return write_reports(r);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
