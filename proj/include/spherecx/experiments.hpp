#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/normal_system.hpp"
#include "spherecx/surgery.hpp"

namespace spherecx {

struct ExperimentConfig {
  int n = 2;
  std::vector<int> corpus_ranks{2, 3};  // ranks for the step-level criteria
  std::string scaffold = "all";         // all | theta | dumbbell | <index into enumerate_scaffolds(n)>
  int weight = 4;                       // enumeration bound at rank n
  int corpus_weight = 2;                // enumeration bound at the other ranks
  int exact_weight = 3;                 // exhaustive projection set
  int instances = 300;                  // per-criterion probe budget
  std::uint64_t seed = 1;
  std::string policy = "seeded";        // lex | seeded | min-result
  std::vector<std::string> checks;      // empty in JSON means none; defaults() lists all
  std::string out;                      // report directory ("" = none)
  std::optional<long> C1;               // overrides the derived constant

  static ExperimentConfig defaults();
  /// Throws ConfigInvalid on unknown keys, bad types or out-of-range values.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Names of the acceptance checks, in criterion order.
const std::vector<std::string>& acceptance_checks();

std::vector<ScaffoldPtr> select_scaffolds(int n, const std::string& selector);

/// Path policy for a config string; seeded policies draw their seed from rng.
Policy make_policy(const std::string& name, std::mt19937_64& rng);

struct Instance {
  std::string source;  // enumeration | arcs | closure
  NormalSystem system;
};
/// Enumeration up to W, doubled random arc systems (when the scaffold is the
/// double of a preset surface) and closures under random surgery steps.
std::vector<Instance> generate_instances(const ScaffoldPtr& sc, int W, int closure_count,
                                         std::mt19937_64& rng);

/// A uniformly random nonempty set of scaffold spheres.
std::set<int> random_target(const Scaffold& sc, std::mt19937_64& rng);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::string summary;
  nlohmann::json detail;
};

struct AcceptanceReport {
  ExperimentConfig config;
  std::vector<CriterionResult> results;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

AcceptanceReport run_acceptance(const ExperimentConfig& cfg);
/// Writes report.json and report.csv into cfg.out (if set). Returns 0 when all passed.
int write_reports(const AcceptanceReport& r);

}  // namespace spherecx
