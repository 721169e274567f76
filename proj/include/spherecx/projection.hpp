#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/combing.hpp"

namespace spherecx {

struct MMConstants {
  int n = 2;
  long C1 = 0, C2 = 0, C3 = 0, C4 = 0;
  long A = 0;
  long B_num = 1, B_den = 1;  // B = B_num / B_den
  long C = 0;
  int retraction = 2;
  std::string provenance = "derived from n";

  static MMConstants for_rank(int n);
  /// Recomputes C2.. from an overridden C1.
  static MMConstants with_C1(int n, long C1);
  nlohmann::json to_json() const;
};

enum class ProjectionMode { Exact, CertifiedUpper };

/// Why sphere s′ projects no later than k: a generalized surgery path from s′
/// (pure entries, each tagged with the γ index it is paired with from the
/// alignment point on) fellow traveling γ.
struct SphereProjection {
  std::string key;
  int k = 0;
  std::vector<NormalSystem> path;  // pure path from {s′} up to and including Σ
  std::vector<std::pair<int, int>> coupling;  // (γ index, path index), monotone, to the end
  bool budget_hit = false;
};

struct ProjectionResult {
  int k = 0;
  ProjectionMode mode = ProjectionMode::Exact;
  bool fell_back = false;
  std::vector<SphereProjection> spheres;
  long states = 0;
};

ProjectionResult project(const NormalSystem& s, const SurgeryPath& gamma,
                         ProjectionMode mode = ProjectionMode::Exact, long budget = 200000);

/// Re-checks a sphere certificate against γ: path validity by replay,
/// monotone coupling, shared spheres.
bool verify(const SphereProjection& c, const SurgeryPath& gamma);

enum class ProbeStatus { Pass, Fail, Uncertified };
const char* to_string(ProbeStatus s);

struct Probe {
  std::string id;
  ProbeStatus status = ProbeStatus::Pass;
  nlohmann::json detail;
};

struct CheckReport {
  std::string check;
  MMConstants constants;
  std::vector<Probe> probes;
  int count(ProbeStatus s) const;
  bool passed() const { return count(ProbeStatus::Fail) == 0; }
  nlohmann::json to_json() const;
};

CheckReport check_coarse_retraction(const SurgeryPath& gamma, const std::vector<int>& ts);
CheckReport check_coarse_lipschitz(const SurgeryPath& gamma,
                                   const std::vector<std::pair<NormalSystem, NormalSystem>>& pairs,
                                   const MMConstants& mm);
CheckReport check_strong_contraction(const SurgeryPath& gamma,
                                     const std::vector<std::pair<NormalSystem, NormalSystem>>& pairs,
                                     const MMConstants& mm);

struct DistanceBounds {
  int lower = 0;
  int upper = -1;  // -1: nothing found within the budget
  std::vector<NormalSystem> chain;
};
DistanceBounds distance_bounds(const NormalSystem& a, const NormalSystem& b, int budget = 8);

/// 0, 1 or 2: lower bound on the distance from v to the entries of γ.
int distance_lower_to_path(const NormalSystem& v, const SurgeryPath& gamma);

struct ClosureReport {
  int paths = 0, entries_checked = 0, path_violations = 0;
  int joins = 0, join_violations = 0;
  bool closed() const { return path_violations == 0 && join_violations == 0; }
};
using SystemPredicate = std::function<bool(const NormalSystem&)>;
/// Surgery paths from every sample to every predicate-satisfying scaffold
/// target stay inside the predicate; unions of compatible samples too.
ClosureReport check_subcomplex_closure(const SystemPredicate& pred,
                                       const std::vector<NormalSystem>& samples);

/// The interval partition of γ([0,t]) for two complementary subsystems with
/// no common descendant up to t.
struct IntervalAnalysis {
  int t = 0;
  std::vector<std::pair<int, int>> blocks;  // entry ranges
  std::vector<int> block_bounds;
  DiameterCertificate total;
  std::vector<NormalSystem> hubs;
  int max_blocks = 0;
  long max_total = 0;
  bool ok() const;
};
/// s1, s2: complementary index sets of the path start. t defaults to the
/// last time before a common descendant appears.
IntervalAnalysis interval_analysis(const SurgeryPath& gamma, const std::set<int>& s1,
                                   const std::set<int>& s2, int t = -1);

}  // namespace spherecx
