#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/normal_system.hpp"

namespace spherecx {

enum class PathMode { Identify, KeepCopies };

struct Policy {
  // MinResult: the candidate whose resulting system has the least signature
  enum Kind { Lexicographic, Seeded, MinResult } kind = Lexicographic;
  std::uint64_t seed = 0;
  static Policy lex() { return {}; }
  static Policy seeded(std::uint64_t s) { return {Seeded, s}; }
  static Policy min_result() { return {MinResult, 0}; }
};

/// A disk on a scaffold sphere bounded by one intersection circle.
struct DiskChoice {
  int scaffold_sphere = -1;
  int circle = -1;  // position in circles_on(sys, scaffold_sphere)
  int side = 0;     // side of the circle's sphere containing the disk
  auto operator<=>(const DiskChoice&) const = default;
};

/// A disk recorded against the original system: the label of the original
/// circle bounding it and the side in that sphere's original colouring.
struct LabelledDisk {
  int scaffold_sphere = -1;
  int label = -1;
  int side = 0;
  auto operator<=>(const LabelledDisk&) const = default;
};

struct SurgeryStep {
  DiskChoice choice;
  std::string parent_key;
  int parent_index = -1;  // in the system before the step
  LabelledDisk surgery_disk;
  std::vector<std::string> child_keys;  // nontrivial children
  std::vector<LabelledDisk> vanishing;  // pushed through while renormalizing
  std::vector<std::string> merged;      // child keys that were already present
};

/// Per-sphere bookkeeping carried along a path.
struct Provenance {
  std::set<int> ancestors;  // sphere indices of the start system
  int flip = 0;             // colour here = colour at the start ^ flip
  auto operator<=>(const Provenance&) const = default;
};

struct PathEntry {
  NormalSystem system;
  std::optional<SurgeryStep> step;  // how this entry was reached
  bool wait = false;
  bool terminal = false;            // the target system at the end of the path
  std::vector<Provenance> prov;     // aligned with system spheres
};

/// A (generalized) surgery path toward a set of scaffold spheres. The last
/// entry is the target system itself.
struct SurgeryPath {
  std::set<int> target;
  PathMode mode = PathMode::Identify;
  Policy policy;
  std::vector<PathEntry> entries;

  int K() const { return static_cast<int>(entries.size()) - 1; }
  const NormalSystem& at(int t) const { return entries.at(t).system; }
  const NormalSystem& start() const { return entries.front().system; }
};

/// Start-system provenance: each sphere is its own ancestor and every
/// intersection circle gets a globally unique label.
PathEntry initial_entry(const NormalSystem& s);

std::vector<DiskChoice> innermost_candidates(const NormalSystem& sys, const std::set<int>& target);

/// One surgery step along an innermost disk. Throws NotInnermost.
PathEntry single_surgery_step(const PathEntry& from, const std::set<int>& target,
                              const DiskChoice& choice, PathMode mode = PathMode::Identify);

/// Every system reachable by one surgery step (one entry per innermost disk).
std::vector<PathEntry> all_single_steps(const PathEntry& from, const std::set<int>& target,
                                        PathMode mode = PathMode::Identify);
/// The final entry (the target itself) following an entry disjoint from it.
PathEntry terminal_entry(const PathEntry& prev, const std::set<int>& target);

SurgeryPath surgery_path(const NormalSystem& s, const std::set<int>& target,
                         Policy policy = Policy::lex(), PathMode mode = PathMode::Identify);

/// Indices (into entry t) of the descendants of the start spheres `sub`.
std::vector<int> descendant_indices(const SurgeryPath& p, const std::set<int>& sub, int t);
NormalSystem descendants_at(const SurgeryPath& p, const std::set<int>& sub, int t);
/// Start-system sphere indices of a subsystem given by keys.
std::set<int> start_indices(const SurgeryPath& p, const NormalSystem& sub);

struct FellowTravel {
  bool ok = false;
  int offset = 0;
  std::vector<std::pair<int, std::string>> shared;  // (index on the first path, common key)
  int first_failure = -1;
};
/// Entries k >= t of a and k + (K_b - K_a) of b share a sphere. Throws BadAlignment.
FellowTravel fellow_travels_after(const SurgeryPath& a, const SurgeryPath& b, int t);

/// Earliest t < K where descendants of the two start subsystems share a sphere.
std::optional<int> common_descendant_time(const SurgeryPath& p, const std::set<int>& s1,
                                          const std::set<int>& s2);

/// Repeats entry i once for every i in positions (waits after entry i).
SurgeryPath insert_waits(const SurgeryPath& p, const std::vector<int>& positions);
SurgeryPath strip_waits(const SurgeryPath& p);
/// Entry systems after dropping waits, as signatures.
std::vector<std::string> stripped_signatures(const SurgeryPath& p);

nlohmann::json to_json(const SurgeryPath& p);

}  // namespace spherecx
