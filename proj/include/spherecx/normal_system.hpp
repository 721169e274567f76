#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/error.hpp"
#include "spherecx/sphere.hpp"

namespace spherecx {

using ScaffoldPtr = std::shared_ptr<const Scaffold>;

/// An isotopy class of sphere systems in normal coordinates. Spheres are kept
/// sorted by canonical key and pairwise distinct; multiplicity > 1 only
/// occurs for paths built in keep-copies mode (parallel copies retained).
class NormalSystem {
 public:
  NormalSystem() = default;

  const ScaffoldPtr& scaffold_ptr() const { return sc_; }
  const Scaffold& scaffold() const { return *sc_; }
  int size() const { return static_cast<int>(spheres_.size()); }
  bool empty() const { return spheres_.empty(); }
  const Sphere& sphere(int i) const { return spheres_[i]; }
  const std::vector<Sphere>& spheres() const { return spheres_; }
  int multiplicity(int i) const { return mult_[i]; }
  int total_copies() const;
  std::vector<std::string> keys() const;
  int index_of(const std::string& key) const;  // -1 if absent

  /// Keys plus multiplicities; identical systems have identical signatures.
  std::string signature() const;
  bool operator==(const NormalSystem& o) const { return signature() == o.signature(); }

  /// The same classes with every multiplicity set to one.
  NormalSystem identified() const;

 private:
  friend NormalSystem make_system(ScaffoldPtr, std::vector<Sphere>, std::vector<int>, bool);
  ScaffoldPtr sc_;
  std::vector<Sphere> spheres_;
  std::vector<int> mult_;
};

/// Sorts, merges parallel copies (summing multiplicities when keep_copies,
/// otherwise collapsing them to one).
NormalSystem make_system(ScaffoldPtr sc, std::vector<Sphere> spheres,
                         std::vector<int> multiplicities = {}, bool keep_copies = false);

NormalSystem scaffold_subsystem(ScaffoldPtr sc, const std::set<int>& spheres);

/// Circles of the system on the chosen scaffold spheres (copies counted).
int intersection_number(const NormalSystem& sys, const std::set<int>& target);
int intersection_number(const NormalSystem& sys);  // whole scaffold
std::set<int> all_scaffold_spheres(const Scaffold& sc);

bool contains_sphere(const NormalSystem& sys, const std::string& key);
/// Every sphere class of a occurs in b. Throws ScaffoldMismatch.
bool is_subsystem(const NormalSystem& a, const NormalSystem& b);
/// Union when every pair of spheres can be made disjoint; throws NotCoordinateDisjoint.
NormalSystem disjoint_union(const NormalSystem& a, const NormalSystem& b);
std::optional<NormalSystem> try_disjoint_union(const NormalSystem& a, const NormalSystem& b);
/// All pairs of spheres compatible and each sphere embedded.
bool is_valid_system(const NormalSystem& s);
/// Spheres of sys selected by index, multiplicities kept.
NormalSystem subsystem(const NormalSystem& sys, const std::vector<int>& indices);

/// A lift of a sphere at the base node of a piece: sphere index and the tree
/// vertex placed there.
struct Lift {
  int sphere = -1;
  int vertex = -1;
  auto operator<=>(const Lift&) const = default;
};

/// All lifts meeting the base node of piece p, in (sphere, vertex) order.
std::vector<Lift> lifts_at(const NormalSystem& sys, int piece);
/// Circles on scaffold sphere e: lifts at its first end crossing the first slot.
std::vector<Lift> circles_on(const NormalSystem& sys, int e);
/// Side of lift b containing the surface of lift a (both at the same node).
int side_containing(const NormalSystem& sys, Lift a, Lift b);

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationResult {
  std::optional<NormalSystem> system;
  std::vector<Violation> violations;
  bool ok() const { return system.has_value(); }
};

/// Reads a raw coordinate record (see to_json for the layout) and reports every
/// violation found.
ValidationResult validate(ScaffoldPtr sc, const nlohmann::json& raw);
nlohmann::json to_json(const NormalSystem& sys);

/// Unrooted nesting data on one scaffold sphere: circle i and j bound a common
/// face of the circle pattern.
std::set<std::pair<int, int>> circle_adjacency(const NormalSystem& sys, int e);

}  // namespace spherecx
