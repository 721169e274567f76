#pragma once

#include <array>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/normal_system.hpp"

namespace spherecx {

/// A surface S_{g,s} cut by a maximal arc system into hexagons. Hexagon
/// sides are numbered 0..5 counterclockwise; even sides lie on the boundary,
/// side 2k+1 lies on arc `arc[h][k]`. Arc sides are glued orientation-reversingly.
struct Surface {
  int genus = 0, boundaries = 0;
  int hexagons = 0;
  std::vector<std::array<int, 3>> arc;                    // per hexagon, per odd side
  std::vector<std::array<std::pair<int, int>, 2>> sides;  // per arc: (hexagon, odd side) x2
  ScaffoldPtr scaffold;                                   // the double

  int arcs() const { return static_cast<int>(sides.size()); }
  /// The other copy of odd side x of hexagon h.
  std::pair<int, int> partner(int h, int x) const;
};

/// Presets (0,3), (0,4), (1,1), (1,2). Throws UnsupportedPreset.
const Surface& surface_preset(int g, int s);

/// One normal segment of an arc in a hexagon, from side `in` to side `out`.
struct Segment {
  int hex = 0, in = 0, out = 0;
  auto operator<=>(const Segment&) const = default;
};
/// A normal arc: consecutive segments glued across arc sides; the first
/// entry and last exit are boundary sides. A one-segment walk joining two
/// distinct boundary sides is the maximal-system arc between them.
using Walk = std::vector<Segment>;

/// Canonical orientation, or nullopt when the walk is not a normal essential arc.
std::optional<Walk> canonical_arc(const Surface& S, Walk w);
/// Restores normal form by sliding endpoints around corners; nullopt when the
/// arc becomes inessential.
std::optional<Walk> normalize_arc(const Surface& S, Walk w);
/// The maximal-system arc `a` as a walk.
Walk max_arc(const Surface& S, int a);
/// Index of the maximal-system arc a one-segment walk is parallel to, else -1.
int max_arc_index(const Surface& S, const Walk& w);

/// Minimal intersection number of two normal arcs (taut position); self
/// crossings when a == b.
int crossings(const Surface& S, const Walk& a, const Walk& b);
int self_crossings(const Surface& S, const Walk& a);
/// Number of crossings with the maximal-system arc e.
int crossings_with_max_arc(const Surface& S, const Walk& w, int e);

struct ArcSystem {
  const Surface* surface = nullptr;
  std::vector<Walk> arcs;  // canonical, sorted, distinct

  std::string key() const;
  nlohmann::json to_json() const;  // per-hexagon normal coordinates + arcs
};
/// Sorts, dedups and checks disjointness/essentiality. nullopt if invalid.
std::optional<ArcSystem> make_arc_system(const Surface& S, std::vector<Walk> arcs);
ArcSystem max_arc_subsystem(const Surface& S, const std::set<int>& arcs);
int crossings_with(const ArcSystem& a, const std::set<int>& target);

NormalSystem double_to_spheres(const ArcSystem& a);
Sphere double_arc(const Surface& S, const Walk& w);

/// An extreme crossing point on a target arc and the end of that arc the
/// surgery segment runs to.
struct ArcDisk {
  int target = -1;
  int arc = -1, segment = -1;  // segment of the (possibly reversed) arc leaving through the target
  bool reversed = false;
  int corner = 0;              // boundary side of that hexagon at the chosen end
  auto operator<=>(const ArcDisk&) const = default;
};
std::vector<ArcDisk> arc_innermost(const ArcSystem& a, const std::set<int>& target);
ArcSystem arc_surgery_step(const ArcSystem& a, const ArcDisk& d);

/// Both engines pick the candidate whose doubled result has the least
/// signature, so arc and sphere paths can be compared entry by entry.
std::vector<ArcSystem> arc_surgery_path(const ArcSystem& a, const std::set<int>& target);

struct DoublingReport {
  bool ok = true;
  int arc_length = 0, sphere_length = 0;
  int first_mismatch = -1;
  bool successors_match = true;
  bool validates = true;
  bool crossings_match = true;
  std::string why;
};
DoublingReport check_doubling_commutes(const ArcSystem& a, const std::set<int>& target);

/// Every essential simple arc with at most max_crossings crossings, canonical and sorted.
std::vector<Walk> all_arcs(const Surface& S, int max_crossings);

/// A random essential simple arc with at most max_crossings crossings.
std::optional<Walk> random_arc(const Surface& S, std::mt19937_64& rng, int max_crossings);
/// A random arc system built greedily from random arcs and maximal-system arcs.
ArcSystem random_arc_system(const Surface& S, std::mt19937_64& rng, int max_crossings, int size);

}  // namespace spherecx
