#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spherecx/cover.hpp"

namespace spherecx {

/// Per vertex and slot, the label of the intersection circle carried by the
/// tree edge through that slot (-1 where there is no edge). Labels are
/// provenance only and never affect equality.
using CircleLabels = std::vector<std::array<int, 3>>;

/// A normal sphere: the minimal subtree of the cover tree crossed by the
/// sphere, with the side (0/1) of every end-direction leaving it. Stored in
/// canonical vertex order and colouring, so equal keys <=> isotopic spheres.
class Sphere {
 public:
  const Tree& tree() const { return tree_; }
  const CircleLabels& labels() const { return labels_; }
  const std::string& key() const { return key_; }
  /// Number of intersection circles with the whole scaffold.
  int weight() const { return static_cast<int>(tree_.size()) - 1; }
  /// Scaffold sphere index when this sphere is a parallel copy of one, else -1.
  int scaffold_index() const { return scaffold_index_; }
  int circles_over(const Scaffold& sc, int scaffold_sphere) const;

  bool operator==(const Sphere& o) const { return key_ == o.key_; }
  auto operator<=>(const Sphere& o) const { return key_ <=> o.key_; }

 private:
  friend struct SphereBuilder;
  Tree tree_;
  CircleLabels labels_;
  std::string key_;
  int scaffold_index_ = -1;
};

/// A boundary-parallel disk removed while restoring normal form.
struct PrunedDisk {
  int scaffold_sphere = -1;
  int label = -1;
  int side = 0;  // side of the input colouring containing the vanishing disk
};

struct Normalized {
  std::optional<Sphere> sphere;  // empty when the surface bounds a ball
  bool flipped = false;          // canonical colour = input colour ^ flipped
  std::vector<PrunedDisk> pruned;
};

/// Restores normal form (prunes monochromatic leaves), then canonicalizes.
Normalized normalize(const Scaffold& sc, Tree tree, CircleLabels labels = {});

/// The parallel copy of scaffold sphere e, pushed into the piece at its first end.
Sphere scaffold_sphere(const Scaffold& sc, int e);

/// No translate of the sphere crosses it.
bool is_embedded(const Sphere& s);

/// The two spheres can be made disjoint (no lifts cross). Equal spheres are compatible.
bool compatible(const Sphere& a, const Sphere& b);

/// Serialization helpers for the documented key layout.
std::string rooted_serialization(const Tree& t, int root, int flip);

}  // namespace spherecx
