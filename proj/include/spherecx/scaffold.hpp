#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

namespace spherecx {

/// One side of a scaffold sphere: a boundary slot (0..2) of a piece.
struct SlotRef {
  int piece = -1;
  int slot = -1;
  auto operator<=>(const SlotRef&) const = default;
};

struct ScaffoldEdge {
  int piece_a, slot_a, piece_b, slot_b;
};

/// The fixed maximal sphere system of M_n, stored as its dual trivalent
/// multigraph. Pieces are vertices, scaffold spheres are edges; loops are
/// allowed and every slot has a stable identity.
class Scaffold {
 public:
  Scaffold() = default;

  int rank() const { return n_; }
  int piece_count() const { return static_cast<int>(piece_names_.size()); }
  int sphere_count() const { return static_cast<int>(ends_.size()); }

  const std::string& piece_name(int p) const { return piece_names_[p]; }
  const std::string& sphere_name(int e) const { return sphere_names_[e]; }
  const std::string& id() const { return id_; }

  const std::array<SlotRef, 2>& ends(int sphere) const { return ends_[sphere]; }
  int sphere_at(int piece, int slot) const { return slot_sphere_[piece][slot]; }
  /// The slot on the far side of the scaffold sphere attached at (piece, slot).
  SlotRef across(int piece, int slot) const { return across_[piece][slot]; }
  bool is_loop(int sphere) const { return ends_[sphere][0].piece == ends_[sphere][1].piece; }

  int piece_index(const std::string& name) const;
  int sphere_index(const std::string& name) const;

  nlohmann::json to_json() const;
  static Scaffold from_json(const nlohmann::json& j);

  /// Edges as (piece, slot, piece, slot) in sphere order.
  std::vector<ScaffoldEdge> edges() const;

  bool operator==(const Scaffold& o) const;

 private:
  friend Scaffold build_scaffold(int, const std::vector<ScaffoldEdge>&,
                                 std::vector<std::string>, std::vector<std::string>);
  int n_ = 0;
  std::string id_;
  std::vector<std::string> piece_names_;
  std::vector<std::string> sphere_names_;
  std::vector<std::array<SlotRef, 2>> ends_;
  std::vector<std::array<int, 3>> slot_sphere_;
  std::vector<std::array<SlotRef, 3>> across_;
};

/// Validates and builds a scaffold. Throws Error{NotTrivalent, Disconnected,
/// WrongRank}. Names default to P1.. and s1.. when empty.
Scaffold build_scaffold(int n, const std::vector<ScaffoldEdge>& edges,
                        std::vector<std::string> piece_names = {},
                        std::vector<std::string> sphere_names = {});

/// All connected trivalent multigraphs with first Betti number n, one per
/// isomorphism class, in canonical order.
std::vector<Scaffold> enumerate_scaffolds(int n);

/// Canonical string of the underlying multigraph (slot labels forgotten).
std::string scaffold_graph_canonical_form(const Scaffold& sc);

Scaffold theta_scaffold();
Scaffold dumbbell_scaffold();

}  // namespace spherecx
