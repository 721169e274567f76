#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "spherecx/scaffold.hpp"

namespace spherecx {

/// A vertex of a finite subtree of the universal-cover tree of the scaffold
/// graph. nbr[t] is the neighbouring vertex across slot t (or -1); col[t] is
/// the colour of the end-direction through slot t when nbr[t] == -1.
struct TreeVertex {
  int piece = -1;
  std::array<int, 3> nbr{-1, -1, -1};
  std::array<std::uint8_t, 3> col{0, 0, 0};

  int degree() const { return (nbr[0] >= 0) + (nbr[1] >= 0) + (nbr[2] >= 0); }
  bool operator==(const TreeVertex&) const = default;
};

using Tree = std::vector<TreeVertex>;

/// How two end-partitions sit relative to each other. Bit (2a+b) of atoms is
/// set when some end lies on side a of the first and side b of the second.
struct Relation {
  std::uint8_t atoms = 0;

  bool has(int a, int b) const { return atoms >> (2 * a + b) & 1; }
  bool crossing() const { return atoms == 0xF; }
  bool equal() const { return atoms == 0b1001 || atoms == 0b0110; }
  /// Side a of the first partition is contained in side b of the second.
  bool subset(int a, int b) const { return !has(a, 1 - b); }
  /// Side of the second partition containing the first surface, or -1.
  int side_of_second_containing_first() const;
};

/// Places vertex xa of a and vertex xb of b on the same node of the cover
/// tree (their pieces must agree) and compares the two partitions.
Relation relate(const Tree& a, int xa, const Tree& b, int xb);

/// Tree path keys from a root: one char per slot taken.
std::vector<std::string> node_keys(const Tree& t, int root);

/// Checks that the tree is consistent with the scaffold gluing.
bool tree_consistent(const Scaffold& sc, const Tree& t);

}  // namespace spherecx
