#include "spherecx/sphere.hpp"

#include <functional>

#include "spherecx/error.hpp"

namespace spherecx {

struct SphereBuilder {
  static Sphere make(Tree t, CircleLabels l, std::string key, int scaffold_index) {
    Sphere s;
    s.tree_ = std::move(t);
    s.labels_ = std::move(l);
    s.key_ = std::move(key);
    s.scaffold_index_ = scaffold_index;
    return s;
  }
};

int Sphere::circles_over(const Scaffold& sc, int e) const {
  int ends = 0;
  for (const auto& v : tree_)
    for (int s = 0; s < 3; ++s)
      if (v.nbr[s] >= 0 && sc.sphere_at(v.piece, s) == e) ++ends;
  return ends / 2;
}

std::string rooted_serialization(const Tree& t, int root, int flip) {
  std::string out;
  std::function<void(int, int)> rec = [&](int v, int parent) {
    out += '(';
    out += std::to_string(t[v].piece);
    for (int s = 0; s < 3; ++s) {
      int w = t[v].nbr[s];
      if (w < 0)
        out += static_cast<char>('0' + (t[v].col[s] ^ flip));
      else if (w == parent)
        out += '^';
      else
        rec(w, v);
    }
    out += ')';
  };
  rec(root, -1);
  return out;
}

Sphere scaffold_sphere(const Scaffold& sc, int e) {
  if (e < 0 || e >= sc.sphere_count()) throw Error(ErrorCode::IndexOutOfRange, "no such scaffold sphere");
  auto end = sc.ends(e)[0];
  TreeVertex v;
  v.piece = end.piece;
  v.col[end.slot] = 1;
  return SphereBuilder::make({v}, {{-1, -1, -1}}, "s" + std::to_string(e), e);
}

Normalized normalize(const Scaffold& sc, Tree tree, CircleLabels labels) {
  const int size = static_cast<int>(tree.size());
  if (labels.empty()) labels.assign(size, {-1, -1, -1});
  Normalized out;
  std::vector<bool> alive(size, true);
  int alive_count = size;

  // Push boundary-parallel disks through the scaffold until none is left.
  bool changed = true;
  while (changed && alive_count > 1) {
    changed = false;
    for (int v = 0; v < size && alive_count > 1; ++v) {
      if (!alive[v] || tree[v].degree() != 1) continue;
      int up = -1, c = -1;
      bool mono = true;
      for (int s = 0; s < 3; ++s) {
        if (tree[v].nbr[s] >= 0) {
          up = s;
        } else if (c < 0) {
          c = tree[v].col[s];
        } else if (c != tree[v].col[s]) {
          mono = false;
        }
      }
      if (!mono) continue;
      int u = tree[v].nbr[up];
      int back = sc.across(tree[v].piece, up).slot;
      tree[u].nbr[back] = -1;
      tree[u].col[back] = static_cast<std::uint8_t>(c);
      out.pruned.push_back({sc.sphere_at(tree[v].piece, up), labels[v][up], 1 - c});
      alive[v] = false;
      --alive_count;
      changed = true;
    }
  }

  std::vector<int> idx;
  for (int v = 0; v < size; ++v)
    if (alive[v]) idx.push_back(v);
  if (idx.size() == 1) {
    const auto& v = tree[idx[0]];
    int ones = v.col[0] + v.col[1] + v.col[2];
    if (ones == 0 || ones == 3) return out;  // bounds a ball
    int odd_colour = ones == 1 ? 1 : 0;
    int odd = 0;
    while (v.col[odd] != odd_colour) ++odd;
    int e = sc.sphere_at(v.piece, odd);
    auto first = sc.ends(e)[0];
    bool at_first = first.piece == v.piece && first.slot == odd;
    out.flipped = at_first ? odd_colour != 1 : odd_colour == 1;
    out.sphere = scaffold_sphere(sc, e);
    return out;
  }

  // Compact.
  std::vector<int> newid(size, -1);
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) newid[idx[i]] = i;
  Tree t;
  CircleLabels l;
  for (int v : idx) {
    auto tv = tree[v];
    for (auto& w : tv.nbr)
      if (w >= 0) w = newid[w];
    t.push_back(tv);
    l.push_back(labels[v]);
  }

  std::string best;
  int best_root = 0, best_flip = 0;
  for (int r = 0; r < static_cast<int>(t.size()); ++r) {
    for (int f = 0; f < 2; ++f) {
      auto s = rooted_serialization(t, r, f);
      if (best.empty() || s < best) {
        best = std::move(s);
        best_root = r;
        best_flip = f;
      }
    }
  }

  // Reorder vertices in the preorder used by the serialization.
  std::vector<int> order, pos(t.size(), -1);
  std::function<void(int, int)> pre = [&](int v, int parent) {
    pos[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (int s = 0; s < 3; ++s) {
      int w = t[v].nbr[s];
      if (w >= 0 && w != parent) pre(w, v);
    }
  };
  pre(best_root, -1);
  Tree ct;
  CircleLabels cl;
  for (int v : order) {
    auto tv = t[v];
    for (int s = 0; s < 3; ++s) {
      if (tv.nbr[s] >= 0)
        tv.nbr[s] = pos[tv.nbr[s]];
      else
        tv.col[s] ^= static_cast<std::uint8_t>(best_flip);
    }
    ct.push_back(tv);
    cl.push_back(l[v]);
  }
  out.flipped = best_flip != 0;
  out.sphere = SphereBuilder::make(std::move(ct), std::move(cl), "t" + best, -1);
  return out;
}

bool is_embedded(const Sphere& s) {
  const auto& t = s.tree();
  for (int x = 0; x < static_cast<int>(t.size()); ++x)
    for (int y = 0; y < static_cast<int>(t.size()); ++y) {
      if (x == y || t[x].piece != t[y].piece) continue;
      auto r = relate(t, x, t, y);
      if (r.crossing() || r.equal()) return false;
    }
  return true;
}

bool compatible(const Sphere& a, const Sphere& b) {
  if (a.key() == b.key()) return true;
  const auto& ta = a.tree();
  const auto& tb = b.tree();
  for (int x = 0; x < static_cast<int>(ta.size()); ++x)
    for (int y = 0; y < static_cast<int>(tb.size()); ++y)
      if (ta[x].piece == tb[y].piece && relate(ta, x, tb, y).crossing()) return false;
  return true;
}

}  // namespace spherecx
