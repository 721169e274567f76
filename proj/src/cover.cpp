#include "spherecx/cover.hpp"

#include <queue>

namespace spherecx {

int Relation::side_of_second_containing_first() const {
  // The first surface sits in side c of the second when one of its sides is
  // contained there. Equal or crossing partitions have no answer.
  if (equal() || crossing()) return -1;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      if (subset(a, c)) return c;
  return -1;
}

std::vector<std::string> node_keys(const Tree& t, int root) {
  std::vector<std::string> key(t.size());
  std::vector<bool> seen(t.size(), false);
  std::vector<int> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int s = 0; s < 3; ++s) {
      int w = t[v].nbr[s];
      if (w < 0 || seen[w]) continue;
      seen[w] = true;
      key[w] = key[v] + static_cast<char>('0' + s);
      stack.push_back(w);
    }
  }
  return key;
}

Relation relate(const Tree& a, int xa, const Tree& b, int xb) {
  auto ka = node_keys(a, xa);
  auto kb = node_keys(b, xb);
  std::unordered_map<std::string, int> in_a, in_b;
  for (int v = 0; v < static_cast<int>(a.size()); ++v) in_a[ka[v]] = v;
  for (int v = 0; v < static_cast<int>(b.size()); ++v) in_b[kb[v]] = v;

  // Colour of the first partition on b-vertices outside a (inherited from the
  // frontier direction of a through which they are reached), and vice versa.
  auto inherit = [](const Tree& x, const std::vector<std::string>& kx,
                    const Tree& y, const std::vector<std::string>& ky, int root_y) {
    // Returns for every vertex of y: -1 if the node also lies in x, otherwise
    // the x-colour it inherits.
    std::unordered_map<std::string, int> in_x;
    for (int v = 0; v < static_cast<int>(x.size()); ++v) in_x[kx[v]] = v;
    std::vector<int> colour(y.size(), -2);
    std::queue<int> q;
    colour[root_y] = -1;
    q.push(root_y);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      auto it = in_x.find(ky[v]);
      for (int s = 0; s < 3; ++s) {
        int w = y[v].nbr[s];
        if (w < 0 || colour[w] != -2) continue;
        if (in_x.count(ky[w])) {
          colour[w] = -1;
        } else if (it != in_x.end()) {
          colour[w] = x[it->second].col[s];
        } else {
          colour[w] = colour[v];
        }
        q.push(w);
      }
    }
    return colour;
  };
  auto col_a_on_b = inherit(a, ka, b, kb, xb);
  auto col_b_on_a = inherit(b, kb, a, ka, xa);

  Relation r;
  auto add = [&](int ca, int cb) { r.atoms |= static_cast<std::uint8_t>(1u << (2 * ca + cb)); };
  for (int v = 0; v < static_cast<int>(a.size()); ++v) {
    auto it = in_b.find(ka[v]);
    for (int s = 0; s < 3; ++s) {
      if (a[v].nbr[s] >= 0) continue;
      if (it != in_b.end()) {
        const auto& bv = b[it->second];
        if (bv.nbr[s] >= 0) continue;  // interior of the hull
        add(a[v].col[s], bv.col[s]);
      } else {
        add(a[v].col[s], col_b_on_a[v]);
      }
    }
  }
  for (int v = 0; v < static_cast<int>(b.size()); ++v) {
    if (in_a.count(kb[v])) continue;
    for (int s = 0; s < 3; ++s) {
      if (b[v].nbr[s] >= 0) continue;
      add(col_a_on_b[v], b[v].col[s]);
    }
  }
  return r;
}

bool tree_consistent(const Scaffold& sc, const Tree& t) {
  for (int v = 0; v < static_cast<int>(t.size()); ++v) {
    for (int s = 0; s < 3; ++s) {
      int w = t[v].nbr[s];
      if (w < 0) continue;
      if (w >= static_cast<int>(t.size())) return false;
      auto far = sc.across(t[v].piece, s);
      if (t[w].piece != far.piece || t[w].nbr[far.slot] != v) return false;
    }
  }
  return true;
}

}  // namespace spherecx
