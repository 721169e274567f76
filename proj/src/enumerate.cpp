#include "spherecx/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <omp.h>

namespace spherecx {

std::vector<Tree> subtrees_at(const Scaffold& sc, int piece, int edges) {
  std::vector<Tree> out;
  Tree t(1);
  t[0].piece = piece;
  std::vector<std::pair<int, int>> ext{{0, 0}, {0, 1}, {0, 2}};
  std::function<void(size_t, int)> grow = [&](size_t from, int left) {
    if (left == 0) {
      out.push_back(t);
      return;
    }
    for (size_t j = from; j < ext.size(); ++j) {
      auto [v, s] = ext[j];
      auto far = sc.across(t[v].piece, s);
      TreeVertex w;
      w.piece = far.piece;
      w.nbr[far.slot] = v;
      int id = static_cast<int>(t.size());
      t[v].nbr[s] = id;
      t.push_back(w);
      size_t old = ext.size();
      for (int k = 0; k < 3; ++k)
        if (k != far.slot) ext.emplace_back(id, k);
      grow(j + 1, left - 1);
      ext.resize(old);
      t.pop_back();
      t[v].nbr[s] = -1;
    }
  };
  grow(0, edges);
  return out;
}

namespace {

// Leaves must separate their two free directions (otherwise the disk would be
// pushed through the scaffold).
bool leaves_essential(const Tree& t) {
  for (const auto& v : t) {
    if (v.degree() != 1) continue;
    int c = -1;
    bool mono = true;
    for (int s = 0; s < 3; ++s) {
      if (v.nbr[s] >= 0) continue;
      if (c < 0) c = v.col[s];
      else if (c != v.col[s]) mono = false;
    }
    if (mono) return false;
  }
  return true;
}

std::vector<Tree> all_shapes(const Scaffold& sc, int W) {
  std::vector<Tree> shapes;
  for (int k = 1; k <= W; ++k)
    for (int p = 0; p < sc.piece_count(); ++p) {
      auto s = subtrees_at(sc, p, k);
      shapes.insert(shapes.end(), s.begin(), s.end());
    }
  return shapes;
}

// Candidate spheres of one tree shape: all colourings up to global swap.
void spheres_of_shape(const Scaffold& sc, Tree t, std::map<std::string, Sphere>& found) {
  std::vector<std::pair<int, int>> frontier;
  for (int v = 0; v < static_cast<int>(t.size()); ++v)
    for (int s = 0; s < 3; ++s)
      if (t[v].nbr[s] < 0) frontier.emplace_back(v, s);
  const unsigned F = static_cast<unsigned>(frontier.size());
  for (unsigned mask = 0; mask < (1u << (F - 1)); ++mask) {
    for (unsigned b = 0; b < F; ++b)
      t[frontier[b].first].col[frontier[b].second] = static_cast<std::uint8_t>(mask >> b & 1);
    if (!leaves_essential(t)) continue;
    auto n = normalize(sc, t);
    if (!n.sphere || !n.pruned.empty() || found.count(n.sphere->key())) continue;
    if (!is_embedded(*n.sphere)) continue;
    found.emplace(n.sphere->key(), *n.sphere);
  }
}

std::vector<Sphere> finish(const Scaffold& sc, std::map<std::string, Sphere>& found) {
  for (int e = 0; e < sc.sphere_count(); ++e) {
    auto s = scaffold_sphere(sc, e);
    found.emplace(s.key(), s);
  }
  std::vector<Sphere> out;
  for (auto& [k, s] : found) out.push_back(std::move(s));
  return out;
}

std::vector<NormalSystem> systems_from(ScaffoldPtr sc, const std::vector<Sphere>& spheres, int W,
                                       bool parallel) {
  const int m = static_cast<int>(spheres.size());
  std::vector<std::vector<char>> ok(m, std::vector<char>(m, 0));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) ok[a][b] = compatible(spheres[a], spheres[b]) ? 1 : 0;
  const int cap = 3 * sc->rank() - 3;
  std::vector<NormalSystem> out;
  std::vector<int> chosen;
  std::function<void(int, int)> rec = [&](int from, int weight) {
    if (!chosen.empty()) {
      std::vector<Sphere> s;
      for (int i : chosen) s.push_back(spheres[i]);
      out.push_back(make_system(sc, std::move(s)));
    }
    if (static_cast<int>(chosen.size()) == cap) return;
    for (int i = from; i < m; ++i) {
      if (weight + spheres[i].weight() > W) continue;
      bool fits = true;
      for (int j : chosen) fits = fits && ok[j][i];
      if (!fits) continue;
      chosen.push_back(i);
      rec(i + 1, weight + spheres[i].weight());
      chosen.pop_back();
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end(),
            [](const NormalSystem& a, const NormalSystem& b) { return a.signature() < b.signature(); });
  return out;
}

}  // namespace

std::vector<Sphere> enumerate_spheres_serial(const Scaffold& sc, int W) {
  std::map<std::string, Sphere> found;
  for (auto& t : all_shapes(sc, W)) spheres_of_shape(sc, t, found);
  return finish(sc, found);
}

std::vector<Sphere> enumerate_spheres(const Scaffold& sc, int W) {
  auto shapes = all_shapes(sc, W);
  std::map<std::string, Sphere> found;
#pragma omp parallel
  {
    std::map<std::string, Sphere> local;
#pragma omp for schedule(dynamic, 8) nowait
    for (size_t i = 0; i < shapes.size(); ++i) spheres_of_shape(sc, shapes[i], local);
#pragma omp critical
    found.merge(local);
  }
  return finish(sc, found);
}

std::vector<NormalSystem> enumerate_systems(ScaffoldPtr sc, int W) {
  return systems_from(sc, enumerate_spheres(*sc, W), W, true);
}

std::vector<NormalSystem> enumerate_systems_serial(ScaffoldPtr sc, int W) {
  return systems_from(sc, enumerate_spheres_serial(*sc, W), W, false);
}

}  // namespace spherecx
