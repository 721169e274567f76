#include "spherecx/complement.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace spherecx {

namespace {

std::vector<Lift> cut_lifts(const NormalSystem& sys, const std::vector<bool>& in_cut, int piece) {
  std::vector<Lift> out;
  for (auto l : lifts_at(sys, piece))
    if (in_cut[l.sphere]) out.push_back(l);
  return out;
}

// Sign vector of the face of slot t next to circle i on side x (i < 0: the
// slot carries no circle).
std::vector<int> face_signs(const NormalSystem& sys, const std::vector<Lift>& lifts, int t, int i, int x) {
  std::vector<int> signs(lifts.size());
  for (size_t k = 0; k < lifts.size(); ++k) {
    const auto& v = sys.sphere(lifts[k].sphere).tree()[lifts[k].vertex];
    if (v.nbr[t] < 0)
      signs[k] = v.col[t];
    else if (static_cast<int>(k) == i)
      signs[k] = x;
    else
      signs[k] = side_containing(sys, lifts[i], lifts[k]);
  }
  return signs;
}

}  // namespace

int RegionGraph::region_with(int piece, const std::vector<int>& signs) const {
  for (int r = 0; r < static_cast<int>(regions.size()); ++r)
    if (regions[r].piece == piece && regions[r].signs == signs) return r;
  return -1;
}

RegionGraph region_graph(const NormalSystem& sys, const std::vector<int>& cut,
                         const std::vector<int>& marked) {
  const auto& sc = sys.scaffold();
  std::vector<bool> in_cut(sys.size(), false);
  for (int c : cut) in_cut[c] = true;
  RegionGraph g;
  std::vector<std::vector<Lift>> lifts(sc.piece_count());
  // faces[p][t]: list of (face representative circle, side, region)
  std::vector<std::array<std::vector<std::array<int, 3>>, 3>> faces(sc.piece_count());

  auto region_id = [&](int p, const std::vector<int>& signs) {
    int r = g.region_with(p, signs);
    if (r >= 0) return r;
    g.regions.push_back({p, signs});
    return static_cast<int>(g.regions.size()) - 1;
  };

  for (int p = 0; p < sc.piece_count(); ++p) {
    lifts[p] = cut_lifts(sys, in_cut, p);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> crossing;
      for (int k = 0; k < static_cast<int>(lifts[p].size()); ++k)
        if (sys.sphere(lifts[p][k].sphere).tree()[lifts[p][k].vertex].nbr[t] >= 0) crossing.push_back(k);
      if (crossing.empty()) {
        faces[p][t].push_back({-1, 0, region_id(p, face_signs(sys, lifts[p], t, -1, 0))});
        continue;
      }
      std::set<std::vector<int>> seen;
      for (int i : crossing)
        for (int x = 0; x < 2; ++x) {
          auto s = face_signs(sys, lifts[p], t, i, x);
          if (!seen.insert(s).second) continue;
          faces[p][t].push_back({i, x, region_id(p, s)});
        }
    }
  }

  // A piece whose three boundary spheres all have parallel copies pushed into
  // it has a core region that meets no scaffold face.
  for (int p = 0; p < sc.piece_count(); ++p) {
    std::array<bool, 3> walled{false, false, false};
    for (auto l : lifts[p]) {
      const auto& s = sys.sphere(l.sphere);
      if (s.scaffold_index() >= 0) walled[sc.ends(s.scaffold_index())[0].slot] = true;
    }
    if (!(walled[0] && walled[1] && walled[2])) continue;
    std::vector<int> signs;
    for (auto l : lifts[p]) {
      const auto& v = sys.sphere(l.sphere).tree()[l.vertex];
      int odd = v.col[0] == v.col[1] ? 2 : v.col[0] == v.col[2] ? 1 : 0;
      signs.push_back(v.col[(odd + 1) % 3]);
    }
    region_id(p, signs);
  }

  for (int e = 0; e < sc.sphere_count(); ++e) {
    auto a = sc.ends(e)[0], b = sc.ends(e)[1];
    for (const auto& f : faces[a.piece][a.slot]) {
      int rb;
      if (f[0] < 0) {
        rb = faces[b.piece][b.slot].front()[2];
      } else {
        Lift la = lifts[a.piece][f[0]];
        Lift lb{la.sphere, sys.sphere(la.sphere).tree()[la.vertex].nbr[a.slot]};
        auto it = std::find(lifts[b.piece].begin(), lifts[b.piece].end(), lb);
        int ib = static_cast<int>(it - lifts[b.piece].begin());
        rb = g.region_with(b.piece, face_signs(sys, lifts[b.piece], b.slot, ib, f[1]));
        if (rb < 0) throw Error(ErrorCode::NestingInconsistent, "face has no partner across " + sc.sphere_name(e));
      }
      g.gluings.push_back({f[2], rb, e});
    }
  }

  const int nr = static_cast<int>(g.regions.size());
  std::vector<int> uf(nr);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  for (const auto& gl : g.gluings) uf[find(gl[0])] = find(gl[1]);
  std::map<int, int> comp_index;
  g.component_of.resize(nr);
  for (int r = 0; r < nr; ++r) {
    int root = find(r);
    if (!comp_index.count(root)) {
      comp_index[root] = static_cast<int>(g.components.size());
      g.components.push_back({});
    }
    g.component_of[r] = comp_index[root];
    g.components[g.component_of[r]].regions++;
  }
  for (auto& c : g.components) c.rank = 1 - c.regions;
  for (const auto& gl : g.gluings) g.components[g.component_of[gl[0]]].rank++;

  for (int c : cut) {
    g.copies += sys.multiplicity(c);
    for (int k = 1; k < sys.multiplicity(c); ++k) g.components.push_back({0, 0, false, true});
  }

  for (int m : marked) {
    const auto& t = sys.sphere(m).tree();
    int p = t[0].piece;
    std::vector<int> signs;
    for (auto l : lifts[p])
      signs.push_back(relate(t, 0, sys.sphere(l.sphere).tree(), l.vertex).side_of_second_containing_first());
    int r = g.region_with(p, signs);
    if (r < 0) throw Error(ErrorCode::NestingInconsistent, "marked sphere lies in no region");
    g.components[g.component_of[r]].marked = true;
  }
  return g;
}

Complexity complexity(const NormalSystem& sys, const std::vector<int>& s1) {
  std::set<int> one(s1.begin(), s1.end());
  if (one.empty() || static_cast<int>(one.size()) >= sys.size())
    throw Error(ErrorCode::NotProperSubsystem, "S1 must be a proper nonempty subsystem");
  std::vector<int> cut;
  for (int i = 0; i < sys.size(); ++i)
    if (!one.count(i)) cut.push_back(i);
  Complexity c;
  c.graph = region_graph(sys, cut, {one.begin(), one.end()});
  for (const auto& comp : c.graph.components)
    if (comp.marked) {
      c.C1++;
      c.C2 += comp.rank;
    }
  c.C = c.C1 + sys.scaffold().rank() - c.C2;
  return c;
}

static std::vector<int> all_indices(const NormalSystem& sys) {
  std::vector<int> v(sys.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool is_in_hat_subcomplex(const NormalSystem& sys) {
  auto g = region_graph(sys, all_indices(sys));
  return g.components.size() == 1 && g.components[0].rank > 0;
}

std::vector<int> tau_ranks(const NormalSystem& sys) {
  auto g = region_graph(sys, all_indices(sys));
  std::vector<int> r;
  for (const auto& c : g.components) r.push_back(c.rank);
  std::sort(r.begin(), r.end());
  return r;
}

const char* to_string(StepCase c) {
  switch (c) {
    case StepCase::SurgeryInS1: return "surgery-in-S1";
    case StepCase::Y0WithoutS1: return "Y0-without-S1";
    case StepCase::SplitWithSimplyConnectedSide: return "split-with-simply-connected-side";
    case StepCase::StrictIncrease: return "strict-increase";
  }
  return "?";
}

PhiReport phi_map(const PathEntry& before, const PathEntry& after, const std::vector<int>& s1) {
  if (!after.step) throw Error(ErrorCode::NotAdjacent, "entry is not reached by a surgery step");
  const auto& step = *after.step;
  const auto& S = before.system;
  const auto& sc = S.scaffold();
  PhiReport rep;
  std::set<int> one(s1.begin(), s1.end());
  bool parent_in_s1 = one.count(step.parent_index) > 0;

  std::set<std::string> k1, k2;
  for (int i = 0; i < S.size(); ++i) {
    auto& dst = one.count(i) ? k1 : k2;
    if (i == step.parent_index)
      dst.insert(step.child_keys.begin(), step.child_keys.end());
    else
      dst.insert(S.sphere(i).key());
  }
  for (const auto& k : k1)
    if (k2.count(k)) rep.common_child = true;
  for (const auto& k : k1) rep.s1_after.push_back(after.system.index_of(k));
  std::sort(rep.s1_after.begin(), rep.s1_after.end());

  rep.C_before = complexity(S, s1).C;
  if (rep.common_child) return rep;
  rep.C_after = complexity(after.system, rep.s1_after).C;

  if (parent_in_s1) {
    rep.tag = StepCase::SurgeryInS1;
    return rep;
  }

  // Locate the surgery disk among the regions of the complement of S2.
  std::vector<int> s2;
  std::vector<bool> in2(S.size(), false);
  for (int i = 0; i < S.size(); ++i)
    if (!one.count(i)) {
      s2.push_back(i);
      in2[i] = true;
    }
  auto g = region_graph(S, s2, s1);
  int e = step.choice.scaffold_sphere;
  Lift disk_lift = circles_on(S, e)[step.choice.circle];
  int p0 = sc.ends(e)[0].piece;
  std::vector<int> signs;
  for (auto l : lifts_at(S, p0)) {
    if (!in2[l.sphere]) continue;
    signs.push_back(l == disk_lift ? step.choice.side : side_containing(S, disk_lift, l));
  }
  int r = g.region_with(p0, signs);
  if (r < 0) throw Error(ErrorCode::NestingInconsistent, "surgery disk lies in no region");
  rep.y0 = g.component_of[r];
  rep.y0_marked = g.components[rep.y0].marked;
  if (!rep.y0_marked) {
    rep.tag = StepCase::Y0WithoutS1;
    return rep;
  }

  // Complement of S2 after the step, parallel copies retained.
  std::vector<Sphere> spheres;
  std::vector<int> mult;
  for (int i = 0; i < S.size(); ++i) {
    if (i == step.parent_index) continue;
    spheres.push_back(S.sphere(i));
    mult.push_back(S.multiplicity(i));
  }
  for (const auto& k : step.child_keys) {
    int j = after.system.index_of(k);
    spheres.push_back(after.system.sphere(j));
    mult.push_back(S.multiplicity(step.parent_index));
  }
  auto tilde = make_system(S.scaffold_ptr(), spheres, mult, true);
  std::vector<int> cut, marked;
  for (int i = 0; i < tilde.size(); ++i)
    (k1.count(tilde.sphere(i).key()) ? marked : cut).push_back(i);
  auto g2 = region_graph(tilde, cut, marked);

  std::vector<bool> used(g2.components.size(), false);
  for (int c = 0; c < static_cast<int>(g.components.size()); ++c) {
    if (c == rep.y0) continue;
    const auto& want = g.components[c];
    int found = -1;
    for (int d = 0; d < static_cast<int>(g2.components.size()) && found < 0; ++d)
      if (!used[d] && g2.components[d].rank == want.rank && g2.components[d].marked == want.marked) found = d;
    if (found < 0) {
      rep.consistent = false;
      continue;
    }
    used[found] = true;
    rep.matched.emplace_back(c, found);
  }
  for (int d = 0; d < static_cast<int>(g2.components.size()); ++d)
    if (!used[d]) rep.preimage.emplace_back(g2.components[d].rank, g2.components[d].marked);
  bool simple_side = false;
  for (auto [rank, mk] : rep.preimage)
    if (rank == 0 && !mk) simple_side = true;
  rep.tag = rep.preimage.size() == 2 && simple_side ? StepCase::SplitWithSimplyConnectedSide
                                                    : StepCase::StrictIncrease;
  return rep;
}

nlohmann::json complement_report(const NormalSystem& sys, const std::vector<int>& s1) {
  auto c = complexity(sys, s1);
  auto comps = nlohmann::json::array();
  for (const auto& comp : c.graph.components)
    comps.push_back({{"rank", comp.rank}, {"hasS1", comp.marked}, {"pseudo", comp.pseudo}, {"regions", comp.regions}});
  return {{"components", comps}, {"C1", c.C1}, {"C2", c.C2}, {"C", c.C}};
}

}  // namespace spherecx
