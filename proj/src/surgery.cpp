#include "spherecx/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>

namespace spherecx {

PathEntry initial_entry(const NormalSystem& s) {
  PathEntry e;
  std::vector<Sphere> spheres;
  std::vector<int> mult;
  int next = 0;
  for (int i = 0; i < s.size(); ++i) {
    const auto& t = s.sphere(i).tree();
    const auto& sc = s.scaffold();
    CircleLabels labels(t.size(), {-1, -1, -1});
    for (int v = 0; v < static_cast<int>(t.size()); ++v)
      for (int sl = 0; sl < 3; ++sl) {
        int w = t[v].nbr[sl];
        if (w < 0 || labels[v][sl] >= 0) continue;
        labels[v][sl] = next;
        labels[w][sc.across(t[v].piece, sl).slot] = next;
        ++next;
      }
    auto n = normalize(sc, t, labels);
    spheres.push_back(*n.sphere);
    mult.push_back(s.multiplicity(i));
    e.prov.push_back({{i}, 0});
  }
  e.system = make_system(s.scaffold_ptr(), std::move(spheres), std::move(mult), true);
  return e;
}

std::vector<DiskChoice> innermost_candidates(const NormalSystem& sys, const std::set<int>& target) {
  std::vector<DiskChoice> out;
  for (int e : target) {
    auto circ = circles_on(sys, e);
    const int m = static_cast<int>(circ.size());
    for (int i = 0; i < m; ++i) {
      bool occupied[2] = {false, false};
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        int side = side_containing(sys, circ[j], circ[i]);
        if (side >= 0) occupied[side] = true;
      }
      for (int x = 0; x < 2; ++x)
        if (!occupied[x]) out.push_back({e, i, x});
    }
  }
  return out;
}

namespace {

// The part of the tree on the root's side of the edge leaving root through
// cut_slot, capped so that the far side takes colour `far`.
std::pair<Tree, CircleLabels> half(const Tree& t, const CircleLabels& l, int root, int cut_slot,
                                   int far) {
  std::vector<int> id(t.size(), -1);
  std::vector<int> order{root};
  id[root] = 0;
  for (size_t k = 0; k < order.size(); ++k) {
    int v = order[k];
    for (int s = 0; s < 3; ++s) {
      int w = t[v].nbr[s];
      if (w < 0 || id[w] >= 0 || (v == root && s == cut_slot)) continue;
      id[w] = static_cast<int>(order.size());
      order.push_back(w);
    }
  }
  Tree h;
  CircleLabels hl;
  for (int v : order) {
    auto tv = t[v];
    auto lv = l[v];
    for (int s = 0; s < 3; ++s)
      if (tv.nbr[s] >= 0) tv.nbr[s] = id[tv.nbr[s]];
    if (v == root) {
      tv.nbr[cut_slot] = -1;
      tv.col[cut_slot] = static_cast<std::uint8_t>(far);
      lv[cut_slot] = -1;
    }
    h.push_back(tv);
    hl.push_back(lv);
  }
  return {h, hl};
}

}  // namespace

PathEntry single_surgery_step(const PathEntry& from, const std::set<int>& target,
                              const DiskChoice& choice, PathMode mode) {
  const auto& sys = from.system;
  const auto& sc = sys.scaffold();
  auto cands = innermost_candidates(sys, target);
  if (std::find(cands.begin(), cands.end(), choice) == cands.end())
    throw Error(ErrorCode::NotInnermost, "chosen disk contains other intersection circles");
  auto circ = circles_on(sys, choice.scaffold_sphere);
  Lift l = circ[choice.circle];
  const Sphere& s = sys.sphere(l.sphere);
  const Provenance& pp = from.prov[l.sphere];
  const auto& t = s.tree();
  int slot0 = sc.ends(choice.scaffold_sphere)[0].slot;
  int x = l.vertex;
  int y = t[x].nbr[slot0];
  int slot1 = sc.across(t[x].piece, slot0).slot;
  int a = choice.side;

  SurgeryStep step;
  step.choice = choice;
  step.parent_key = s.key();
  step.parent_index = l.sphere;
  step.surgery_disk = {choice.scaffold_sphere, s.labels()[x][slot0], a ^ pp.flip};

  struct Item {
    Sphere sphere;
    int mult;
    Provenance prov;
    bool child;
  };
  std::vector<Item> items;
  for (int j = 0; j < sys.size(); ++j)
    if (j != l.sphere) items.push_back({sys.sphere(j), sys.multiplicity(j), from.prov[j], false});
  for (auto [root, cut] : {std::pair{x, slot0}, std::pair{y, slot1}}) {
    auto [h, hl] = half(t, s.labels(), root, cut, 1 - a);
    auto n = normalize(sc, h, hl);
    for (const auto& pr : n.pruned)
      step.vanishing.push_back({pr.scaffold_sphere, pr.label, pr.side ^ pp.flip});
    if (!n.sphere) continue;
    step.child_keys.push_back(n.sphere->key());
    items.push_back({*n.sphere, sys.multiplicity(l.sphere),
                     {pp.ancestors, pp.flip ^ static_cast<int>(n.flipped)}, true});
  }

  std::stable_sort(items.begin(), items.end(),
                   [](const Item& p, const Item& q) { return p.sphere.key() < q.sphere.key(); });
  std::vector<Sphere> spheres;
  std::vector<int> mult;
  PathEntry out;
  for (auto& it : items) {
    if (!spheres.empty() && spheres.back().key() == it.sphere.key()) {
      if (mode == PathMode::KeepCopies) mult.back() += it.mult;
      out.prov.back().ancestors.insert(it.prov.ancestors.begin(), it.prov.ancestors.end());
      if (it.child) step.merged.push_back(it.sphere.key());
      continue;
    }
    spheres.push_back(it.sphere);
    mult.push_back(mode == PathMode::KeepCopies ? it.mult : 1);
    out.prov.push_back(it.prov);
  }
  out.system = make_system(sys.scaffold_ptr(), std::move(spheres), std::move(mult), true);
  out.step = std::move(step);
  return out;
}

std::vector<PathEntry> all_single_steps(const PathEntry& from, const std::set<int>& target,
                                        PathMode mode) {
  std::vector<PathEntry> out;
  for (const auto& c : innermost_candidates(from.system, target))
    out.push_back(single_surgery_step(from, target, c, mode));
  return out;
}

PathEntry terminal_entry(const PathEntry& prev, const std::set<int>& target) {
  PathEntry last;
  last.system = scaffold_subsystem(prev.system.scaffold_ptr(), target);
  last.terminal = true;
  for (const auto& sp : last.system.spheres()) {
    int k = prev.system.index_of(sp.key());
    last.prov.push_back(k >= 0 ? prev.prov[k] : Provenance{});
  }
  return last;
}

SurgeryPath surgery_path(const NormalSystem& s, const std::set<int>& target, Policy policy,
                         PathMode mode) {
  if (target.empty()) throw Error(ErrorCode::EmptySubsystem, "surgery target is empty");
  SurgeryPath p;
  p.target = target;
  p.mode = mode;
  p.policy = policy;
  auto start = mode == PathMode::Identify ? s.identified() : s;
  p.entries.push_back(initial_entry(start));
  std::mt19937_64 rng(policy.seed);
  while (intersection_number(p.entries.back().system, target) > 0) {
    auto cands = innermost_candidates(p.entries.back().system, target);
    size_t pick = 0;
    if (policy.kind == Policy::Seeded)
      pick = std::uniform_int_distribution<size_t>(0, cands.size() - 1)(rng);
    if (policy.kind == Policy::MinResult) {
      std::optional<PathEntry> best;
      for (const auto& c : cands) {
        auto e = single_surgery_step(p.entries.back(), target, c, mode);
        if (!best || e.system.signature() < best->system.signature()) best = std::move(e);
      }
      p.entries.push_back(std::move(*best));
      continue;
    }
    p.entries.push_back(single_surgery_step(p.entries.back(), target, cands[pick], mode));
  }
  p.entries.push_back(terminal_entry(p.entries.back(), target));
  return p;
}

std::vector<int> descendant_indices(const SurgeryPath& p, const std::set<int>& sub, int t) {
  if (t < 0 || t > p.K()) throw Error(ErrorCode::IndexOutOfRange, "path index out of range");
  const auto& e = p.entries[t];
  std::vector<int> out;
  for (int i = 0; i < e.system.size(); ++i) {
    if (e.terminal && !sub.empty()) {
      out.push_back(i);
      continue;
    }
    for (int a : e.prov[i].ancestors)
      if (sub.count(a)) {
        out.push_back(i);
        break;
      }
  }
  return out;
}

NormalSystem descendants_at(const SurgeryPath& p, const std::set<int>& sub, int t) {
  return subsystem(p.at(t), descendant_indices(p, sub, t));
}

std::set<int> start_indices(const SurgeryPath& p, const NormalSystem& sub) {
  std::set<int> out;
  for (const auto& s : sub.spheres()) {
    int k = p.start().index_of(s.key());
    if (k >= 0) out.insert(k);
  }
  return out;
}

FellowTravel fellow_travels_after(const SurgeryPath& a, const SurgeryPath& b, int t) {
  if (a.target != b.target) throw Error(ErrorCode::BadAlignment, "paths have different targets");
  FellowTravel f;
  f.offset = b.K() - a.K();
  if (t < 0 || t > a.K() || t + f.offset < 0 || t + f.offset > b.K())
    throw Error(ErrorCode::BadAlignment, "start time outside the aligned range");
  f.ok = true;
  for (int k = t; k <= a.K(); ++k) {
    const auto& sa = a.at(k);
    const auto& sb = b.at(k + f.offset);
    std::string common;
    for (const auto& s : sa.spheres())
      if (contains_sphere(sb, s.key())) {
        common = s.key();
        break;
      }
    if (common.empty()) {
      f.ok = false;
      f.first_failure = k;
      break;
    }
    f.shared.emplace_back(k, common);
  }
  return f;
}

std::optional<int> common_descendant_time(const SurgeryPath& p, const std::set<int>& s1,
                                          const std::set<int>& s2) {
  for (int t = 0; t <= p.K(); ++t) {
    if (p.entries[t].terminal) break;
    auto d1 = descendant_indices(p, s1, t);
    auto d2 = descendant_indices(p, s2, t);
    for (int i : d1)
      if (std::find(d2.begin(), d2.end(), i) != d2.end()) return t;
  }
  return std::nullopt;
}

SurgeryPath insert_waits(const SurgeryPath& p, const std::vector<int>& positions) {
  SurgeryPath out = p;
  out.entries.clear();
  for (int i = 0; i <= p.K(); ++i) {
    out.entries.push_back(p.entries[i]);
    int reps = static_cast<int>(std::count(positions.begin(), positions.end(), i));
    for (int r = 0; r < reps; ++r) {
      PathEntry w = p.entries[i];
      w.step.reset();
      w.wait = true;
      out.entries.push_back(std::move(w));
    }
  }
  return out;
}

SurgeryPath strip_waits(const SurgeryPath& p) {
  SurgeryPath out = p;
  out.entries.clear();
  for (const auto& e : p.entries)
    if (!e.wait) out.entries.push_back(e);
  return out;
}

std::vector<std::string> stripped_signatures(const SurgeryPath& p) {
  std::vector<std::string> out;
  for (const auto& e : p.entries)
    if (!e.wait) out.push_back(e.system.signature());
  return out;
}

nlohmann::json to_json(const SurgeryPath& p) {
  nlohmann::json j;
  const auto& sc = p.start().scaffold();
  auto target = nlohmann::json::array();
  for (int e : p.target) target.push_back(sc.sphere_name(e));
  j["target"] = target;
  j["mode"] = p.mode == PathMode::Identify ? "identify-parallel" : "keep-copies";
  j["policy"] = p.policy.kind == Policy::Lexicographic ? "lexicographic"
                : p.policy.kind == Policy::Seeded      ? "seeded"
                                                       : "min-result";
  j["seed"] = p.policy.seed;
  auto entries = nlohmann::json::array();
  for (const auto& e : p.entries) {
    nlohmann::json je;
    auto keys = nlohmann::json::array();
    for (int i = 0; i < e.system.size(); ++i)
      keys.push_back({{"key", e.system.sphere(i).key()}, {"copies", e.system.multiplicity(i)}});
    je["spheres"] = keys;
    je["wait"] = e.wait;
    if (e.terminal) je["terminal"] = true;
    if (e.step) {
      const auto& s = *e.step;
      auto van = nlohmann::json::array();
      for (const auto& v : s.vanishing)
        van.push_back({{"sphere", sc.sphere_name(v.scaffold_sphere)}, {"circle", v.label}, {"side", v.side}});
      je["step"] = {{"sphereKey", s.parent_key},
                    {"scaffoldSphere", sc.sphere_name(s.choice.scaffold_sphere)},
                    {"circle", s.surgery_disk.label},
                    {"side", s.choice.side},
                    {"children", s.child_keys},
                    {"vanishing", van}};
    }
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j;
}

}  // namespace spherecx
