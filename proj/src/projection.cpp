#include "spherecx/projection.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <queue>

namespace spherecx {

MMConstants MMConstants::for_rank(int n) { return with_C1(n, 24L * n - 12); }

MMConstants MMConstants::with_C1(int n, long C1) {
  MMConstants m;
  m.n = n;
  m.C1 = C1;
  m.C2 = C1 + 4;
  m.C3 = 2 * m.C2;
  m.C4 = 16 + 8 * m.C2;
  m.A = 0;
  m.B_num = 1;
  m.B_den = m.C4 + 3;
  m.C = m.C3;
  if (C1 != 24L * n - 12) m.provenance = "C1 overridden to " + std::to_string(C1);
  return m;
}

nlohmann::json MMConstants::to_json() const {
  return {{"n", n},   {"C1", C1}, {"C2", C2}, {"C3", C3}, {"C4", C4},
          {"A", A},   {"B", std::to_string(B_num) + "/" + std::to_string(B_den)},
          {"C", C},   {"retraction", retraction}, {"provenance", provenance}};
}

namespace {

bool share(const NormalSystem& a, const NormalSystem& b) {
  for (const auto& s : a.spheres())
    if (contains_sphere(b, s.key())) return true;
  return false;
}

struct BudgetHit {};

// Pairs (γ index a, node v) that can be continued to (K, Σ) with shared
// spheres at every aligned time, waits allowed on both sides.
struct Coupler {
  const SurgeryPath& g;
  std::vector<NormalSystem> gsys;
  std::vector<NormalSystem> nodes;  // last one is Σ
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<signed char>> memo;
  long states = 0, budget = 0;

  Coupler(const SurgeryPath& gamma, long b) : g(gamma), budget(b) {
    for (const auto& e : gamma.entries) gsys.push_back(e.system.identified());
  }
  int K() const { return g.K(); }
  int T() const { return static_cast<int>(nodes.size()) - 1; }

  void prepare() { memo.assign(nodes.size(), std::vector<signed char>(K() + 1, -1)); }

  bool good(int v, int a) {
    auto& m = memo[v][a];
    if (m >= 0) return m;
    if (++states > budget) throw BudgetHit{};
    bool r = false;
    if (v == T()) {
      r = a == K();
    } else if (a < K() && share(nodes[v], gsys[a])) {
      if (a + 1 < K() && good(v, a + 1)) r = true;
      for (int w : succ[v]) {
        if (r) break;
        if (w != T() && good(w, a)) r = true;
        if (!r && good(w, a + 1)) r = true;
      }
    }
    m = r;
    return r;
  }

  // The coupling from a good pair to the end.
  std::vector<std::pair<int, int>> trace(int v, int a) {
    std::vector<std::pair<int, int>> out{{a, v}};
    while (v != T()) {
      if (a + 1 < K() && good(v, a + 1)) {
        ++a;
      } else {
        bool moved = false;
        for (int w : succ[v]) {
          if (w != T() && good(w, a)) {
            v = w;
            moved = true;
            break;
          }
          if (good(w, a + 1)) {
            v = w;
            ++a;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      out.push_back({a, v});
    }
    return out;
  }
};

// Builds the reachable-system graph from {s} (all surgery choices).
void build_tree(Coupler& c, const NormalSystem& start, std::vector<int>& parent) {
  const auto& target = c.g.target;
  std::map<std::string, int> id;
  std::vector<NormalSystem> sys{start};
  std::vector<std::vector<std::string>> next_keys;
  id[start.signature()] = 0;
  parent = {-1};
  for (size_t k = 0; k < sys.size(); ++k) {
    std::vector<std::string> nk;
    if (intersection_number(sys[k], target) == 0) {
      nk.push_back("#");
    } else {
      for (auto& e : all_single_steps(initial_entry(sys[k]), target)) {
        auto s = e.system.identified();
        auto key = s.signature();
        if (!id.count(key)) {
          id[key] = static_cast<int>(sys.size());
          sys.push_back(s);
          parent.push_back(static_cast<int>(k));
        }
        nk.push_back(key);
      }
    }
    if (static_cast<long>(sys.size()) > c.budget) throw BudgetHit{};
    next_keys.push_back(std::move(nk));
  }
  const int T = static_cast<int>(sys.size());
  c.nodes = sys;
  c.nodes.push_back(scaffold_subsystem(start.scaffold_ptr(), target));
  c.succ.assign(c.nodes.size(), {});
  for (size_t k = 0; k < next_keys.size(); ++k) {
    std::set<int> s;
    for (const auto& key : next_keys[k]) s.insert(key == "#" ? T : id[key]);
    c.succ[k] = {s.begin(), s.end()};
  }
  parent.push_back(-1);
  for (size_t k = 0; k < next_keys.size() && parent.back() < 0; ++k)
    if (c.succ[k] == std::vector<int>{T}) parent.back() = static_cast<int>(k);
}

// A single pure path as a chain graph.
void build_chain(Coupler& c, const SurgeryPath& p) {
  auto pure = strip_waits(p);
  c.nodes.clear();
  for (const auto& e : pure.entries) c.nodes.push_back(e.system.identified());
  c.succ.assign(c.nodes.size(), {});
  for (size_t k = 0; k + 1 < c.nodes.size(); ++k) c.succ[k] = {static_cast<int>(k + 1)};
}

SphereProjection certificate(Coupler& c, int v, int a, const std::vector<int>& parent,
                             const std::string& key) {
  SphereProjection sp;
  sp.key = key;
  sp.k = a;
  std::vector<int> prefix;
  for (int u = v; u >= 0; u = parent[u]) prefix.push_back(u);
  std::reverse(prefix.begin(), prefix.end());
  prefix.pop_back();
  for (int u : prefix) sp.path.push_back(c.nodes[u]);
  int last = -1;
  for (auto [ga, u] : c.trace(v, a)) {
    if (u != last) sp.path.push_back(c.nodes[u]);
    last = u;
    sp.coupling.push_back({ga, static_cast<int>(sp.path.size()) - 1});
  }
  return sp;
}

std::optional<SphereProjection> best_pair(Coupler& c, const std::vector<int>& parent,
                                          const std::string& key) {
  c.prepare();
  for (int a = 0; a <= c.K(); ++a)
    for (int v = 0; v <= c.T(); ++v)
      if (c.good(v, a)) return certificate(c, v, a, parent, key);
  return std::nullopt;
}

SphereProjection upper_for(const Sphere& s, const SurgeryPath& gamma, long budget, long& states) {
  const auto single = make_system(gamma.start().scaffold_ptr(), {s});
  std::optional<SphereProjection> best;
  std::vector<Policy> policies{Policy::lex()};
  for (std::uint64_t seed = 1; seed <= 8; ++seed) policies.push_back(Policy::seeded(seed));
  for (const auto& pol : policies) {
    Coupler c(gamma, budget);
    build_chain(c, surgery_path(single, gamma.target, pol));
    std::vector<int> parent(c.nodes.size());
    for (size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k) - 1;
    parent.front() = -1;
    auto r = best_pair(c, parent, s.key());
    states += c.states;
    if (r && (!best || r->k < best->k)) best = std::move(r);
  }
  return *best;  // the pure path from s fellow travels γ at the end at least
}

}  // namespace

ProjectionResult project(const NormalSystem& s, const SurgeryPath& gamma, ProjectionMode mode,
                         long budget) {
  ProjectionResult res;
  res.mode = mode;
  const auto sys = s.identified();
  if (mode == ProjectionMode::Exact) {
    try {
      for (const auto& sp : sys.spheres()) {
        Coupler c(gamma, budget);
        std::vector<int> parent;
        build_tree(c, make_system(sys.scaffold_ptr(), {sp}), parent);
        auto r = best_pair(c, parent, sp.key());
        res.states += c.states;
        res.spheres.push_back(std::move(*r));
      }
    } catch (const BudgetHit&) {
      res.fell_back = true;
      res.spheres.clear();
      mode = ProjectionMode::CertifiedUpper;
    }
  }
  if (mode == ProjectionMode::CertifiedUpper)
    for (const auto& sp : sys.spheres()) res.spheres.push_back(upper_for(sp, gamma, budget, res.states));
  for (const auto& sp : res.spheres) res.k = std::max(res.k, sp.k);
  return res;
}

bool verify(const SphereProjection& c, const SurgeryPath& gamma) {
  if (c.path.size() < 2 || c.coupling.empty()) return false;
  if (c.path.front().size() != 1 || c.path.front().sphere(0).key() != c.key) return false;
  // The pure path must be a surgery path ending at Σ.
  SurgeryPath p;
  p.target = gamma.target;
  for (size_t i = 0; i < c.path.size(); ++i) {
    PathEntry e;
    e.system = c.path[i];
    e.terminal = i + 1 == c.path.size();
    p.entries.push_back(e);
  }
  if (!is_generalized_surgery_path(p)) return false;
  for (size_t i = 0; i + 2 < c.path.size(); ++i)
    if (c.path[i].signature() == c.path[i + 1].signature()) return false;
  // Coupling: starts at k, ends at both ends, unit monotone steps, shared spheres.
  const int K = gamma.K();
  const int M = static_cast<int>(c.path.size()) - 1;
  if (c.coupling.front().first != c.k) return false;
  if (c.coupling.back() != std::pair{K, M}) return false;
  for (size_t i = 0; i < c.coupling.size(); ++i) {
    auto [a, b] = c.coupling[i];
    if (!share(gamma.at(a).identified(), c.path[b])) return false;
    if ((a == K) != (b == M)) return false;
    if (i == 0) continue;
    auto [pa, pb] = c.coupling[i - 1];
    int da = a - pa, db = b - pb;
    if (da < 0 || db < 0 || da > 1 || db > 1 || da + db == 0) return false;
  }
  return true;
}

}  // namespace spherecx

namespace spherecx {

const char* to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Pass: return "pass";
    case ProbeStatus::Fail: return "fail";
    case ProbeStatus::Uncertified: return "uncertified";
  }
  return "?";
}

int CheckReport::count(ProbeStatus s) const {
  return static_cast<int>(std::count_if(probes.begin(), probes.end(),
                                        [&](const Probe& p) { return p.status == s; }));
}

nlohmann::json CheckReport::to_json() const {
  auto ps = nlohmann::json::array();
  for (const auto& p : probes)
    ps.push_back({{"id", p.id}, {"status", spherecx::to_string(p.status)}, {"detail", p.detail}});
  return {{"check", check},
          {"constants", constants.to_json()},
          {"pass", count(ProbeStatus::Pass)},
          {"fail", count(ProbeStatus::Fail)},
          {"uncertified", count(ProbeStatus::Uncertified)},
          {"probes", ps}};
}

namespace {

std::vector<NormalSystem> gamma_range(const SurgeryPath& g, int lo, int hi) {
  std::vector<NormalSystem> out;
  std::set<std::string> seen;
  for (int i = lo; i <= hi; ++i)
    if (seen.insert(g.at(i).identified().signature()).second) out.push_back(g.at(i).identified());
  return out;
}

int project_k(const NormalSystem& s, const SurgeryPath& g) { return project(s, g).k; }

}  // namespace

CheckReport check_coarse_retraction(const SurgeryPath& g, const std::vector<int>& ts) {
  CheckReport r;
  r.check = "retract";
  r.constants = MMConstants::for_rank(g.start().scaffold().rank());
  for (int t : ts) {
    Probe p;
    p.id = "t" + std::to_string(t);
    const auto st = g.at(t).identified();
    const int k = project_k(st, g);
    // A sphere of S_t with fewest circles on the target, kept on [k, t].
    std::string witness;
    int best = INT_MAX;
    for (const auto& s : st.spheres()) {
      bool everywhere = true;
      for (int i = k; i <= t && everywhere; ++i) everywhere = contains_sphere(g.at(i), s.key());
      int w = intersection_number(make_system(st.scaffold_ptr(), {s}), g.target);
      if (everywhere && w < best) {
        best = w;
        witness = s.key();
      }
    }
    p.detail = {{"t", t}, {"pi", k}, {"commonSphere", witness}, {"diameterBound", k == t ? 0 : 2}};
    p.status = k <= t && !witness.empty() ? ProbeStatus::Pass : ProbeStatus::Fail;
    r.probes.push_back(std::move(p));
  }
  return r;
}

CheckReport check_coarse_lipschitz(const SurgeryPath& g,
                                   const std::vector<std::pair<NormalSystem, NormalSystem>>& pairs,
                                   const MMConstants& mm) {
  CheckReport r;
  r.check = "lipschitz";
  r.constants = mm;
  int id = 0;
  for (const auto& [v0, w0] : pairs) {
    auto v = v0.identified(), w = w0.identified();
    if (!is_subsystem(v, w) && !is_subsystem(w, v))
      throw Error(ErrorCode::NotAdjacent, "probe pair is not joined by an edge");
    Probe p;
    p.id = "pair" + std::to_string(id++);
    int kv = project_k(v, g), kw = project_k(w, g);
    auto cert = certify_diameter(gamma_range(g, std::min(kv, kw), std::max(kv, kw)));
    // The W-path v ⊇ v∩w ⊆ w ⊇ w ⊆ w combed along a path from v.
    auto meet = is_subsystem(v, w) ? v : w;
    std::vector<NormalSystem> col{v, meet, w, w, w};
    auto d = build_combing_diagram(col, surgery_path(v, g.target));
    auto wc = contract_w_path(d, static_cast<int>(mm.C2));
    p.detail = {{"pi", {kv, kw}},
                {"diameterBound", cert.connected() ? cert.bound : -1},
                {"wPathT", wc.t},
                {"wPathPrefix", wc.prefix.bound},
                {"wPathOk", wc.ok}};
    p.status = cert.connected() && cert.bound <= mm.C3 && wc.ok ? ProbeStatus::Pass : ProbeStatus::Fail;
    r.probes.push_back(std::move(p));
  }
  return r;
}

int distance_lower_to_path(const NormalSystem& v0, const SurgeryPath& g) {
  auto v = v0.identified();
  int best = 2;
  for (const auto& e : g.entries) {
    auto x = e.system.identified();
    if (x.signature() == v.signature()) return 0;
    if (is_subsystem(x, v) || is_subsystem(v, x)) best = 1;
  }
  return best;
}

DistanceBounds distance_bounds(const NormalSystem& a0, const NormalSystem& b0, int budget) {
  DistanceBounds d;
  auto a = a0.identified(), b = b0.identified();
  if (a.signature() == b.signature()) {
    d.upper = 0;
    d.chain = {a};
    return d;
  }
  d.lower = is_subsystem(a, b) || is_subsystem(b, a) ? 1 : 2;
  d.chain = shortest_move_chain(a, b, budget);
  if (d.chain.empty()) throw Error(ErrorCode::BudgetExceeded, "no containment chain within the budget");
  d.upper = static_cast<int>(d.chain.size()) - 1;
  return d;
}

CheckReport check_strong_contraction(const SurgeryPath& g,
                                     const std::vector<std::pair<NormalSystem, NormalSystem>>& pairs,
                                     const MMConstants& mm) {
  CheckReport r;
  r.check = "contract";
  r.constants = mm;
  int id = 0;
  for (const auto& [v0, w0] : pairs) {
    auto v = v0.identified(), w = w0.identified();
    Probe p;
    p.id = "pair" + std::to_string(id++);
    auto dvw = distance_bounds(v, w);
    const int dlo = distance_lower_to_path(v, g);
    p.detail = {{"dUpper", dvw.upper}, {"dLowerToPath", dlo}};
    // d(v,w) <= B d(v,γ), checked exactly: d_up * B_den <= B_num * d_lo.
    if (static_cast<long>(dvw.upper) * mm.B_den > mm.B_num * dlo) {
      p.status = ProbeStatus::Uncertified;
      p.detail["reason"] = "hypothesis not certifiable from the available bounds";
      r.probes.push_back(std::move(p));
      continue;
    }
    const int kv = project_k(v, g), kw = project_k(w, g);
    auto cert = certify_diameter(gamma_range(g, std::min(kv, kw), std::max(kv, kw)));
    bool pipeline = true;
    if (dvw.upper > 0) {
      auto z = zigzag_between(v, w, dvw.upper);
      auto d = build_combing_diagram(z.entries, surgery_path(v, g.target));
      auto zc = contract_zigzag(d, static_cast<int>(mm.C2));
      pipeline = zc.ok;
      p.detail["zigzagK"] = z.k;
    }
    p.detail["pi"] = {kv, kw};
    p.detail["diameterBound"] = cert.connected() ? cert.bound : -1;
    p.status = cert.connected() && cert.bound <= mm.C && pipeline ? ProbeStatus::Pass : ProbeStatus::Fail;
    r.probes.push_back(std::move(p));
  }
  return r;
}

ClosureReport check_subcomplex_closure(const SystemPredicate& pred,
                                       const std::vector<NormalSystem>& samples) {
  ClosureReport r;
  if (samples.empty()) return r;
  const auto& scp = samples.front().scaffold_ptr();
  const int m = scp->sphere_count();
  std::vector<std::set<int>> targets;
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::set<int> t;
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1) t.insert(e);
    if (pred(scaffold_subsystem(scp, t))) targets.push_back(t);
  }
  std::vector<NormalSystem> in;
  for (const auto& s : samples)
    if (pred(s)) in.push_back(s.identified());
  for (const auto& s : in)
    for (const auto& t : targets) {
      auto p = surgery_path(s, t);
      ++r.paths;
      bool bad = false;
      for (const auto& e : p.entries) {
        ++r.entries_checked;
        bad = bad || !pred(e.system);
      }
      r.path_violations += bad;
    }
  for (size_t i = 0; i < in.size(); ++i)
    for (size_t j = i + 1; j < in.size(); ++j) {
      auto u = try_disjoint_union(in[i], in[j]);
      if (!u || u->size() > 3 * scp->rank() - 3) continue;
      ++r.joins;
      r.join_violations += !pred(*u);
    }
  return r;
}

}  // namespace spherecx

namespace spherecx {

bool IntervalAnalysis::ok() const {
  if (static_cast<int>(blocks.size()) > max_blocks) return false;
  for (int b : block_bounds)
    if (b > 4) return false;
  return total.connected() && total.bound <= max_total;
}

IntervalAnalysis interval_analysis(const SurgeryPath& g, const std::set<int>& s1,
                                   const std::set<int>& s2, int t) {
  const auto& start = g.entries[0].system;
  const auto& sc = start.scaffold();
  for (int i = 0; i < start.size(); ++i)
    if (s1.count(i) == s2.count(i))
      throw Error(ErrorCode::NotProperSubsystem, "the two subsystems must partition the start");
  IntervalAnalysis r;
  r.max_blocks = 6 * sc.rank() - 3;
  r.max_total = 24L * sc.rank() - 12;
  if (t < 0) {
    auto cd = common_descendant_time(g, s1, s2);
    t = cd ? *cd - 1 : g.K() - 1;
  }
  r.t = t;

  // Every start circle: which subsystem it comes from and where it sits.
  struct Circle {
    int origin;
    Lift lift;
  };
  std::map<std::pair<int, int>, Circle> circles;  // (scaffold sphere, label)
  for (int e = 0; e < sc.sphere_count(); ++e) {
    const int slot0 = sc.ends(e)[0].slot;
    for (const auto& l : circles_on(start, e)) {
      int label = start.sphere(l.sphere).labels()[l.vertex][slot0];
      circles[{e, label}] = {s1.count(l.sphere) ? 1 : 2, l};
    }
  }
  auto inside = [&](const LabelledDisk& a, const LabelledDisk& b) {
    const auto& la = circles.at({a.scaffold_sphere, a.label}).lift;
    const auto& lb = circles.at({b.scaffold_sphere, b.label}).lift;
    return side_containing(start, la, lb) == b.side && side_containing(start, lb, la) == 1 - a.side;
  };
  auto nested = [&](const LabelledDisk& a, const LabelledDisk& b) {
    if (a.scaffold_sphere != b.scaffold_sphere || a.label == b.label) return false;
    return inside(a, b) || inside(b, a);
  };
  auto origin = [&](const LabelledDisk& d) {
    return circles.at({d.scaffold_sphere, d.label}).origin;
  };

  int lo = 0;
  std::vector<LabelledDisk> used;
  for (int s = 1; s <= t; ++s) {
    const auto& st = g.entries[s].step;
    if (!st) continue;
    std::vector<LabelledDisk> disks{st->surgery_disk};
    disks.insert(disks.end(), st->vanishing.begin(), st->vanishing.end());
    bool clash = false;
    for (const auto& d : disks)
      for (const auto& u : used) clash = clash || (origin(d) != origin(u) && nested(d, u));
    if (clash) {
      r.blocks.push_back({lo, s - 1});
      lo = s;
      used.clear();
    }
    used.insert(used.end(), disks.begin(), disks.end());
  }
  r.blocks.push_back({lo, t});

  // Within a block, S_i and S_j both share a sphere with the system made of
  // the first subsystem's descendants at j and the second's at i.
  std::vector<NormalSystem> members;
  for (int i = 0; i <= t; ++i) members.push_back(g.at(i).identified());
  std::vector<CertEdge> hub_edges;
  for (const auto& [a, b] : r.blocks) {
    std::vector<CertEdge> local;
    for (int i = a; i <= b; ++i)
      for (int j = i + 1; j <= b; ++j) {
        auto hub = try_disjoint_union(descendants_at(g, s1, j).identified(),
                                      descendants_at(g, s2, i).identified());
        if (!hub) continue;
        if (auto e = hub_edge(members[i], members[j], *hub, i - a, j - a)) {
          local.push_back(*e);
          r.hubs.push_back(*hub);
          e->a = i;
          e->b = j;
          hub_edges.push_back(*e);
        }
      }
    std::vector<NormalSystem> block(members.begin() + a, members.begin() + b + 1);
    auto c = certify_diameter(block, local);
    r.block_bounds.push_back(c.connected() ? c.bound : INT_MAX);
  }
  r.total = certify_diameter(members, hub_edges);
  return r;
}

}  // namespace spherecx
