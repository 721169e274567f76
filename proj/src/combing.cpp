#include "spherecx/combing.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <queue>

#include "spherecx/enumerate.hpp"

namespace spherecx {

namespace {

std::string sig(const NormalSystem& s) { return s.identified().signature(); }

PathEntry wait_of(const PathEntry& e) {
  PathEntry w = e;
  w.step.reset();
  w.wait = true;
  return w;
}

// The replayed step from a to b, if b is one surgery step after a.
std::optional<PathEntry> replay(const NormalSystem& a, const NormalSystem& b,
                                const std::set<int>& target, PathMode mode) {
  auto from = initial_entry(a);
  const auto want = b.signature();
  for (auto& e : all_single_steps(from, target, mode))
    if (e.system.signature() == want) return e;
  return std::nullopt;
}

}  // namespace

bool is_zigzag(const std::vector<NormalSystem>& entries) {
  for (size_t j = 0; j + 1 < entries.size(); ++j) {
    const auto& a = entries[j];
    const auto& b = entries[j + 1];
    if (j % 2 == 0 ? !is_subsystem(b, a) : !is_subsystem(a, b)) return false;
  }
  return true;
}

SurgeryPath comb_by_collapse(const SurgeryPath& p, const std::set<int>& sub) {
  if (sub.empty()) throw Error(ErrorCode::EmptySubsystem, "collapse onto an empty subsystem");
  std::map<int, int> rank;
  for (int a : sub) rank.emplace(a, static_cast<int>(rank.size()));
  SurgeryPath out;
  out.target = p.target;
  out.mode = p.mode;
  out.policy = p.policy;
  for (int i = 0; i <= p.K(); ++i) {
    const auto& src = p.entries[i];
    auto idx = descendant_indices(p, sub, i);
    PathEntry e;
    e.system = subsystem(src.system, idx);
    e.terminal = src.terminal;
    for (int k : idx) {
      Provenance pr;
      pr.flip = src.prov[k].flip;
      for (int a : src.prov[k].ancestors)
        if (rank.count(a)) pr.ancestors.insert(rank[a]);
      e.prov.push_back(pr);
    }
    if (i > 0 && !e.terminal && e.system.signature() == out.entries.back().system.signature()) {
      e.wait = true;
    } else if (src.step) {
      e.step = src.step;
      e.step->parent_index = out.entries.empty() ? -1 : out.entries.back().system.index_of(src.step->parent_key);
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

SurgeryPath comb_by_collapse(const SurgeryPath& p, const NormalSystem& sub) {
  if (!is_subsystem(sub.identified(), p.start().identified()))
    throw Error(ErrorCode::NotProperSubsystem, "collapse target is not a subsystem of the path start");
  return comb_by_collapse(p, start_indices(p, sub));
}

Expansion comb_by_expansion(const SurgeryPath& sp, const NormalSystem& super0) {
  const auto& target = sp.target;
  const auto mode = sp.mode;
  auto super = mode == PathMode::Identify ? super0.identified() : super0;
  if (!is_subsystem(sp.start().identified(), super.identified()))
    throw Error(ErrorCode::NotProperSubsystem, "expansion needs a super-system of the path start");
  Expansion ex;
  auto& g = ex.path;
  g.target = target;
  g.mode = mode;
  g.policy = sp.policy;
  g.entries.push_back(initial_entry(super));
  auto& adj = ex.adjusted;
  adj = sp;
  adj.entries = {sp.entries[0]};

  auto step_g = [&](const DiskChoice& c) {
    g.entries.push_back(single_surgery_step(g.entries.back(), target, c, mode));
  };

  for (int i = 0; i < sp.K(); ++i) {
    const auto& cur = sp.entries[i];
    const auto& nxt = sp.entries[i + 1];
    if (nxt.terminal) {
      // The sub-path is done; finish the super-path with waits on the sub-path.
      while (intersection_number(g.entries.back().system, target) > 0) {
        step_g(innermost_candidates(g.entries.back().system, target).front());
        adj.entries.push_back(wait_of(cur));
        ex.waits.push_back(i);
        ++ex.tail;
      }
      g.entries.push_back(terminal_entry(g.entries.back(), target));
      adj.entries.push_back(nxt);
      continue;
    }
    if (nxt.system.signature() == cur.system.signature()) {
      g.entries.push_back(wait_of(g.entries.back()));
      adj.entries.push_back(nxt);
      continue;
    }
    // Which disk did the sub-path use?
    std::optional<DiskChoice> used;
    auto from = initial_entry(cur.system);
    for (const auto& c : innermost_candidates(cur.system, target))
      if (single_surgery_step(from, target, c, mode).system.signature() == nxt.system.signature()) {
        used = c;
        break;
      }
    if (!used) throw Error(ErrorCode::BadAlignment, "input row is not a generalized surgery path");
    const int e = used->scaffold_sphere;
    const int X = used->side;
    const Lift dl = circles_on(cur.system, e)[used->circle];
    const std::string key = cur.system.sphere(dl.sphere).key();

    for (;;) {
      const auto& G = g.entries.back().system;
      const int gi = G.index_of(key);
      if (gi < 0) throw Error(ErrorCode::BadAlignment, "sub-path sphere missing from super-path");
      auto circ = circles_on(G, e);
      const Lift D{gi, dl.vertex};
      const int pos = static_cast<int>(std::find(circ.begin(), circ.end(), D) - circ.begin());
      auto cands = innermost_candidates(G, target);
      DiskChoice same{e, pos, X};
      if (std::find(cands.begin(), cands.end(), same) != cands.end()) {
        step_g(same);
        adj.entries.push_back(nxt);
        ++ex.innermost_hits;
        break;
      }
      // An innermost disk of the super-system inside D.
      std::optional<DiskChoice> inner;
      for (const auto& c : cands) {
        if (c.scaffold_sphere != e) continue;
        const Lift j = circ[c.circle];
        if (side_containing(G, j, D) == X && side_containing(G, D, j) == 1 - c.side) {
          inner = c;
          break;
        }
      }
      if (!inner) throw Error(ErrorCode::NotInnermost, "no innermost disk inside the sub-path disk");
      step_g(*inner);
      adj.entries.push_back(wait_of(cur));
      ex.waits.push_back(i);
      ++ex.refined;
    }
  }
  return ex;
}

CombingDiagram build_combing_diagram(const std::vector<NormalSystem>& column,
                                     const SurgeryPath& base) {
  if (column.empty()) throw Error(ErrorCode::EmptySubsystem, "empty zig-zag");
  if (sig(column[0]) != sig(base.start()))
    throw Error(ErrorCode::BadAlignment, "zig-zag does not start at the path start");
  CombingDiagram d;
  d.rows.push_back(base);
  for (size_t j = 1; j < column.size(); ++j) {
    const auto& prev = d.rows.back();
    auto cj = column[j].identified();
    if (is_subsystem(cj, prev.start().identified())) {
      d.rows.push_back(comb_by_collapse(prev, cj));
    } else if (is_subsystem(prev.start().identified(), cj)) {
      auto ex = comb_by_expansion(prev, cj);
      for (size_t r = 0; r + 1 < d.rows.size(); ++r) d.rows[r] = insert_waits(d.rows[r], ex.waits);
      d.rows.back() = std::move(ex.adjusted);
      d.rows.push_back(std::move(ex.path));
    } else {
      throw Error(ErrorCode::BadAlignment, "consecutive column entries are not nested");
    }
  }
  return d;
}

bool is_generalized_surgery_path(const SurgeryPath& p, std::string* why) {
  auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (p.K() < 1) return fail("path too short");
  const auto& last = p.entries.back();
  if (sig(last.system) != sig(scaffold_subsystem(p.start().scaffold_ptr(), p.target)))
    return fail("last entry is not the target");
  if (intersection_number(p.at(p.K() - 1), p.target) != 0)
    return fail("entry before the target still meets it");
  for (int i = 0; i + 1 < p.K(); ++i) {
    const auto& a = p.at(i);
    const auto& b = p.at(i + 1);
    if (a.signature() == b.signature()) continue;
    if (!replay(a, b, p.target, p.mode))
      return fail("entry " + std::to_string(i + 1) + " is not one surgery step after entry " +
                  std::to_string(i));
  }
  return true;
}

namespace {

// Whether `small` can be read as the descendants of its start along p. Two
// disks can yield the same next system with different children, so every
// replayed step is tried.
bool descends_along(const SurgeryPath& p, const SurgeryPath& small, int* bad_at) {
  using Keys = std::set<std::string>;
  auto keys_at = [&](int i) {
    auto k = small.at(i).identified().keys();
    return Keys(k.begin(), k.end());
  };
  std::set<Keys> live{keys_at(0)};
  for (int i = 0; i < p.K() && !live.empty(); ++i) {
    const auto& a = p.at(i);
    const auto& b = p.at(i + 1);
    std::set<Keys> next;
    if (p.entries[i + 1].terminal) {
      auto all = b.keys();
      next.insert(Keys(all.begin(), all.end()));
    } else if (a.signature() == b.signature()) {
      next = live;
    } else {
      const auto want = b.signature();
      for (auto& e : all_single_steps(initial_entry(a), p.target, p.mode)) {
        if (e.system.signature() != want) continue;
        for (Keys cur : live) {
          if (cur.erase(e.step->parent_key))
            for (const auto& k : e.step->child_keys) cur.insert(k);
          next.insert(cur);
        }
      }
    }
    const auto want = keys_at(i + 1);
    live.clear();
    if (next.count(want)) live.insert(want);
    if (live.empty() && bad_at) *bad_at = i + 1;
  }
  return !live.empty();
}

}  // namespace

DiagramCheck check_diagram(const CombingDiagram& d, const std::vector<NormalSystem>& column) {
  DiagramCheck r;
  auto fail = [&](bool& flag, const std::string& w) {
    flag = false;
    r.ok = false;
    if (r.why.empty()) r.why = w;
  };
  if (d.rows.size() != column.size()) fail(r.left_column, "row count differs from the column");
  const int K = d.K();
  for (size_t j = 0; j < d.rows.size(); ++j) {
    const auto& row = d.rows[j];
    if (j < column.size() && sig(row.start()) != sig(column[j]))
      fail(r.left_column, "row " + std::to_string(j) + " does not start at its column entry");
    if (row.K() != K) fail(r.rows_are_paths, "rows have different lengths");
    std::string why;
    if (!is_generalized_surgery_path(row, &why))
      fail(r.rows_are_paths, "row " + std::to_string(j) + ": " + why);
    if (sig(row.entries.back().system) != sig(d.rows[0].entries.back().system))
      fail(r.common_end, "rows end at different systems");
  }
  if (!r.ok) return r;
  for (size_t j = 0; j + 1 < d.rows.size(); ++j)
    for (auto [lo, hi] : {std::pair{j, j + 1}, std::pair{j + 1, j}}) {
      const auto& small = d.rows[lo];
      const auto& big = d.rows[hi];
      if (!is_subsystem(small.start().identified(), big.start().identified())) continue;
      int bad = -1;
      if (!descends_along(big, small, &bad))
        fail(r.descendants, "row " + std::to_string(lo) + " at " + std::to_string(bad) +
                                " is not the descendant system in row " + std::to_string(hi));
    }
  return r;
}

}  // namespace spherecx

namespace spherecx {

std::vector<NormalSystem> move_pool(const NormalSystem& s, const NormalSystem& t) {
  const auto& scp = s.scaffold_ptr();
  const auto& sc = *scp;
  std::map<std::string, Sphere> spheres;
  auto add_sys = [&](const NormalSystem& x) {
    for (const auto& sp : x.spheres()) spheres.emplace(sp.key(), sp);
  };
  add_sys(s);
  add_sys(t);
  add_sys(scaffold_subsystem(scp, all_scaffold_spheres(sc)));
  for (const auto& sp : enumerate_spheres(sc, 1)) spheres.emplace(sp.key(), sp);
  for (const auto* x : {&s, &t})
    for (int e = 0; e < sc.sphere_count(); ++e)
      for (const auto& en : surgery_path(*x, {e}).entries) add_sys(en.system);

  std::vector<Sphere> v;
  for (auto& [k, sp] : spheres) v.push_back(sp);
  const int m = static_cast<int>(v.size());
  std::vector<std::vector<char>> ok(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) ok[i][j] = ok[j][i] = compatible(v[i], v[j]);
  const int cap = 3 * sc.rank() - 3;
  std::vector<NormalSystem> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (!cur.empty()) {
      std::vector<Sphere> ss;
      for (int i : cur) ss.push_back(v[i]);
      out.push_back(make_system(scp, std::move(ss)));
    }
    if (static_cast<int>(cur.size()) == cap) return;
    for (int i = from; i < m; ++i) {
      bool fits = true;
      for (int j : cur) fits = fits && ok[i][j];
      if (!fits) continue;
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<NormalSystem> shortest_move_chain(const NormalSystem& s0, const NormalSystem& t0,
                                              int max_len, std::vector<NormalSystem> pool) {
  auto s = s0.identified(), t = t0.identified();
  if (pool.empty()) pool = move_pool(s, t);
  pool.push_back(s);
  pool.push_back(t);
  // Index spheres so that containment is a bitmask test.
  std::map<std::string, int> id;
  std::vector<std::vector<std::uint64_t>> mask;
  std::map<std::string, int> vid;
  std::vector<NormalSystem> verts;
  for (auto& x : pool) {
    auto y = x.identified();
    if (!vid.emplace(y.signature(), static_cast<int>(verts.size())).second) continue;
    verts.push_back(y);
  }
  for (const auto& x : verts)
    for (const auto& sp : x.spheres()) id.emplace(sp.key(), static_cast<int>(id.size()));
  const size_t words = (id.size() + 63) / 64;
  for (const auto& x : verts) {
    std::vector<std::uint64_t> mk(words, 0);
    for (const auto& sp : x.spheres()) {
      int b = id[sp.key()];
      mk[b / 64] |= std::uint64_t{1} << (b % 64);
    }
    mask.push_back(mk);
  }
  auto sub = [&](int a, int b) {
    for (size_t w = 0; w < words; ++w)
      if (mask[a][w] & ~mask[b][w]) return false;
    return true;
  };
  const int n = static_cast<int>(verts.size());
  const int src = vid[s.signature()], dst = vid[t.signature()];
  std::vector<int> dist(n, -1), prev(n, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty() && dist[dst] < 0) {
    int a = q.front();
    q.pop();
    if (dist[a] >= max_len) continue;
    for (int b = 0; b < n; ++b)
      if (dist[b] < 0 && (sub(a, b) || sub(b, a))) {
        dist[b] = dist[a] + 1;
        prev[b] = a;
        q.push(b);
      }
  }
  if (dist[dst] < 0) return {};
  std::vector<NormalSystem> chain;
  for (int v = dst; v >= 0; v = prev[v]) chain.push_back(verts[v]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

ZigZag zigzag_between(const NormalSystem& s0, const NormalSystem& t0, int distance_upper,
                      const std::vector<NormalSystem>& pool) {
  auto s = s0.identified(), t = t0.identified();
  auto chain = shortest_move_chain(s, t, distance_upper + 4, pool);
  if (chain.empty())
    throw Error(ErrorCode::NoPathFoundWithinBudget, "no containment chain within the budget");
  ZigZag z;
  z.d_upper = static_cast<int>(chain.size()) - 1;
  z.d_lower = z.d_upper == 0 ? 0 : (z.d_upper == 1 ? 1 : 2);
  // A shortest chain alternates; make it start downwards.
  if (chain.size() > 1 && is_subsystem(chain[0], chain[1])) chain.insert(chain.begin(), chain[0]);
  z.found_length = static_cast<int>(chain.size()) - 1;
  z.k = 1;
  while ((1 << (z.k + 1)) < z.found_length) ++z.k;
  while (static_cast<int>(chain.size()) < (1 << (z.k + 1)) + 1) chain.push_back(chain.back());
  z.entries = std::move(chain);
  return z;
}

}  // namespace spherecx

namespace spherecx {

namespace {

// Entries lo..hi of a row, one representative per distinct system.
std::vector<NormalSystem> distinct_range(const SurgeryPath& p, int lo, int hi) {
  std::vector<NormalSystem> out;
  std::set<std::string> seen;
  for (int i = lo; i <= hi; ++i)
    if (seen.insert(p.at(i).signature()).second) out.push_back(p.at(i));
  return out;
}

// Earliest t >= from after which two equal-length rows fellow travel.
int earliest_travel(const SurgeryPath& a, const SurgeryPath& b, int from) {
  int t = a.K();
  while (t - 1 >= from) {
    const auto& x = a.at(t - 1);
    const auto& y = b.at(t - 1);
    bool share = false;
    for (const auto& s : x.spheres()) share = share || contains_sphere(y, s.key());
    if (!share) break;
    --t;
  }
  return t;
}

}  // namespace

WContraction contract_w_path(const CombingDiagram& d, int C2, int row0, int row4, int from) {
  WContraction w;
  w.C2 = C2;
  const int K = d.K();
  const auto& r0 = d.rows.at(row0);
  const auto& r4 = d.rows.at(row4);
  const auto& r1 = d.rows.at(row0 + (row4 - row0) / 4);
  const auto& r3 = d.rows.at(row0 + 3 * (row4 - row0) / 4);
  for (int t = from; t <= K && !w.common_descendant; ++t)
    for (const auto& s : r1.at(t).spheres())
      if (contains_sphere(r3.at(t), s.key())) {
        w.common_descendant = t;
        break;
      }
  if (w.common_descendant) {
    w.t = *w.common_descendant;
    w.prefix = certify_diameter(distinct_range(r0, from, w.t));
    w.travel = fellow_travels_after(r0, r4, w.t);
    w.ok = w.travel.ok && w.prefix.bound <= C2;
  }
  if (!w.ok) {
    w.t = K;
    w.branch_small_diameter = true;
    w.prefix = certify_diameter(distinct_range(r0, from, K));
    w.travel = fellow_travels_after(r0, r4, K);
    w.ok = w.travel.ok && w.prefix.bound <= C2;
  }
  return w;
}

ZContraction contract_zigzag(const CombingDiagram& d, int C2) {
  ZContraction z;
  const int m = static_cast<int>(d.rows.size()) - 1;
  while ((2 << z.k) < m) ++z.k;
  if (m < 4 || (2 << z.k) != m)
    throw Error(ErrorCode::BadAlignment, "zig-zag length is not a power of two >= 4");
  const int K = d.K();
  z.telescoped = static_cast<long>(2 + C2) << (z.k + 1);
  int prev = 0;
  bool levels_ok = true;
  for (int l = 1; l <= z.k; ++l) {
    const int block = 2 << l;
    int tl = prev;
    for (int b = 0; b + block <= m; b += block) {
      int tb = l == 1 ? contract_w_path(d, C2, b, b + block, prev).t
                      : earliest_travel(d.rows[b], d.rows[b + block], prev);
      tl = std::max(tl, tb);
    }
    z.t.push_back(tl);
    // The column (a multiple of the block size) with the best certificate on [prev, tl].
    int best = 0;
    DiameterCertificate bc;
    for (int j = 0; j <= m; j += block) {
      if (l == z.k && j != 0) break;
      auto c = certify_diameter(distinct_range(d.rows[j], prev, tl));
      if (j == 0 || c.bound < bc.bound) {
        best = j;
        bc = c;
      }
    }
    if (l < z.k) z.j.push_back(best);
    levels_ok = levels_ok && bc.bound <= C2;
    z.level.push_back(std::move(bc));
    prev = tl;
  }
  z.prefix = certify_diameter(distinct_range(d.rows[0], 0, z.t.back()));
  z.travel = fellow_travels_after(d.rows[0], d.rows[m], std::min(z.t.back(), K));
  z.ok = levels_ok && z.travel.ok && z.prefix.connected() && z.prefix.bound <= z.telescoped;
  return z;
}

nlohmann::json to_json(const CombingDiagram& d) {
  auto rows = nlohmann::json::array();
  for (const auto& r : d.rows) rows.push_back(to_json(r));
  auto rel = nlohmann::json::array();
  for (size_t j = 0; j + 1 < d.rows.size(); ++j) {
    auto a = d.rows[j].start().identified(), b = d.rows[j + 1].start().identified();
    rel.push_back(is_subsystem(a, b) ? (is_subsystem(b, a) ? "=" : "<=") : ">=");
  }
  return {{"K", d.K()}, {"rows", d.rows.size()}, {"columnRelations", rel}, {"paths", rows}};
}

}  // namespace spherecx
