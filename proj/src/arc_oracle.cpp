#include "spherecx/arc_oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>

#include "spherecx/error.hpp"
#include "spherecx/surgery.hpp"

namespace spherecx {

namespace {

int mod6(int x) { return ((x % 6) + 6) % 6; }

// Boundary cycles of a gluing: leaving boundary side 2i of h at its ccw end,
// the boundary continues on side s'+1 of the hexagon glued to side 2i+1.
int count_boundaries(int H, const std::vector<std::pair<int, int>>& mate) {
  std::vector<char> seen(3 * H, 0);
  int cycles = 0;
  for (int start = 0; start < 3 * H; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (int b = start; !seen[b];) {
      seen[b] = 1;
      auto [h2, s2] = mate[b];  // b = 3h + i  <->  odd side 2i+1 of h
      b = 3 * h2 + mod6(s2 + 1) / 2;
    }
  }
  return cycles;
}

bool dual_connected(int H, const std::vector<std::pair<int, int>>& mate) {
  std::vector<int> comp(H, -1);
  std::vector<int> stack{0};
  comp[0] = 0;
  while (!stack.empty()) {
    int h = stack.back();
    stack.pop_back();
    for (int i = 0; i < 3; ++i) {
      int h2 = mate[3 * h + i].first;
      if (comp[h2] < 0) {
        comp[h2] = 0;
        stack.push_back(h2);
      }
    }
  }
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

Surface build_surface(int g, int s) {
  int H = 2 * (2 * g + s - 2);
  if (H <= 0) throw Error(ErrorCode::UnsupportedPreset, "surface has no hexagon decomposition");
  // mate[3h+i] = (h', odd side') glued to odd side 2i+1 of h
  std::vector<std::pair<int, int>> mate(3 * H, {-1, -1});
  std::optional<std::vector<std::pair<int, int>>> found;
  std::function<void()> rec = [&] {
    if (found) return;
    int free = -1;
    for (int x = 0; x < 3 * H; ++x)
      if (mate[x].first < 0) {
        free = x;
        break;
      }
    if (free < 0) {
      if (!dual_connected(H, mate)) return;
      int bnd = count_boundaries(H, mate);
      if (bnd == s && 2 - bnd + H / 2 == 2 * g) found = mate;
      return;
    }
    for (int y = free + 1; y < 3 * H && !found; ++y) {
      if (mate[y].first >= 0) continue;
      mate[free] = {y / 3, 2 * (y % 3) + 1};
      mate[y] = {free / 3, 2 * (free % 3) + 1};
      rec();
      mate[free] = mate[y] = {-1, -1};
    }
  };
  rec();
  if (!found) throw Error(ErrorCode::UnsupportedPreset, "no gluing found");

  Surface S;
  S.genus = g;
  S.boundaries = s;
  S.hexagons = H;
  S.arc.assign(H, {-1, -1, -1});
  std::vector<ScaffoldEdge> edges;
  for (int x = 0; x < 3 * H; ++x) {
    int h = x / 3, i = x % 3;
    if (S.arc[h][i] >= 0) continue;
    auto [h2, s2] = (*found)[x];
    int a = S.arcs();
    S.arc[h][i] = a;
    S.arc[h2][(s2 - 1) / 2] = a;
    S.sides.push_back({std::pair{h, 2 * i + 1}, std::pair{h2, s2}});
    edges.push_back({h, i, h2, (s2 - 1) / 2});
  }
  S.scaffold = std::make_shared<const Scaffold>(build_scaffold(H / 2 + 1, edges));
  return S;
}

}  // namespace

std::pair<int, int> Surface::partner(int h, int x) const {
  const auto& sd = sides[arc[h][(x - 1) / 2]];
  return sd[0] == std::pair{h, x} ? sd[1] : sd[0];
}

const Surface& surface_preset(int g, int s) {
  static const std::map<std::pair<int, int>, Surface> presets = [] {
    std::map<std::pair<int, int>, Surface> m;
    for (auto gs : {std::pair{0, 3}, std::pair{0, 4}, std::pair{1, 1}, std::pair{1, 2}})
      m.emplace(gs, build_surface(gs.first, gs.second));
    return m;
  }();
  auto it = presets.find({g, s});
  if (it == presets.end())
    throw Error(ErrorCode::UnsupportedPreset,
                "surface (" + std::to_string(g) + "," + std::to_string(s) + ")");
  return it->second;
}

// ---- walks

namespace {

Walk reversed(const Walk& w) {
  Walk r(w.rbegin(), w.rend());
  for (auto& s : r) std::swap(s.in, s.out);
  return r;
}

bool glued(const Surface& S, const Segment& a, const Segment& b) {
  return a.out % 2 == 1 && b.in % 2 == 1 && S.partner(a.hex, a.out) == std::pair{b.hex, b.in};
}

bool is_normal(const Surface& S, const Walk& w) {
  if (w.empty()) return false;
  for (const auto& s : w)
    if (s.hex < 0 || s.hex >= S.hexagons || s.in < 0 || s.in > 5 || s.out < 0 || s.out > 5 ||
        s.in == s.out)
      return false;
  if (w.size() == 1) return w[0].in % 2 == 0 && w[0].out % 2 == 0;
  if (w.front().in % 2 != 0 || w.front().out != mod6(w.front().in + 3)) return false;
  if (w.back().out % 2 != 0 || w.back().in != mod6(w.back().out + 3)) return false;
  for (size_t k = 1; k + 1 < w.size(); ++k)
    if (w[k].in % 2 == 0 || w[k].out % 2 == 0) return false;
  for (size_t k = 0; k + 1 < w.size(); ++k)
    if (!glued(S, w[k], w[k + 1])) return false;
  return true;
}

}  // namespace

Walk max_arc(const Surface& S, int a) {
  auto [h, x] = S.sides.at(a)[0];
  return {Segment{h, mod6(x - 1), mod6(x + 1)}};
}

int max_arc_index(const Surface& S, const Walk& w) {
  if (w.size() != 1 || w[0].in % 2 || w[0].out % 2 || w[0].in == w[0].out) return -1;
  int x = w[0].out == mod6(w[0].in + 2) ? w[0].in + 1 : mod6(w[0].in - 1);
  return S.arc[w[0].hex][(x - 1) / 2];
}

std::optional<Walk> canonical_arc(const Surface& S, Walk w) {
  if (!is_normal(S, w)) return std::nullopt;
  if (w.size() == 1) return max_arc(S, max_arc_index(S, w));
  return std::min(w, reversed(w));
}

std::optional<Walk> normalize_arc(const Surface& S, Walk w) {
  for (bool changed = true; changed;) {
    changed = false;
    for (int end = 0; end < 2; ++end) {
      w = reversed(w);
      if (w.empty()) return std::nullopt;
      if (w.size() == 1) {
        if (w[0].in == w[0].out) return std::nullopt;
        continue;
      }
      auto last = w.back();
      if (last.out == mod6(last.in + 3)) continue;
      // corner cut: slide the endpoint across the corner into the previous hexagon
      w.pop_back();
      auto& prev = w.back();
      prev.out = last.out == mod6(last.in + 1) ? mod6(prev.out - 1) : mod6(prev.out + 1);
      changed = true;
    }
  }
  if (w.size() == 1 && w[0].in == w[0].out) return std::nullopt;
  return canonical_arc(S, w);
}


// ---- taut position

namespace {

// A traveler on walk w (already oriented) that has just left segment k
// through its exit side.
struct Traveler {
  const Walk* w;
  int k;
};

// +1 when a lies to the right of b (both leave the same side in the same
// direction), -1 when to the left, 0 when parallel throughout.
int right_of(const Traveler& a, const Traveler& b) {
  const Walk& A = *a.w;
  const Walk& B = *b.w;
  for (int i = 1;; ++i) {
    int ia = a.k + i, ib = b.k + i;
    if (ia >= static_cast<int>(A.size()) || ib >= static_cast<int>(B.size())) break;
    const auto& sa = A[ia];
    const auto& sb = B[ib];
    if (sa.out != sb.out) return mod6(sa.out - sa.in) < mod6(sb.out - sb.in) ? 1 : -1;
    if (sa.out % 2 == 0) break;
  }
  for (int i = 0;; ++i) {
    int ia = a.k - i, ib = b.k - i;
    if (ia < 0 || ib < 0) break;
    const auto& sa = A[ia];
    const auto& sb = B[ib];
    // walking backwards the sides swap
    if (sa.in != sb.in) return mod6(sa.in - sa.out) < mod6(sb.in - sb.out) ? -1 : 1;
    if (sa.in % 2 == 0) break;
  }
  return 0;
}

struct Point {
  Traveler t;
  int arc;   // which input walk
  int seg;   // segment index in the input orientation
  int side;  // side of hexagon `hex` the point lies on
  bool at_out;
};

// Endpoint coordinates (side * N + rank, counterclockwise) of every segment.
struct Taut {
  std::vector<std::vector<std::array<long, 2>>> coord;  // per arc, per segment: in, out
};

Taut taut(const std::vector<Walk>& walks) {
  std::vector<Walk> rev;
  rev.reserve(walks.size());
  for (const auto& w : walks) rev.push_back(reversed(w));
  std::map<std::pair<int, int>, std::vector<Point>> sides;
  for (int a = 0; a < static_cast<int>(walks.size()); ++a) {
    int L = static_cast<int>(walks[a].size());
    for (int k = 0; k < L; ++k) {
      const auto& s = walks[a][k];
      sides[{s.hex, s.out}].push_back({{&walks[a], k}, a, k, s.out, true});
      sides[{s.hex, s.in}].push_back({{&rev[a], L - 1 - k}, a, k, s.in, false});
    }
  }
  Taut t;
  t.coord.resize(walks.size());
  for (int a = 0; a < static_cast<int>(walks.size()); ++a) t.coord[a].resize(walks[a].size());
  constexpr long N = 1 << 20;
  for (auto& [key, pts] : sides) {
    // counterclockwise along a side is right to left for travelers leaving through it
    std::stable_sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) {
      int r = right_of(x.t, y.t);
      if (r != 0) return r > 0;
      // parallel strands: keep them parallel on both ends of a segment
      int kx = x.at_out ? x.arc : -x.arc, ky = y.at_out ? y.arc : -y.arc;
      return std::tie(kx, x.seg) < std::tie(ky, y.seg);
    });
    for (int r = 0; r < static_cast<int>(pts.size()); ++r)
      t.coord[pts[r].arc][pts[r].seg][pts[r].at_out ? 1 : 0] = key.second * N + r;
  }
  return t;
}

bool interleave(const std::array<long, 2>& u, const std::array<long, 2>& v) {
  long lo = std::min(u[0], u[1]), hi = std::max(u[0], u[1]);
  auto inside = [&](long x) { return lo < x && x < hi; };
  return inside(v[0]) != inside(v[1]);
}

int count_crossings(const std::vector<Walk>& walks, int a, int b) {
  auto t = taut(walks);
  int n = 0;
  for (size_t i = 0; i < walks[a].size(); ++i)
    for (size_t j = 0; j < walks[b].size(); ++j) {
      if (a == b && j <= i) continue;
      if (walks[a][i].hex != walks[b][j].hex) continue;
      if (interleave(t.coord[a][i], t.coord[b][j])) ++n;
    }
  return n;
}

}  // namespace

int crossings(const Surface&, const Walk& a, const Walk& b) {
  return count_crossings({a, b}, 0, 1);
}

int self_crossings(const Surface&, const Walk& a) { return count_crossings({a}, 0, 0); }

int crossings_with_max_arc(const Surface& S, const Walk& w, int e) {
  int n = 0;
  for (const auto& s : w)
    if (s.out % 2 == 1 && S.arc[s.hex][(s.out - 1) / 2] == e) ++n;
  return n;
}


// ---- systems

namespace {

std::string walk_string(const Walk& w) {
  std::string out;
  for (const auto& s : w)
    out += std::to_string(s.hex) + ":" + std::to_string(s.in) + std::to_string(s.out) + " ";
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace

std::string ArcSystem::key() const {
  std::string out;
  for (const auto& w : arcs) out += "[" + walk_string(w) + "]";
  return out;
}

nlohmann::json ArcSystem::to_json() const {
  nlohmann::json j;
  j["surface"] = {{"genus", surface->genus}, {"boundaries", surface->boundaries}};
  std::vector<std::map<std::string, int>> coords(surface->hexagons);
  for (const auto& w : arcs)
    for (const auto& s : w) {
      int a = std::min(s.in, s.out), b = std::max(s.in, s.out);
      ++coords[s.hex][std::to_string(a) + "-" + std::to_string(b)];
    }
  j["normal_coordinates"] = coords;
  j["arcs"] = nlohmann::json::array();
  for (const auto& w : arcs) {
    auto jw = nlohmann::json::array();
    for (const auto& s : w) jw.push_back({s.hex, s.in, s.out});
    j["arcs"].push_back(jw);
  }
  return j;
}

std::optional<ArcSystem> make_arc_system(const Surface& S, std::vector<Walk> arcs) {
  ArcSystem a;
  a.surface = &S;
  for (auto& w : arcs) {
    auto c = canonical_arc(S, std::move(w));
    if (!c || self_crossings(S, *c) != 0) return std::nullopt;
    a.arcs.push_back(std::move(*c));
  }
  std::sort(a.arcs.begin(), a.arcs.end());
  a.arcs.erase(std::unique(a.arcs.begin(), a.arcs.end()), a.arcs.end());
  for (size_t i = 0; i < a.arcs.size(); ++i)
    for (size_t j = i + 1; j < a.arcs.size(); ++j)
      if (crossings(S, a.arcs[i], a.arcs[j]) != 0) return std::nullopt;
  return a;
}

ArcSystem max_arc_subsystem(const Surface& S, const std::set<int>& arcs) {
  std::vector<Walk> ws;
  for (int e : arcs) ws.push_back(max_arc(S, e));
  return *make_arc_system(S, ws);
}

int crossings_with(const ArcSystem& a, const std::set<int>& target) {
  int n = 0;
  for (const auto& w : a.arcs)
    for (int e : target) n += crossings_with_max_arc(*a.surface, w, e);
  return n;
}

Sphere double_arc(const Surface& S, const Walk& w) {
  if (int e = max_arc_index(S, w); e >= 0) return scaffold_sphere(*S.scaffold, e);
  Tree tree(w.size());
  for (size_t k = 0; k < w.size(); ++k) {
    const auto& s = w[k];
    auto& v = tree[k];
    v.piece = s.hex;
    for (int j = 0; j < 3; ++j) {
      int pos = 2 * j + 1;
      if (pos == s.out) {
        v.nbr[j] = static_cast<int>(k) + 1;
      } else if (pos == s.in) {
        v.nbr[j] = static_cast<int>(k) - 1;
      } else {
        // ends on the right of the arc get colour 1
        v.col[j] = mod6(pos - s.in) < mod6(s.out - s.in) ? 1 : 0;
      }
    }
  }
  auto nz = normalize(*S.scaffold, std::move(tree));
  if (!nz.sphere) throw Error(ErrorCode::BoundaryParallelDisk, "doubled arc bounds a ball");
  return *nz.sphere;
}

NormalSystem double_to_spheres(const ArcSystem& a) {
  std::vector<Sphere> sp;
  for (const auto& w : a.arcs) sp.push_back(double_arc(*a.surface, w));
  return make_system(a.surface->scaffold, std::move(sp));
}

std::vector<ArcDisk> arc_innermost(const ArcSystem& a, const std::set<int>& target) {
  const Surface& S = *a.surface;
  auto t = taut(a.arcs);
  std::vector<ArcDisk> out;
  for (int e : target) {
    auto [h, x] = S.sides[e][0];
    // points on side x of h, counterclockwise
    std::vector<std::pair<long, ArcDisk>> pts;
    for (int i = 0; i < static_cast<int>(a.arcs.size()); ++i) {
      const auto& w = a.arcs[i];
      int L = static_cast<int>(w.size());
      for (int k = 0; k < L; ++k) {
        if (w[k].hex != h) continue;
        if (w[k].out == x) pts.push_back({t.coord[i][k][1], ArcDisk{e, i, k, false, 0}});
        if (w[k].in == x) pts.push_back({t.coord[i][k][0], ArcDisk{e, i, L - 1 - k, true, 0}});
      }
    }
    if (pts.empty()) continue;
    std::sort(pts.begin(), pts.end());
    auto first = pts.front().second, last = pts.back().second;
    first.corner = mod6(x - 1);
    last.corner = mod6(x + 1);
    out.push_back(first);
    out.push_back(last);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ArcSystem arc_surgery_step(const ArcSystem& a, const ArcDisk& d) {
  const Surface& S = *a.surface;
  Walk w = d.reversed ? reversed(a.arcs.at(d.arc)) : a.arcs.at(d.arc);
  int k = d.segment;
  auto [h, x] = std::pair{w.at(k).hex, w.at(k).out};
  if (S.arc[h][(x - 1) / 2] != d.target || (d.corner != mod6(x - 1) && d.corner != mod6(x + 1)))
    throw Error(ErrorCode::NotInnermost, "arc disk does not lie on its target");
  auto [h2, x2] = S.partner(h, x);
  Walk lo(w.begin(), w.begin() + k + 1), hi(w.begin() + k + 1, w.end());
  lo.back().out = d.corner;
  // the far copy of the same end of the target
  hi.front().in = d.corner == mod6(x - 1) ? mod6(x2 + 1) : mod6(x2 - 1);
  (void)h2;
  std::vector<Walk> next;
  for (int i = 0; i < static_cast<int>(a.arcs.size()); ++i)
    if (i != d.arc) next.push_back(a.arcs[i]);
  for (auto* part : {&lo, &hi})
    if (auto n = normalize_arc(S, *part)) next.push_back(std::move(*n));
  auto r = make_arc_system(S, std::move(next));
  if (!r) throw Error(ErrorCode::NotCoordinateDisjoint, "arc surgery produced crossing arcs");
  return *r;
}

std::vector<ArcSystem> arc_surgery_path(const ArcSystem& a, const std::set<int>& target) {
  if (target.empty()) throw Error(ErrorCode::EmptySubsystem, "surgery target is empty");
  std::vector<ArcSystem> p{a};
  while (crossings_with(p.back(), target) > 0) {
    std::optional<ArcSystem> best;
    std::string best_sig;
    for (const auto& d : arc_innermost(p.back(), target)) {
      auto r = arc_surgery_step(p.back(), d);
      auto sig = double_to_spheres(r).signature();
      if (!best || sig < best_sig) {
        best = std::move(r);
        best_sig = std::move(sig);
      }
    }
    p.push_back(std::move(*best));
  }
  p.push_back(max_arc_subsystem(*a.surface, target));
  return p;
}

DoublingReport check_doubling_commutes(const ArcSystem& a, const std::set<int>& target) {
  DoublingReport r;
  auto fail = [&](const std::string& why) {
    r.ok = false;
    if (r.why.empty()) r.why = why;
  };
  auto P = arc_surgery_path(a, target);
  auto Q = surgery_path(double_to_spheres(a), target, Policy::min_result());
  r.arc_length = static_cast<int>(P.size()) - 1;
  r.sphere_length = Q.K();
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    auto dbl = double_to_spheres(P[i]);
    if (!is_valid_system(dbl)) {
      r.validates = false;
      fail("doubled entry " + std::to_string(i) + " is not a valid system");
    }
    if (i + 1 < static_cast<int>(P.size()) &&
        crossings_with(P[i], target) != intersection_number(dbl, target)) {
      r.crossings_match = false;
      fail("crossings differ at entry " + std::to_string(i));
    }
    if (i > Q.K() || dbl.signature() != Q.at(i).signature()) {
      if (r.first_mismatch < 0) r.first_mismatch = i;
      fail("paths differ at entry " + std::to_string(i));
      continue;
    }
    if (i + 1 >= static_cast<int>(P.size()) || crossings_with(P[i], target) == 0) continue;
    std::set<std::string> mine, theirs;
    for (const auto& d : arc_innermost(P[i], target))
      mine.insert(double_to_spheres(arc_surgery_step(P[i], d)).signature());
    for (const auto& e : all_single_steps(Q.entries[i], target)) theirs.insert(e.system.signature());
    if (mine != theirs) {
      r.successors_match = false;
      fail("successor sets differ at entry " + std::to_string(i));
    }
  }
  if (r.arc_length != r.sphere_length) fail("path lengths differ");
  return r;
}

std::vector<Walk> all_arcs(const Surface& S, int max_crossings) {
  std::set<Walk> out;
  for (int a = 0; a < S.arcs(); ++a) out.insert(max_arc(S, a));
  std::function<void(Walk&, int)> grow = [&](Walk& w, int left) {
    auto [h2, x2] = S.partner(w.back().hex, w.back().out);
    w.push_back({h2, x2, mod6(x2 + 3)});
    if (auto c = canonical_arc(S, w); c && self_crossings(S, *c) == 0) out.insert(*c);
    if (left > 0)
      for (int d : {2, 4}) {
        w.back().out = mod6(x2 + d);
        grow(w, left - 1);
      }
    w.pop_back();
  };
  for (int h = 0; h < S.hexagons; ++h)
    for (int b = 0; b < 6; b += 2) {
      Walk w{{h, b, mod6(b + 3)}};
      if (max_crossings > 0) grow(w, max_crossings - 1);
    }
  return {out.begin(), out.end()};
}

std::optional<Walk> random_arc(const Surface& S, std::mt19937_64& rng, int max_crossings) {
  std::uniform_int_distribution<int> hex(0, S.hexagons - 1), bnd(0, 2), two(0, 1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    int len = max_crossings <= 0 ? 0 : std::uniform_int_distribution<int>(0, max_crossings)(rng);
    int h = hex(rng), b = 2 * bnd(rng);
    Walk w;
    if (len == 0) {
      w.push_back({h, b, mod6(b + 2 * (1 + two(rng)))});
    } else {
      w.push_back({h, b, mod6(b + 3)});
      for (int i = 1; i <= len; ++i) {
        auto [h2, x2] = S.partner(w.back().hex, w.back().out);
        int out = i == len ? mod6(x2 + 3) : mod6(x2 + 2 * (1 + two(rng)));
        w.push_back({h2, x2, out});
      }
    }
    auto c = canonical_arc(S, w);
    if (c && self_crossings(S, *c) == 0) return c;
  }
  return std::nullopt;
}

ArcSystem random_arc_system(const Surface& S, std::mt19937_64& rng, int max_crossings, int size) {
  std::vector<Walk> arcs;
  size = std::min(size, S.arcs());
  for (int attempt = 0; attempt < 50 * size && static_cast<int>(arcs.size()) < size; ++attempt) {
    auto w = random_arc(S, rng, max_crossings);
    if (!w || std::find(arcs.begin(), arcs.end(), *w) != arcs.end()) continue;
    bool ok = true;
    for (const auto& o : arcs)
      if (crossings(S, o, *w) != 0) {
        ok = false;
        break;
      }
    if (ok) arcs.push_back(std::move(*w));
  }
  return *make_arc_system(S, std::move(arcs));
}

}  // namespace spherecx
