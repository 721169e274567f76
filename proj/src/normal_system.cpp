#include "spherecx/normal_system.hpp"

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>

namespace spherecx {

int NormalSystem::total_copies() const { return std::accumulate(mult_.begin(), mult_.end(), 0); }

std::vector<std::string> NormalSystem::keys() const {
  std::vector<std::string> k;
  for (const auto& s : spheres_) k.push_back(s.key());
  return k;
}

int NormalSystem::index_of(const std::string& key) const {
  auto it = std::lower_bound(spheres_.begin(), spheres_.end(), key,
                             [](const Sphere& s, const std::string& k) { return s.key() < k; });
  if (it == spheres_.end() || it->key() != key) return -1;
  return static_cast<int>(it - spheres_.begin());
}

std::string NormalSystem::signature() const {
  std::string sig;
  for (int i = 0; i < size(); ++i) {
    sig += spheres_[i].key();
    if (mult_[i] != 1) sig += "*" + std::to_string(mult_[i]);
    sig += ';';
  }
  return sig;
}

NormalSystem NormalSystem::identified() const {
  NormalSystem s = *this;
  std::fill(s.mult_.begin(), s.mult_.end(), 1);
  return s;
}

NormalSystem make_system(ScaffoldPtr sc, std::vector<Sphere> spheres, std::vector<int> mult,
                         bool keep_copies) {
  if (mult.empty()) mult.assign(spheres.size(), 1);
  std::vector<int> order(spheres.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return spheres[a].key() < spheres[b].key(); });
  NormalSystem out;
  out.sc_ = std::move(sc);
  for (int i : order) {
    if (!out.spheres_.empty() && out.spheres_.back().key() == spheres[i].key()) {
      if (keep_copies) out.mult_.back() += mult[i];
      continue;
    }
    out.spheres_.push_back(spheres[i]);
    out.mult_.push_back(keep_copies ? mult[i] : 1);
  }
  return out;
}

NormalSystem scaffold_subsystem(ScaffoldPtr sc, const std::set<int>& chosen) {
  if (chosen.empty()) throw Error(ErrorCode::EmptySubsystem, "no scaffold spheres chosen");
  std::vector<Sphere> s;
  for (int e : chosen) s.push_back(scaffold_sphere(*sc, e));
  return make_system(std::move(sc), std::move(s));
}

std::set<int> all_scaffold_spheres(const Scaffold& sc) {
  std::set<int> all;
  for (int e = 0; e < sc.sphere_count(); ++e) all.insert(e);
  return all;
}

int intersection_number(const NormalSystem& sys, const std::set<int>& target) {
  int total = 0;
  for (int i = 0; i < sys.size(); ++i)
    for (int e : target) total += sys.multiplicity(i) * sys.sphere(i).circles_over(sys.scaffold(), e);
  return total;
}

int intersection_number(const NormalSystem& sys) {
  int total = 0;
  for (int i = 0; i < sys.size(); ++i) total += sys.multiplicity(i) * sys.sphere(i).weight();
  return total;
}

bool contains_sphere(const NormalSystem& sys, const std::string& key) { return sys.index_of(key) >= 0; }

static void same_scaffold(const NormalSystem& a, const NormalSystem& b) {
  if (a.scaffold().id() != b.scaffold().id())
    throw Error(ErrorCode::ScaffoldMismatch, "systems live on different scaffolds");
}

bool is_subsystem(const NormalSystem& a, const NormalSystem& b) {
  same_scaffold(a, b);
  for (const auto& s : a.spheres())
    if (!contains_sphere(b, s.key())) return false;
  return true;
}

std::optional<NormalSystem> try_disjoint_union(const NormalSystem& a, const NormalSystem& b) {
  same_scaffold(a, b);
  for (const auto& x : a.spheres())
    for (const auto& y : b.spheres())
      if (!compatible(x, y)) return std::nullopt;
  std::vector<Sphere> all = a.spheres();
  all.insert(all.end(), b.spheres().begin(), b.spheres().end());
  return make_system(a.scaffold_ptr(), std::move(all));
}

NormalSystem disjoint_union(const NormalSystem& a, const NormalSystem& b) {
  auto u = try_disjoint_union(a, b);
  if (!u) throw Error(ErrorCode::NotCoordinateDisjoint, "some pair of spheres cannot be separated");
  return *u;
}

bool is_valid_system(const NormalSystem& s) {
  for (int i = 0; i < s.size(); ++i) {
    if (!is_embedded(s.sphere(i))) return false;
    for (int j = i + 1; j < s.size(); ++j)
      if (!compatible(s.sphere(i), s.sphere(j))) return false;
  }
  return true;
}

NormalSystem subsystem(const NormalSystem& sys, const std::vector<int>& indices) {
  std::vector<Sphere> s;
  std::vector<int> m;
  for (int i : indices) {
    s.push_back(sys.sphere(i));
    m.push_back(sys.multiplicity(i));
  }
  return make_system(sys.scaffold_ptr(), std::move(s), std::move(m), true);
}

std::vector<Lift> lifts_at(const NormalSystem& sys, int piece) {
  std::vector<Lift> out;
  for (int i = 0; i < sys.size(); ++i) {
    const auto& t = sys.sphere(i).tree();
    for (int v = 0; v < static_cast<int>(t.size()); ++v)
      if (t[v].piece == piece) out.push_back({i, v});
  }
  return out;
}

std::vector<Lift> circles_on(const NormalSystem& sys, int e) {
  auto end = sys.scaffold().ends(e)[0];
  std::vector<Lift> out;
  for (auto l : lifts_at(sys, end.piece))
    if (sys.sphere(l.sphere).tree()[l.vertex].nbr[end.slot] >= 0) out.push_back(l);
  return out;
}

int side_containing(const NormalSystem& sys, Lift a, Lift b) {
  auto r = relate(sys.sphere(a.sphere).tree(), a.vertex, sys.sphere(b.sphere).tree(), b.vertex);
  return r.side_of_second_containing_first();
}

std::set<std::pair<int, int>> circle_adjacency(const NormalSystem& sys, int e) {
  auto circ = circles_on(sys, e);
  const int m = static_cast<int>(circ.size());
  // side[k][i]: side of circle k containing circle i
  std::vector<std::vector<int>> side(m, std::vector<int>(m, -1));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      if (i != k) side[k][i] = side_containing(sys, circ[i], circ[k]);
  std::set<std::pair<int, int>> adj;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      bool separated = false;
      for (int k = 0; k < m && !separated; ++k)
        if (k != i && k != j && side[k][i] != side[k][j]) separated = true;
      if (!separated) adj.insert({i, j});
    }
  return adj;
}

namespace {

const char* type_name(int degree) {
  return degree == 1 ? "disk" : degree == 2 ? "cylinder" : "pants";
}

// Parent of each circle on e in the forest rooted at the face next to circle 0
// on its side 0.
std::vector<int> nesting_parents(const NormalSystem& sys, const std::vector<Lift>& circ) {
  const int m = static_cast<int>(circ.size());
  std::vector<int> parent(m, -1);
  if (m == 0) return parent;
  std::vector<std::vector<int>> side(m, std::vector<int>(m, -1));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      if (i != k) side[k][i] = side_containing(sys, circ[i], circ[k]);
  auto root_side = [&](int k) { return k == 0 ? 0 : side[k][0]; };
  std::vector<std::vector<int>> seps(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      if (k != j && side[k][j] != root_side(k)) seps[j].push_back(k);
  for (int j = 0; j < m; ++j) {
    int best = -1;
    for (int k : seps[j])
      if (best < 0 || seps[k].size() > seps[best].size()) best = k;
    parent[j] = best;
  }
  return parent;
}

}  // namespace

nlohmann::json to_json(const NormalSystem& sys) {
  const auto& sc = sys.scaffold();
  nlohmann::json j;
  j["scaffold"] = sc.id();
  auto pieces = nlohmann::json::array();
  auto copies = nlohmann::json::array();
  // record id of (sphere, vertex)
  std::map<std::pair<int, int>, std::string> rec;
  std::map<std::pair<int, int>, std::string> circle_of;  // (sphere, vertex*3+slot) -> circle id
  int next_circle = 0;
  for (int i = 0; i < sys.size(); ++i) {
    const auto& s = sys.sphere(i);
    if (s.scaffold_index() >= 0) {
      copies.push_back({{"sphere", sc.sphere_name(s.scaffold_index())}});
      continue;
    }
    const auto& t = s.tree();
    for (int v = 0; v < static_cast<int>(t.size()); ++v) rec[{i, v}] = "r" + std::to_string(rec.size());
    for (int v = 0; v < static_cast<int>(t.size()); ++v)
      for (int sl = 0; sl < 3; ++sl) {
        int w = t[v].nbr[sl];
        if (w < 0 || circle_of.count({i, v * 3 + sl})) continue;
        std::string c = "c" + std::to_string(next_circle++);
        circle_of[{i, v * 3 + sl}] = c;
        circle_of[{i, w * 3 + sc.across(t[v].piece, sl).slot}] = c;
      }
  }
  for (int i = 0; i < sys.size(); ++i) {
    const auto& t = sys.sphere(i).tree();
    if (sys.sphere(i).scaffold_index() >= 0) continue;
    for (int v = 0; v < static_cast<int>(t.size()); ++v) {
      nlohmann::json p;
      p["id"] = rec[{i, v}];
      p["piece"] = sc.piece_name(t[v].piece);
      p["type"] = type_name(t[v].degree());
      auto slots = nlohmann::json::array();
      auto circles = nlohmann::json::array();
      nlohmann::json sides = nlohmann::json::object();
      for (int sl = 0; sl < 3; ++sl) {
        if (t[v].nbr[sl] >= 0) {
          slots.push_back(sl);
          circles.push_back(circle_of[{i, v * 3 + sl}]);
        } else {
          sides[std::to_string(sl)] = t[v].col[sl];
        }
      }
      p["slots"] = slots;
      p["circles"] = circles;
      p["sides"] = sides;
      pieces.push_back(p);
    }
  }
  auto forests = nlohmann::json::array();
  for (int e = 0; e < sc.sphere_count(); ++e) {
    auto circ = circles_on(sys, e);
    auto end = sc.ends(e)[0];
    auto parents = nesting_parents(sys, circ);
    nlohmann::json f;
    f["sphere"] = sc.sphere_name(e);
    auto cs = nlohmann::json::array();
    std::vector<std::string> ids;
    for (auto l : circ) {
      const auto& t = sys.sphere(l.sphere).tree();
      int w = t[l.vertex].nbr[end.slot];
      ids.push_back(circle_of[{l.sphere, l.vertex * 3 + end.slot}]);
      cs.push_back({{"id", ids.back()}, {"a", rec[{l.sphere, l.vertex}]}, {"b", rec[{l.sphere, w}]}});
    }
    nlohmann::json par = nlohmann::json::object();
    for (size_t k = 0; k < circ.size(); ++k)
      par[ids[k]] = parents[k] < 0 ? nlohmann::json(nullptr) : nlohmann::json(ids[parents[k]]);
    f["circles"] = cs;
    f["parentOf"] = par;
    forests.push_back(f);
  }
  j["pieces"] = pieces;
  j["forests"] = forests;
  j["scaffoldCopies"] = copies;
  return j;
}

ValidationResult validate(ScaffoldPtr scp, const nlohmann::json& raw) {
  ValidationResult res;
  auto fail = [&](ErrorCode c, std::string m) { res.violations.push_back({c, std::move(m)}); };
  const auto& sc = *scp;
  try {
    if (raw.contains("scaffold") && raw.at("scaffold").get<std::string>() != sc.id()) {
      fail(ErrorCode::ScaffoldMismatch, "record refers to scaffold " + raw.at("scaffold").get<std::string>());
      return res;
    }
    struct Rec {
      std::string id;
      int piece;
      std::array<std::string, 3> circle;  // per slot, empty if none
      std::array<int, 3> side{-1, -1, -1};
      int degree = 0;
    };
    std::vector<Rec> recs;
    std::map<std::string, int> rec_index;
    const auto pieces = raw.value("pieces", nlohmann::json::array());
    for (const auto& p : pieces) {
      Rec r;
      r.id = p.at("id").get<std::string>();
      r.piece = sc.piece_index(p.at("piece").get<std::string>());
      auto slots = p.at("slots").get<std::vector<int>>();
      auto circles = p.at("circles").get<std::vector<std::string>>();
      if (slots.size() != circles.size() || slots.empty() || slots.size() > 3) {
        fail(ErrorCode::BadMatching, "piece " + r.id + " has inconsistent slots/circles");
        continue;
      }
      for (size_t k = 0; k < slots.size(); ++k) {
        if (slots[k] < 0 || slots[k] > 2 || !r.circle[slots[k]].empty()) {
          fail(ErrorCode::BadMatching, "piece " + r.id + " has a bad slot list");
          continue;
        }
        r.circle[slots[k]] = circles[k];
      }
      r.degree = static_cast<int>(slots.size());
      std::string type = p.value("type", type_name(r.degree));
      if (type != type_name(r.degree))
        fail(ErrorCode::BadMatching, "piece " + r.id + " type " + type + " does not match its slots");
      auto sides = p.value("sides", nlohmann::json::object());
      for (int sl = 0; sl < 3; ++sl) {
        if (!r.circle[sl].empty()) continue;
        auto key = std::to_string(sl);
        if (!sides.contains(key)) {
          fail(ErrorCode::BadMatching, "piece " + r.id + " lacks a side for slot " + key);
          r.side[sl] = 0;
        } else {
          r.side[sl] = sides.at(key).get<int>() ? 1 : 0;
        }
      }
      if (rec_index.count(r.id)) fail(ErrorCode::BadMatching, "duplicate piece id " + r.id);
      rec_index[r.id] = static_cast<int>(recs.size());
      recs.push_back(r);
    }

    // Per-piece type compatibility and condition (ii).
    std::map<int, std::vector<int>> by_piece;
    for (int k = 0; k < static_cast<int>(recs.size()); ++k) by_piece[recs[k].piece].push_back(k);
    for (const auto& [piece, ks] : by_piece) {
      for (int a : ks) {
        if (recs[a].degree != 1) continue;
        int i = 0;
        while (recs[a].circle[i].empty()) ++i;
        for (int b : ks) {
          if (recs[b].degree == 3 ||
              (recs[b].degree == 2 && recs[b].circle[i].empty())) {
            fail(ErrorCode::IncompatiblePieces,
                 "piece " + sc.piece_name(piece) + ": disk " + recs[a].id + " meets " + recs[b].id);
          }
        }
      }
    }
    for (const auto& r : recs) {
      if (r.degree != 1) continue;
      int c = -1;
      bool mono = true;
      for (int sl = 0; sl < 3; ++sl) {
        if (!r.circle[sl].empty()) continue;
        if (c < 0) c = r.side[sl];
        else if (c != r.side[sl]) mono = false;
      }
      if (mono) fail(ErrorCode::BoundaryParallelDisk, "disk " + r.id + " is parallel into the boundary");
    }

    // Matchings on the scaffold spheres.
    std::map<std::string, std::array<int, 2>> circle_ends;  // circle id -> (rec a, rec b)
    std::map<std::string, int> circle_sphere;
    std::map<int, nlohmann::json> forest_of;
    for (const auto& f : raw.value("forests", nlohmann::json::array())) {
      int e = sc.sphere_index(f.at("sphere").get<std::string>());
      forest_of[e] = f;
      auto end = sc.ends(e);
      for (const auto& c : f.value("circles", nlohmann::json::array())) {
        auto id = c.at("id").get<std::string>();
        auto a = c.at("a").get<std::string>();
        auto b = c.at("b").get<std::string>();
        if (circle_ends.count(id)) {
          fail(ErrorCode::BadMatching, "circle " + id + " listed twice");
          continue;
        }
        if (!rec_index.count(a) || !rec_index.count(b)) {
          fail(ErrorCode::BadMatching, "circle " + id + " refers to an unknown piece");
          continue;
        }
        int ra = rec_index[a], rb = rec_index[b];
        if (recs[ra].piece != end[0].piece || recs[ra].circle[end[0].slot] != id ||
            recs[rb].piece != end[1].piece || recs[rb].circle[end[1].slot] != id) {
          fail(ErrorCode::BadMatching, "circle " + id + " does not match its pieces' boundaries");
          continue;
        }
        circle_ends[id] = {ra, rb};
        circle_sphere[id] = e;
      }
    }
    for (const auto& r : recs)
      for (int sl = 0; sl < 3; ++sl)
        if (!r.circle[sl].empty() && !circle_ends.count(r.circle[sl]))
          fail(ErrorCode::BadMatching, "boundary circle " + r.circle[sl] + " of " + r.id + " is unmatched");
    if (!res.violations.empty()) return res;

    // Assemble components.
    std::map<std::string, int> circle_number;
    std::vector<std::string> circle_names;
    for (const auto& [id, ab] : circle_ends) {
      circle_number[id] = static_cast<int>(circle_names.size());
      circle_names.push_back(id);
    }
    const int nr = static_cast<int>(recs.size());
    std::vector<int> uf(nr);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    for (const auto& [id, ab] : circle_ends) uf[find(ab[0])] = find(ab[1]);
    std::map<int, std::vector<int>> comps;
    for (int k = 0; k < nr; ++k) comps[find(k)].push_back(k);
    std::vector<Sphere> spheres;
    for (const auto& [root, members] : comps) {
      int chi = 0;
      for (int k : members) chi += 2 - recs[k].degree;
      if (chi != 2) {
        fail(ErrorCode::BadChi, "component containing " + recs[members[0]].id + " has chi " +
                                    std::to_string(chi));
        continue;
      }
      std::map<int, int> local;
      for (int k : members) local[k] = static_cast<int>(local.size());
      Tree t(members.size());
      for (int k : members) {
        auto& v = t[local[k]];
        v.piece = recs[k].piece;
        for (int sl = 0; sl < 3; ++sl) {
          if (recs[k].circle[sl].empty()) {
            v.col[sl] = static_cast<std::uint8_t>(recs[k].side[sl]);
            continue;
          }
          auto ab = circle_ends[recs[k].circle[sl]];
          v.nbr[sl] = local[ab[0] == k && sc.ends(circle_sphere[recs[k].circle[sl]])[0].slot == sl ? ab[1] : ab[0]];
        }
      }
      CircleLabels labels(members.size(), {-1, -1, -1});
      for (int k : members)
        for (int sl = 0; sl < 3; ++sl)
          if (!recs[k].circle[sl].empty()) labels[local[k]][sl] = circle_number[recs[k].circle[sl]];
      auto norm = normalize(sc, t, labels);
      if (!norm.sphere || !norm.pruned.empty()) {
        fail(ErrorCode::BoundaryParallelDisk, "component containing " + recs[members[0]].id + " is not normal");
        continue;
      }
      if (!is_embedded(*norm.sphere)) {
        fail(ErrorCode::NestingInconsistent, "component containing " + recs[members[0]].id +
                                                 " cannot be embedded (its lifts cross)");
        continue;
      }
      spheres.push_back(*norm.sphere);
    }
    for (const auto& c : raw.value("scaffoldCopies", nlohmann::json::array()))
      spheres.push_back(scaffold_sphere(sc, sc.sphere_index(c.at("sphere").get<std::string>())));
    if (!res.violations.empty()) return res;
    for (size_t a = 0; a < spheres.size(); ++a)
      for (size_t b = a + 1; b < spheres.size(); ++b)
        if (!compatible(spheres[a], spheres[b]))
          fail(ErrorCode::NestingInconsistent, "two components cross each other");
    if (spheres.empty()) fail(ErrorCode::EmptySubsystem, "record has no spheres");
    if (!res.violations.empty()) return res;
    auto sys = make_system(scp, spheres);

    // Nesting forests, when given, must describe the same circle patterns.
    for (const auto& [e, f] : forest_of) {
      // Parallel copies were merged; their circles no longer appear separately.
      if (!f.contains("parentOf") || sys.size() < static_cast<int>(spheres.size())) continue;
      std::map<std::string, std::string> par;
      for (auto it = f.at("parentOf").begin(); it != f.at("parentOf").end(); ++it)
        par[it.key()] = it.value().is_null() ? "" : it.value().get<std::string>();
      // Adjacent = parent/child or siblings.
      std::set<std::pair<std::string, std::string>> given;
      for (const auto& [c, p] : par) {
        if (!p.empty()) given.insert(std::minmax(c, p));
        for (const auto& [d, q] : par)
          if (c < d && p == q) given.insert({c, d});
      }
      // Geometric adjacency, translated to record circle ids through labels.
      auto circ = circles_on(sys, e);
      auto adj = circle_adjacency(sys, e);
      auto slot0 = sc.ends(e)[0].slot;
      std::vector<std::string> name;
      for (auto l : circ) name.push_back(circle_names[sys.sphere(l.sphere).labels()[l.vertex][slot0]]);
      std::set<std::pair<std::string, std::string>> geometric;
      for (auto [i, j] : adj) geometric.insert(std::minmax(name[i], name[j]));
      if (given != geometric || par.size() != circ.size())
        fail(ErrorCode::NestingInconsistent, "nesting forest on " + sc.sphere_name(e) +
                                                 " does not match the circle pattern");
    }
    if (!res.violations.empty()) return res;
    res.system = std::move(sys);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::ParseError, ex.what());
  } catch (const Error& ex) {
    fail(ex.code(), ex.what());
  }
  return res;
}

}  // namespace spherecx
