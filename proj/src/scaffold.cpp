#include "spherecx/scaffold.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "spherecx/error.hpp"

namespace spherecx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotTrivalent: return "NotTrivalent";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::EmptySubsystem: return "EmptySubsystem";
    case ErrorCode::BadMatching: return "BadMatching";
    case ErrorCode::BadChi: return "BadChi";
    case ErrorCode::IncompatiblePieces: return "IncompatiblePieces";
    case ErrorCode::BoundaryParallelDisk: return "BoundaryParallelDisk";
    case ErrorCode::NestingInconsistent: return "NestingInconsistent";
    case ErrorCode::ScaffoldMismatch: return "ScaffoldMismatch";
    case ErrorCode::NotCoordinateDisjoint: return "NotCoordinateDisjoint";
    case ErrorCode::NotProperSubsystem: return "NotProperSubsystem";
    case ErrorCode::NotInnermost: return "NotInnermost";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadAlignment: return "BadAlignment";
    case ErrorCode::NoPathFoundWithinBudget: return "NoPathFoundWithinBudget";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::HypothesisNotCertified: return "HypothesisNotCertified";
    case ErrorCode::UnsupportedPreset: return "UnsupportedPreset";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Scaffold build_scaffold(int n, const std::vector<ScaffoldEdge>& edges,
                        std::vector<std::string> piece_names,
                        std::vector<std::string> sphere_names) {
  if (n < 2) throw Error(ErrorCode::RankTooSmall, "rank must be at least 2");
  int pieces = 2 * n - 2;
  if (!piece_names.empty() && static_cast<int>(piece_names.size()) != pieces)
    throw Error(ErrorCode::WrongRank, "expected " + std::to_string(pieces) + " pieces");
  int max_piece = -1;
  for (const auto& e : edges) max_piece = std::max({max_piece, e.piece_a, e.piece_b});
  if (max_piece + 1 != pieces || static_cast<int>(edges.size()) != 3 * n - 3)
    throw Error(ErrorCode::WrongRank, "rank " + std::to_string(n) + " needs " +
                                          std::to_string(pieces) + " pieces and " +
                                          std::to_string(3 * n - 3) + " spheres");

  Scaffold sc;
  sc.n_ = n;
  sc.slot_sphere_.assign(pieces, {-1, -1, -1});
  sc.across_.assign(pieces, {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const auto& ed = edges[e];
    for (auto [p, s] : {std::pair{ed.piece_a, ed.slot_a}, std::pair{ed.piece_b, ed.slot_b}}) {
      if (p < 0 || s < 0 || s > 2)
        throw Error(ErrorCode::NotTrivalent, "bad slot reference in edge " + std::to_string(e));
      if (sc.slot_sphere_[p][s] != -1)
        throw Error(ErrorCode::NotTrivalent, "slot used twice on piece " + std::to_string(p));
      sc.slot_sphere_[p][s] = e;
    }
    if (ed.piece_a == ed.piece_b && ed.slot_a == ed.slot_b)
      throw Error(ErrorCode::NotTrivalent, "edge glues a slot to itself");
    sc.ends_.push_back({SlotRef{ed.piece_a, ed.slot_a}, SlotRef{ed.piece_b, ed.slot_b}});
    sc.across_[ed.piece_a][ed.slot_a] = SlotRef{ed.piece_b, ed.slot_b};
    sc.across_[ed.piece_b][ed.slot_b] = SlotRef{ed.piece_a, ed.slot_a};
  }
  for (int p = 0; p < pieces; ++p)
    for (int s = 0; s < 3; ++s)
      if (sc.slot_sphere_[p][s] == -1)
        throw Error(ErrorCode::NotTrivalent, "piece " + std::to_string(p) + " slot " +
                                                 std::to_string(s) + " is unfilled");

  std::vector<int> comp(pieces);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (const auto& e : edges) comp[find(e.piece_a)] = find(e.piece_b);
  for (int p = 0; p < pieces; ++p)
    if (find(p) != find(0)) throw Error(ErrorCode::Disconnected, "scaffold graph is disconnected");

  for (int p = 0; p < pieces; ++p)
    sc.piece_names_.push_back(piece_names.empty() ? "P" + std::to_string(p + 1) : piece_names[p]);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    sc.sphere_names_.push_back(sphere_names.empty() ? "s" + std::to_string(e + 1)
                                                    : sphere_names[e]);
  sc.id_ = "n" + std::to_string(n) + ":" + scaffold_graph_canonical_form(sc);
  return sc;
}

int Scaffold::piece_index(const std::string& name) const {
  auto it = std::find(piece_names_.begin(), piece_names_.end(), name);
  if (it == piece_names_.end()) throw Error(ErrorCode::ParseError, "unknown piece " + name);
  return static_cast<int>(it - piece_names_.begin());
}

int Scaffold::sphere_index(const std::string& name) const {
  auto it = std::find(sphere_names_.begin(), sphere_names_.end(), name);
  if (it == sphere_names_.end()) throw Error(ErrorCode::ParseError, "unknown sphere " + name);
  return static_cast<int>(it - sphere_names_.begin());
}

std::vector<ScaffoldEdge> Scaffold::edges() const {
  std::vector<ScaffoldEdge> out;
  for (const auto& e : ends_) out.push_back({e[0].piece, e[0].slot, e[1].piece, e[1].slot});
  return out;
}

bool Scaffold::operator==(const Scaffold& o) const {
  return n_ == o.n_ && ends_ == o.ends_ && piece_names_ == o.piece_names_ &&
         sphere_names_ == o.sphere_names_;
}

nlohmann::json Scaffold::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["pieces"] = piece_names_;
  auto spheres = nlohmann::json::array();
  for (int e = 0; e < sphere_count(); ++e) {
    const auto& en = ends_[e];
    auto ends = nlohmann::json::array();
    for (const auto& end : en) ends.push_back(nlohmann::json::array({piece_names_[end.piece], end.slot}));
    spheres.push_back({{"id", sphere_names_[e]}, {"ends", ends}});
  }
  j["spheres"] = spheres;
  return j;
}

Scaffold Scaffold::from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    auto pieces = j.at("pieces").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) index[pieces[i]] = i;
    std::vector<ScaffoldEdge> edges;
    std::vector<std::string> names;
    for (const auto& s : j.at("spheres")) {
      names.push_back(s.at("id").get<std::string>());
      const auto& en = s.at("ends");
      auto pa = en.at(0).at(0).get<std::string>();
      auto pb = en.at(1).at(0).get<std::string>();
      if (!index.count(pa) || !index.count(pb))
        throw Error(ErrorCode::ParseError, "sphere references unknown piece");
      edges.push_back({index[pa], en.at(0).at(1).get<int>(), index[pb], en.at(1).at(1).get<int>()});
    }
    if (static_cast<int>(pieces.size()) != 2 * n - 2)
      throw Error(ErrorCode::WrongRank, "expected " + std::to_string(2 * n - 2) + " pieces");
    return build_scaffold(n, edges, pieces, names);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

std::string canonical_edge_string(const EdgeList& edges, int vertices) {
  std::vector<int> perm(vertices);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    EdgeList relabeled;
    for (auto [a, b] : edges) {
      int x = perm[a], y = perm[b];
      relabeled.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(relabeled.begin(), relabeled.end());
    std::string s;
    for (auto [a, b] : relabeled) s += std::to_string(a) + "-" + std::to_string(b) + ",";
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void extend(int vertices, std::vector<int>& remaining, EdgeList& current,
            std::vector<EdgeList>& out) {
  int i = 0;
  while (i < vertices && remaining[i] == 0) ++i;
  if (i == vertices) {
    out.push_back(current);
    return;
  }
  // Edges are generated in nondecreasing (i, j) order so each multiset appears once.
  int lo = i;
  if (!current.empty() && current.back().first == i) lo = current.back().second;
  for (int j = lo; j < vertices; ++j) {
    if (j == i && remaining[i] < 2) continue;
    if (j != i && remaining[j] == 0) continue;
    remaining[i] -= (j == i) ? 2 : 1;
    if (j != i) remaining[j] -= 1;
    current.emplace_back(i, j);
    extend(vertices, remaining, current, out);
    current.pop_back();
    remaining[i] += (j == i) ? 2 : 1;
    if (j != i) remaining[j] += 1;
  }
}

bool connected(const EdgeList& edges, int vertices) {
  std::vector<int> comp(vertices);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto [a, b] : edges) comp[find(a)] = find(b);
  for (int v = 0; v < vertices; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

Scaffold scaffold_from_edge_list(int n, const EdgeList& el) {
  int vertices = 2 * n - 2;
  std::vector<int> next_slot(vertices, 0);
  std::vector<ScaffoldEdge> edges;
  for (auto [a, b] : el) {
    int sa = next_slot[a]++;
    int sb = next_slot[b]++;
    edges.push_back({a, sa, b, sb});
  }
  return build_scaffold(n, edges);
}

}  // namespace

std::string scaffold_graph_canonical_form(const Scaffold& sc) {
  EdgeList el;
  for (int e = 0; e < sc.sphere_count(); ++e) el.emplace_back(sc.ends(e)[0].piece, sc.ends(e)[1].piece);
  return canonical_edge_string(el, sc.piece_count());
}

std::vector<Scaffold> enumerate_scaffolds(int n) {
  if (n < 2) throw Error(ErrorCode::RankTooSmall, "rank must be at least 2");
  int vertices = 2 * n - 2;
  std::vector<int> remaining(vertices, 3);
  EdgeList current;
  std::vector<EdgeList> all;
  extend(vertices, remaining, current, all);
  std::map<std::string, EdgeList> classes;
  for (const auto& el : all) {
    if (!connected(el, vertices)) continue;
    auto key = canonical_edge_string(el, vertices);
    classes.emplace(key, el);
  }
  std::vector<Scaffold> out;
  for (const auto& [key, el] : classes) out.push_back(scaffold_from_edge_list(n, el));
  return out;
}

Scaffold theta_scaffold() {
  return build_scaffold(2, {{0, 0, 1, 0}, {0, 1, 1, 1}, {0, 2, 1, 2}});
}

Scaffold dumbbell_scaffold() {
  return build_scaffold(2, {{0, 0, 0, 1}, {0, 2, 1, 2}, {1, 0, 1, 1}});
}

}  // namespace spherecx
