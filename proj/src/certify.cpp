#include "spherecx/certify.hpp"

#include <climits>

namespace spherecx {

const char* to_string(EdgeReason r) {
  switch (r) {
    case EdgeReason::Equal: return "equal";
    case EdgeReason::Contained: return "contained";
    case EdgeReason::SharedSphere: return "shared-sphere";
    case EdgeReason::Union: return "union";
    case EdgeReason::Hub: return "hub";
  }
  return "?";
}

bool DiameterCertificate::connected() const { return bound != INT_MAX; }

namespace {

std::string shared_key(const NormalSystem& a, const NormalSystem& b) {
  for (const auto& s : a.spheres())
    if (contains_sphere(b, s.key())) return s.key();
  return {};
}

int graph_diameter(int n, const std::vector<CertEdge>& edges) {
  std::vector<std::vector<long>> d(n, std::vector<long>(n, LONG_MAX / 4));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[e.a][e.b] = std::min<long>(d[e.a][e.b], e.weight);
    d[e.b][e.a] = d[e.a][e.b];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  long m = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::max(m, d[i][j]);
  return m >= LONG_MAX / 4 ? INT_MAX : static_cast<int>(m);
}

}  // namespace

CertEdge direct_edge(const NormalSystem& a0, const NormalSystem& b0) {
  auto a = a0.identified(), b = b0.identified();
  CertEdge e;
  if (a.signature() == b.signature()) return {-1, -1, 0, EdgeReason::Equal, {}};
  if (is_subsystem(a, b) || is_subsystem(b, a)) return {-1, -1, 1, EdgeReason::Contained, {}};
  if (auto k = shared_key(a, b); !k.empty()) return {-1, -1, 2, EdgeReason::SharedSphere, k};
  if (try_disjoint_union(a, b)) return {-1, -1, 2, EdgeReason::Union, {}};
  e.weight = -1;
  return e;
}

std::optional<CertEdge> hub_edge(const NormalSystem& a, const NormalSystem& b,
                                 const NormalSystem& h, int ia, int ib) {
  if (!is_valid_system(h)) return std::nullopt;
  if (shared_key(a, h).empty() || shared_key(b, h).empty()) return std::nullopt;
  return CertEdge{ia, ib, 4, EdgeReason::Hub, h.signature()};
}

DiameterCertificate certify_diameter(const std::vector<NormalSystem>& set,
                                     const std::vector<CertEdge>& extra) {
  DiameterCertificate c;
  const int n = static_cast<int>(set.size());
  for (const auto& s : set) c.members.push_back(s.signature());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto e = direct_edge(set[i], set[j]);
      if (e.weight < 0) continue;
      e.a = i;
      e.b = j;
      c.edges.push_back(e);
    }
  c.edges.insert(c.edges.end(), extra.begin(), extra.end());
  c.bound = graph_diameter(n, c.edges);
  return c;
}

bool verify(const DiameterCertificate& c, const std::vector<NormalSystem>& set,
            const std::vector<NormalSystem>& hubs) {
  const int n = static_cast<int>(set.size());
  if (static_cast<int>(c.members.size()) != n) return false;
  for (int i = 0; i < n; ++i)
    if (c.members[i] != set[i].signature()) return false;
  for (const auto& e : c.edges) {
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) return false;
    auto a = set[e.a].identified(), b = set[e.b].identified();
    bool ok = false;
    switch (e.reason) {
      case EdgeReason::Equal: ok = a.signature() == b.signature() && e.weight >= 0; break;
      case EdgeReason::Contained: ok = (is_subsystem(a, b) || is_subsystem(b, a)) && e.weight >= 1; break;
      case EdgeReason::SharedSphere:
        ok = contains_sphere(a, e.witness) && contains_sphere(b, e.witness) && e.weight >= 2;
        break;
      case EdgeReason::Union: ok = try_disjoint_union(a, b).has_value() && e.weight >= 2; break;
      case EdgeReason::Hub:
        for (const auto& h : hubs)
          if (h.signature() == e.witness && hub_edge(a, b, h, e.a, e.b)) ok = e.weight >= 4;
        break;
    }
    if (!ok) return false;
  }
  return graph_diameter(n, c.edges) == c.bound;
}

nlohmann::json to_json(const DiameterCertificate& c) {
  auto edges = nlohmann::json::array();
  for (const auto& e : c.edges)
    edges.push_back({{"a", e.a}, {"b", e.b}, {"w", e.weight}, {"why", to_string(e.reason)},
                     {"witness", e.witness}});
  return {{"members", c.members},
          {"edges", edges},
          {"bound", c.connected() ? nlohmann::json(c.bound) : nlohmann::json("inf")}};
}

}  // namespace spherecx
