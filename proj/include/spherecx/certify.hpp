#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/normal_system.hpp"

namespace spherecx {

/// Why two systems are within a given distance in the sphere complex.
enum class EdgeReason {
  Equal,        // 0
  Contained,    // 1: one is a subsystem of the other
  SharedSphere, // 2: A ⊇ {s} ⊆ B
  Union,        // 2: A ⊆ A ∪ B ⊇ B
  Hub,          // 4: A ⊇ A∩H ... through an exhibited middle system H sharing a sphere with both
};
const char* to_string(EdgeReason r);

struct CertEdge {
  int a = -1, b = -1;
  int weight = 0;
  EdgeReason reason = EdgeReason::Equal;
  std::string witness;  // shared key or hub signature
};

/// An upper bound on the diameter of a finite set of systems: a weighted
/// graph of individually checkable edges, the bound being its weighted
/// diameter.
struct DiameterCertificate {
  std::vector<std::string> members;  // signatures
  std::vector<CertEdge> edges;
  int bound = 0;                     // INT_MAX when the graph is disconnected
  bool connected() const;
};

/// Best local certificate between two systems (weight -1 if none applies).
CertEdge direct_edge(const NormalSystem& a, const NormalSystem& b);

/// Certificate over `set` using direct edges between every pair, plus any
/// caller-supplied extra edges (e.g. hub edges).
DiameterCertificate certify_diameter(const std::vector<NormalSystem>& set,
                                     const std::vector<CertEdge>& extra = {});

/// Hub edge a-b of weight 4 if h is a valid system sharing a sphere with both.
std::optional<CertEdge> hub_edge(const NormalSystem& a, const NormalSystem& b,
                                 const NormalSystem& h, int ia, int ib);

/// Re-checks every edge against the systems and recomputes the bound.
bool verify(const DiameterCertificate& c, const std::vector<NormalSystem>& set,
            const std::vector<NormalSystem>& hubs = {});

nlohmann::json to_json(const DiameterCertificate& c);

}  // namespace spherecx
