#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/certify.hpp"
#include "spherecx/surgery.hpp"

namespace spherecx {

/// S⁰ ⊇ S¹ ⊆ S² ⊇ ... : even entries are tops, odd entries bottoms.
struct ZigZag {
  std::vector<NormalSystem> entries;
  int found_length = 0;  // before padding
  int k = 0;             // padded length is 2^{k+1}
  int d_lower = 0, d_upper = 0;

  int length() const { return static_cast<int>(entries.size()) - 1; }
};

/// Checks the alternating containments (repeats allowed).
bool is_zigzag(const std::vector<NormalSystem>& entries);

/// Rows of equal length; row j starts at column entry j.
struct CombingDiagram {
  std::vector<SurgeryPath> rows;
  int K() const { return rows.empty() ? -1 : rows.front().K(); }
};

SurgeryPath comb_by_collapse(const SurgeryPath& p, const std::set<int>& sub);
/// Collapse to the descendants of a subsystem given by its spheres.
SurgeryPath comb_by_collapse(const SurgeryPath& p, const NormalSystem& sub);

struct Expansion {
  SurgeryPath path;          // from the super-system
  SurgeryPath adjusted;      // the input path with the necessary waits
  std::vector<int> waits;    // insert_waits positions (input indexing) producing `adjusted`
  int innermost_hits = 0;    // steps where the input disk was innermost for the super-system
  int refined = 0;           // steps using a smaller disk inside the input disk
  int tail = 0;              // extra steps after the input was already disjoint
};
Expansion comb_by_expansion(const SurgeryPath& sub_path, const NormalSystem& super);

CombingDiagram build_combing_diagram(const std::vector<NormalSystem>& column,
                                     const SurgeryPath& base);

/// Generalized surgery path check by replaying the surgery (not trusting step records).
bool is_generalized_surgery_path(const SurgeryPath& p, std::string* why = nullptr);

struct DiagramCheck {
  bool ok = true;
  bool rows_are_paths = true, common_end = true, descendants = true, left_column = true;
  std::string why;
};
DiagramCheck check_diagram(const CombingDiagram& d, const std::vector<NormalSystem>& column);

/// Shortest chain of containments inside a pool of systems from S to S′,
/// returned as a padded zig-zag. Throws NoPathFoundWithinBudget.
ZigZag zigzag_between(const NormalSystem& s, const NormalSystem& t, int distance_upper,
                      const std::vector<NormalSystem>& pool = {});

/// Candidate systems for constructive moves between s and t: every valid
/// system built from the spheres of s and t, the scaffold spheres, the
/// spheres met on surgery paths from s and t, and the low-weight spheres.
std::vector<NormalSystem> move_pool(const NormalSystem& s, const NormalSystem& t);
/// Shortest containment chain from s to t through the pool (s and t are
/// added to it); empty if none within max_len.
std::vector<NormalSystem> shortest_move_chain(const NormalSystem& s, const NormalSystem& t,
                                              int max_len, std::vector<NormalSystem> pool = {});

struct WContraction {
  int t = 0;
  std::optional<int> common_descendant;  // first time rows 1 and 3 share a sphere
  bool branch_small_diameter = false;    // whole row 0 already within C2
  DiameterCertificate prefix;            // row 0 up to t
  FellowTravel travel;                   // rows 0 and 4 after t
  int C2 = 0;
  bool ok = false;
};
WContraction contract_w_path(const CombingDiagram& d, int C2, int row0 = 0, int row4 = 4,
                             int from = 0);

struct ZContraction {
  int k = 0;
  std::vector<int> t;                      // t_1..t_k
  std::vector<int> j;                      // j_1..j_{k-1}
  std::vector<DiameterCertificate> level;  // per level, column j_l over [t_{l-1}, t_l]
  DiameterCertificate prefix;              // row 0 over [0, t_k]
  long telescoped = 0;                     // (2 + C2) 2^{k+1}
  FellowTravel travel;
  bool ok = false;
};
ZContraction contract_zigzag(const CombingDiagram& d, int C2);

nlohmann::json to_json(const CombingDiagram& d);

}  // namespace spherecx
