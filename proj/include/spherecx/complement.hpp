#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherecx/surgery.hpp"

namespace spherecx {

struct ComponentSummary {
  int regions = 0;
  int rank = 0;
  bool marked = false;  // contains a sphere of the marked subsystem
  bool pseudo = false;  // product region between retained parallel copies
};

/// Regions of the pieces cut along a subsystem, glued across scaffold faces.
/// A region is named by its piece and its side of every lift meeting that piece.
struct RegionGraph {
  struct Region {
    int piece;
    std::vector<int> signs;  // aligned with lifts_at(cut, piece)
  };
  std::vector<Region> regions;
  std::vector<std::array<int, 3>> gluings;  // (region, region, scaffold sphere)
  std::vector<int> component_of;            // per region; pseudo-components have no regions
  std::vector<ComponentSummary> components;
  int copies = 0;  // sphere copies cut along

  /// Region of piece p with the given sign vector, or -1.
  int region_with(int piece, const std::vector<int>& signs) const;
};

/// Cut sys along the spheres with the given indices; mark components holding
/// a sphere from `marked` (indices into sys, disjoint from cut).
RegionGraph region_graph(const NormalSystem& sys, const std::vector<int>& cut,
                         const std::vector<int>& marked = {});

struct Complexity {
  int C1 = 0, C2 = 0, C = 0;
  RegionGraph graph;
};
/// S1 given as sphere indices of sys. Throws NotProperSubsystem.
Complexity complexity(const NormalSystem& sys, const std::vector<int>& s1);

bool is_in_hat_subcomplex(const NormalSystem& sys);
std::vector<int> tau_ranks(const NormalSystem& sys);

enum class StepCase { SurgeryInS1, Y0WithoutS1, SplitWithSimplyConnectedSide, StrictIncrease };
const char* to_string(StepCase c);

struct PhiReport {
  bool common_child = false;  // hypothesis of the monotonicity lemma fails
  StepCase tag = StepCase::StrictIncrease;
  int C_before = 0, C_after = 0;
  std::vector<int> s1_after;   // indices in the system after the step
  int y0 = -1;                 // component of the complement of S2 containing the disk
  bool y0_marked = false;
  /// Components of the un-identified complement mapping onto Y0 (rank, marked).
  std::vector<std::pair<int, bool>> preimage;
  /// Other components matched with components before the step, by index.
  std::vector<std::pair<int, int>> matched;
  bool consistent = true;      // the component bookkeeping balanced
};

/// Analyses one surgery step (after = single_surgery_step(before, ...)) relative
/// to the subsystem S1 (indices into before.system).
PhiReport phi_map(const PathEntry& before, const PathEntry& after, const std::vector<int>& s1);

nlohmann::json complement_report(const NormalSystem& sys, const std::vector<int>& s1);

}  // namespace spherecx
