#include <set>

#include "doctest.h"
#include "spherecx/arc_oracle.hpp"
#include "spherecx/enumerate.hpp"

using namespace spherecx;

namespace {
ScaffoldPtr ptr(Scaffold s) { return std::make_shared<const Scaffold>(std::move(s)); }
}  // namespace

TEST_CASE("weight zero gives the scaffold subsystems") {
  CHECK(enumerate_systems(ptr(theta_scaffold()), 0).size() == 7);
  CHECK(enumerate_systems(ptr(dumbbell_scaffold()), 0).size() == 7);
  auto n3 = enumerate_scaffolds(3);
  for (auto& sc : n3) CHECK(enumerate_systems(ptr(sc), 0).size() == 63);
}

TEST_CASE("golden counts") {
  auto theta = ptr(theta_scaffold()), dumbbell = ptr(dumbbell_scaffold());
  CHECK(enumerate_spheres(*theta, 1).size() == 9);
  CHECK(enumerate_systems(theta, 1).size() == 31);
  CHECK(enumerate_spheres(*theta, 3).size() == 21);
  CHECK(enumerate_systems(theta, 3).size() == 55);
  CHECK(enumerate_systems(theta, 4).size() == 79);
  CHECK(enumerate_systems(dumbbell, 1).size() == 15);
  CHECK(enumerate_systems(dumbbell, 3).size() == 31);
  CHECK(enumerate_systems(dumbbell, 4).size() == 55);
}

TEST_CASE("serial and parallel enumeration agree") {
  for (auto sc : {ptr(theta_scaffold()), ptr(dumbbell_scaffold())})
    for (int W : {1, 3}) {
      auto a = enumerate_systems(sc, W), b = enumerate_systems_serial(sc, W);
      REQUIRE(a.size() == b.size());
      for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].signature() == b[i].signature());
    }
}

TEST_CASE("no duplicates and every system is valid") {
  auto sc = ptr(theta_scaffold());
  std::set<std::string> seen;
  for (const auto& s : enumerate_systems(sc, 3)) {
    CHECK(seen.insert(s.signature()).second);
    CHECK(is_valid_system(s));
    CHECK(intersection_number(s) <= 3);
    CHECK(s.size() <= 3);
  }
}

TEST_CASE("theta weight one against doubled arcs") {
  // the double of the one-holed torus is the theta graph
  const auto& S = surface_preset(1, 1);
  CHECK(scaffold_graph_canonical_form(*S.scaffold) == scaffold_graph_canonical_form(theta_scaffold()));
  auto systems = enumerate_systems(S.scaffold, 1);
  CHECK(systems.size() == 31);
  std::set<std::string> sigs;
  for (const auto& s : systems) sigs.insert(s.signature());
  auto arcs = all_arcs(S, 1);
  CHECK(arcs.size() == 6);
  // every disjoint family of these arcs doubles to an enumerated system
  int families = 0;
  for (unsigned m = 1; m < (1u << arcs.size()); ++m) {
    std::vector<Walk> ws;
    int w = 0;
    for (size_t i = 0; i < arcs.size(); ++i)
      if (m >> i & 1) {
        ws.push_back(arcs[i]);
        for (int e = 0; e < S.arcs(); ++e) w += crossings_with_max_arc(S, arcs[i], e);
      }
    auto a = make_arc_system(S, ws);
    if (!a || w > 1) continue;
    ++families;
    CHECK(sigs.count(double_to_spheres(*a).signature()) == 1);
  }
  CHECK(families == 19);
}
