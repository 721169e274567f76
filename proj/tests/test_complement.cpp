#include "doctest.h"
#include "spherecx/complement.hpp"
#include "spherecx/enumerate.hpp"

using namespace spherecx;

namespace {
ScaffoldPtr theta() { return std::make_shared<const Scaffold>(theta_scaffold()); }
}  // namespace

TEST_CASE("complexity of scaffold subsystems") {
  auto sc = theta();
  auto full = scaffold_subsystem(sc, {0, 1, 2});
  auto c = complexity(full, {0});
  CHECK(c.C1 == 1);
  CHECK(c.C2 == 0);
  CHECK(c.C == 3);
  auto c2 = complexity(full, {0, 1});
  CHECK(c2.C == 2);
  auto two = scaffold_subsystem(sc, {0, 1});
  CHECK(complexity(two, {0}).C == 2);
  CHECK_THROWS_AS(complexity(full, {0, 1, 2}), Error);
}

TEST_CASE("hat subcomplex and ranks") {
  auto sc = theta();
  CHECK(is_in_hat_subcomplex(scaffold_subsystem(sc, {0})));
  CHECK_FALSE(is_in_hat_subcomplex(scaffold_subsystem(sc, {0, 1})));
  CHECK_FALSE(is_in_hat_subcomplex(scaffold_subsystem(sc, {0, 1, 2})));
  CHECK(tau_ranks(scaffold_subsystem(sc, {0})) == std::vector<int>{1});
}

TEST_CASE("complement components stay within 2n-2") {
  for (auto s : {theta_scaffold(), dumbbell_scaffold()}) {
    auto sc = std::make_shared<const Scaffold>(s);
    for (const auto& sys : enumerate_systems(sc, 3)) {
      std::vector<int> all(sys.size());
      for (int i = 0; i < sys.size(); ++i) all[i] = i;
      CHECK(region_graph(sys, all).components.size() <= 2u);
    }
  }
}

TEST_CASE("complexity never drops along a step without common child") {
  auto sc = theta();
  std::map<StepCase, int> tags;
  int common = 0;
  for (const auto& s : enumerate_systems(sc, 3)) {
    auto p = surgery_path(s, {0});
    for (int t = 1; t < p.K(); ++t)
      for (int m = 1; m < (1 << p.at(t - 1).size()) - 1; ++m) {
        std::vector<int> s1;
        for (int i = 0; i < p.at(t - 1).size(); ++i)
          if (m >> i & 1) s1.push_back(i);
        auto r = phi_map(p.entries[t - 1], p.entries[t], s1);
        if (r.common_child) {
          ++common;
          continue;
        }
        ++tags[r.tag];
        CHECK(r.consistent);
        CHECK(r.C_after >= r.C_before);
        CHECK((r.tag == StepCase::StrictIncrease) == (r.C_after > r.C_before));
        CHECK(r.C_after <= 3 * 2 - 2);
      }
  }
  CHECK(common == 36);
  CHECK(tags[StepCase::SurgeryInS1] == 4);
  CHECK(tags[StepCase::Y0WithoutS1] == 4);
}
