#include <random>

#include "doctest.h"
#include "spherecx/enumerate.hpp"
#include "spherecx/projection.hpp"

using namespace spherecx;

namespace {
ScaffoldPtr theta() { return std::make_shared<const Scaffold>(theta_scaffold()); }
}  // namespace

TEST_CASE("constants at ranks 2 and 3") {
  auto m = MMConstants::for_rank(2);
  CHECK(m.C1 == 36);
  CHECK(m.C2 == 40);
  CHECK(m.C3 == 80);
  CHECK(m.C4 == 336);
  CHECK(m.B_num == 1);
  CHECK(m.B_den == 339);
  CHECK(m.C == 80);
  auto m3 = MMConstants::for_rank(3);
  CHECK(m3.C2 == 64);
  CHECK(m3.B_den == 531);
  auto o = MMConstants::with_C1(2, 100);
  CHECK(o.C2 == 104);
  CHECK(o.provenance != m.provenance);
}

TEST_CASE("projection values on a fixed path") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  auto g = surgery_path(systems[20], {0, 1, 2});
  REQUIRE(g.K() == 3);
  CHECK(project(systems[0], g).k == 3);
  CHECK(project(systems[5], g).k == 3);
  CHECK(project(systems[10], g).k == 3);
  CHECK(project(systems[30], g).k == 2);
  CHECK(project(systems[50], g).k == 0);
  // points of the path project no later than themselves
  for (int t = 0; t <= g.K(); ++t) CHECK(project(g.at(t), g).k <= t);
}

TEST_CASE("exact and upper projections agree and certificates verify") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 30; ++it) {
    auto g = surgery_path(systems[rng() % systems.size()], {0, 2});
    const auto& s = systems[rng() % systems.size()];
    auto ex = project(s, g, ProjectionMode::Exact);
    auto up = project(s, g, ProjectionMode::CertifiedUpper);
    CHECK_FALSE(ex.fell_back);
    CHECK(ex.k == up.k);
    for (const auto& sp : ex.spheres) CHECK(verify(sp, g));
  }
}

TEST_CASE("retraction, lipschitz and contraction probes") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  auto mm = MMConstants::for_rank(2);
  auto g = surgery_path(systems[20], {0, 1, 2});
  std::vector<int> ts{0, 1, 2, 3};
  CHECK(check_coarse_retraction(g, ts).passed());
  auto v = systems[20];
  auto w = scaffold_subsystem(sc, {0, 1, 2});
  NormalSystem sub = scaffold_subsystem(sc, {0});
  CHECK(check_coarse_lipschitz(g, {{w, sub}}, mm).passed());
  CHECK_THROWS_AS(check_coarse_lipschitz(g, {{sub, scaffold_subsystem(sc, {1})}}, mm), Error);
  // adjacent distinct systems are too close to the path for B = 1/339
  auto r = check_strong_contraction(g, {{w, sub}, {v, v}}, mm);
  CHECK(r.count(ProbeStatus::Uncertified) == 1);
  CHECK(r.count(ProbeStatus::Pass) == 1);
  CHECK(r.count(ProbeStatus::Fail) == 0);
}

TEST_CASE("interval analysis stays within the rank bounds") {
  auto sc = theta();
  for (const auto& s : enumerate_systems(sc, 4)) {
    if (s.size() < 2) continue;
    auto g = surgery_path(s, {0, 1, 2});
    std::set<int> s1{0}, s2;
    for (int i = 1; i < s.size(); ++i) s2.insert(i);
    auto ia = interval_analysis(g, s1, s2);
    CHECK(ia.ok());
    CHECK(ia.blocks.size() <= 9u);
    CHECK(ia.total.bound <= 36);
  }
}

TEST_CASE("scaffold subsystems are closed under surgery") {
  auto sc = theta();
  std::vector<NormalSystem> samples;
  for (const auto& s : enumerate_systems(sc, 0)) samples.push_back(s);
  auto rep = check_subcomplex_closure([](const NormalSystem& s) { return intersection_number(s) == 0; },
                                      samples);
  CHECK(rep.closed());
  CHECK(rep.paths > 0);
}
