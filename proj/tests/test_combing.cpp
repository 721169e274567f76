#include <random>

#include "doctest.h"
#include "spherecx/combing.hpp"
#include "spherecx/enumerate.hpp"

using namespace spherecx;

namespace {

ScaffoldPtr theta() { return std::make_shared<const Scaffold>(theta_scaffold()); }

bool same_entries(const SurgeryPath& a, const SurgeryPath& b) {
  if (a.K() != b.K()) return false;
  for (int t = 0; t <= a.K(); ++t)
    if (!(a.at(t).identified() == b.at(t).identified())) return false;
  return true;
}

}  // namespace

TEST_CASE("collapse keeps descendants only") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  for (const auto& s : systems) {
    if (s.size() < 2) continue;
    auto p = surgery_path(s, {0, 1, 2});
    auto c = comb_by_collapse(p, std::set<int>{0});
    CHECK(c.K() == p.K());
    CHECK(c.start().size() == 1);
    CHECK(is_generalized_surgery_path(c));
    for (int t = 0; t <= c.K(); ++t) CHECK(is_subsystem(c.at(t), p.at(t)));
  }
}

TEST_CASE("expansion with a smaller disk inside a non-innermost one") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 4);
  const auto& super = systems[25];
  const auto& sub = systems[33];
  REQUIRE(super.signature() == "s1;t(0(1^0(0(1^01)1^))10);t(0(1^01)10);");
  REQUIRE(sub.signature() == "s1;t(0(1^01)10);");
  auto ex = comb_by_expansion(surgery_path(sub, {0}), super);
  CHECK(ex.refined == 1);
  CHECK(ex.waits.size() == 1);
  CHECK(ex.path.K() == 3);
  CHECK(ex.adjusted.K() == 3);
  CHECK(is_generalized_surgery_path(ex.path));
  CHECK(same_entries(comb_by_collapse(ex.path, sub), ex.adjusted));
}

TEST_CASE("diagrams over random columns pass the checker") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int it = 0; it < 40; ++it) {
    const auto& a = systems[rng() % systems.size()];
    std::vector<NormalSystem> col{a};
    for (int j = 1; j <= 4; ++j) {
      std::vector<const NormalSystem*> c;
      for (const auto& s : systems)
        if (j % 2 ? is_subsystem(s, col.back()) : is_subsystem(col.back(), s)) c.push_back(&s);
      col.push_back(*c[rng() % c.size()]);
    }
    auto d = build_combing_diagram(col, surgery_path(a, {0, 2}, Policy::seeded(rng())));
    auto chk = check_diagram(d, col);
    CHECK_MESSAGE(chk.ok, chk.why);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("zig-zags and contractions") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  std::mt19937_64 rng(11);
  const int C2 = 40;
  for (int it = 0; it < 20; ++it) {
    const auto& a = systems[rng() % systems.size()];
    const auto& b = systems[rng() % systems.size()];
    auto z = zigzag_between(a, b, 8);
    CHECK(is_zigzag(z.entries));
    CHECK(z.length() == 1 << (z.k + 1));
    CHECK(z.entries.front() == a);
    CHECK(z.entries.back() == b);
    auto d = build_combing_diagram(z.entries, surgery_path(a, {1}, Policy::seeded(rng())));
    auto w = contract_w_path(d, C2);
    CHECK(w.ok);
    CHECK(w.prefix.bound <= C2);
    auto zc = contract_zigzag(d, C2);
    CHECK(zc.ok);
    CHECK(zc.telescoped == (2 + C2) * (1L << (zc.k + 1)));
  }
}

TEST_CASE("column entries must be nested") {
  auto sc = theta();
  auto a = scaffold_subsystem(sc, {0}), b = scaffold_subsystem(sc, {1});
  CHECK_THROWS_AS(build_combing_diagram({a, b}, surgery_path(a, {2})), Error);
}
