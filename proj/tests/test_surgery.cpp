#include <random>

#include "doctest.h"
#include "spherecx/enumerate.hpp"
#include "spherecx/surgery.hpp"

using namespace spherecx;
using nlohmann::json;

namespace {

ScaffoldPtr theta() { return std::make_shared<const Scaffold>(theta_scaffold()); }

NormalSystem one_circle(const ScaffoldPtr& sc, int twist) {
  json rec{{"scaffold", sc->id()},
           {"pieces",
            {{{"id", "a"}, {"piece", "P1"}, {"type", "disk"}, {"slots", {0}}, {"circles", {"c"}},
              {"sides", {{"1", 0}, {"2", 1}}}},
             {{"id", "b"}, {"piece", "P2"}, {"type", "disk"}, {"slots", {0}}, {"circles", {"c"}},
              {"sides", {{"1", twist}, {"2", 1 - twist}}}}}},
           {"forests", {{{"sphere", "s1"}, {"circles", {{{"id", "c"}, {"a", "a"}, {"b", "b"}}}}}}}};
  return *validate(sc, rec).system;
}

std::vector<std::string> sigs(const SurgeryPath& p) {
  std::vector<std::string> out;
  for (int t = 0; t <= p.K(); ++t) out.push_back(p.at(t).signature());
  return out;
}

}  // namespace

TEST_CASE("one surgery splits a one-circle sphere") {
  auto sc = theta();
  auto s = one_circle(sc, 1);
  CHECK(s.signature() == "t(0(1^01)10);");
  CHECK(innermost_candidates(s, {0}).size() == 2);
  auto p = surgery_path(s, {0});
  CHECK(sigs(p) == std::vector<std::string>{"t(0(1^01)10);", "s1;s2;", "s0;"});
  CHECK(p.entries.back().terminal);
  CHECK(p.entries[1].step->child_keys.size() == 2);
}

TEST_CASE("parallel children merge, or are kept as copies") {
  auto sc = theta();
  auto s = one_circle(sc, 0);
  auto p = surgery_path(s, {0});
  CHECK(sigs(p) == std::vector<std::string>{"t(0(1^01)01);", "s1;", "s0;"});
  CHECK(p.entries[1].step->merged.size() == 1);
  auto k = surgery_path(s, {0}, Policy::lex(), PathMode::KeepCopies);
  CHECK(k.at(1).signature() == "s1*2;");
  // the two innermost disks lead to different systems
  std::set<std::string> next;
  for (const auto& e : all_single_steps(initial_entry(s), {0})) next.insert(e.system.signature());
  CHECK(next == std::set<std::string>{"s1;", "s2;"});
}

TEST_CASE("surgery paths decrease intersection and stay adjacent") {
  auto sc = theta();
  auto systems = enumerate_systems(sc, 3);
  std::mt19937_64 rng(5);
  int steps = 0;
  for (const auto& s : systems)
    for (std::set<int> t : {std::set<int>{0}, {1, 2}, {0, 1, 2}}) {
      for (auto pol : {Policy::lex(), Policy::seeded(rng()), Policy::min_result()}) {
        auto p = surgery_path(s, t, pol);
        CHECK(p.at(p.K()) == scaffold_subsystem(sc, t));
        for (int i = 1; i <= p.K(); ++i) {
          CHECK(try_disjoint_union(p.at(i - 1), p.at(i)).has_value());
          if (p.entries[i].terminal) continue;
          ++steps;
          CHECK(intersection_number(p.at(i), t) < intersection_number(p.at(i - 1), t));
        }
        CHECK(intersection_number(p.at(p.K() - 1), t) == 0);
      }
    }
  CHECK(steps > 200);
}

TEST_CASE("provenance covers every sphere") {
  auto sc = theta();
  for (const auto& s : enumerate_systems(sc, 3)) {
    auto p = surgery_path(s, {0, 1});
    for (int t = 0; t <= p.K(); ++t) {
      std::set<int> all;
      for (int i = 0; i < s.size(); ++i) all.insert(i);
      CHECK(descendant_indices(p, all, t).size() == static_cast<size_t>(p.at(t).size()));
    }
  }
}

TEST_CASE("waits strip back to the same path") {
  auto sc = theta();
  auto s = one_circle(sc, 1);
  auto p = surgery_path(s, {0});
  auto w = insert_waits(p, {0, 1, 1});
  CHECK(w.K() == p.K() + 3);
  CHECK(stripped_signatures(w) == stripped_signatures(p));
  CHECK(strip_waits(w).K() == p.K());
  auto ft = fellow_travels_after(p, w, 1);
  CHECK(ft.ok);
  CHECK(ft.offset == 3);
}

TEST_CASE("surgery errors") {
  auto sc = theta();
  CHECK_THROWS_AS(surgery_path(one_circle(sc, 1), {}), Error);
  auto e = initial_entry(one_circle(sc, 1));
  CHECK_THROWS_AS(single_surgery_step(e, {0}, DiskChoice{0, 5, 0}), Error);
}
