#include "doctest.h"
#include "spherecx/normal_system.hpp"

using namespace spherecx;
using nlohmann::json;

namespace {

ScaffoldPtr theta() { return std::make_shared<const Scaffold>(theta_scaffold()); }

// Disk(slot 0) in both pieces glued along s1; twist selects how the sides of
// the two disks line up.
json one_circle_record(const Scaffold& sc, int twist) {
  return json{{"scaffold", sc.id()},
              {"pieces",
               {{{"id", "a"}, {"piece", "P1"}, {"type", "disk"}, {"slots", {0}}, {"circles", {"c"}},
                 {"sides", {{"1", 0}, {"2", 1}}}},
                {{"id", "b"}, {"piece", "P2"}, {"type", "disk"}, {"slots", {0}}, {"circles", {"c"}},
                 {"sides", {{"1", twist}, {"2", 1 - twist}}}}}},
              {"forests", {{{"sphere", "s1"}, {"circles", {{{"id", "c"}, {"a", "a"}, {"b", "b"}}}}}}}};
}

bool has_code(const ValidationResult& r, ErrorCode c) {
  for (const auto& v : r.violations)
    if (v.code == c) return true;
  return false;
}

}  // namespace

TEST_CASE("scaffold subsystems have no circles") {
  auto sc = theta();
  auto s1 = scaffold_subsystem(sc, {0});
  CHECK(s1.size() == 1);
  CHECK(intersection_number(s1) == 0);
  auto full = scaffold_subsystem(sc, {0, 1, 2});
  CHECK(full.size() == 3);
  CHECK(is_valid_system(full));
  CHECK_THROWS_AS(scaffold_subsystem(sc, {}), Error);
  auto rt = validate(sc, to_json(full));
  REQUIRE(rt.ok());
  CHECK(*rt.system == full);
}

TEST_CASE("one-circle normal spheres") {
  auto sc = theta();
  for (int twist = 0; twist < 2; ++twist) {
    auto r = validate(sc, one_circle_record(*sc, twist));
    REQUIRE(r.ok());
    const auto& sys = *r.system;
    CHECK(sys.size() == 1);
    CHECK(intersection_number(sys, {0}) == 1);
    CHECK(intersection_number(sys, {1}) == 0);
    CHECK(intersection_number(sys, {1, 2}) == 0);
    // round trip through the raw record
    auto again = validate(sc, to_json(sys));
    REQUIRE(again.ok());
    CHECK(*again.system == sys);
    // it crosses s1, so no union certificate exists
    CHECK_FALSE(try_disjoint_union(sys, scaffold_subsystem(sc, {0})).has_value());
    CHECK_THROWS_AS(disjoint_union(sys, scaffold_subsystem(sc, {0})), Error);
  }
  auto a = validate(sc, one_circle_record(*sc, 0));
  auto b = validate(sc, one_circle_record(*sc, 1));
  CHECK(a.system->sphere(0).key() != b.system->sphere(0).key());
}

TEST_CASE("validation violations") {
  auto sc = theta();
  // two cylinders glued along s1 and s2 form a torus
  json torus{{"pieces",
              {{{"id", "a"}, {"piece", "P1"}, {"slots", {0, 1}}, {"circles", {"x", "y"}}, {"sides", {{"2", 0}}}},
               {{"id", "b"}, {"piece", "P2"}, {"slots", {0, 1}}, {"circles", {"x", "y"}}, {"sides", {{"2", 1}}}}}},
             {"forests",
              {{{"sphere", "s1"}, {"circles", {{{"id", "x"}, {"a", "a"}, {"b", "b"}}}}},
               {{"sphere", "s2"}, {"circles", {{{"id", "y"}, {"a", "a"}, {"b", "b"}}}}}}}};
  auto r = validate(sc, torus);
  CHECK_FALSE(r.ok());
  CHECK(has_code(r, ErrorCode::BadChi));

  auto rec = one_circle_record(*sc, 0);
  rec["pieces"].push_back({{"id", "p"}, {"piece", "P1"}, {"slots", {0, 1, 2}}, {"circles", {"u", "v", "w"}}});
  auto r2 = validate(sc, rec);
  CHECK(has_code(r2, ErrorCode::IncompatiblePieces));

  auto bp = one_circle_record(*sc, 0);
  bp["pieces"][0]["sides"] = {{"1", 1}, {"2", 1}};
  CHECK(has_code(validate(sc, bp), ErrorCode::BoundaryParallelDisk));

  auto bm = one_circle_record(*sc, 0);
  bm["forests"][0]["circles"][0]["b"] = "a";
  CHECK(has_code(validate(sc, bm), ErrorCode::BadMatching));

  auto wrong = one_circle_record(*sc, 0);
  wrong["scaffold"] = "elsewhere";
  CHECK(has_code(validate(sc, wrong), ErrorCode::ScaffoldMismatch));
}

TEST_CASE("canonicalization merges parallel copies") {
  auto sc = theta();
  auto twice = make_system(sc, {scaffold_sphere(*sc, 0), scaffold_sphere(*sc, 0)});
  CHECK(twice.size() == 1);
  auto kept = make_system(sc, {scaffold_sphere(*sc, 0), scaffold_sphere(*sc, 0)}, {}, true);
  CHECK(kept.multiplicity(0) == 2);
  CHECK(kept.identified() == twice);
  auto r = validate(sc, one_circle_record(*sc, 0));
  auto sys = *r.system;
  CHECK(make_system(sc, sys.spheres()) == sys);
}

TEST_CASE("keys, subsystems and unions") {
  auto sc = theta();
  auto s1 = scaffold_subsystem(sc, {0});
  auto s2 = scaffold_subsystem(sc, {1});
  auto s12 = scaffold_subsystem(sc, {0, 1});
  CHECK(s1.sphere(0).key() != s2.sphere(0).key());
  CHECK(is_subsystem(s1, s12));
  CHECK_FALSE(is_subsystem(s12, s1));
  CHECK(disjoint_union(s1, s2) == s12);
  CHECK(intersection_number(s2, {0}) == 0);
}

TEST_CASE("scaffold sphere reached from either end has one key") {
  auto sc = theta();
  for (int e = 0; e < 3; ++e) {
    auto end = sc->ends(e)[1];
    TreeVertex v;
    v.piece = end.piece;
    v.col = {1, 1, 1};
    v.col[end.slot] = 0;
    auto n = normalize(*sc, {v});
    REQUIRE(n.sphere);
    CHECK(n.sphere->key() == scaffold_sphere(*sc, e).key());
  }
}
