#include "doctest.h"
#include "spherecx/arc_oracle.hpp"
#include "spherecx/enumerate.hpp"

using namespace spherecx;

TEST_CASE("presets") {
  const auto& a = surface_preset(0, 3);
  CHECK(a.hexagons == 2);
  CHECK(a.arcs() == 3);
  CHECK(a.scaffold->rank() == 2);
  const auto& b = surface_preset(0, 4);
  CHECK(b.hexagons == 4);
  CHECK(b.arcs() == 6);
  CHECK(b.scaffold->rank() == 3);
  CHECK(surface_preset(1, 2).scaffold->rank() == 3);
  CHECK(scaffold_graph_canonical_form(*surface_preset(1, 1).scaffold) ==
        scaffold_graph_canonical_form(theta_scaffold()));
  CHECK(scaffold_graph_canonical_form(*a.scaffold) ==
        scaffold_graph_canonical_form(dumbbell_scaffold()));
  CHECK_THROWS_AS(surface_preset(2, 0), Error);
  CHECK_THROWS_AS(surface_preset(0, 5), Error);
  for (int h = 0; h < b.hexagons; ++h)
    for (int x : {1, 3, 5}) {
      auto [h2, x2] = b.partner(h, x);
      CHECK(b.partner(h2, x2) == std::pair{h, x});
    }
}

TEST_CASE("normal form of arcs") {
  const auto& S = surface_preset(1, 1);
  for (int e = 0; e < S.arcs(); ++e) {
    auto w = max_arc(S, e);
    CHECK(max_arc_index(S, w) == e);
    CHECK(canonical_arc(S, w) == w);
    CHECK(double_arc(S, w) == scaffold_sphere(*S.scaffold, e));
  }
  // a corner cut is not normal, and sliding removes it
  auto [h2, x2] = S.partner(0, 1);
  Walk cut{{0, 4, 1}, {h2, x2, (x2 + 1) % 6}};
  CHECK_FALSE(canonical_arc(S, cut).has_value());
  auto n = normalize_arc(S, cut);
  REQUIRE(n.has_value());
  CHECK(n->size() == 1);
  // an arc returning to its own boundary side is inessential
  CHECK_FALSE(normalize_arc(S, Walk{{0, 2, 2}}).has_value());
}

TEST_CASE("arc counts by crossings") {
  CHECK(all_arcs(surface_preset(0, 3), 2).size() == 4);
  CHECK(all_arcs(surface_preset(1, 1), 1).size() == 6);
  CHECK(all_arcs(surface_preset(1, 1), 2).size() == 6);
  CHECK(all_arcs(surface_preset(0, 4), 1).size() == 10);
  CHECK(all_arcs(surface_preset(0, 4), 2).size() == 14);
  CHECK(all_arcs(surface_preset(1, 2), 1).size() == 11);
  CHECK(all_arcs(surface_preset(1, 2), 2).size() == 18);
}

TEST_CASE("crossings agree with compatibility of doubles") {
  for (auto gs : {std::pair{0, 4}, std::pair{1, 1}}) {
    const auto& S = surface_preset(gs.first, gs.second);
    auto arcs = all_arcs(S, 3);
    int disjoint = 0, crossing = 0;
    for (size_t i = 0; i < arcs.size(); ++i) {
      CHECK(self_crossings(S, arcs[i]) == 0);
      auto di = double_arc(S, arcs[i]);
      int w = 0;
      for (int e = 0; e < S.arcs(); ++e) w += crossings_with_max_arc(S, arcs[i], e);
      CHECK(di.weight() == w);
      for (size_t j = i + 1; j < arcs.size(); ++j) {
        int c = crossings(S, arcs[i], arcs[j]);
        CHECK(c == crossings(S, arcs[j], arcs[i]));
        CHECK((c == 0) == compatible(di, double_arc(S, arcs[j])));
        (c == 0 ? disjoint : crossing)++;
      }
    }
    CHECK(disjoint > 0);
    CHECK(crossing > 0);
  }
}

TEST_CASE("doubling commutes with surgery") {
  for (auto gs : {std::pair{0, 3}, std::pair{1, 1}, std::pair{0, 4}, std::pair{1, 2}}) {
    const auto& S = surface_preset(gs.first, gs.second);
    std::mt19937_64 rng(19);
    int steps = 0;
    for (int it = 0; it < 40; ++it) {
      auto a = random_arc_system(S, rng, 4, 1 + it % S.arcs());
      REQUIRE_FALSE(a.arcs.empty());
      CHECK(is_valid_system(double_to_spheres(a)));
      std::set<int> t{it % S.arcs()};
      auto r = check_doubling_commutes(a, t);
      CHECK_MESSAGE(r.ok, r.why);
      steps += r.arc_length;
    }
    CHECK(steps > 40);
  }
}

TEST_CASE("arc system json") {
  const auto& S = surface_preset(1, 1);
  auto a = max_arc_subsystem(S, {0, 2});
  auto j = a.to_json();
  CHECK(j["arcs"].size() == 2);
  CHECK(j["normal_coordinates"].size() == 2);
  CHECK(crossings_with(a, {0, 1, 2}) == 0);
  CHECK(double_to_spheres(a) == scaffold_subsystem(S.scaffold, {0, 2}));
  CHECK_FALSE(make_arc_system(S, {Walk{{0, 1, 3}}}).has_value());
}
