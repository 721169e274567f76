#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "doctest.h"
#include "spherecx/error.hpp"
#include "spherecx/scaffold.hpp"

using namespace spherecx;

namespace {

// Multiplicity matrix of the underlying multigraph (loops on the diagonal).
std::vector<std::vector<int>> matrix(int v, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> m(v, std::vector<int>(v, 0));
  for (auto [a, b] : edges) {
    m[a][b]++;
    if (a != b) m[b][a]++;
  }
  return m;
}

std::vector<std::pair<int, int>> pairs_of(const Scaffold& sc) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : sc.edges()) out.emplace_back(e.piece_a, e.piece_b);
  return out;
}

// Independent check: try every vertex bijection on the multiplicity matrices.
bool isomorphic(int v, const std::vector<std::pair<int, int>>& a,
                const std::vector<std::pair<int, int>>& b) {
  auto ma = matrix(v, a), mb = matrix(v, b);
  std::vector<int> p(v);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool same = true;
    for (int i = 0; i < v && same; ++i)
      for (int j = 0; j < v && same; ++j) same = ma[i][j] == mb[p[i]][p[j]];
    if (same) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// Brute force over all pairings of the 3v slots.
int count_classes_by_pairings(int v) {
  std::vector<std::vector<std::pair<int, int>>> reps;
  std::vector<int> slots(3 * v);
  std::vector<bool> used(3 * v, false);
  std::vector<std::pair<int, int>> cur;
  std::function<void()> rec = [&] {
    int i = 0;
    while (i < 3 * v && used[i]) ++i;
    if (i == 3 * v) {
      std::vector<int> uf(v);
      std::iota(uf.begin(), uf.end(), 0);
      std::function<int(int)> f = [&](int x) { return uf[x] == x ? x : uf[x] = f(uf[x]); };
      for (auto [a, b] : cur) uf[f(a)] = f(b);
      for (int k = 0; k < v; ++k)
        if (f(k) != f(0)) return;
      for (const auto& r : reps)
        if (isomorphic(v, r, cur)) return;
      reps.push_back(cur);
      return;
    }
    used[i] = true;
    for (int j = i + 1; j < 3 * v; ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.emplace_back(i / 3, j / 3);
      rec();
      cur.pop_back();
      used[j] = false;
    }
    used[i] = false;
  };
  rec();
  return static_cast<int>(reps.size());
}

}  // namespace

TEST_CASE("theta and dumbbell scaffolds are valid") {
  auto theta = theta_scaffold();
  CHECK(theta.piece_count() == 2);
  CHECK(theta.sphere_count() == 3);
  auto db = dumbbell_scaffold();
  CHECK(db.is_loop(0));
  CHECK(db.is_loop(2));
  CHECK_FALSE(db.is_loop(1));
  CHECK(db.across(0, 0).slot == 1);
}

TEST_CASE("scaffold validation errors") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  // one piece, a loop and a dangling slot
  CHECK(code_of([] { build_scaffold(2, {{0, 0, 0, 1}}); }) == ErrorCode::WrongRank);
  CHECK(code_of([] { build_scaffold(2, {{0, 0, 1, 0}, {0, 1, 1, 1}, {0, 1, 1, 2}}); }) ==
        ErrorCode::NotTrivalent);
  CHECK(code_of([] { build_scaffold(3, {{0, 0, 0, 1}, {0, 2, 1, 0}, {1, 1, 1, 2},
                                        {2, 0, 2, 1}, {2, 2, 3, 0}, {3, 1, 3, 2}}); }) ==
        ErrorCode::Disconnected);
  CHECK(code_of([] { enumerate_scaffolds(1); }) == ErrorCode::RankTooSmall);
}

TEST_CASE("scaffold json round trip") {
  auto theta = theta_scaffold();
  auto j = theta.to_json();
  CHECK(j["spheres"][0]["ends"][1][0] == "P2");
  CHECK(Scaffold::from_json(j) == theta);
  CHECK(Scaffold::from_json(j).id() == theta.id());
}

TEST_CASE("enumerate scaffolds matches the pairing oracle") {
  auto two = enumerate_scaffolds(2);
  CHECK(two.size() == 2);
  CHECK(count_classes_by_pairings(2) == 2);

  auto three = enumerate_scaffolds(3);
  int oracle = count_classes_by_pairings(4);
  CHECK(static_cast<int>(three.size()) == oracle);
  CHECK(three.size() == 5);  // frozen
  for (size_t a = 0; a < three.size(); ++a)
    for (size_t b = a + 1; b < three.size(); ++b)
      CHECK_FALSE(isomorphic(4, pairs_of(three[a]), pairs_of(three[b])));
  for (const auto& sc : three) {
    CHECK(sc.piece_count() == 4);
    CHECK(sc.sphere_count() == 6);
  }
}
