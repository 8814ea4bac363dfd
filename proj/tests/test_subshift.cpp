#include <random>
#include <set>

#include "doctest.h"
#include "rl/subshift.hpp"

using namespace rl;

namespace {

SetExpr random_ep(std::mt19937_64& rng, Kind k) {
  auto p = std::uniform_int_distribution<std::int64_t>(1, 7)(rng);
  std::set<std::int64_t> rs{0};
  for (std::int64_t r = 1; r < p; ++r)
    if (rng() % 2) rs.insert(r);
  return eventually_periodic(k, 0, p, rs);
}

Element random_word(std::mt19937_64& rng, int max_len) {
  std::string w;
  int n = static_cast<int>(rng() % (max_len + 1));
  for (int i = 0; i < n; ++i) {
    char c = "aAbB"[rng() % 4];
    if (!w.empty() && detail::inverse_letter(c) == w.back())
      w.pop_back();
    else
      w.push_back(c);
  }
  return Element::f2(w);
}

}  // namespace

TEST_CASE("indicator points agree with their set") {
  auto evens = eventually_periodic(Kind::Z, 0, 2, {0});
  auto z = SymbolicPoint::indicator(evens);
  for (const auto& g : Ambient(Kind::Z).ball(20)) CHECK(z.at(g) == evens.contains(g));
  CHECK(z.unlimited());
  auto ones = SymbolicPoint::constant(Kind::F2, true);
  CHECK(ones.at(Element::f2("abAB")));
}

TEST_CASE("shift action law on F2") {
  std::mt19937_64 rng(11);
  Ambient amb(Kind::F2);
  auto base = SymbolicPoint::indicator(even_length(Kind::F2) | finite(Kind::F2, {Element::f2("ab"), Element::f2("B")}));
  for (int it = 0; it < 40; ++it) {
    auto g = random_word(rng, 4), h = random_word(rng, 4);
    auto lhs = shift_apply(shift_apply(base, g), h);
    auto rhs = shift_apply(base, amb.mul(h, g));
    for (const auto& t : amb.ball(3)) REQUIRE(lhs.at(t) == rhs.at(t));
    // also through the non-closed path
    auto ex = SymbolicPoint::explicit_point(Kind::F2, {Element::f2("a"), Element::f2("bb")}, false, 12);
    auto l2 = shift_apply(shift_apply(ex, g), h);
    auto r2 = shift_apply(ex, amb.mul(h, g));
    for (const auto& t : amb.ball(2)) REQUIRE(l2.at(t) == r2.at(t));
  }
}

TEST_CASE("limited points refuse to extrapolate") {
  auto z = SymbolicPoint::explicit_point(Kind::N0, {Element::n0(0), Element::n0(3)}, false, 10);
  CHECK(z.at(Element::n0(3)));
  CHECK_FALSE(z.at(Element::n0(10)));
  CHECK_THROWS_AS(z.at(Element::n0(11)), Error);
  auto s = shift_apply(z, Element::n0(4));
  CHECK(s.guarantee() == 6);
  CHECK_THROWS_AS(return_set(z, Cylinder::one(Kind::N0), 11), Error);
  CHECK(return_set(z, Cylinder::one(Kind::N0), 10).size() == 2);
}

TEST_CASE("return sets of cylinders") {
  auto evens = eventually_periodic(Kind::Z, 0, 2, {0});
  auto z = SymbolicPoint::indicator(evens);
  auto n = return_set(z, Cylinder::one(Kind::Z), 6);
  std::vector<Element> want;
  for (const auto& g : Ambient(Kind::Z).ball(6))
    if (g.x % 2 == 0) want.push_back(g);
  CHECK(n == want);
  auto ex = return_expr(z, Cylinder::of_point(z, 3), 50);
  REQUIRE(ex.exact());
  for (const auto& g : Ambient(Kind::Z).ball(50)) CHECK(ex.contains(g) == (g.x % 2 == 0));
}

TEST_CASE("return sets shrink as cylinders grow") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    auto a = random_ep(rng, Kind::Z) | finite_ints(Kind::Z, {static_cast<std::int64_t>(rng() % 9) - 4});
    auto z = SymbolicPoint::indicator(a);
    std::vector<Element> prev;
    for (std::int64_t r = 0; r <= 3; ++r) {
      auto cur = return_set(z, Cylinder::of_point(z, r), 30);
      if (r > 0) {
        for (const auto& g : cur) REQUIRE(std::binary_search(prev.begin(), prev.end(), g));
      }
      prev = cur;
    }
  }
}

TEST_CASE("recurrence examples") {
  auto evens = eventually_periodic(Kind::Z, 0, 2, {0});
  auto v = check_recurrence(SymbolicPoint::indicator(evens), family_syndetic(), 3, 100);
  CHECK(v.yes());
  CHECK(v.parts.size() == 3);
  auto fin = SymbolicPoint::indicator(finite_ints(Kind::Z, {0, 3, 7}));
  auto w = check_recurrence(fin, family_inf(), 2, 100);
  CHECK(w.no());
  CHECK(check_recurrence(SymbolicPoint::constant(Kind::Z2, true), family_thick(), 2, 10).yes());
}

TEST_CASE("indicator returns coincide with symmetric sets") {
  std::mt19937_64 rng(44);
  Ambient amb(Kind::Z);
  for (int it = 0; it < 50; ++it) {
    auto a = random_ep(rng, Kind::Z);
    auto z = SymbolicPoint::indicator(a);
    auto r = static_cast<std::int64_t>(rng() % 3) + 1;
    std::vector<Element> f1, f2;
    for (const auto& g : amb.ball(r)) (a.contains(g) ? f1 : f2).push_back(g);
    auto sym = symmetric_set_check(a, family_syndetic(), f1, f2, 60);
    auto ret = return_expr(z, Cylinder::of_point(z, r), 60);
    for (const auto& g : amb.ball(60)) REQUIRE(sym.set.contains(g) == ret.contains(g));
    auto rec = check_recurrence(z, family_syndetic(), r, 60);
    CHECK(rec.parts.back()->status == sym.verdict.status);
  }
}

TEST_CASE("symmetric set check") {
  auto a = eventually_periodic(Kind::Z, 0, 3, {0, 1});
  auto r = symmetric_set_check(a, family_syndetic(), {Element::z(0), Element::z(1)}, {Element::z(2)}, 60);
  CHECK(r.verdict.yes());
  for (const auto& g : Ambient(Kind::Z).ball(30)) CHECK(r.set.contains(g) == (((g.x % 3) + 3) % 3 == 0));
  CHECK_THROWS_AS(symmetric_set_check(a, family_syndetic(), {Element::z(2)}, {}, 10), Error);
  CHECK_THROWS_AS(symmetric_set_check(a, family_syndetic(), {}, {Element::z(0)}, 10), Error);
  CHECK(symmetric_set_check(a, family_thick(), {}, {}, 10).verdict.yes());
}

TEST_CASE("joint return") {
  auto x = SymbolicPoint::indicator(eventually_periodic(Kind::Z, 0, 2, {0}));
  auto y = SymbolicPoint::indicator(eventually_periodic(Kind::Z, 0, 3, {0}));
  auto j = joint_return(x, y, Cylinder::one(Kind::Z), Cylinder::one(Kind::Z), 20);
  for (const auto& g : j) CHECK(g.x % 6 == 0);
  CHECK(j.size() == 7);
}

TEST_CASE("rle round trip") {
  std::mt19937_64 rng(3);
  for (Kind k : {Kind::N0, Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    std::int64_t level = k == Kind::F2 ? 3 : 6;
    for (int it = 0; it < 10; ++it) {
      std::set<Element> flips;
      for (const auto& g : amb.ball(level))
        if (rng() % 3 == 0) flips.insert(g);
      auto z = SymbolicPoint::explicit_point(k, flips, false, level);
      auto back = decode_rle(encode_rle(z, level));
      CHECK(back.guarantee() == level);
      for (const auto& g : amb.ball(level)) REQUIRE(back.at(g) == z.at(g));
    }
  }
  auto ones = SymbolicPoint::constant(Kind::Z, true);
  auto r = encode_rle(ones, 4, true);
  CHECK(r.runs.size() == 1);
  CHECK(decode_rle(r).unlimited());
}
