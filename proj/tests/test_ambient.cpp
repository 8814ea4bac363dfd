#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "rl/ambient.hpp"

using namespace rl;

namespace {

// Reduced words of length <= n, grown letter by letter without using the ambient.
std::set<std::string> brute_f2_ball(int n) {
  std::set<std::string> all{""};
  std::set<std::string> frontier{""};
  const std::string letters = "aAbB";
  auto inverse = [](char c) { return c == 'a' ? 'A' : c == 'A' ? 'a' : c == 'b' ? 'B' : 'b'; };
  for (int len = 1; len <= n; ++len) {
    std::set<std::string> next;
    for (const auto& w : frontier)
      for (char c : letters)
        if (w.empty() || w.back() != inverse(c)) next.insert(w + c);
    all.insert(next.begin(), next.end());
    frontier = next;
  }
  return all;
}

// Free reduction by a stack, independent of Ambient::mul.
std::string reduce(const std::string& s) {
  std::string out;
  for (char c : s) {
    char inv = c == 'a' ? 'A' : c == 'A' ? 'a' : c == 'b' ? 'B' : 'b';
    if (!out.empty() && out.back() == inv)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

Element random_element(const Ambient& amb, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-50, 50);
  switch (amb.kind()) {
    case Kind::N0: return Element::n0(std::uniform_int_distribution<int>(0, 100)(rng));
    case Kind::Z: return Element::z(d(rng));
    case Kind::Z2: return Element::z2(d(rng), d(rng));
    case Kind::F2: {
      std::uniform_int_distribution<int> len(0, 8), letter(0, 3);
      std::string w;
      int n = len(rng);
      for (int i = 0; i < n; ++i) w += "aAbB"[letter(rng)];
      return Element::f2(reduce(w));
    }
  }
  return amb.identity();
}

}  // namespace

TEST_CASE("enumeration conventions") {
  Ambient z(Kind::Z), n0(Kind::N0), f2(Kind::F2);
  CHECK(z.enumerate(0) == Element::z(0));
  CHECK(z.enumerate(1) == Element::z(1));
  CHECK(z.enumerate(2) == Element::z(-1));
  for (std::uint64_t k = 0; k < 100; ++k) CHECK(n0.enumerate(k) == Element::n0(static_cast<std::int64_t>(k)));
  CHECK(f2.enumerate(0) == f2.identity());
  CHECK(to_string(f2.enumerate(1)) == "a");
  CHECK(to_string(f2.enumerate(2)) == "A");
  CHECK(to_string(f2.enumerate(3)) == "b");
  CHECK(to_string(f2.enumerate(4)) == "B");
}

TEST_CASE("enumeration is injective and index_of inverts it") {
  for (auto k : {Kind::N0, Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    std::set<Element> seen;
    for (std::uint64_t i = 0; i < 3000; ++i) {
      auto g = amb.enumerate(i);
      CHECK(seen.insert(g).second);
      CHECK(amb.index_of(g) == i);
    }
  }
}

TEST_CASE("enumeration order agrees with element ordering") {
  for (auto k : {Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    for (std::uint64_t i = 0; i + 1 < 2000; ++i) CHECK(amb.enumerate(i) < amb.enumerate(i + 1));
  }
}

TEST_CASE("ball sizes") {
  Ambient f2(Kind::F2), z2(Kind::Z2), z(Kind::Z);
  CHECK(f2.ball(1).size() == 5);
  CHECK(f2.ball(2).size() == 17);
  CHECK(z2.ball(1).size() == 9);
  CHECK(z.ball(3).size() == 7);
  std::set<std::string> b1;
  for (const auto& g : f2.ball(1)) b1.insert(to_string(g));
  CHECK(b1 == std::set<std::string>{"e", "a", "A", "b", "B"});
}

TEST_CASE("F2 balls match brute enumeration and nest") {
  Ambient f2(Kind::F2);
  std::set<Element> prev;
  for (int n = 1; n <= 8; ++n) {
    auto brute = brute_f2_ball(n);
    // 1 + sum_{i<=n} 4*3^(i-1)
    std::uint64_t formula = 1, p = 1;
    for (int i = 1; i <= n; ++i, p *= 3) formula += 4 * p;
    CHECK(brute.size() == formula);
    CHECK(f2.ball_size(n) == formula);
    auto ball = f2.ball(n);
    std::set<std::string> got;
    for (const auto& g : ball) got.insert(g.w);
    CHECK(got == brute);
    std::set<Element> cur(ball.begin(), ball.end());
    for (const auto& g : prev) CHECK(cur.count(g) == 1);
    prev = cur;
  }
}

TEST_CASE("enumerate is consistent with ball") {
  for (auto k : {Kind::N0, Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    for (int n = 1; n <= 4; ++n) {
      auto count = amb.ball_size(n);
      for (std::uint64_t i = 0; i < count; ++i) CHECK(amb.in_ball(amb.enumerate(i), n));
      CHECK_FALSE(amb.in_ball(amb.enumerate(count), n));
    }
    CHECK(amb.in_ball(amb.identity(), 1));
  }
}

TEST_CASE("group operations") {
  Ambient f2(Kind::F2), z(Kind::Z), n0(Kind::N0);
  CHECK(f2.mul(Element::f2("ab"), Element::f2("Ba")) == Element::f2("aa"));
  CHECK(z.mul(Element::z(3), Element::z(-5)) == Element::z(-2));
  CHECK(f2.mul(Element::f2("a"), Element::f2("A")) == f2.identity());
  CHECK_THROWS_AS(n0.inv(Element::n0(3)), Error);
  try {
    n0.inv(Element::n0(3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported);
  }
}

TEST_CASE("F2 word cap is a hard error") {
  Ambient f2(Kind::F2);
  auto w = Element::f2(std::string(64, 'a'));
  try {
    (void)f2.mul(w, Element::f2("a"));
    FAIL("expected word-cap error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::word_cap);
  }
  CHECK(f2.mul(w, Element::f2("A")).w.size() == 63);
}

TEST_CASE("associativity and inverse law on random triples") {
  std::mt19937_64 rng(20240611);
  for (auto k : {Kind::N0, Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    for (int i = 0; i < 1000; ++i) {
      auto g = random_element(amb, rng), h = random_element(amb, rng), u = random_element(amb, rng);
      CHECK(amb.mul(amb.mul(g, h), u) == amb.mul(g, amb.mul(h, u)));
      if (amb.is_group()) CHECK(amb.mul(amb.inv(g), g) == amb.identity());
    }
  }
}

TEST_CASE("F2 product agrees with stack reduction oracle") {
  std::mt19937_64 rng(7);
  Ambient f2(Kind::F2);
  for (int i = 0; i < 500; ++i) {
    auto g = random_element(f2, rng), h = random_element(f2, rng);
    CHECK(f2.mul(g, h).w == reduce(g.w + h.w));
  }
}

TEST_CASE("element text syntax") {
  CHECK(Ambient(Kind::Z).parse_element("-3") == Element::z(-3));
  CHECK(Ambient(Kind::Z2).parse_element("(2,-1)") == Element::z2(2, -1));
  CHECK(Ambient(Kind::F2).parse_element("abA") == Element::f2("abA"));
  CHECK(Ambient(Kind::F2).parse_element("e") == Element::f2(""));
  CHECK_THROWS_AS(Ambient(Kind::F2).parse_element("aA"), Error);
  CHECK_THROWS_AS(Ambient(Kind::N0).parse_element("-1"), Error);
  CHECK(to_string(Element::z2(2, -1)) == "(2,-1)");
}

TEST_CASE("oversized balls raise a horizon error") {
  Ambient f2(Kind::F2);
  CHECK(f2.ball_size(1000) == UINT64_MAX);
  CHECK(f2.ball_size(14) <= kBallCap);
  CHECK(f2.ball_size(15) > kBallCap);
  try {
    (void)f2.ball(1000);
    FAIL("expected a horizon error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::horizon);
  }
  CHECK(Ambient(Kind::Z2).ball(1000).size() == 2001u * 2001u);
}
