#include <random>

#include "doctest.h"
#include "rl/dsl.hpp"

using namespace rl;

namespace {

SetExpr random_leaf(Kind k, std::mt19937_64& rng) {
  Ambient amb(k);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto elem = [&] { return amb.enumerate(rng() % 40); };
  bool integer = k == Kind::N0 || k == Kind::Z;
  switch (pick(integer ? 8 : 4)) {
    case 0: return full(k);
    case 1: return finite(k, {elem(), elem(), elem()});
    case 2: return windowed(k, 6, {amb.enumerate(rng() % 5)});
    case 3: return even_length(k);
    case 4: {
      std::int64_t p = 1 + pick(6);
      return eventually_periodic(k, pick(5), p, {0, 2 % p});
    }
    case 5: return blocks_linear(k, 2 + pick(3), 1 + pick(3));
    case 6: return fs_set(k, {amb.integer(1 + pick(5)), amb.integer(7)});
    default: return fs_blocks(k, 4, 2, 1);
  }
}

SetExpr random_expr(Kind k, std::mt19937_64& rng, int depth) {
  if (depth == 0) return random_leaf(k, rng);
  Ambient amb(k);
  bool integer = k == Kind::N0 || k == Kind::Z;
  auto a = random_expr(k, rng, depth - 1);
  switch (rng() % (integer ? 8 : 6)) {
    case 0: return a | random_expr(k, rng, depth - 1);
    case 1: return a & random_expr(k, rng, depth - 1);
    case 2: return !a;
    case 3: return translate(amb.enumerate(rng() % 9), a);
    case 4: return k == Kind::N0 ? pre_translate(amb.enumerate(rng() % 9), a) : right_translate(amb.enumerate(rng() % 9), a);
    case 5: return k == Kind::N0 ? a : right_pre_translate(amb.enumerate(rng() % 9), a);
    case 6: return dilation(2 + static_cast<std::int64_t>(rng() % 3), a);
    default: return inflate(2, contract(3, a));
  }
}

}  // namespace

TEST_CASE("parse examples") {
  auto a = parse_set(Kind::Z, "ep:0,4,{0,1}");
  CHECK(a.contains(std::int64_t{5}));
  CHECK(a.is_exact());
  auto fs = parse_set(Kind::N0, "fs:1,2,4,8");
  for (std::int64_t n = 1; n <= 15; ++n) CHECK(fs.contains(n));
  auto t = parse_set(Kind::Z, "-3>fin:{0}");
  CHECK(t.contains(std::int64_t{-3}));
  auto u = parse_set(Kind::Z, "2<fin:{5} | !full");
  CHECK(u.contains(std::int64_t{3}));
  auto w = parse_set(Kind::F2, "ab>evenlen & !fin:{e}");
  CHECK(w.contains(Element::f2("ab")));
  CHECK_FALSE(w.contains(Element::f2("")));
  auto z2 = parse_set(Kind::Z2, "(1,0)>fin:{(0,0),(2,-1)}");
  CHECK(z2.contains(Element::z2(3, -1)));
  auto paren = parse_set(Kind::Z2, "((1,0)>full) & (full | empty)");
  CHECK(paren.contains(Element::z2(0, 0)));
  auto dil = parse_set(Kind::Z, "dil:2,ep:0,3,{1}");
  CHECK(dil.contains(std::int64_t{2}));
  CHECK_FALSE(dil.contains(std::int64_t{4}));
}

TEST_CASE("parse errors carry a position") {
  try {
    (void)parse_set(Kind::Z, "fin:{}");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("empty finite set disallowed") != std::string::npos);
  }
  for (const char* bad : {"ep:0,0,{}", "fin:{1", "full &", "nope", "ep:0,2,{5}", "blk:1,1", "pred:zz", "full full", "fin:{aB}"}) {
    try {
      (void)parse_set(Kind::Z, bad);
      FAIL("expected parse error for " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse);
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(parse_set(Kind::F2, "fin:{aA}"), Error);
}

TEST_CASE("registered predicates") {
  PredicateRegistry reg{{"sq", [](const Element& g) { return g.x >= 0 && g.x == static_cast<std::int64_t>(std::sqrt(g.x)) * static_cast<std::int64_t>(std::sqrt(g.x)); }}};
  auto s = parse_set(Kind::N0, "pred:sq | fin:{2}", &reg);
  CHECK(s.contains(std::int64_t{49}));
  CHECK(s.contains(std::int64_t{2}));
  CHECK_FALSE(s.contains(std::int64_t{3}));
  CHECK(parse_set(Kind::N0, s.dsl(), &reg).dsl() == s.dsl());
}

TEST_CASE("printing and parsing round-trip") {
  std::mt19937_64 rng(2024);
  for (auto k : {Kind::N0, Kind::Z, Kind::Z2, Kind::F2}) {
    Ambient amb(k);
    auto probe = amb.ball(k == Kind::F2 ? 2 : 4);
    for (int t = 0; t < 150; ++t) {
      auto e = random_expr(k, rng, 3);
      auto text = e.dsl();
      auto back = parse_set(k, text);
      CHECK(back.dsl() == text);
      for (const auto& g : probe) {
        bool a = false, b = false, ea = false, eb = false;
        try {
          a = e.contains(g);
        } catch (const Error&) {
          ea = true;
        }
        try {
          b = back.contains(g);
        } catch (const Error&) {
          eb = true;
        }
        REQUIRE(ea == eb);
        REQUIRE(a == b);
      }
    }
  }
}
