#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rl/classify.hpp"

using namespace rl;

namespace {

struct EpSpec {
  std::int64_t offset, period;
  std::set<std::int64_t> residues;
  bool nonneg;
  bool has(std::int64_t n) const {
    if (nonneg && n < 0) return false;
    auto a = n < 0 ? -n : n;
    auto r = ((n % period) + period) % period;
    return a >= offset && residues.count(r) > 0;
  }
  SetExpr expr() const { return eventually_periodic(nonneg ? Kind::N0 : Kind::Z, offset, period, residues); }
};

EpSpec random_ep(std::mt19937_64& rng, bool nonneg, std::int64_t max_period = 12) {
  EpSpec s;
  s.nonneg = nonneg;
  s.period = std::uniform_int_distribution<std::int64_t>(1, max_period)(rng);
  s.offset = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t r = 0; r < s.period; ++r)
    if (coin(rng)) s.residues.insert(r);
  return s;
}

// Window-scan oracles on [-W, W] (or [0, W]), independent of the periodic algebra.
constexpr std::int64_t W = 10000;

std::int64_t longest_run(const std::function<bool(std::int64_t)>& in, std::int64_t lo, std::int64_t hi) {
  std::int64_t best = 0, cur = 0;
  for (auto n = lo; n <= hi; ++n) {
    cur = in(n) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return best;
}

// Largest number of consecutive non-members strictly inside the window's tail.
std::int64_t largest_tail_gap(const std::function<bool(std::int64_t)>& in, std::int64_t lo, std::int64_t hi) {
  std::int64_t best = 0, cur = 0;
  for (auto n = lo; n <= hi; ++n) {
    cur = in(n) ? 0 : cur + 1;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

TEST_CASE("membership examples") {
  auto ep = eventually_periodic(Kind::Z, 0, 4, {0, 1});
  CHECK(ep.contains(std::int64_t{5}));
  CHECK_FALSE(ep.contains(std::int64_t{6}));
  CHECK(ep.contains(std::int64_t{-3}));
  auto fs = fs_set(Kind::N0, {Element::n0(1), Element::n0(2), Element::n0(4), Element::n0(8)});
  CHECK(fs.contains(std::int64_t{15}));
  CHECK_FALSE(fs.contains(std::int64_t{16}));
  CHECK_FALSE(fs.contains(std::int64_t{0}));
  auto nf = !full(Kind::F2);
  CHECK_FALSE(nf.contains(Element::f2("abA")));
  CHECK_FALSE((!full(Kind::Z)).contains(std::int64_t{0}));
}

TEST_CASE("eventually periodic membership matches definition") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto s = random_ep(rng, t % 2 == 0);
    auto e = s.expr();
    for (std::int64_t n = -200; n <= 200; ++n) REQUIRE(e.contains(n) == s.has(n));
  }
}

TEST_CASE("eventually periodic preconditions") {
  CHECK_THROWS_AS(eventually_periodic(Kind::Z, 0, 0, {}), Error);
  CHECK_THROWS_AS(eventually_periodic(Kind::Z, 0, 3, {3}), Error);
  CHECK_THROWS_AS(eventually_periodic(Kind::F2, 0, 2, {0}), Error);
  CHECK_THROWS_AS(finite(Kind::Z, {}), Error);
}

TEST_CASE("exact algebra agrees with pointwise semantics") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::int64_t> small(-9, 9), fac(2, 4);
  for (int t = 0; t < 150; ++t) {
    auto a = random_ep(rng, false, 8), b = random_ep(rng, false, 8);
    auto ea = a.expr(), eb = b.expr();
    auto g = small(rng), c = fac(rng);
    std::vector<std::pair<SetExpr, std::function<bool(std::int64_t)>>> cases = {
        {ea | eb, [&](std::int64_t n) { return a.has(n) || b.has(n); }},
        {ea & eb, [&](std::int64_t n) { return a.has(n) && b.has(n); }},
        {!ea, [&](std::int64_t n) { return !a.has(n); }},
        {translate(Element::z(g), ea), [&](std::int64_t n) { return a.has(n - g); }},
        {pre_translate(Element::z(g), ea), [&](std::int64_t n) { return a.has(n + g); }},
        {dilation(c, ea), [&](std::int64_t n) { return n % c == 0 && a.has(n / c); }},
        {dilation(-c, ea), [&](std::int64_t n) { return n % c == 0 && a.has(-n / c); }},
        {inflate(c, ea), [&](std::int64_t n) { return a.has(floor_div(n, c)); }},
        {contract(c, ea), [&](std::int64_t n) { return a.has(c * n); }},
    };
    for (auto& [expr, oracle] : cases) {
      REQUIRE(expr.is_exact());
      for (std::int64_t n = -300; n <= 300; ++n) REQUIRE(expr.contains(n) == oracle(n));
    }
  }
}

TEST_CASE("exact algebra on N0 respects the origin") {
  auto ev = eventually_periodic(Kind::N0, 0, 2, {0});
  auto shifted = translate(Element::n0(3), ev);
  REQUIRE(shifted.is_exact());
  for (std::int64_t n = 0; n < 50; ++n) CHECK(shifted.contains(n) == (n >= 3 && (n - 3) % 2 == 0));
  auto back = pre_translate(Element::n0(3), ev);
  for (std::int64_t n = 0; n < 50; ++n) CHECK(back.contains(n) == ((n + 3) % 2 == 0));
}

TEST_CASE("fs_generate") {
  Ambient n0(Kind::N0), f2(Kind::F2);
  std::vector<Element> g{Element::n0(1), Element::n0(2), Element::n0(4), Element::n0(8)};
  auto fs = fs_generate(n0, g, 4);
  // 15 subset sums, enumerated independently
  std::set<Element> oracle;
  for (int mask = 1; mask < 16; ++mask) {
    std::int64_t s = 0;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) s += g[static_cast<std::size_t>(i)].x;
    oracle.insert(Element::n0(s));
  }
  CHECK(fs == oracle);
  CHECK(oracle.size() == 15);
  CHECK(fs_generate(n0, {Element::n0(1)}, 1) == std::set<Element>{Element::n0(1)});
  auto fp = fs_generate(f2, {Element::f2("a"), Element::f2("b")}, 2);
  CHECK(fp == std::set<Element>{Element::f2("a"), Element::f2("b"), Element::f2("ab")});
  CHECK_THROWS_AS(fs_generate(n0, g, 5), Error);
}

TEST_CASE("fp respects increasing index order in F2") {
  Ambient f2(Kind::F2);
  std::vector<Element> g{Element::f2("b"), Element::f2("a"), Element::f2("Ba")};
  auto fp = fs_generate(f2, g, 3);
  std::set<Element> oracle;
  for (int mask = 1; mask < 8; ++mask) {
    Element p = f2.identity();
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) p = f2.mul(p, g[static_cast<std::size_t>(i)]);
    oracle.insert(p);
  }
  CHECK(fp == oracle);
  CHECK(fp.count(Element::f2("ba")) == 1);
  CHECK(fp.count(Element::f2("ab")) == 0);
}

TEST_CASE("block sets") {
  auto blk = blocks_linear(Kind::N0, 2, 1);
  // runs [2^k, 2^k + k]
  std::set<std::int64_t> oracle;
  for (std::int64_t k = 1; k <= 12; ++k)
    for (std::int64_t j = 0; j <= k; ++j) oracle.insert((std::int64_t{1} << k) + j);
  for (std::int64_t n = 0; n < 4096; ++n) REQUIRE(blk.contains(n) == (oracle.count(n) > 0));
  CHECK_THROWS_AS(blocks_geometric(Kind::N0, 2, 1, 1), Error);
  auto g = blocks_geometric(Kind::N0, 4, 1, 1);
  CHECK(g.contains(std::int64_t{8}));
  CHECK_FALSE(g.contains(std::int64_t{9}));
}

TEST_CASE("fs blocks membership matches brute subset sums") {
  auto f = fs_blocks(Kind::N0, 5, 2, 1);
  // x_k in [5^k, 5^k + 2^k), k = 1..4; all sums of distinct-index picks
  std::set<std::int64_t> sums{0};
  std::int64_t p5 = 1, p2 = 1;
  for (int k = 1; k <= 4; ++k) {
    p5 *= 5;
    p2 *= 2;
    std::set<std::int64_t> next = sums;
    for (auto s : sums)
      for (std::int64_t x = p5; x < p5 + p2; ++x) next.insert(s + x);
    sums = next;
  }
  sums.erase(0);
  for (std::int64_t n = 0; n < 625; ++n) REQUIRE(f.contains(n) == (sums.count(n) > 0));
  CHECK_THROWS_AS(fs_blocks(Kind::N0, 3, 3, 1), Error);
}

TEST_CASE("windowed sets refuse queries beyond their level") {
  auto w = windowed(Kind::Z, 5, {Element::z(1), Element::z(-2)});
  CHECK(w.contains(std::int64_t{1}));
  CHECK_FALSE(w.contains(std::int64_t{0}));
  try {
    (void)w.contains(std::int64_t{6});
    FAIL("expected horizon error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::horizon);
  }
}

TEST_CASE("classify_thick examples") {
  auto v = classify_thick(full(Kind::Z), 50);
  CHECK(v.yes());
  CHECK(v.basis == Basis::exact);

  auto ep = eventually_periodic(Kind::Z, 0, 4, {0, 1});
  auto t = classify_thick(ep, 100);
  CHECK(t.no());
  CHECK(t.basis == Basis::exact);
  CHECK(longest_run([&](std::int64_t n) { return ep.contains(n); }, -W, W) == 2);
  CHECK(t.note.find("max run 2") != std::string::npos);

  for (int k = 3; k <= 7; ++k) {
    std::vector<Element> gens;
    for (int i = 0; i <= k; ++i) gens.push_back(Element::n0(std::int64_t{1} << i));
    auto fs = fs_set(Kind::N0, gens);
    auto H = std::int64_t{1} << (k + 1);
    auto r = classify_thick(fs, H);
    CHECK(r.yes());
    CHECK(r.basis == Basis::horizon);
    CHECK(r.level >= k - 1);
    CHECK(recheck(r, fs));
  }
}

TEST_CASE("classify_syndetic examples") {
  auto ep = eventually_periodic(Kind::Z, 0, 4, {0, 1});
  auto v = classify_syndetic(ep, 100);
  REQUIRE(v.yes());
  CHECK(v.k_set == std::vector<Element>{Element::z(0), Element::z(1), Element::z(2), Element::z(3)});
  CHECK(recheck(v, ep));

  auto evens = eventually_periodic(Kind::Z, 0, 2, {0});
  auto ve = classify_syndetic(evens, 100);
  CHECK(ve.k_set == std::vector<Element>{Element::z(0), Element::z(1)});

  auto none = eventually_periodic(Kind::Z, 3, 5, {});
  auto vn = classify_syndetic(none, 100);
  CHECK(vn.no());
  CHECK(vn.basis == Basis::exact);

  auto fsb = fs_blocks(Kind::N0, 4, 2, 1);
  auto vf = classify_syndetic(fsb, 2000);
  REQUIRE(vf.no());
  CHECK(vf.basis == Basis::structural);
  REQUIRE(vf.gap.has_value());
  CHECK(vf.gap->second - vf.gap->first + 1 > 100);
  for (auto n = vf.gap->first; n <= vf.gap->second; ++n) REQUIRE_FALSE(fsb.contains(n));
  CHECK(classify_thick(fsb, 2000).yes());
}

TEST_CASE("classify_pws examples") {
  auto evens = eventually_periodic(Kind::Z, 0, 2, {0});
  auto v = classify_pws(evens, 200);
  REQUIRE(v.yes());
  CHECK(v.pws_thick->as<node::Full>() != nullptr);
  CHECK(v.pws_syndetic->same_node(evens));
  CHECK(recheck(v, evens));

  auto fin = finite_ints(Kind::Z, {1, 5, 9});
  auto vf = classify_pws(fin, 200);
  CHECK(vf.no());

  auto blk = blocks_linear(Kind::N0, 2, 1);
  auto ev0 = eventually_periodic(Kind::N0, 0, 2, {0});
  auto a = blk & ev0;
  auto va = classify_pws(a, 5000);
  REQUIRE(va.yes());
  CHECK(va.basis == Basis::structural);
  CHECK(recheck(va, a));
  // B & C within the horizon is inside A, checked by direct scan
  for (std::int64_t n = 0; n <= 5000; ++n)
    if (va.pws_thick->contains(n) && va.pws_syndetic->contains(n)) REQUIRE(a.contains(n));
}

TEST_CASE("structural dilation of a thick set is pws but neither thick nor syndetic") {
  auto d = dilation(3, blocks_linear(Kind::N0, 2, 2));
  CHECK(classify_thick(d, 3000).no());
  CHECK(classify_syndetic(d, 3000).no());
  auto v = classify_pws(d, 3000);
  CHECK(v.yes());
  CHECK(recheck(v, d));
}

TEST_CASE("exact classifiers agree with window scans") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    auto s = random_ep(rng, false);
    auto e = s.expr();
    auto in = [&](std::int64_t n) { return s.has(n); };
    // thick: the tail beyond the offset is one unbroken run
    bool thick = longest_run(in, s.offset, W) == W - s.offset + 1;
    // syndetic: the tail has members with bounded gaps
    bool syn = largest_tail_gap(in, s.offset, W) < s.period;
    auto th = classify_thick(e, 1000), sy = classify_syndetic(e, 1000), pw = classify_pws(e, 1000);
    CHECK(th.status != Status::inconclusive);
    CHECK(sy.status != Status::inconclusive);
    CHECK(pw.status != Status::inconclusive);
    CHECK(th.yes() == thick);
    CHECK(sy.yes() == syn);
    CHECK(pw.yes() == syn);
    if (sy.yes()) {
      // K covers every window, not just the horizon ball
      auto m = static_cast<std::int64_t>(sy.k_set.size());
      for (std::int64_t n = -W; n <= W - m; ++n) {
        bool hit = false;
        for (std::int64_t j = 0; j < m && !hit; ++j) hit = in(n + j);
        REQUIRE(hit);
      }
    }
  }
}

TEST_CASE("finite and cofinite sets on non-abelian ambients") {
  auto fin = finite(Kind::F2, {Element::f2("a"), Element::f2("ab")});
  CHECK(classify_thick(fin, 4).no());
  CHECK(classify_syndetic(fin, 4).no());
  auto co = !fin;
  auto sv = classify_syndetic(co, 4);
  CHECK(sv.yes());
  CHECK(recheck(sv, co));
  CHECK(classify_thick(co, 4).yes());
  auto tr = translate(Element::f2("b"), fin);
  CHECK(tr.contains(Element::f2("ba")));
  auto fc = structure::fin_co(tr);
  REQUIRE(fc.has_value());
  CHECK(fc->elems == std::set<Element>{Element::f2("ba"), Element::f2("bab")});
}

TEST_CASE("verdict witnesses survive re-checking on random sets") {
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 40; ++t) {
    auto a = random_ep(rng, true), b = random_ep(rng, true);
    auto s = (a.expr() & blocks_linear(Kind::N0, 3, 2)) | b.expr();
    for (auto& v : {classify_thick(s, 800), classify_syndetic(s, 800), classify_pws(s, 800)}) {
      std::string why;
      CHECK_MESSAGE(recheck(v, s, &why), why);
    }
  }
}
