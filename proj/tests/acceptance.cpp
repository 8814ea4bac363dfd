// Acceptance criteria, one PASS/FAIL line each.  Oracles here are brute-force scans that
// do not go through the classifiers, builders or checkers under test.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rl.hpp"

using namespace rl;

namespace {

// pinned tolerances and sizes
constexpr std::int64_t kIndicatorHorizon = 1000;
constexpr int kIndicatorSets = 200;
constexpr std::int64_t kN0Depth = 4;
constexpr std::int64_t kN0Horizon = 10000;
constexpr std::int64_t kZBall = 1000, kZDepth = 3;
constexpr std::int64_t kF2Ball = 5, kF2Depth = 2;
constexpr int kSeparatorPairs = 500;
constexpr std::int64_t kScanWindow = 10000;
constexpr int kClassifierSets = 100;
constexpr int kRamseySets = 100;
constexpr std::int64_t kMaxDensityModulus = 12;
constexpr std::int64_t kFolnerIndex = 100000;
constexpr double kFolnerTolerance = 1e-4;
constexpr std::int64_t kProductHorizon = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---- independent eventually periodic sets on Z ------------------------------------------

struct Ep {
  std::int64_t offset = 0, period = 1;
  std::set<std::int64_t> residues;

  bool has(std::int64_t n) const {
    auto a = n < 0 ? -n : n;
    auto r = ((n % period) + period) % period;
    return a >= offset && residues.count(r) > 0;
  }
  std::string dsl() const {
    std::string s = "ep:" + std::to_string(offset) + "," + std::to_string(period) + ",{";
    bool first = true;
    for (auto r : residues) {
      s += (first ? "" : ",") + std::to_string(r);
      first = false;
    }
    return s + "}";
  }
  SetExpr expr() const { return eventually_periodic(Kind::Z, offset, period, residues); }
};

Ep random_ep(std::mt19937& rng, double full_bias = 0.0, bool nonempty = false) {
  Ep e;
  e.period = std::uniform_int_distribution<std::int64_t>(1, 12)(rng);
  e.offset = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
  bool full = std::bernoulli_distribution(full_bias)(rng);
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t r = 0; r < e.period; ++r)
    if (full || coin(rng)) e.residues.insert(r);
  if (nonempty && e.residues.empty()) e.residues.insert(std::uniform_int_distribution<std::int64_t>(0, e.period - 1)(rng));
  return e;
}

// Window scans on [-W, W].
struct Scan {
  std::int64_t longest_run = 0;
  std::int64_t max_gap = 0;  // including the stretches before the first and after the last member
  bool pws = false;          // some stretch of length >= W/5 with gaps <= 200
};

Scan scan(const std::function<bool(std::int64_t)>& has, std::int64_t W) {
  Scan s;
  std::int64_t run = 0, last = -W - 1, stretch_start = -W;
  for (std::int64_t n = -W; n <= W; ++n) {
    if (!has(n)) {
      run = 0;
      continue;
    }
    s.longest_run = std::max(s.longest_run, ++run);
    auto gap = n - last;
    s.max_gap = std::max(s.max_gap, gap);
    if (gap > 200) stretch_start = n;
    if (n - stretch_start >= W / 5) s.pws = true;
    last = n;
  }
  s.max_gap = std::max(s.max_gap, W + 1 - last);
  return s;
}

bool brute_thick(const Scan& s) { return s.longest_run >= 1000; }
bool brute_syndetic(const Scan& s) { return s.max_gap <= 1000; }

// ---- criteria ------------------------------------------------------------------------------

Outcome indicator_identity() {
  std::mt19937 rng(101);
  Ambient amb(Kind::Z);
  auto ball = amb.ball(kIndicatorHorizon);
  int mismatches = 0;
  std::string first;
  for (int t = 0; t < kIndicatorSets; ++t) {
    auto e = random_ep(rng);
    auto got = return_set(SymbolicPoint::indicator(e.expr()), Cylinder::one(Kind::Z), kIndicatorHorizon);
    std::vector<Element> want;
    for (const auto& g : ball)
      if (e.has(g.x)) want.push_back(g);
    if (got != want) {
      ++mismatches;
      if (first.empty()) first = e.dsl();
    }
  }
  return {mismatches == 0, std::to_string(kIndicatorSets) + " sets, " + std::to_string(mismatches) + " mismatches" + (first.empty() ? "" : ", first " + first)};
}

Outcome n0_builder() {
  const std::vector<std::string> chains = {"scaled:1", "scaled:2", "scaled:3", "scaled:5", "fsb:3,2", "fsb:3,2,2", "fsb:4,3", "pow:2",
                                           "pow:3", "const:ep:0,2,{0}", "const:ep:3,1,{0}|fin:{0}", "const:full"};
  int violations = 0, hyp_fail = 0, cover_fail = 0;
  std::size_t cover_checked = 0;
  std::string first;
  for (const auto& c : chains) {
    auto ch = parse_chain(Kind::N0, c);
    N0Result r;
    try {
      r = build_n0(ch, kN0Depth, kN0Horizon);
    } catch (const Error& e) {
      ++hyp_fail;
      if (first.empty()) first = c + ": " + e.what();
      continue;
    }
    const auto F = ch.at(1);
    const auto& st = r.trace.stages;
    const auto ak = st.back().a;
    // (a) N(z,[1]) inside F & {0}: the limit point on [0, a_k] and z^(k) on [0, horizon]
    for (std::int64_t n = 1; n <= kN0Horizon; ++n) {
      bool one = n <= ak ? r.point.at(Element::n0(n)) : r.stage.at(Element::n0(n));
      if (one && !F.contains(Element::n0(n))) {
        ++violations;
        if (first.empty()) first = c + ": 1 at " + std::to_string(n) + " outside F";
      }
    }
    // (b)
    auto rep = check_trace_n0(r.trace);
    if (!rep.ok()) {
      ++hyp_fail;
      if (first.empty()) first = c + ": " + rep.summary();
    }
    // (c) coverage sets return to [z^(r) on [0, a_r]]
    for (std::size_t i = 1; i < st.size(); ++i)
      for (std::size_t rr = 1; rr <= i && rr <= 3; ++rr)
        for (auto n : st[i].coverage[rr - 1]) {
          ++cover_checked;
          const auto& word = st[rr - 1].word;
          bool ok = n + st[rr - 1].a <= ak;
          for (std::int64_t t = 0; ok && t <= st[rr - 1].a; ++t) ok = r.point.at(Element::n0(n + t)) == word[static_cast<std::size_t>(t)];
          if (!ok) {
            ++cover_fail;
            if (first.empty()) first = c + ": coverage " + std::to_string(n) + " for r=" + std::to_string(rr);
          }
        }
  }
  bool pass = violations == 0 && hyp_fail == 0 && cover_fail == 0 && cover_checked > 0;
  return {pass, std::to_string(chains.size()) + " chains; target violations " + std::to_string(violations) + ", hypothesis failures " +
                    std::to_string(hyp_fail) + ", coverage failures " + std::to_string(cover_fail) + "/" + std::to_string(cover_checked) +
                    (first.empty() ? "" : "; first: " + first)};
}

Outcome group_builder() {
  struct Case {
    Kind k;
    std::string chain;
    std::int64_t depth, ball;
  };
  const std::vector<Case> cases = {{Kind::Z, "const:ep:0,2,{0}", kZDepth, kZBall}, {Kind::Z, "const:full", kZDepth, kZBall},
                                   {Kind::Z, "fsb:3,2", kZDepth, kZBall},          {Kind::Z, "fsb:3,2,-1", kZDepth, kZBall},
                                   {Kind::F2, "const:evenlen", kF2Depth, kF2Ball}, {Kind::F2, "const:full", kF2Depth, kF2Ball}};
  std::size_t battery = 0, copies = 0;
  int fails = 0;
  std::string first;
  auto bad = [&](const std::string& why) {
    ++fails;
    if (first.empty()) first = why;
  };
  for (const auto& cs : cases) {
    Ambient amb(cs.k);
    auto ch = parse_chain(cs.k, cs.chain);
    GroupResult r;
    try {
      r = build_group(ch, cs.depth, cs.ball);
    } catch (const Error& e) {
      bad(cs.chain + ": " + e.what());
      continue;
    }
    const auto& t = r.trace;
    auto rep = check_trace_g(t);
    if (!rep.ok()) bad(cs.chain + ": " + rep.summary());
    auto F1 = ch.at(1);
    // the limit point equals z^(k) on the committed region
    for (const auto& g : t.committed)
      if (r.stage.at(g) && !F1.contains(g)) bad(cs.chain + ": committed return " + to_string(g) + " outside F_1");

    auto prod = [&](const std::vector<Element>& a, const std::vector<Element>& b) {
      std::set<Element> o;
      for (const auto& x : a)
        for (const auto& y : b) o.insert(amb.mul(x, y));
      return o;
    };
    auto B = [&](std::int64_t s) -> const std::vector<Element>& { return t.stages[s - 1].B; };
    auto A = [&](std::int64_t i, std::int64_t j) -> const std::vector<Element>& { return t.stages[i - 1].A[j - 1]; };
    const auto k = static_cast<std::int64_t>(t.stages.size());
    // (15)-(16) in their literal form: C^(j)_t(j,i) misses B_j^-1 X
    for (std::int64_t i = 2; i <= k; ++i)
      for (std::int64_t j = 1; j <= i; ++j) {
        std::set<Element> X(B(i).begin(), B(i).end());
        for (std::int64_t s = 1; s < j; ++s)
          for (const auto& x : prod(B(s), A(i, s))) X.insert(x);
        if (i >= 3)
          for (std::int64_t tt = 2; tt <= i - 1; ++tt)
            for (std::int64_t s = tt; s <= i - 1; ++s)
              for (const auto& x : prod(B(tt), A(s, tt))) X.insert(x);
        std::set<Element> Binv_X;
        for (const auto& b : B(j))
          for (const auto& x : X) Binv_X.insert(amb.mul(amb.inv(b), x));
        ++battery;
        for (const auto& c : A(i, j))
          if (Binv_X.count(c)) bad(cs.chain + ": (15)-(16) fails at i=" + std::to_string(i) + ", j=" + std::to_string(j));
      }
    // fact (i): z^(j)(hg) = z^(r)(h) for h in B_{r+1}, g in A_{r+1..j}^(r+1)
    std::vector<std::set<Element>> supp;
    for (const auto& st : t.stages) supp.emplace_back(st.support.begin(), st.support.end());
    for (std::int64_t j = 2; j <= k; ++j)
      for (std::int64_t r = 1; r < j; ++r)
        for (std::int64_t s = r + 1; s <= j; ++s)
          for (const auto& h : B(r + 1))
            for (const auto& g : A(s, r + 1)) {
              ++copies;
              if (supp[j - 1].count(amb.mul(h, g)) != supp[r - 1].count(h)) bad(cs.chain + ": fact (i) at j=" + std::to_string(j));
            }
  }
  return {fails == 0 && battery > 0 && copies > 0, std::to_string(cases.size()) + " builds; " + std::to_string(battery) +
                                                      " disjointness batteries, " + std::to_string(copies) + " copy equalities" +
                                                      (first.empty() ? "" : "; first: " + first)};
}

Outcome separators() {
  std::mt19937 rng(404);
  Ambient amb(Kind::Z2);
  std::uniform_int_distribution<std::int64_t> small(-3, 3), wide(-5, 5);
  std::uniform_int_distribution<int> size(1, 6);
  int disagree = 0, missing = 0;
  for (int t = 0; t < kSeparatorPairs; ++t) {
    std::set<std::pair<std::int64_t, std::int64_t>> F, H;
    auto nf = static_cast<std::size_t>(size(rng));
    while (F.size() < nf) F.insert({small(rng), small(rng)});
    while (H.size() < nf * nf + 1) H.insert({wide(rng), wide(rng)});
    // brute force: h separates iff no f1 + h = f2 with f1, f2 in F
    std::vector<std::pair<std::int64_t, std::int64_t>> good;
    for (auto [hx, hy] : H) {
      bool clash = false;
      for (auto [ax, ay] : F) clash = clash || F.count({ax + hx, ay + hy});
      if (!clash) good.push_back({hx, hy});
    }
    std::vector<Element> f, h;
    for (auto [x, y] : F) f.push_back(Element::z2(x, y));
    for (auto [x, y] : H) h.push_back(Element::z2(x, y));
    auto s = separator(amb, f, h);
    if (!s) ++missing;
    bool brute_ok = s && std::find(good.begin(), good.end(), std::make_pair(s->x, s->y)) != good.end();
    if (s && !brute_ok) ++disagree;
    if (good.empty() != !s.has_value()) ++disagree;
  }
  return {missing == 0 && disagree == 0,
          std::to_string(kSeparatorPairs) + " pairs; " + std::to_string(missing) + " without separator, " + std::to_string(disagree) + " disagreements"};
}

Outcome classifier_agreement() {
  std::mt19937 rng(505);
  int agree = 0, total = 0;
  std::string first;
  for (int t = 0; t < kClassifierSets; ++t) {
    auto e = random_ep(rng, 0.15);
    auto s = e.expr();
    auto sc = scan([&](std::int64_t n) { return e.has(n); }, kScanWindow);
    std::pair<Verdict, bool> rows[] = {{classify_thick(s, kScanWindow), brute_thick(sc)},
                                       {classify_syndetic(s, kScanWindow), brute_syndetic(sc)},
                                       {classify_pws(s, kScanWindow), sc.pws}};
    for (const auto& [v, want] : rows) {
      ++total;
      bool decided = v.status != Status::inconclusive;
      if (decided && v.yes() == want) ++agree;
      else if (first.empty()) first = e.dsl() + " " + v.property + " " + to_string(v.status);
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " verdicts agree" + (first.empty() ? "" : "; first: " + first)};
}

Outcome ramsey() {
  std::mt19937 rng(606);
  auto fam = family_pws();
  int certified = 0, matched = 0;
  std::string first;
  for (int t = 0; t < kRamseySets; ++t) {
    auto e = random_ep(rng, 0.15, true);
    auto m = random_ep(rng);
    auto s = e.expr(), mask = m.expr();
    auto p1 = s & mask, p2 = s & !mask;
    auto r = ramsey_check(fam, s, p1, p2, kScanWindow);
    bool b1 = scan([&](std::int64_t n) { return e.has(n) && m.has(n); }, kScanWindow).pws;
    bool b2 = scan([&](std::int64_t n) { return e.has(n) && !m.has(n); }, kScanWindow).pws;
    if (r.index > 0) ++certified;
    bool ok = r.index > 0 && (r.index == 1 ? b1 : b2) && r.parts[0].yes() == b1 && r.parts[1].yes() == b2;
    if (ok) ++matched;
    else if (first.empty()) first = e.dsl() + " split by " + m.dsl();
  }
  return {certified == kRamseySets && matched == kRamseySets,
          std::to_string(certified) + "/" + std::to_string(kRamseySets) + " certified, " + std::to_string(matched) + " match brute force" +
              (first.empty() ? "" : "; first: " + first)};
}

Outcome finite_algebra() {
  int tables = 0, failures = 0;
  std::string first;
  auto audit = [&](const FiniteSemigroup& s, const std::string& name) {
    ++tables;
    const int n = s.n;
    const std::uint32_t all = (1u << n) - 1;
    auto left = [&](std::uint32_t m) {
      for (int a = 0; a < n; ++a)
        for (int x = 0; x < n; ++x)
          if ((m >> a & 1) && !(m >> s.mul(x, a) & 1)) return false;
      return true;
    };
    auto right = [&](std::uint32_t m) {
      for (int a = 0; a < n; ++a)
        for (int x = 0; x < n; ++x)
          if ((m >> a & 1) && !(m >> s.mul(a, x) & 1)) return false;
      return true;
    };
    auto minimal = [&](auto pred) {
      std::vector<std::uint32_t> ideals, mins;
      for (std::uint32_t m = 1; m <= all; ++m)
        if (pred(m)) ideals.push_back(m);
      for (auto m : ideals) {
        bool ok = true;
        for (auto o : ideals) ok = ok && !(o != m && (o & m) == o);
        if (ok) mins.push_back(m);
      }
      return mins;
    };
    auto ml = minimal(left), mr = minimal(right);
    std::uint32_t ul = 0, ur = 0, K = all, idem = 0;
    for (auto m : ml) ul |= m;
    for (auto m : mr) ur |= m;
    for (std::uint32_t m = 1; m <= all; ++m)
      if (left(m) && right(m)) K &= m;
    for (int a = 0; a < n; ++a)
      if (s.mul(a, a) == a) idem |= 1u << a;
    bool ok = idem != 0 && ul == K && ur == K;
    for (auto m : ml) ok = ok && (m & idem) != 0;
    auto st = ideal_structure(s);
    std::uint32_t kk = 0;
    for (int a : st.K) kk |= 1u << a;
    ok = ok && kk == K && st.min_left.size() == ml.size() && st.min_right.size() == mr.size() && verify_section5(s).ok();
    if (!ok) {
      ++failures;
      if (first.empty()) first = name + ": " + to_csv(s);
    }
  };
  for (int n = 1; n <= 3; ++n) for_each_semigroup(n, [&](const FiniteSemigroup& s) { audit(s, "order " + std::to_string(n)); });
  for (const auto& [name, s] : order4_catalog()) audit(s, name);
  return {failures == 0 && tables > 0, std::to_string(tables) + " semigroups, " + std::to_string(failures) + " failures" + (first.empty() ? "" : "; first: " + first)};
}

Outcome densities() {
  int wrong = 0, total = 0;
  std::string first;
  for (std::int64_t k = 1; k <= kMaxDensityModulus; ++k)
    for (std::int64_t r = 0; r < k; ++r) {
      ++total;
      auto d = upper_density(eventually_periodic(Kind::Z, 0, k, {r}), FolnerSeq::boxes(Kind::Z), 1000);
      if (!d.exact || !(d.value == Rational(1, k))) {
        ++wrong;
        if (first.empty()) first = std::to_string(k) + "Z+" + std::to_string(r) + " gave " + d.value.str();
      }
    }
  // Folner quotient by direct counting on [-n, n]
  const auto n = kFolnerIndex;
  std::int64_t outside = 0;
  for (std::int64_t x = -n; x <= n; ++x)
    if (x + 1 > n) ++outside;
  double q = 2.0 * static_cast<double>(outside) / static_cast<double>(2 * n + 1);
  auto lib = folner_quotient(FolnerSeq::boxes(Kind::Z), n, Element::z(1));
  bool quotient_ok = q < kFolnerTolerance && lib == Rational(2 * outside, 2 * n + 1);
  // growth inequality |F_m| > (m+1)(|F_1| + ... + |F_{m-1}|) for boxes: first failure by hand
  std::int64_t expect_index = 0, acc = 0;
  for (std::int64_t m = 1; m <= 5 && !expect_index; ++m) {
    if (m > 1 && 2 * m + 1 <= (m + 1) * acc) expect_index = m;
    acc += 2 * m + 1;
  }
  std::int64_t got_index = -1;
  try {
    folner_disjointify(FolnerSeq::boxes(Kind::Z), true, 5);
  } catch (const GrowthError& e) {
    got_index = e.index();
  }
  bool growth_ok = expect_index > 0 && got_index == expect_index;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", q);
  return {wrong == 0 && quotient_ok && growth_ok, std::to_string(total - wrong) + "/" + std::to_string(total) + " exact densities; quotient at n=" +
                                                      std::to_string(n) + " is " + buf + "; growth rejected at index " + std::to_string(got_index) +
                                                      " (expected " + std::to_string(expect_index) + ")" + (first.empty() ? "" : "; first: " + first)};
}

Outcome product_recurrence() {
  Ambient amb(Kind::Z);
  auto yb = build_group(parse_chain(Kind::Z, "fsb:3,2"), kZDepth, kProductHorizon);
  auto xb = build_group(parse_chain(Kind::Z, "fsb:3,2,-1"), kZDepth, kProductHorizon);
  const auto& x = xb.stage;
  const auto& y = yb.stage;
  bool y_ok = check_trace_g(yb.trace).ok() && check_trace_g(xb.trace).ok();
  bool y_recurrent = !check_recurrence(yb.point, family_pws(), 2, yb.trace.guarantee - 2).no();
  std::size_t overlap = 0;
  for (const auto& g : amb.ball(kProductHorizon))
    if (!(g == amb.identity()) && x.at(g) && y.at(g)) ++overlap;
  auto refuted = product_experiment(x, y, kProductHorizon, 2);
  bool r1 = refuted.status == ProductStatus::refuted_at_horizon && refuted.joint == std::vector<Element>{amb.identity()};
  auto distal = product_experiment(SymbolicPoint::constant(Kind::Z, true), y, kProductHorizon, 2);
  bool r2 = distal.status == ProductStatus::witnessed && distal.joint == distal.ny;
  return {y_ok && y_recurrent && overlap == 0 && r1 && r2,
          std::string(refuted.label) + ": built pair " + to_string(refuted.status) + " with joint size " + std::to_string(refuted.joint.size()) +
              ", overlap " + std::to_string(overlap) + "; all-ones vs y " + to_string(distal.status) + " with joint = N(y,[1]) of size " +
              std::to_string(distal.joint.size()) + (y_ok ? "" : "; trace check failed") + (y_recurrent ? "" : "; y refuted as recurrent")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1 indicator identity", indicator_identity},
      {"2 N0 builder soundness", n0_builder},
      {"3 group builder soundness", group_builder},
      {"4 separator oracle", separators},
      {"5 exact classifier agreement", classifier_agreement},
      {"6 Ramsey on piecewise syndetic sets", ramsey},
      {"7 finite semigroup algebra", finite_algebra},
      {"8 densities and Folner checks", densities},
      {"9 product recurrence demonstration", product_recurrence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%s] %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
