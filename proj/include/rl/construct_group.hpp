#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rl/construct_n0.hpp"

namespace rl {

// C_n = (ball(n-1) g) & S'  for the pws provider, {g} for the singleton provider.
// Translators need only ball(n-1) g inside T; B_n & B_n g = {} keeps the blocks apart.
struct GroupBlock {
  std::int64_t n = 0;
  Element g;
  std::vector<Element> elems;
  bool operator==(const GroupBlock&) const = default;
};

struct BlockFamily {
  std::int64_t i = 0;
  std::vector<GroupBlock> blocks;  // C_1^(i), C_2^(i), ... as far as the build needed
  bool operator==(const BlockFamily&) const = default;
};

struct GroupStage {
  std::int64_t i = 0;
  std::int64_t m = 1;                    // m_i
  std::vector<Element> B;                // B_i
  std::string t_dsl, s_dsl;              // pws pair of F_{m_i}
  std::vector<Element> separated;        // S' chosen by the separation step (empty at stage 1)
  std::vector<std::int64_t> t;           // t(j,i), j = 1..i
  std::vector<std::vector<Element>> A;   // A_i^(j), j = 1..i
  std::vector<Element> support;          // N(z^(i), [1])
  bool operator==(const GroupStage&) const = default;
};

struct TraceG {
  Kind kind = Kind::Z;
  std::string chain_dsl;
  std::string family;
  std::string provider;  // pws | singleton
  std::int64_t depth = 0;
  std::int64_t ball_level = 0;
  std::vector<GroupStage> stages;
  std::vector<BlockFamily> families;
  std::vector<Element> committed;  // B_{k+1}: the limit point equals z^(k) here
  std::int64_t guarantee = 0;      // largest r with ball(r) inside B_{k+1}
  std::vector<std::string> notes;
  bool operator==(const TraceG&) const = default;
};

struct GroupResult {
  SymbolicPoint point;  // the limit point on ball(guarantee)
  SymbolicPoint stage;  // z^(k), zero off its finite support
  TraceG trace;
};

namespace detail {

inline std::string group_provider_for(const Family& f) {
  if (f.name == "F_inf") return "singleton";
  if (f.name == "F_ps" || f.name == "F_t" || f.name == "F_pubd") return "pws";
  fail(ErrorKind::unsupported, "no block provider for family " + f.name);
}

inline bool safe_contains(const SetExpr& s, const Element& g) {
  try {
    return s.contains(g);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::horizon || e.kind() == ErrorKind::word_cap) return false;
    throw;
  }
}

// Lazily produced disjoint block sequence inside T & S' (the (P1) witness).
struct BlockProvider {
  Ambient amb;
  std::string kind;  // pws | singleton
  SetExpr T, Sp;
  std::int64_t L;
  std::vector<GroupBlock> blocks;
  std::set<Element> regions;  // union of ball(n-1) g_n so far
  std::vector<Element> pool;  // singleton candidates in enumeration order
  std::size_t pool_next = 0;

  const GroupBlock& at(std::int64_t n) {
    while (static_cast<std::int64_t>(blocks.size()) < n) grow();
    return blocks[n - 1];
  }

  void grow() {
    const auto n = static_cast<std::int64_t>(blocks.size()) + 1;
    if (kind == "singleton") {
      if (pool.empty())
        for (const auto& g : amb.ball(L))
          if (safe_contains(T, g) && safe_contains(Sp, g)) pool.push_back(g);
      if (pool_next >= pool.size())
        fail(ErrorKind::stage, "block provider exhausted after " + std::to_string(blocks.size()) + " blocks in ball(" + std::to_string(L) + ")");
      auto g = pool[pool_next++];
      blocks.push_back({n, g, {g}});
      return;
    }
    auto gn = amb.ball(n - 1);
    std::set<Element> b = regions;
    b.insert(gn.begin(), gn.end());
    for (const auto& g : amb.ball(std::max<std::int64_t>(0, L - (n - 1)))) {
      bool ok = true;
      for (const auto& x : gn)
        if (!safe_contains(T, amb.mul(x, g))) {
          ok = false;
          break;
        }
      if (ok && n > 1)
        for (const auto& x : b)
          if (b.count(amb.mul(x, g))) {
            ok = false;
            break;
          }
      if (!ok) continue;
      std::vector<Element> c;
      for (const auto& x : gn) {
        auto xg = amb.mul(x, g);
        if (safe_contains(Sp, xg)) c.push_back(xg);
      }
      if (c.empty()) continue;
      std::sort(c.begin(), c.end());
      for (const auto& x : gn) regions.insert(amb.mul(x, g));
      blocks.push_back({n, g, std::move(c)});
      return;
    }
    fail(ErrorKind::stage, "block provider found no translator for block " + std::to_string(n) + " in ball(" + std::to_string(L) + ")");
  }
};

inline std::vector<Element> mul_sets(const Ambient& amb, const std::vector<Element>& a, const std::vector<Element>& b) {
  std::set<Element> out;
  for (const auto& x : a)
    for (const auto& y : b) out.insert(amb.mul(x, y));
  return {out.begin(), out.end()};
}

inline std::vector<Element> sorted_union(std::vector<Element> a, const std::vector<Element>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// W with C & B_j^-1 W = {} equivalent to the (15)-(16) disjointness for index j at stage i.
// stages[s-1] must hold A for all s < i; cur holds A_i^(1..j-1).
inline std::set<Element> forbidden_targets(const Ambient& amb, const std::vector<GroupStage>& stages, std::int64_t i, std::int64_t j,
                                           const std::vector<Element>& Bi, const std::vector<std::vector<Element>>& cur) {
  std::set<Element> w(Bi.begin(), Bi.end());
  auto B = [&](std::int64_t s) -> const std::vector<Element>& { return s == i ? Bi : stages[s - 1].B; };
  for (std::int64_t s = 1; s < j; ++s)
    for (const auto& x : mul_sets(amb, B(s), cur[s - 1])) w.insert(x);
  if (i >= 3)
    for (std::int64_t t = 2; t <= i - 1; ++t)
      for (std::int64_t s = t; s <= i - 1; ++s)
        for (const auto& x : mul_sets(amb, stages[t - 1].B, stages[s - 1].A[t - 1])) w.insert(x);
  return w;
}

inline bool avoids(const Ambient& amb, const std::vector<Element>& c, const std::vector<Element>& Bj, const std::set<Element>& w) {
  for (const auto& x : c)
    for (const auto& b : Bj)
      if (w.count(amb.mul(b, x))) return false;
  return true;
}

inline PwsHint group_pair(const ChainPresentation& ch, std::int64_t m, std::int64_t L) {
  if (auto h = ch.decomposition(m)) return *h;
  auto v = classify_pws(ch.at(m), L);
  if (v.yes() && v.pws_thick && v.pws_syndetic) return {*v.pws_thick, *v.pws_syndetic};
  fail(ErrorKind::stage, "chain member F_" + std::to_string(m) + " has no certified pws decomposition: " + v.note);
}

}  // namespace detail

inline GroupResult build_group(const ChainPresentation& ch, std::int64_t depth, std::int64_t ball_level) {
  if (ch.kind == Kind::N0) fail(ErrorKind::precondition, "build_group needs a group ambient");
  if (depth < 0) fail(ErrorKind::precondition, "depth must be >= 0");
  if (ball_level < 1) fail(ErrorKind::precondition, "ball level must be >= 1");
  Ambient amb(ch.kind);
  const auto e = amb.identity();
  const auto L = ball_level;
  TraceG tr;
  tr.kind = ch.kind;
  tr.chain_dsl = ch.dsl;
  tr.family = ch.family.name;
  tr.provider = detail::group_provider_for(ch.family);
  tr.depth = depth;
  tr.ball_level = L;
  tr.notes.push_back("G_n = ball(n-1); blocks C_n = G_n g_n & S' with G_n g_n inside T and B_n & B_n g_n empty");

  if (depth == 0) {
    tr.committed = {e};
    auto z = SymbolicPoint::explicit_point(ch.kind, {e});
    return {z, z, std::move(tr)};
  }
  auto F1 = ch.at(1);
  std::vector<detail::BlockProvider> prov;
  std::vector<std::set<Element>> supp;  // N(z^(i),[1])

  auto make_provider = [&](const SetExpr& T, const SetExpr& Sp) {
    return detail::BlockProvider{amb, tr.provider, T, Sp, L, {}, {}, {}, 0};
  };
  auto need_identity = [&](std::int64_t m) {
    if (!ch.at(m).contains(e)) fail(ErrorKind::precondition, "chain member F_" + std::to_string(m) + " omits the identity");
  };

  for (std::int64_t i = 1; i <= depth; ++i) {
    GroupStage st;
    st.i = i;
    if (i == 1) {
      st.m = 1;
      st.B = {e};
    } else {
      const auto& prev = supp.back();
      for (const auto& f : prev) st.m = std::max(st.m, ch.m(1, f));
      st.B = detail::sorted_union({prev.begin(), prev.end()}, amb.ball(i - 1));
    }
    need_identity(st.m);
    SetExpr T = full(ch.kind), S = ch.at(st.m);
    if (tr.provider == "pws") {
      auto p = detail::group_pair(ch, st.m, L);
      T = p.thick;
      S = p.syndetic;
    }
    st.t_dsl = T.dsl();
    st.s_dsl = S.dsl();
    SetExpr Sp = S;
    if (i > 1) {
      auto sep = separated_subset(S, st.B, L);
      if (!sep.separated) fail(ErrorKind::check, "stage " + std::to_string(i) + ": separation step did not separate");
      st.separated = sep.chosen;
      Sp = sep.set;
    }
    prov.push_back(make_provider(T, Sp));

    // block selection
    std::vector<std::vector<Element>> cur;
    for (std::int64_t j = 1; j <= i; ++j) {
      std::int64_t t = 1;
      if (i > 1) t = j < i ? tr.stages[i - 2].t[j - 1] + 1 : i;
      if (i == 1) {
        cur.push_back(prov[0].at(1).elems);
        st.t.push_back(1);
        break;
      }
      auto w = detail::forbidden_targets(amb, tr.stages, i, j, st.B, cur);
      const auto& Bj = j == i ? st.B : tr.stages[j - 1].B;
      for (;; ++t) {
        const GroupBlock* blk = nullptr;
        try {
          blk = &prov[j - 1].at(t);
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::stage) throw;
          fail(ErrorKind::stage, "stage " + std::to_string(i) + ", block family j=" + std::to_string(j) + ": no block avoids a forbidden set of " +
                                     std::to_string(w.size()) + " targets; provider stopped at index " + std::to_string(t) + " (" + err.what() + ")");
        }
        if (detail::avoids(amb, blk->elems, Bj, w)) break;
      }
      st.t.push_back(t);
      cur.push_back(prov[j - 1].at(t).elems);
    }
    st.A = cur;

    // the word z^(i)
    std::map<Element, bool> w;
    auto put = [&](const Element& g, bool b) {
      auto [it, fresh] = w.emplace(g, b);
      if (!fresh && it->second != b) fail(ErrorKind::check, "stage " + std::to_string(i) + ": conflicting writes at " + to_string(g));
    };
    if (i == 1) {
      put(e, true);
      for (const auto& g : st.A[0]) put(g, true);
    } else {
      for (const auto& g : st.B) put(g, supp.back().count(g) > 0);
      for (const auto& g : st.A[0]) put(g, true);
      for (std::int64_t j = 2; j <= i; ++j) {
        const auto& Bj = j == i ? st.B : tr.stages[j - 1].B;
        for (const auto& h : Bj)
          for (const auto& a : st.A[j - 1]) put(amb.mul(h, a), supp[j - 2].count(h) > 0);
      }
    }
    std::set<Element> s;
    for (const auto& [g, b] : w)
      if (b) s.insert(g);
    for (const auto& g : s)
      if (!F1.contains(g)) fail(ErrorKind::check, "stage " + std::to_string(i) + ": return element " + to_string(g) + " leaves F_1");
    st.support = {s.begin(), s.end()};
    supp.push_back(std::move(s));
    tr.stages.push_back(std::move(st));
  }

  for (std::size_t i = 0; i < prov.size(); ++i) tr.families.push_back({static_cast<std::int64_t>(i + 1), prov[i].blocks});
  tr.committed = detail::sorted_union(tr.stages.back().support, amb.ball(depth));
  std::set<Element> committed(tr.committed.begin(), tr.committed.end());
  std::int64_t r = depth;
  for (;; ++r) {
    bool in = true;
    for (const auto& g : amb.ball(r + 1))
      if (!committed.count(g)) {
        in = false;
        break;
      }
    if (!in) break;
  }
  tr.guarantee = r;
  std::set<Element> lim;
  for (const auto& g : supp.back())
    if (amb.level_of(g) <= r) lim.insert(g);
  GroupResult res{SymbolicPoint::explicit_point(ch.kind, lim, false, r), SymbolicPoint::explicit_point(ch.kind, supp.back()), std::move(tr)};
  return res;
}

// ---- independent checker -------------------------------------------------------------

inline CheckReport check_trace_g(const TraceG& t, const PredicateRegistry* reg = nullptr) {
  CheckReport rep;
  Ambient amb(t.kind);
  const auto e = amb.identity();
  const auto k = static_cast<std::int64_t>(t.stages.size());
  const auto L = t.ball_level;
  rep.expect("trace shape", k == t.depth && static_cast<std::int64_t>(t.families.size()) == k, [&] { return std::string("stage/family count"); });
  if (k == 0)
    rep.expect("vacuous build", t.committed == std::vector<Element>{e} && t.guarantee == 0, [] { return std::string("depth-0 trace must commit only the identity"); });
  if (k == 0 || static_cast<std::int64_t>(t.families.size()) != k) return rep;
  auto ch = parse_chain(t.kind, t.chain_dsl, family_by_name(t.family, t.kind), reg);
  auto F1 = ch.at(1);
  std::vector<std::set<Element>> supp;
  auto z = [&](std::int64_t i, const Element& g) { return supp[i - 1].count(g) > 0; };
  auto tag = [](std::int64_t i) { return " (stage " + std::to_string(i) + ")"; };
  auto Bof = [&](std::int64_t j) -> const std::vector<Element>& { return t.stages[j - 1].B; };

  for (std::int64_t i = 1; i <= k; ++i) {
    const auto& st = t.stages[i - 1];
    supp.emplace_back(st.support.begin(), st.support.end());
    // (1)
    if (i == 1) {
      rep.expect("(1) B_i", st.B == std::vector<Element>{e}, [&] { return std::string("B_1 != {e}"); });
    } else {
      auto want = detail::sorted_union(t.stages[i - 2].support, amb.ball(i - 1));
      rep.expect("(1) B_i", st.B == want, [&] { return tag(i); });
    }
    // (2)
    for (const auto& g : st.support) rep.expect("(2) N(z^(i),[1]) inside F_1", F1.contains(g), [&] { return to_string(g) + tag(i); });
    rep.expect("(2) identity returns", supp.back().count(e) > 0, [&] { return tag(i); });
    // (5) and m_i
    std::int64_t m = 1;
    if (i > 1)
      for (const auto& f : t.stages[i - 2].support) m = std::max(m, ch.m(1, f));
    rep.expect("(5) m_i from shift witnesses", m == st.m, [&] { return "expected " + std::to_string(m) + tag(i); });
    auto Fm = ch.at(st.m);
    if (i > 1) {
      auto ball = amb.ball(L);
      for (const auto& f : t.stages[i - 2].support)
        for (const auto& x : ball) {
          if (!Fm.contains(x)) continue;
          auto fx = amb.mul(f, x);
          if (amb.level_of(fx) <= L) rep.expect("(5) N(z^(i-1),[1]) F_{m_i} inside F_1", F1.contains(fx), [&] { return to_string(f) + "*" + to_string(x) + tag(i); });
        }
    }
    // (4), (6): F' = T & S'
    auto T = parse_set(t.kind, st.t_dsl, reg);
    auto S = parse_set(t.kind, st.s_dsl, reg);
    SetExpr Sp = i == 1 ? S : windowed(t.kind, L, st.separated);
    for (const auto& g : amb.ball(L))
      if (T.contains(g) && S.contains(g)) rep.expect("(4) pws pair inside F_{m_i}", Fm.contains(g), [&] { return to_string(g) + tag(i); });
    if (i > 1) {
      std::map<Element, Element> owner;
      auto all = st.separated;
      all.push_back(e);
      for (const auto& f : all) {
        rep.expect("(4) F' inside the syndetic part", f == e || S.contains(f), [&] { return to_string(f) + tag(i); });
        for (const auto& b : st.B) {
          auto [it, fresh] = owner.emplace(amb.mul(b, f), f);
          rep.expect("(6) B_i f pairwise disjoint", fresh || it->second == f, [&] { return to_string(f) + " vs " + to_string(it->second) + tag(i); });
        }
      }
    }
    // (7)-(9) on the recorded blocks of family i
    const auto& fam = t.families[i - 1].blocks;
    std::set<Element> regions, seen;
    for (std::size_t n = 1; n <= fam.size(); ++n) {
      const auto& blk = fam[n - 1];
      auto gn = amb.ball(static_cast<std::int64_t>(n) - 1);
      std::set<Element> b = regions;
      b.insert(gn.begin(), gn.end());
      std::vector<Element> want;
      if (t.provider == "singleton") {
        want = {blk.g};
      } else {
        if (n > 1)
          for (const auto& x : b)
            rep.expect("(9) B_n & B_n g_n empty", !b.count(amb.mul(x, blk.g)), [&] { return "n=" + std::to_string(n) + tag(i); });
        for (const auto& x : gn) {
          auto xg = amb.mul(x, blk.g);
          rep.expect("(9) G_n g_n inside T", detail::safe_contains(T, xg), [&] { return "n=" + std::to_string(n) + tag(i); });
          regions.insert(xg);
          if (detail::safe_contains(Sp, xg)) want.push_back(xg);
        }
        std::sort(want.begin(), want.end());
      }
      rep.expect("(9) block = ball(n-1) g_n & S'", blk.elems == want && !want.empty(), [&] { return "n=" + std::to_string(n) + tag(i); });
      for (const auto& x : blk.elems) {
        rep.expect("(7) C_n inside F'", detail::safe_contains(T, x) && detail::safe_contains(Sp, x), [&] { return to_string(x) + tag(i); });
        rep.expect("(8) blocks pairwise disjoint", seen.insert(x).second, [&] { return to_string(x) + tag(i); });
      }
    }
    // (10)-(14)
    rep.expect("(14) index count", static_cast<std::int64_t>(st.t.size()) == i && static_cast<std::int64_t>(st.A.size()) == i, [&] { return tag(i); });
    if (static_cast<std::int64_t>(st.t.size()) != i || static_cast<std::int64_t>(st.A.size()) != i) continue;
    if (i == 1) rep.expect("(10) t(1,1) = 1", st.t[0] == 1, [&] { return std::string(); });
    for (std::int64_t j = 1; j < i; ++j)
      rep.expect("(11) t(j,i) > t(j,i-1)", st.t[j - 1] > t.stages[i - 2].t[j - 1], [&] { return "j=" + std::to_string(j) + tag(i); });
    if (i > 1) rep.expect("(12) t(i,i) > i-1", st.t[i - 1] > i - 1, [&] { return tag(i); });
    for (std::int64_t j = 1; j <= i; ++j) {
      const auto& famj = t.families[j - 1].blocks;
      auto ix = st.t[j - 1];
      bool ok = ix >= 1 && ix <= static_cast<std::int64_t>(famj.size()) && famj[ix - 1].elems == st.A[j - 1];
      rep.expect("(14) A_i^(j) = C^(j)_t(j,i)", ok, [&] { return "j=" + std::to_string(j) + tag(i); });
    }
    // (13): family i's first i-1 blocks exist and were never used at stage >= i
    rep.expect("(13) early blocks of family i", static_cast<std::int64_t>(fam.size()) >= st.t[i - 1], [&] { return tag(i); });
    // (15), (16)
    if (i > 1)
      for (std::int64_t j = 1; j <= i; ++j) {
        auto w = detail::forbidden_targets(amb, t.stages, i, j, st.B, st.A);
        rep.expect(i >= 3 ? "(15)-(16) disjointness" : "(15) disjointness", detail::avoids(amb, st.A[j - 1], j == i ? st.B : Bof(j), w),
                   [&] { return "j=" + std::to_string(j) + tag(i); });
      }
    // (17)-(20)
    std::set<Element> explained;
    if (i == 1) {
      explained.insert(e);
    } else {
      for (const auto& g : st.B) {
        rep.expect("(17) z^(i) = z^(i-1) on B_i", z(i, g) == z(i - 1, g), [&] { return to_string(g) + tag(i); });
        explained.insert(g);
      }
    }
    for (const auto& g : st.A[0]) {
      rep.expect("(18) z^(i) = 1 on A_i^(1)", z(i, g), [&] { return to_string(g) + tag(i); });
      explained.insert(g);
    }
    for (std::int64_t j = 2; j <= i; ++j)
      for (const auto& h : Bof(j))
        for (const auto& a : st.A[j - 1]) {
          auto g = amb.mul(h, a);
          rep.expect("(19) copy rule", z(i, g) == z(j - 1, h), [&] { return to_string(h) + "*" + to_string(a) + tag(i); });
          explained.insert(g);
        }
    for (const auto& g : st.support) rep.expect("(20) zero elsewhere", explained.count(g) > 0, [&] { return to_string(g) + tag(i); });
    // (3)
    std::set<Element> rhs;
    if (i == 1) {
      rhs.insert(e);
      rhs.insert(st.A[0].begin(), st.A[0].end());
    } else {
      rhs = supp[i - 2];
      rhs.insert(st.A[0].begin(), st.A[0].end());
      for (std::int64_t j = 1; j < i; ++j)
        for (const auto& x : detail::mul_sets(amb, t.stages[j - 1].support, st.A[j])) rhs.insert(x);
    }
    rep.expect("(3) return set recursion", rhs == supp.back(), [&] { return tag(i); });
  }

  // (i) copy facts, (iii) on the committed region, (ii) committed region
  auto want_committed = detail::sorted_union(t.stages.back().support, amb.ball(k));
  rep.expect("(ii) committed region B_{k+1}", want_committed == t.committed, [&] { return std::string("mismatch"); });
  std::set<Element> region(t.committed.begin(), t.committed.end());
  for (std::int64_t r = 1; r < k; ++r)
    for (std::int64_t j = r + 1; j <= k; ++j)
      for (std::int64_t s = r + 1; s <= j; ++s)
        for (const auto& h : Bof(r + 1))
          for (const auto& g : t.stages[s - 1].A[r]) {
            auto hg = amb.mul(h, g);
            rep.expect("(i) z^(j)(hg) = z^(r)(h)", z(j, hg) == z(r, h), [&] {
              return "r=" + std::to_string(r) + " j=" + std::to_string(j) + " h=" + to_string(h) + " g=" + to_string(g);
            });
            if (j == k && region.count(hg))
              rep.expect("(iii) blocks return to the stage cylinder", z(k, hg) == z(r, h), [&] { return to_string(hg); });
          }
  for (const auto& g : t.committed)
    if (z(k, g)) rep.expect("N(z,[1]) inside F_1 on the committed region", F1.contains(g), [&] { return to_string(g); });
  std::int64_t r = 0;
  for (;; ++r) {
    auto next = amb.ball(r + 1);
    if (!std::all_of(next.begin(), next.end(), [&](const Element& g) { return region.count(g) > 0; })) break;
  }
  rep.expect("guarantee level", r == t.guarantee, [&] { return "expected " + std::to_string(r); });
  return rep;
}

}  // namespace rl
