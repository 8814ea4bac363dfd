#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rl/check.hpp"
#include "rl/dsl.hpp"
#include "rl/subshift.hpp"
#include "rl/witness.hpp"

namespace rl {

// ---- N0 builder ---------------------------------------------------------------------

struct Interval {
  std::int64_t lo = 0, hi = -1;
  std::int64_t size() const { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

struct N0Stage {
  std::int64_t i = 0;
  std::vector<std::int64_t> A;  // N(z^(i), [1])
  std::int64_t a = 0;
  std::vector<std::int64_t> U;  // A_{i-1}: U_i is the intersection of T^-j U_1 over these j
  std::int64_t M = 0;           // chain index whose pws pair fed the stage (0 for stream input)
  std::string target_dsl;       // set that H_i & S_i must stay inside
  std::string h_dsl, s_dsl;
  std::vector<Interval> intervals;  // I_i^(j), j = 1..i
  std::vector<bool> word;           // z^(i) on [0, a_i]
  // coverage[r-1] = I_i^(r+1) & S_{r+1} for r < i: block positions that copy z^(r)
  std::vector<std::vector<std::int64_t>> coverage;
  bool operator==(const N0Stage&) const = default;
};

struct TraceN0 {
  std::string source;  // "chain" or "stream"
  std::string chain_dsl;
  std::string family;
  std::string f_dsl;                                      // stream: the target F
  std::vector<std::pair<std::string, std::string>> pairs;  // stream: (H_1,S_1), then (H',S') per stage
  std::int64_t depth = 0;
  std::int64_t horizon = 0;
  bool hit_every_block = true;
  std::vector<N0Stage> stages;
  std::vector<std::string> notes;
  bool operator==(const TraceN0&) const = default;
};

struct N0Result {
  SymbolicPoint point;  // the limit point, known on [0, a_k]
  SymbolicPoint stage;  // z^(k) itself (zero beyond a_k)
  TraceN0 trace;
};

struct N0Options {
  // Require every interval I_i^(j) to meet S_j, not only j = 1, so that each
  // stage leaves a visible copy of every earlier word.
  bool hit_every_block = true;
};

// Stage inputs: stage 1 gets H_1, S_1 directly; later stages get the target
// (the set playing N((x,y),U_i x U_i)) and a pws pair (H', S') to dilate by a_{i-1}+1.
struct N0StageInput {
  SetExpr target;
  SetExpr hprime;
  SetExpr sprime;
  std::int64_t M = 0;
};

struct N0Source {
  std::string kind;  // chain | stream
  SetExpr F;         // N(z,[1]) must stay inside F & {0}
  std::function<std::pair<SetExpr, SetExpr>()> first;
  std::function<N0StageInput(std::int64_t i, const std::vector<std::int64_t>& prev)> next;
  TraceN0 header;
};

namespace detail {

inline SetExpr positives() { return eventually_periodic(Kind::N0, 1, 1, {0}); }

inline PwsHint chain_pair(const ChainPresentation& ch, std::int64_t n, std::int64_t horizon) {
  if (auto h = ch.decomposition(n)) return *h;
  auto v = classify_pws(ch.at(n), horizon);
  if (v.yes() && v.pws_thick && v.pws_syndetic) return {*v.pws_thick, *v.pws_syndetic};
  fail(ErrorKind::stage, "chain member F_" + std::to_string(n) + " has no certified pws decomposition: " + v.note);
}

inline std::int64_t chain_index(const ChainPresentation& ch, const std::vector<std::int64_t>& prev) {
  std::int64_t M = 1;
  for (auto t : prev)
    if (t != 0) M = std::max(M, ch.m(1, Element::n0(t)));
  return M;
}

inline SetExpr stream_target(const SetExpr& F, const std::vector<std::int64_t>& prev) {
  std::vector<SetExpr> parts;
  for (auto t : prev) parts.push_back(pre_translate(Element::n0(t), F));
  return parts.empty() ? F : intersect(std::move(parts));
}

inline std::vector<char> bitmap(const SetExpr& s, std::int64_t horizon) {
  std::vector<char> b(static_cast<std::size_t>(horizon + 1));
  for (std::int64_t n = 0; n <= horizon; ++n) b[n] = s.contains(Element::n0(n));
  return b;
}

}  // namespace detail

inline N0Source n0_source_chain(const ChainPresentation& ch, std::int64_t horizon) {
  if (ch.kind != Kind::N0) fail(ErrorKind::precondition, "build_n0 needs a chain over N0");
  N0Source s;
  s.kind = "chain";
  s.F = ch.at(1);
  s.header.source = "chain";
  s.header.chain_dsl = ch.dsl;
  s.header.family = ch.family.name;
  s.first = [ch, horizon] {
    auto p = detail::chain_pair(ch, 1, horizon);
    return std::make_pair(p.thick, p.syndetic);
  };
  s.next = [ch, horizon](std::int64_t, const std::vector<std::int64_t>& prev) {
    auto M = detail::chain_index(ch, prev);
    auto p = detail::chain_pair(ch, M, horizon);
    std::int64_t c = prev.back() + 1;  // prev is sorted; back() = a_{i-1}
    return N0StageInput{ch.at(M), contract(c, p.thick), intersect({contract(c, p.syndetic), detail::positives()}), M};
  };
  return s;
}

// pairs[0] = (H_1, S_1); pairs[i-1] = (H', S') for stage i, the last one reused.
// S' is cut down to {m : (a+1) m lands in the stage target}.
inline N0Source n0_source_stream(const SetExpr& F, std::vector<std::pair<SetExpr, SetExpr>> pairs) {
  if (F.kind() != Kind::N0) fail(ErrorKind::precondition, "build_n0 works over N0");
  if (pairs.empty()) fail(ErrorKind::precondition, "stream needs at least the stage-1 pair");
  N0Source s;
  s.kind = "stream";
  s.F = F;
  s.header.source = "stream";
  s.header.f_dsl = F.dsl();
  for (const auto& [h, sy] : pairs) s.header.pairs.emplace_back(h.dsl(), sy.dsl());
  s.first = [pairs] { return pairs[0]; };
  s.next = [F, pairs](std::int64_t i, const std::vector<std::int64_t>& prev) {
    const auto& p = pairs[std::min<std::size_t>(static_cast<std::size_t>(i - 1), pairs.size() - 1)];
    auto target = detail::stream_target(F, prev);
    std::int64_t c = prev.back() + 1;
    return N0StageInput{target, p.first, intersect({p.second, contract(c, target), detail::positives()}), 0};
  };
  return s;
}

namespace detail {

struct N0Builder {
  const N0Source& src;
  std::int64_t depth, horizon;
  N0Options opt;
  std::vector<SetExpr> H, S;  // index j-1
  std::vector<std::vector<char>> hb, sb;
  std::vector<std::vector<bool>> words;  // z^(i) on [0, a_i]
  TraceN0 trace;

  [[noreturn]] void stage_fail(std::int64_t i, std::int64_t j, const std::string& what, std::int64_t from) {
    fail(ErrorKind::stage, "stage " + std::to_string(i) + ", interval j=" + std::to_string(j) + ": no interval of size " +
                               std::to_string(i + 1) + " with " + what + " starting in [" + std::to_string(from) + ", " +
                               std::to_string(horizon) + "]");
  }

  void add_pair(const SetExpr& h, const SetExpr& s) {
    H.push_back(h);
    S.push_back(s);
    hb.push_back(bitmap(h, horizon));
    sb.push_back(bitmap(s, horizon));
  }

  // Leftmost interval of the given size inside H_j with lo >= from and room for a
  // copy of length tail after it.
  Interval pick(std::int64_t i, std::int64_t j, std::int64_t from, std::int64_t tail, bool hit) {
    const auto& h = hb[j - 1];
    const auto& s = sb[j - 1];
    const std::int64_t L = i + 1;
    std::int64_t run = 0, last_s = -1;
    for (std::int64_t n = std::max<std::int64_t>(from, 0); n + tail <= horizon; ++n) {
      run = h[n] ? run + 1 : 0;
      if (s[n]) last_s = n;
      if (run < L) continue;
      Interval I{n - L + 1, n};
      if (I.lo < from) continue;
      if (hit && last_s < I.lo) continue;
      return I;
    }
    std::string what = "inside H_" + std::to_string(j);
    if (hit) what += " meeting S_" + std::to_string(j);
    stage_fail(i, j, what, from);
  }

  void commit(std::int64_t i, const std::vector<Interval>& iv, N0Stage& st) {
    std::int64_t a_prev = i > 1 ? trace.stages[i - 2].a : 0;
    std::vector<signed char> w;
    auto put = [&](std::int64_t t, bool b) {
      if (t >= static_cast<std::int64_t>(w.size())) w.resize(t + 1, -1);
      if (w[t] >= 0 && w[t] != static_cast<signed char>(b))
        fail(ErrorKind::check, "stage " + std::to_string(i) + ": conflicting writes at " + std::to_string(t));
      w[t] = b;
    };
    if (i == 1) {
      put(0, true);
    } else {
      for (std::int64_t t = 0; t <= a_prev; ++t) put(t, words[i - 2][t]);
    }
    for (auto n = iv[0].lo; n <= iv[0].hi; ++n)
      if (sb[0][n]) put(n, true);
    st.coverage.assign(static_cast<std::size_t>(i - 1), {});
    for (std::int64_t j = 2; j <= i; ++j) {
      const auto& src_word = words[j - 2];
      for (auto n = iv[j - 1].lo; n <= iv[j - 1].hi; ++n) {
        if (!sb[j - 1][n]) continue;
        st.coverage[j - 2].push_back(n);
        for (std::size_t t = 0; t < src_word.size(); ++t) put(n + static_cast<std::int64_t>(t), src_word[t]);
      }
    }
    std::vector<bool> word;
    for (std::size_t t = 0; t < w.size(); ++t) {
      word.push_back(w[t] == 1);
      if (w[t] == 1) st.A.push_back(static_cast<std::int64_t>(t));
    }
    st.a = st.A.back();
    word.resize(static_cast<std::size_t>(st.a + 1));
    st.word = word;
    words.push_back(std::move(word));
  }

  void stage(std::int64_t i) {
    N0Stage st;
    st.i = i;
    const N0Stage* prev = i > 1 ? &trace.stages[i - 2] : nullptr;
    if (i == 1) {
      auto [h, s] = src.first();
      for (std::int64_t n = 0; n <= horizon; ++n)
        if (h.contains(Element::n0(n)) && s.contains(Element::n0(n)) && !src.F.contains(Element::n0(n)))
          fail(ErrorKind::stage, "stage 1: H_1 & S_1 leaves F at " + std::to_string(n));
      st.target_dsl = src.F.dsl();
      st.M = src.kind == "chain" ? 1 : 0;
      add_pair(h, s);
    } else {
      st.U = prev->A;
      auto in = src.next(i, prev->A);
      st.M = in.M;
      st.target_dsl = in.target.dsl();
      DilationSplit ds;
      try {
        ds = dilation_split(in.target, prev->a, in.hprime, in.sprime, horizon);
      } catch (const Error& e) {
        fail(ErrorKind::stage, "stage " + std::to_string(i) + ": dilation by " + std::to_string(prev->a + 1) + " failed: " + e.what());
      }
      if (!ds.h_thick.yes() || !ds.s_syndetic.yes() || !ds.s_divisible || !ds.inside)
        fail(ErrorKind::stage, "stage " + std::to_string(i) + ": dilated pair does not certify");
      add_pair(ds.h, ds.s);
    }
    st.h_dsl = H.back().dsl();
    st.s_dsl = S.back().dsl();

    std::vector<Interval> iv;
    for (std::int64_t j = 1; j <= i; ++j) {
      std::int64_t from = 0;
      if (j == 1) {
        if (i == 1) {
          from = 2;
        } else {
          std::int64_t u = i == 2 ? 0 : trace.stages[i - 3].a;
          from = std::max(prev->a, prev->intervals[i - 2].hi + u) + 1;
        }
      } else if (j == 2) {
        from = iv[0].hi + 1;
      } else {
        auto gap = trace.stages[j - 3].a;  // a_{j-2}
        from = std::max(iv[j - 2].hi, prev->intervals[j - 2].hi) + gap + 1;
      }
      std::int64_t tail = j >= 2 ? trace.stages[j - 2].a : 0;
      iv.push_back(pick(i, j, from, tail, j == 1 || opt.hit_every_block));
    }
    st.intervals = iv;
    commit(i, iv, st);
    trace.stages.push_back(std::move(st));
  }
};

}  // namespace detail

inline N0Result build_n0(const N0Source& src, std::int64_t depth, std::int64_t horizon, N0Options opt = {}) {
  if (depth < 0) fail(ErrorKind::precondition, "depth must be >= 0");
  if (horizon < 4) fail(ErrorKind::precondition, "horizon too small");
  detail::N0Builder b{src, depth, horizon, opt, {}, {}, {}, {}, {}, src.header};
  b.trace.depth = depth;
  b.trace.horizon = horizon;
  b.trace.hit_every_block = opt.hit_every_block;
  b.trace.notes.push_back(
      "interval gaps for j>=3 use the larger of max I_i^(j-1) and max I_(i-1)^(j-1); both readings of the gap rule hold");
  if (depth == 0) {
    auto z = SymbolicPoint::explicit_point(Kind::N0, {Element::n0(0)});
    return {z, z, std::move(b.trace)};
  }
  for (std::int64_t i = 1; i <= depth; ++i) b.stage(i);
  const auto& last = b.trace.stages.back();
  std::set<Element> ones;
  for (auto t : last.A) ones.insert(Element::n0(t));
  N0Result r{SymbolicPoint::explicit_point(Kind::N0, ones, false, last.a), SymbolicPoint::explicit_point(Kind::N0, ones), std::move(b.trace)};
  return r;
}

inline N0Result build_n0(const ChainPresentation& ch, std::int64_t depth, std::int64_t horizon, N0Options opt = {}) {
  return build_n0(n0_source_chain(ch, horizon), depth, horizon, opt);
}

// ---- independent checker -------------------------------------------------------------

namespace detail {

inline std::string ints(const std::vector<std::int64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

}  // namespace detail

// Re-derives every set from the DSL strings in the trace and re-asserts the stage
// hypotheses, the facts about the limit point, and the target inclusion.
inline CheckReport check_trace_n0(const TraceN0& t, const PredicateRegistry* reg = nullptr) {
  CheckReport rep;
  const auto H = t.horizon;
  const auto k = static_cast<std::int64_t>(t.stages.size());
  auto n0 = [](std::int64_t v) { return Element::n0(v); };
  rep.expect("trace shape", k == t.depth && k >= 0, [&] { return "stage count " + std::to_string(k) + " vs depth " + std::to_string(t.depth); });
  if (k == 0) return rep;  // vacuous build: z is the indicator of {0}

  std::optional<ChainPresentation> chain;
  SetExpr F = empty(Kind::N0);
  if (t.source == "chain") {
    chain = parse_chain(Kind::N0, t.chain_dsl, family_by_name(t.family, Kind::N0), reg);
    F = chain->at(1);
  } else {
    F = parse_set(Kind::N0, t.f_dsl, reg);
  }

  std::vector<SetExpr> Hs, Ss;
  std::vector<std::vector<bool>> z;  // z^(i) on [0, a_i], extended by 0
  auto zi = [&](std::int64_t i, std::int64_t n) {
    const auto& w = z[i - 1];
    return n >= 0 && n < static_cast<std::int64_t>(w.size()) && w[n];
  };

  for (std::int64_t i = 1; i <= k; ++i) {
    const auto& st = t.stages[i - 1];
    const auto tag = " (stage " + std::to_string(i) + ")";
    Hs.push_back(parse_set(Kind::N0, st.h_dsl, reg));
    Ss.push_back(parse_set(Kind::N0, st.s_dsl, reg));
    z.push_back(st.word);
    const auto& Hi = Hs.back();
    const auto& Si = Ss.back();

    // (1)
    std::vector<std::int64_t> ones;
    for (std::size_t n = 0; n < st.word.size(); ++n)
      if (st.word[n]) ones.push_back(static_cast<std::int64_t>(n));
    rep.expect("(1) A_i = N(z^(i),[1])", ones == st.A && !ones.empty() && st.a == ones.back(), [&] { return "recorded A differs" + tag; });
    for (auto n : st.A) rep.expect("(1) A_i inside F+{0}", n == 0 || F.contains(n0(n)), [&] { return std::to_string(n) + tag; });
    if (i == 1) {
      rep.expect("stage 1 word", zi(1, 0) && !zi(1, 1), [&] { return std::string("z(0)=1, z(1)=0 violated"); });
    } else {
      const auto& pv = t.stages[i - 2];
      // (2)
      bool sub = std::includes(st.A.begin(), st.A.end(), pv.A.begin(), pv.A.end());
      rep.expect("(2) A_{i-1} < A_i", sub && pv.a < st.a, [&] { return "nesting fails" + tag; });
      // (3)
      rep.expect("(3) U_i index set", st.U == pv.A, [&] { return "U descriptor " + detail::ints(st.U) + tag; });
    }

    // (4): the target, its relation to U_i, and the pair
    SetExpr target = F;
    if (i > 1) {
      if (chain) {
        auto M = detail::chain_index(*chain, st.U);
        rep.expect("(3) shift index M_i", M == st.M, [&] { return "expected M=" + std::to_string(M) + tag; });
        target = chain->at(M);
      } else {
        target = detail::stream_target(F, st.U);
      }
      for (std::int64_t n = 1; n <= H; ++n) {
        if (!target.contains(n0(n))) continue;
        for (auto j : st.U)
          if (n + j <= H)
            rep.expect("(3) U_i target shifts into F", F.contains(n0(n + j)), [&] {
              return std::to_string(n) + "+" + std::to_string(j) + tag;
            });
      }
    }
    auto tv = classify_thick(Hi, H);
    auto sv = classify_syndetic(Si, H);
    rep.expect("(4) H_i thick", tv.yes(), [&] { return tv.note + tag; });
    rep.expect("(4) S_i syndetic", sv.yes(), [&] { return sv.note + tag; });
    for (std::int64_t n = 0; n <= H; ++n)
      if (Hi.contains(n0(n)) && Si.contains(n0(n)))
        rep.expect("(4) H_i & S_i inside target", target.contains(n0(n)), [&] { return std::to_string(n) + tag; });
    // (5)
    if (i > 1) {
      auto c = t.stages[i - 2].a + 1;
      for (std::int64_t n = 0; n <= H; ++n)
        if (Si.contains(n0(n))) rep.expect("(5) S_i inside (a_{i-1}+1)N", n > 0 && n % c == 0, [&] { return std::to_string(n) + tag; });
    }
    // (6)
    rep.expect("(6) interval count", static_cast<std::int64_t>(st.intervals.size()) == i, [&] { return "wrong count" + tag; });
    if (static_cast<std::int64_t>(st.intervals.size()) != i) continue;
    for (std::int64_t j = 1; j <= i; ++j) {
      const auto& I = st.intervals[j - 1];
      rep.expect("(6) |I_i^(j)| > i", I.size() > i, [&] { return "j=" + std::to_string(j) + tag; });
      bool hit = false;
      for (auto n = I.lo; n <= I.hi; ++n) {
        rep.expect("(6) I_i^(j) inside H_j", Hs[j - 1].contains(n0(n)), [&] { return std::to_string(n) + " j=" + std::to_string(j) + tag; });
        hit = hit || Ss[j - 1].contains(n0(n));
      }
      if (j == 1 || t.hit_every_block) rep.expect("(6) I_i^(j) meets S_j", hit, [&] { return "j=" + std::to_string(j) + tag; });
    }
    // (7), (8)
    const auto& iv = st.intervals;
    if (i == 1) rep.expect("(7) stage-1 interval beyond 1", iv[0].lo > 1, [&] { return std::string("min I_1 <= 1"); });
    if (i > 1) {
      const auto& pv = t.stages[i - 2];
      rep.expect("(7) min I^(1) > a_{i-1}", iv[0].lo > pv.a, [&] { return tag; });
      rep.expect("(7) min I^(2) > max I^(1)", iv[1].lo > iv[0].hi, [&] { return tag; });
      std::int64_t u = i == 2 ? 0 : t.stages[i - 3].a;
      rep.expect("(8) min I^(1) > max I_{i-1}^(i-1) + u", iv[0].lo > pv.intervals[i - 2].hi + u, [&] { return tag; });
      for (std::int64_t j = 3; j <= i; ++j) {
        auto gap = t.stages[j - 3].a;
        rep.expect("(8) gap to previous stage", iv[j - 1].lo > pv.intervals[j - 2].hi + gap, [&] { return "j=" + std::to_string(j) + tag; });
        rep.expect("(8) gap within stage", iv[j - 1].lo > iv[j - 2].hi + gap, [&] { return "j=" + std::to_string(j) + tag; });
      }
    }
    // (9)-(12)
    std::vector<char> explained(st.word.size() + 1, 0);
    auto mark = [&](std::int64_t n) {
      if (n >= 0 && n < static_cast<std::int64_t>(explained.size())) explained[n] = 1;
    };
    if (i > 1) {
      const auto ap = t.stages[i - 2].a;
      for (std::int64_t n = 0; n <= ap; ++n) {
        rep.expect("(9) z^(i) extends z^(i-1)", zi(i, n) == zi(i - 1, n), [&] { return std::to_string(n) + tag; });
        mark(n);
      }
    } else {
      mark(0);
    }
    for (auto n = iv[0].lo; n <= iv[0].hi; ++n)
      if (Ss[0].contains(n0(n))) {
        rep.expect("(10) z^(i) = 1 on I^(1) & S_1", zi(i, n), [&] { return std::to_string(n) + tag; });
        mark(n);
      }
    for (std::int64_t j = 2; j <= i; ++j) {
      const auto aj = t.stages[j - 2].a;
      std::vector<std::int64_t> cov;
      for (auto n = iv[j - 1].lo; n <= iv[j - 1].hi; ++n) {
        if (!Ss[j - 1].contains(n0(n))) continue;
        cov.push_back(n);
        for (std::int64_t s = 0; s <= aj; ++s) {
          rep.expect("(11) block copies", zi(i, n + s) == zi(j - 1, s), [&] {
            return "n=" + std::to_string(n) + " s=" + std::to_string(s) + " j=" + std::to_string(j) + tag;
          });
          mark(n + s);
        }
      }
      rep.expect("coverage record", static_cast<std::size_t>(j - 2) < st.coverage.size() && st.coverage[j - 2] == cov,
                 [&] { return "j=" + std::to_string(j) + tag; });
    }
    for (std::size_t n = 0; n < st.word.size(); ++n)
      if (!explained[n]) rep.expect("(12) zero elsewhere", !st.word[n], [&] { return std::to_string(n) + tag; });
  }

  // The limit point agrees with z^(k) on [0, a_k].
  const auto ak = t.stages.back().a;
  auto zlim = [&](std::int64_t n) { return zi(k, n); };
  // (a), (c)
  for (std::int64_t j = 1; j <= k; ++j)
    for (std::int64_t n = 0; n <= t.stages[j - 1].a; ++n)
      rep.expect("(c) z agrees with z^(j) on [0,a_j]", zlim(n) == zi(j, n), [&] { return "j=" + std::to_string(j) + " n=" + std::to_string(n); });
  for (std::int64_t j = 2; j <= k; ++j)
    for (std::int64_t r = 1; r < j; ++r) {
      const auto& cov = t.stages[j - 1].coverage[r - 1];
      const auto ar = t.stages[r - 1].a;
      for (auto n : cov)
        for (std::int64_t s = 0; s <= ar; ++s)
          for (std::int64_t i = j; i <= k; ++i)
            rep.expect("(a) copies persist", zi(i, n + s) == zi(r, s), [&] {
              return "r=" + std::to_string(r) + " j=" + std::to_string(j) + " n=" + std::to_string(n);
            });
    }
  // (b) coverage inside N(z, [z^(r)|[0,a_r]]); (d) N(z^(i), C_r) inside N(z, C_r) on the known region
  auto returns_to = [&](auto&& pt, std::int64_t n, std::int64_t r) {
    const auto ar = t.stages[r - 1].a;
    for (std::int64_t s = 0; s <= ar; ++s)
      if (pt(n + s) != zi(r, s)) return false;
    return true;
  };
  for (std::int64_t j = 2; j <= k; ++j)
    for (std::int64_t r = 1; r < j; ++r)
      for (auto n : t.stages[j - 1].coverage[r - 1])
        rep.expect("(b) coverage returns to z^(r) cylinder", returns_to(zlim, n, r), [&] {
          return "r=" + std::to_string(r) + " n=" + std::to_string(n);
        });
  for (std::int64_t i = 2; i <= k; ++i)
    for (std::int64_t r = 1; r < i; ++r) {
      const auto ar = t.stages[r - 1].a;
      for (std::int64_t n = 0; n + ar <= t.stages[i - 1].a; ++n)
        if (returns_to([&](std::int64_t m) { return zi(i, m); }, n, r))
          rep.expect("(d) stage returns persist", returns_to(zlim, n, r), [&] {
            return "i=" + std::to_string(i) + " r=" + std::to_string(r) + " n=" + std::to_string(n);
          });
    }
  for (std::int64_t n = 1; n <= std::min(H, ak); ++n)
    if (zlim(n)) rep.expect("N(z,[1]) inside F+{0}", F.contains(n0(n)), [&] { return std::to_string(n); });
  return rep;
}

}  // namespace rl
