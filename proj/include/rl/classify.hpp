#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rl/setexpr.hpp"
#include "rl/verdict.hpp"

namespace rl {

// Thickness level demanded of a horizon-only verdict when the caller passes 0.
inline std::int64_t default_level(Kind k, std::int64_t horizon) {
  if (k == Kind::N0 || k == Kind::Z) {
    std::int64_t l = 0;
    while ((std::int64_t{2} << l) <= horizon) ++l;
    return std::max<std::int64_t>(1, l);
  }
  return std::max<std::int64_t>(1, horizon / 2);
}

// ---- structural facts about expression trees --------------------------------

namespace structure {

inline bool is_run_base(const SetExpr& s) { return s.as<node::Blocks>() || s.as<node::FsBlocks>(); }

// Strips integer translations; returns the underlying node.
inline SetExpr strip_translates(SetExpr s) {
  while (auto t = s.as<node::Translate>()) s = *t->child;
  return s;
}

inline bool cofinite_exact(const SetExpr& s) {
  const auto& e = s.exact();
  return e && e->mask_full();
}

// Sound (never claims thickness falsely); incomplete by design.
inline bool thick(const SetExpr& s) {
  if (s.kind() != Kind::N0 && s.kind() != Kind::Z) return s.as<node::Full>() != nullptr;
  if (const auto& e = s.exact()) return e->mask_full();
  if (s.as<node::Full>() || is_run_base(s)) return true;
  if (auto t = s.as<node::Translate>()) return thick(*t->child);
  if (auto t = s.as<node::Inflate>()) return thick(*t->child);
  if (auto t = s.as<node::Contract>()) return thick(*t->child);
  if (auto d = s.as<node::Dilation>(); d && d->c == -1) return thick(*d->child);
  if (auto u = s.as<node::Union>()) {
    for (const auto& c : u->children)
      if (thick(c)) return true;
    return false;
  }
  if (auto u = s.as<node::Intersection>()) {
    // Cofinite parts never break thickness.  What remains must be one thick set
    // or translates of a single run-based set (whose runs grow without bound).
    std::vector<SetExpr> rest;
    for (const auto& c : u->children)
      if (!cofinite_exact(c)) rest.push_back(c);
    if (rest.empty()) return true;
    if (rest.size() == 1) return thick(rest[0]);
    auto base = strip_translates(rest[0]);
    if (!is_run_base(base)) return false;
    for (const auto& c : rest)
      if (!strip_translates(c).same_node(base)) return false;
    return true;
  }
  return false;
}

inline bool nonthick(const SetExpr& s) {
  if (s.kind() != Kind::N0 && s.kind() != Kind::Z) return false;
  if (const auto& e = s.exact()) return !e->mask_full();
  if (auto d = s.as<node::Dilation>()) return d->c != 1 && d->c != -1;
  if (auto t = s.as<node::Translate>()) return nonthick(*t->child);
  if (auto t = s.as<node::Inflate>()) return nonthick(*t->child);
  if (auto u = s.as<node::Intersection>()) {
    for (const auto& c : u->children)
      if (nonthick(c)) return true;
  }
  return false;
}

inline bool nonsyndetic(const SetExpr& s) {
  if (s.kind() != Kind::N0 && s.kind() != Kind::Z) return false;
  if (const auto& e = s.exact()) return e->mask_empty();
  if (is_run_base(s)) return true;
  if (auto t = s.as<node::Translate>()) return nonsyndetic(*t->child);
  if (auto t = s.as<node::Inflate>()) return nonsyndetic(*t->child);
  if (auto t = s.as<node::Contract>()) return nonsyndetic(*t->child);
  if (auto t = s.as<node::Dilation>()) return nonsyndetic(*t->child);
  if (auto u = s.as<node::Intersection>()) {
    for (const auto& c : u->children)
      if (nonsyndetic(c)) return true;
  }
  return false;
}

// Finite-or-cofinite closed form on any ambient: (cofinite?, finite exception set).
struct FinCo {
  bool cofinite;
  std::set<Element> elems;
};

inline std::optional<FinCo> fin_co(const SetExpr& s) {
  auto amb = s.ambient();
  if (s.as<node::Full>()) return FinCo{true, {}};
  if (s.as<node::Empty>()) return FinCo{false, {}};
  if (auto f = s.as<node::Finite>()) return FinCo{false, {f->elems.begin(), f->elems.end()}};
  if (auto c = s.as<node::Complement>()) {
    auto r = fin_co(*c->child);
    if (!r) return std::nullopt;
    r->cofinite = !r->cofinite;
    return r;
  }
  auto fold = [&](const std::vector<SetExpr>& xs, bool conj) -> std::optional<FinCo> {
    std::optional<FinCo> acc;
    for (const auto& x : xs) {
      auto r = fin_co(x);
      if (!r) return std::nullopt;
      if (!acc) {
        acc = r;
        continue;
      }
      // Work with the "finite part" F and cofinite flag: the set is F or G\F.
      auto in = [](const FinCo& f, const Element& g) { return f.cofinite != (f.elems.count(g) > 0); };
      std::set<Element> probe(acc->elems);
      probe.insert(r->elems.begin(), r->elems.end());
      bool co = conj ? (acc->cofinite && r->cofinite) : (acc->cofinite || r->cofinite);
      FinCo out{co, {}};
      for (const auto& g : probe) {
        bool m = conj ? (in(*acc, g) && in(*r, g)) : (in(*acc, g) || in(*r, g));
        if (m != co) out.elems.insert(g);
      }
      acc = out;
    }
    return acc;
  };
  if (auto u = s.as<node::Union>()) return fold(u->children, false);
  if (auto u = s.as<node::Intersection>()) return fold(u->children, true);
  if (auto t = s.as<node::Translate>()) {
    if (!amb.is_group()) return std::nullopt;
    auto r = fin_co(*t->child);
    if (!r) return std::nullopt;
    Element h = t->preimage ? amb.inv(t->g) : t->g;
    FinCo out{r->cofinite, {}};
    for (const auto& a : r->elems) out.elems.insert(t->right ? amb.mul(a, h) : amb.mul(h, a));
    return out;
  }
  return std::nullopt;
}

}  // namespace structure

// ---- integer scanning helpers ------------------------------------------------

namespace detail {

struct Span {
  std::int64_t lo;
  std::int64_t hi;
};

inline Span int_ball(Kind k, std::int64_t h) { return k == Kind::N0 ? Span{0, h} : Span{-h, h}; }

inline std::int64_t run_level(Kind k, std::int64_t len) { return k == Kind::N0 ? len - 1 : (len - 1) / 2; }

inline std::vector<Span> runs_in(const SetExpr& s, Span w) {
  std::vector<Span> out;
  std::int64_t start = 0;
  bool open = false;
  for (std::int64_t n = w.lo; n <= w.hi; ++n) {
    bool m = s.contains(n);
    if (m && !open) {
      start = n;
      open = true;
    } else if (!m && open) {
      out.push_back({start, n - 1});
      open = false;
    }
  }
  if (open) out.push_back({start, w.hi});
  return out;
}

// First translator (enumeration order) for level l across the runs.
inline std::optional<Element> first_translator(Kind k, const std::vector<Span>& runs, std::int64_t l) {
  std::optional<Element> best;
  for (const auto& r : runs) {
    std::int64_t a, b;
    if (k == Kind::N0) {
      a = r.lo;
      b = r.hi - l;
    } else {
      a = r.lo + l;
      b = r.hi - l;
    }
    if (a > b) continue;
    std::int64_t g = (a <= 0 && 0 <= b) ? 0 : (a > 0 ? a : b);
    auto e = Element::integer(k, g);
    if (!best || e < *best) best = e;
  }
  return best;
}

// Largest distance to the next member over a region covering every residue
// pattern of the form, and the longest run; the form must have a nonempty mask
// for the first value to be finite.
struct FormShape {
  std::int64_t next_max = 0;
  std::int64_t run_max = 0;
};

inline FormShape form_shape(const PeriodicForm& f) {
  auto p = f.period;
  std::int64_t rlo, rhi;
  if (f.has_window()) {
    rlo = f.lo - 2 * p;
    rhi = f.hi + 2 * p;
  } else {
    rlo = -2 * p;
    rhi = 2 * p;
  }
  if (f.nonneg) rlo = 0;
  FormShape sh;
  std::int64_t run = 0;
  for (std::int64_t n = rlo; n <= rhi; ++n) {
    run = f.contains(n) ? run + 1 : 0;
    sh.run_max = std::max(sh.run_max, run);
  }
  if (!f.mask_empty()) {
    std::int64_t nearest = rhi + 2 * p + 1;
    for (std::int64_t n = rhi + 2 * p; n >= rlo; --n) {
      if (f.contains(n)) nearest = n;
      if (n <= rhi) sh.next_max = std::max(sh.next_max, nearest - n);
    }
  }
  return sh;
}

inline std::vector<Element> int_interval(Kind k, std::int64_t a, std::int64_t b) {
  std::vector<Element> v;
  for (auto n = a; n <= b; ++n) v.push_back(Element::integer(k, n));
  return v;
}

}  // namespace detail

// ---- classifiers --------------------------------------------------------------

inline Verdict classify_thick(const SetExpr& s, std::int64_t horizon, std::int64_t target = 0) {
  if (horizon < 1) fail(ErrorKind::precondition, "horizon must be >= 1");
  const Kind k = s.kind();
  if (target <= 0) target = default_level(k, horizon);
  Verdict v;
  v.property = "thick";
  v.horizon = horizon;

  if (k == Kind::N0 || k == Kind::Z) {
    std::vector<detail::Span> runs;
    try {
      runs = detail::runs_in(s, detail::int_ball(k, horizon));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::horizon) throw;
      v.note = e.what();
      return v;
    }
    std::int64_t lmax = 0;
    for (const auto& r : runs) lmax = std::max(lmax, detail::run_level(k, r.hi - r.lo + 1));
    v.level = lmax;
    for (std::int64_t l = 1; l <= std::min(lmax, target); ++l) v.runs.push_back({l, *detail::first_translator(k, runs, l)});
    if (lmax > target) v.runs.push_back({lmax, *detail::first_translator(k, runs, lmax)});

    if (const auto& f = s.exact()) {
      v.basis = Basis::exact;
      if (f->mask_full()) {
        v.status = Status::yes;
      } else {
        v.status = Status::no;
        auto sh = detail::form_shape(*f);
        v.note = "periodic part misses a residue mod " + std::to_string(f->period) + "; max run " + std::to_string(sh.run_max);
        v.runs.clear();
      }
      return v;
    }
    if (structure::thick(s)) {
      v.status = Status::yes;
      v.basis = Basis::structural;
      v.note = "contains runs of unbounded length";
      return v;
    }
    if (structure::nonthick(s)) {
      v.status = Status::no;
      v.basis = Basis::structural;
      v.note = "run lengths are bounded by construction";
      v.runs.clear();
      return v;
    }
    v.status = lmax >= target ? Status::yes : Status::inconclusive;
    if (!v.yes()) v.note = "largest level found " + std::to_string(lmax) + " below target " + std::to_string(target);
    return v;
  }

  auto amb = s.ambient();
  if (auto fc = structure::fin_co(s)) {
    v.basis = Basis::exact;
    v.status = fc->cofinite ? Status::yes : Status::no;
  }
  for (std::int64_t l = 1; l <= target && l <= horizon; ++l) {
    auto kb = amb.ball(l);
    std::optional<Element> found;
    try {
      for (const auto& g : amb.ball(horizon - l)) {
        bool ok = true;
        for (const auto& x : kb)
          if (!s.contains(amb.mul(x, g))) {
            ok = false;
            break;
          }
        if (ok) {
          found = g;
          break;
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::horizon) throw;
      v.note = e.what();
      break;
    }
    if (!found) break;
    v.runs.push_back({l, *found});
    v.level = l;
  }
  if (v.basis == Basis::exact) {
    if (v.no()) v.runs.clear();
    return v;
  }
  v.status = v.level >= target ? Status::yes : Status::inconclusive;
  if (!v.yes() && v.note.empty()) v.note = "largest level found " + std::to_string(v.level) + " below target " + std::to_string(target);
  return v;
}

inline Verdict classify_syndetic(const SetExpr& s, std::int64_t horizon, std::int64_t gap_cap = 0) {
  if (horizon < 1) fail(ErrorKind::precondition, "horizon must be >= 1");
  const Kind k = s.kind();
  Verdict v;
  v.property = "syndetic";
  v.horizon = horizon;

  if (k == Kind::N0 || k == Kind::Z) {
    if (gap_cap <= 0) gap_cap = std::max<std::int64_t>(horizon, 2);
    auto w = detail::int_ball(k, horizon);
    if (const auto& f = s.exact()) {
      v.basis = Basis::exact;
      if (f->mask_empty()) {
        v.status = Status::no;
        auto top = std::max<std::int64_t>(f->has_window() ? f->hi : 0, 0) + 1;
        v.gap = {top, top + horizon};
        v.note = "periodic part empty: the set is finite, every window beyond " + std::to_string(top - 1) + " is unmet";
        return v;
      }
      auto sh = detail::form_shape(*f);
      auto m = std::max(f->period, sh.next_max + 1);
      v.status = Status::yes;
      v.k_set = detail::int_interval(k, 0, m - 1);
      return v;
    }
    // Scan: distance from each n in the ball to the next member, looking gap_cap ahead.
    try {
      std::int64_t nearest = w.hi + gap_cap + 1;  // sentinel: none seen yet
      std::int64_t need = 0;
      bool covered = true;
      std::optional<std::pair<std::int64_t, std::int64_t>> widest;
      for (std::int64_t n = w.hi + gap_cap; n >= w.lo; --n) {
        if (s.contains(n)) {
          if (n < w.hi && nearest > n + 1) {
            auto hi = std::min(nearest - 1, w.hi);
            if (!widest || hi - n > widest->second - widest->first + 1) widest = std::make_pair(n + 1, hi);
          }
          nearest = n;
        }
        if (n <= w.hi) {
          if (nearest > w.hi + gap_cap)
            covered = false;
          else
            need = std::max(need, nearest - n + 1);
        }
      }
      if (structure::nonsyndetic(s)) {
        v.status = Status::no;
        v.basis = Basis::structural;
        v.gap = widest;
        v.note = "gaps grow without bound by construction";
        return v;
      }
      if (covered && need <= gap_cap) {
        v.status = Status::yes;
        v.k_set = detail::int_interval(k, 0, need - 1);
      } else {
        v.note = "no bound <= " + std::to_string(gap_cap) + " covers ball(horizon)";
        v.gap = widest;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::horizon) throw;
      v.note = e.what();
    }
    return v;
  }

  auto amb = s.ambient();
  if (gap_cap <= 0) gap_cap = std::max<std::int64_t>(1, horizon / 2);
  if (auto fc = structure::fin_co(s)) {
    v.basis = Basis::exact;
    if (!fc->cofinite) {
      v.status = Status::no;
      v.note = "finite set";
      return v;
    }
    std::int64_t r = 0;
    while (amb.ball_size(r) <= fc->elems.size()) ++r;
    v.status = Status::yes;
    v.k_set = amb.ball(r);
    return v;
  }
  try {
    auto target = amb.ball(horizon);
    for (std::int64_t r = 0; r <= gap_cap; ++r) {
      auto kb = amb.ball(r);
      bool ok = true;
      for (const auto& g : target) {
        bool hit = false;
        for (const auto& x : kb)
          if (s.contains(amb.mul(x, g))) {
            hit = true;
            break;
          }
        if (!hit) {
          ok = false;
          break;
        }
      }
      if (ok) {
        v.status = Status::yes;
        v.k_set = kb;
        return v;
      }
    }
    v.note = "no ball(r), r <= " + std::to_string(gap_cap) + ", covers ball(horizon)";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::horizon) throw;
    v.note = e.what();
  }
  return v;
}

namespace detail {

inline bool int_kind(Kind k) { return k == Kind::N0 || k == Kind::Z; }

// Checks B & C within ball(horizon) is inside s; returns the first offender.
inline std::optional<Element> pws_inclusion_offender(const SetExpr& s, const SetExpr& b, const SetExpr& c, std::int64_t horizon) {
  auto amb = s.ambient();
  if (int_kind(s.kind())) {
    auto w = int_ball(s.kind(), horizon);
    for (auto n = w.lo; n <= w.hi; ++n)
      if (b.contains(n) && c.contains(n) && !s.contains(n)) return Element::integer(s.kind(), n);
    return std::nullopt;
  }
  for (const auto& g : amb.ball(horizon))
    if (b.contains(g) && c.contains(g) && !s.contains(g)) return g;
  return std::nullopt;
}

// Structural thick/syndetic decomposition of an expression, when visible.
inline std::optional<std::pair<SetExpr, SetExpr>> pws_decomposition(const SetExpr& s, std::int64_t horizon) {
  if (!int_kind(s.kind())) return std::nullopt;
  if (auto u = s.as<node::Intersection>()) {
    std::vector<SetExpr> th, rest;
    for (const auto& c : u->children) (structure::thick(c) ? th : rest).push_back(c);
    if (th.empty() || rest.empty()) return std::nullopt;
    auto b = intersect(th);
    auto c = intersect(rest);
    if (!structure::thick(b)) return std::nullopt;
    if (!classify_syndetic(c, horizon).yes()) return std::nullopt;
    return std::make_pair(b, c);
  }
  if (auto d = s.as<node::Dilation>()) {
    if (d->c > 1 && structure::thick(*d->child))
      return std::make_pair(inflate(d->c, *d->child), eventually_periodic(s.kind(), 0, d->c, {0}));
  }
  // B & C inside one part is inside the union.
  if (auto u = s.as<node::Union>()) {
    for (const auto& c : u->children)
      if (auto r = pws_decomposition(c, horizon)) return r;
  }
  return std::nullopt;
}

}  // namespace detail

inline Verdict classify_pws(const SetExpr& s, std::int64_t horizon) {
  if (horizon < 1) fail(ErrorKind::precondition, "horizon must be >= 1");
  const Kind k = s.kind();
  Verdict v;
  v.property = "pws";
  v.horizon = horizon;

  auto finish = [&](const SetExpr& b, const SetExpr& c, Verdict tb, Verdict sc, Basis basis) {
    v.pws_thick = b;
    v.pws_syndetic = c;
    v.thick_part = std::make_shared<const Verdict>(std::move(tb));
    v.syndetic_part = std::make_shared<const Verdict>(std::move(sc));
    if (auto off = detail::pws_inclusion_offender(s, b, c, horizon)) {
      v.status = Status::inconclusive;
      v.note = "decomposition fails at " + to_string(*off);
      return v;
    }
    v.status = Status::yes;
    v.basis = weaker(basis, weaker(v.thick_part->basis, v.syndetic_part->basis));
    return v;
  };

  auto syn = classify_syndetic(s, horizon);
  if (syn.basis == Basis::exact && syn.no()) {
    v.status = Status::no;
    v.basis = Basis::exact;
    v.note = "exact form: " + syn.note;
    v.gap = syn.gap;
    return v;
  }
  if (syn.yes()) return finish(full(k), s, classify_thick(full(k), horizon), syn, syn.basis);
  auto th = classify_thick(s, horizon);
  if (th.yes()) return finish(s, full(k), th, classify_syndetic(full(k), horizon), th.basis);

  try {
    if (auto d = detail::pws_decomposition(s, horizon))
      return finish(d->first, d->second, classify_thick(d->first, horizon), classify_syndetic(d->second, horizon),
                    Basis::structural);

    if (detail::int_kind(k)) {
      // Horizon route: an interval J of ball(horizon) on which the set has gaps
      // below g; B = J (as a windowed set), C = set | !J.
      auto w = detail::int_ball(k, horizon);
      std::vector<std::int64_t> xs;
      for (auto n = w.lo; n <= w.hi; ++n)
        if (s.contains(n)) xs.push_back(n);
      auto target = default_level(k, horizon);
      auto gcap = std::min<std::int64_t>(64, horizon);
      for (std::int64_t g = 1; g <= gcap && !xs.empty(); ++g) {
        std::size_t i = 0;
        while (i < xs.size()) {
          std::size_t j = i;
          while (j + 1 < xs.size() && xs[j + 1] - xs[j] <= g) ++j;
          if (detail::run_level(k, xs[j] - xs[i] + 1) >= target) {
            auto jel = detail::int_interval(k, xs[i], xs[j]);
            auto b = windowed(k, horizon, jel);
            auto c = unite({complement(finite(k, jel)), s});
            return finish(b, c, classify_thick(b, horizon), classify_syndetic(c, horizon, g), Basis::horizon);
          }
          i = j + 1;
        }
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::horizon) throw;
    v.note = e.what();
    return v;
  }
  v.note = "no decomposition found within horizon";
  return v;
}

// ---- re-checking witnesses ----------------------------------------------------

// Re-verifies a CertifiedYes witness by direct membership queries.
inline bool recheck(const Verdict& v, const SetExpr& s, std::string* why = nullptr) {
  auto bad = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!v.yes()) return true;
  auto amb = s.ambient();
  auto H = v.horizon;
  if (v.property == "thick") {
    for (const auto& st : v.runs) {
      if (amb.level_of(st.translator) + st.level > H && v.basis == Basis::horizon) return bad("translate leaves ball(horizon)");
      for (const auto& x : amb.ball(st.level))
        if (!s.contains(amb.mul(x, st.translator)))
          return bad("ball(" + std::to_string(st.level) + ")*" + to_string(st.translator) + " misses " + to_string(amb.mul(x, st.translator)));
    }
    return true;
  }
  if (v.property == "syndetic") {
    if (v.k_set.empty()) return bad("empty K");
    for (const auto& g : amb.ball(H)) {
      bool hit = false;
      for (const auto& x : v.k_set)
        if (s.contains(amb.mul(x, g))) {
          hit = true;
          break;
        }
      if (!hit) return bad("K*" + to_string(g) + " misses the set");
    }
    return true;
  }
  if (v.property == "pws") {
    if (!v.pws_thick || !v.pws_syndetic || !v.thick_part || !v.syndetic_part) return bad("missing decomposition");
    if (!recheck(*v.thick_part, *v.pws_thick, why) || !recheck(*v.syndetic_part, *v.pws_syndetic, why)) return false;
    if (auto off = detail::pws_inclusion_offender(s, *v.pws_thick, *v.pws_syndetic, H)) return bad("B&C not inside set at " + to_string(*off));
    return true;
  }
  return true;
}

}  // namespace rl
