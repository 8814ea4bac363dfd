#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rl/family.hpp"

namespace rl {

// A point z : G -> {0,1}.  Explicit points carry the ball on which they are
// known (guarantee, -1 for everywhere); evaluating outside it is a horizon error.
class SymbolicPoint {
 public:
  struct Explicit {
    std::set<Element> flips;  // elements whose bit differs from def
    bool def = false;
    std::int64_t guarantee = -1;
  };
  struct Indicator {
    SetExpr set;
  };
  struct Shifted {
    std::shared_ptr<const SymbolicPoint> base;
    Element g;  // (T_g base)(t) = base(t g)
  };
  using Backing = std::variant<Explicit, Indicator, Shifted>;

  SymbolicPoint() : SymbolicPoint(Kind::Z, Explicit{}) {}
  SymbolicPoint(Kind k, Backing b) : kind_(k), b_(std::make_shared<const Backing>(std::move(b))) {}

  static SymbolicPoint explicit_point(Kind k, std::set<Element> flips, bool def = false, std::int64_t guarantee = -1) {
    Ambient amb(k);
    for (const auto& g : flips) {
      if (g.kind != k) fail(ErrorKind::precondition, "point element of wrong ambient");
      if (guarantee >= 0 && amb.level_of(g) > guarantee) fail(ErrorKind::precondition, "flip " + to_string(g) + " lies outside the guarantee ball");
    }
    return {k, Explicit{std::move(flips), def, guarantee}};
  }
  static SymbolicPoint indicator(const SetExpr& a) { return {a.kind(), Indicator{a}}; }
  static SymbolicPoint constant(Kind k, bool bit) { return explicit_point(k, {}, bit); }

  Kind kind() const { return kind_; }
  Ambient ambient() const { return Ambient(kind_); }
  const Backing& backing() const { return *b_; }

  // Largest ball on which evaluation is guaranteed, -1 for everywhere.
  std::int64_t guarantee() const {
    if (auto e = std::get_if<Explicit>(b_.get())) return e->guarantee;
    if (auto s = std::get_if<Shifted>(b_.get())) {
      auto g = s->base->guarantee();
      if (g < 0) return -1;
      return std::max<std::int64_t>(g - ambient().level_of(s->g), -2);  // -2: nothing left
    }
    if (auto w = std::get_if<Indicator>(b_.get())->set.as<node::Windowed>()) return w->level;
    return -1;
  }
  bool unlimited() const { return guarantee() == -1; }

  bool at(const Element& t) const {
    if (t.kind != kind_) fail(ErrorKind::precondition, "evaluation point of wrong ambient");
    if (auto e = std::get_if<Explicit>(b_.get())) {
      if (e->guarantee >= 0 && ambient().level_of(t) > e->guarantee)
        fail(ErrorKind::horizon, "point known on ball(" + std::to_string(e->guarantee) + ") only, asked at " + to_string(t));
      return e->def != (e->flips.count(t) > 0);
    }
    if (auto i = std::get_if<Indicator>(b_.get())) return i->set.contains(t);
    const auto& s = std::get<Shifted>(*b_);
    return s.base->at(ambient().mul(t, s.g));
  }

  // The set {t : z(t) = 1} when it has a closed description.
  std::optional<SetExpr> as_set() const {
    if (auto e = std::get_if<Explicit>(b_.get())) {
      if (e->guarantee >= 0) return std::nullopt;
      SetExpr p = e->flips.empty() ? empty(kind_) : finite(kind_, {e->flips.begin(), e->flips.end()});
      return e->def ? complement(p) : p;
    }
    if (auto i = std::get_if<Indicator>(b_.get())) return i->set;
    const auto& s = std::get<Shifted>(*b_);
    auto base = s.base->as_set();
    if (!base) return std::nullopt;
    return right_pre_translate(s.g, *base);
  }

  std::string describe() const {
    if (auto e = std::get_if<Explicit>(b_.get()))
      return "explicit(" + std::to_string(e->flips.size()) + " flips, default " + (e->def ? "1" : "0") + ", guarantee " +
             std::to_string(e->guarantee) + ")";
    if (auto i = std::get_if<Indicator>(b_.get())) return "indicator(" + i->set.dsl() + ")";
    const auto& s = std::get<Shifted>(*b_);
    return "shift(" + s.base->describe() + ", " + to_string(s.g) + ")";
  }

 private:
  Kind kind_;
  std::shared_ptr<const Backing> b_;
};

// T_g z.  Shifts of shifts compose: T_h T_g = T_{hg}.
inline SymbolicPoint shift_apply(const SymbolicPoint& z, const Element& g) {
  if (g.kind != z.kind()) fail(ErrorKind::precondition, "shift of wrong ambient");
  auto amb = z.ambient();
  if (g == amb.identity()) return z;
  if (auto s = std::get_if<SymbolicPoint::Shifted>(&z.backing()))
    return {z.kind(), SymbolicPoint::Shifted{s->base, amb.mul(g, s->g)}};
  if (auto i = std::get_if<SymbolicPoint::Indicator>(&z.backing())) {
    if (!i->set.as<node::Windowed>()) return SymbolicPoint::indicator(right_pre_translate(g, i->set));
  }
  if (z.guarantee() >= 0 && amb.level_of(g) > z.guarantee())
    fail(ErrorKind::horizon, "shift by " + to_string(g) + " exhausts the evaluable ball");
  return {z.kind(), SymbolicPoint::Shifted{std::make_shared<const SymbolicPoint>(z), g}};
}

// [u] = {z : z(k) = u(k) for k in K}.
struct Cylinder {
  std::vector<Element> support;  // sorted, unique
  std::vector<bool> pattern;

  static Cylinder make(std::vector<std::pair<Element, bool>> entries) {
    if (entries.empty()) fail(ErrorKind::precondition, "cylinder support must be nonempty");
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Cylinder c;
    for (const auto& [g, b] : entries) {
      if (!c.support.empty() && c.support.back() == g) {
        if (c.pattern.back() != b) fail(ErrorKind::precondition, "cylinder assigns two symbols to " + to_string(g));
        continue;
      }
      if (g.kind != entries[0].first.kind) fail(ErrorKind::precondition, "cylinder mixes ambients");
      c.support.push_back(g);
      c.pattern.push_back(b);
    }
    return c;
  }
  static Cylinder one(Kind k) { return make({{Ambient(k).identity(), true}}); }
  // z's pattern on ball(r).
  static Cylinder of_point(const SymbolicPoint& z, std::int64_t r) {
    std::vector<std::pair<Element, bool>> e;
    for (const auto& g : z.ambient().ball(r)) e.emplace_back(g, z.at(g));
    return make(std::move(e));
  }
  // z's pattern on an arbitrary finite set.
  static Cylinder of_point_on(const SymbolicPoint& z, const std::vector<Element>& where) {
    std::vector<std::pair<Element, bool>> e;
    for (const auto& g : where) e.emplace_back(g, z.at(g));
    return make(std::move(e));
  }

  Kind kind() const { return support.front().kind; }
  std::int64_t level() const {
    Ambient amb(kind());
    std::int64_t l = 0;
    for (const auto& g : support) l = std::max(l, amb.level_of(g));
    return l;
  }
  bool holds(const SymbolicPoint& z) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (z.at(support[i]) != pattern[i]) return false;
    return true;
  }
  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (i) s += ' ';
      s += to_string(support[i]) + "=" + (pattern[i] ? "1" : "0");
    }
    return s + "]";
  }
};

namespace detail {

inline void require_evaluable(const SymbolicPoint& z, const Cylinder& c, std::int64_t horizon) {
  if (c.kind() != z.kind()) fail(ErrorKind::precondition, "cylinder of wrong ambient");
  auto g = z.guarantee();
  if (g == -1) return;
  if (g < horizon + c.level())
    fail(ErrorKind::horizon, "return scan needs ball(" + std::to_string(horizon + c.level()) + ") but the point is known on ball(" +
                                 std::to_string(g) + ")");
}

}  // namespace detail

// { g in ball(horizon) : z(k g) = u(k) for all k in K }, in enumeration order.
inline std::vector<Element> return_set(const SymbolicPoint& z, const Cylinder& c, std::int64_t horizon) {
  detail::require_evaluable(z, c, horizon);
  auto amb = z.ambient();
  std::vector<Element> out;
  for (const auto& g : amb.ball(horizon)) {
    bool ok = true;
    for (std::size_t i = 0; i < c.support.size() && ok; ++i) ok = z.at(amb.mul(c.support[i], g)) == c.pattern[i];
    if (ok) out.push_back(g);
  }
  return out;
}

// N(z, [u]) as a set expression: exact for points with a closed description,
// otherwise the scan on ball(horizon) as a windowed set.
inline SetExpr return_expr(const SymbolicPoint& z, const Cylinder& c, std::int64_t horizon) {
  if (auto a = z.as_set()) {
    std::vector<SetExpr> parts;
    for (std::size_t i = 0; i < c.support.size(); ++i) {
      auto p = pre_translate(c.support[i], *a);
      parts.push_back(c.pattern[i] ? p : complement(p));
    }
    return intersect(std::move(parts));
  }
  return windowed(z.kind(), horizon, return_set(z, c, horizon));
}

inline std::vector<Element> joint_return(const SymbolicPoint& x, const SymbolicPoint& y, const Cylinder& cx, const Cylinder& cy,
                                         std::int64_t horizon) {
  auto a = return_set(x, cx, horizon);
  auto b = return_set(y, cy, horizon);
  std::vector<Element> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Tests the family on N(z, [z|ball(r)]) for r = 1..depth; the result is the weakest part.
inline Verdict check_recurrence(const SymbolicPoint& z, const Family& fam, std::int64_t depth, std::int64_t horizon) {
  if (depth < 1) fail(ErrorKind::precondition, "basis depth must be >= 1");
  Verdict v;
  v.property = "recurrence:" + fam.name;
  v.horizon = horizon;
  v.status = Status::yes;
  v.basis = Basis::exact;
  for (std::int64_t r = 1; r <= depth; ++r) {
    Verdict part;
    try {
      auto c = Cylinder::of_point(z, r);
      auto h = horizon;
      if (!z.unlimited()) h = std::min(h, z.guarantee() - r);
      if (h < 1) fail(ErrorKind::horizon, "no room left to scan returns at depth " + std::to_string(r));
      part = family_member(fam, return_expr(z, c, h), h);
      part.note = "depth " + std::to_string(r) + (part.note.empty() ? "" : ": " + part.note);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::horizon) throw;
      part.property = fam.name;
      part.horizon = horizon;
      part.note = "depth " + std::to_string(r) + ": " + e.what();
    }
    if (strength(part.status) < strength(v.status)) v.status = part.status;
    v.basis = weaker(v.basis, part.basis);
    v.parts.push_back(std::make_shared<const Verdict>(std::move(part)));
  }
  return v;
}

struct SymmetricResult {
  SetExpr set;
  Verdict verdict;
};

// Family verdict for the intersection of f^-1 A over f1 and f^-1 (G \ A) over f2.
inline SymmetricResult symmetric_set_check(const SetExpr& a, const Family& fam, const std::vector<Element>& f1,
                                           const std::vector<Element>& f2, std::int64_t horizon) {
  for (const auto& f : f1)
    if (!a.contains(f)) fail(ErrorKind::precondition, to_string(f) + " is in f1 but not in the set");
  for (const auto& f : f2)
    if (a.contains(f)) fail(ErrorKind::precondition, to_string(f) + " is in f2 but lies in the set");
  std::vector<SetExpr> parts;
  for (const auto& f : f1) parts.push_back(pre_translate(f, a));
  auto na = complement(a);
  for (const auto& f : f2) parts.push_back(pre_translate(f, na));
  SymmetricResult r{parts.empty() ? full(a.kind()) : intersect(std::move(parts)), {}};
  r.verdict = family_member(fam, r.set, horizon);
  return r;
}

// ---- run-length encoding -------------------------------------------------------------

// Bits of z over the enumeration prefix ball(level), as (bit, count) runs.
struct Rle {
  Kind kind = Kind::Z;
  std::int64_t level = 0;
  bool def = false;
  std::int64_t guarantee = -1;
  std::vector<std::pair<bool, std::uint64_t>> runs;
};

inline Rle encode_rle(const SymbolicPoint& z, std::int64_t level, bool def = false) {
  Rle r{z.kind(), level, def, -1, {}};
  if (!z.unlimited()) {
    if (z.guarantee() < level) fail(ErrorKind::horizon, "point is not known on the whole prefix");
    r.guarantee = level;
  }
  // Unlimited points must agree with def beyond the prefix to round-trip exactly.
  for (const auto& g : z.ambient().ball(level)) {
    bool b = z.at(g);
    if (!r.runs.empty() && r.runs.back().first == b)
      ++r.runs.back().second;
    else
      r.runs.emplace_back(b, 1);
  }
  return r;
}

inline SymbolicPoint decode_rle(const Rle& r) {
  Ambient amb(r.kind);
  std::uint64_t total = 0;
  for (const auto& [b, n] : r.runs) total += n;
  if (total != amb.ball_size(r.level)) fail(ErrorKind::parse, "run lengths do not cover ball(" + std::to_string(r.level) + ")");
  if (r.guarantee != -1 && r.guarantee != r.level) fail(ErrorKind::parse, "guarantee must equal the prefix level or be -1");
  std::set<Element> flips;
  std::uint64_t i = 0;
  for (const auto& [b, n] : r.runs)
    for (std::uint64_t j = 0; j < n; ++j, ++i)
      if (b != r.def) flips.insert(amb.enumerate(i));
  return SymbolicPoint::explicit_point(r.kind, std::move(flips), r.def, r.guarantee);
}

}  // namespace rl
