#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rl/classify.hpp"
#include "rl/rational.hpp"
#include "rl/setexpr.hpp"

namespace rl {

// Boxes [-n, n]^d by default, or an explicit list of finite sets (F_1, F_2, ...).
class FolnerSeq {
 public:
  static FolnerSeq boxes(Kind k) {
    if (k != Kind::Z && k != Kind::Z2) fail(ErrorKind::unsupported, "Folner boxes are defined on Z and Z2 only");
    FolnerSeq f;
    f.kind_ = k;
    return f;
  }
  static FolnerSeq explicit_sets(Kind k, std::vector<std::vector<Element>> sets) {
    if (k != Kind::Z && k != Kind::Z2) fail(ErrorKind::unsupported, "Folner sequences are supported on Z and Z2 only");
    FolnerSeq f;
    f.kind_ = k;
    for (auto& s : sets) {
      if (s.empty()) fail(ErrorKind::precondition, "Folner set must be nonempty");
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    f.sets_ = std::move(sets);
    return f;
  }

  Kind kind() const { return kind_; }
  bool is_boxes() const { return !sets_; }
  // Number of terms; unbounded for boxes.
  std::optional<std::size_t> length() const {
    if (sets_) return sets_->size();
    return std::nullopt;
  }

  std::uint64_t size(std::int64_t n) const {
    check(n);
    if (sets_) return (*sets_)[static_cast<std::size_t>(n - 1)].size();
    auto side = static_cast<std::uint64_t>(2 * n + 1);
    return kind_ == Kind::Z ? side : side * side;
  }
  bool contains(std::int64_t n, const Element& g) const {
    check(n);
    if (sets_) {
      const auto& s = (*sets_)[static_cast<std::size_t>(n - 1)];
      return std::binary_search(s.begin(), s.end(), g);
    }
    auto ax = g.x < 0 ? -g.x : g.x;
    auto ay = g.y < 0 ? -g.y : g.y;
    return ax <= n && (kind_ == Kind::Z || ay <= n);
  }
  std::vector<Element> members(std::int64_t n) const {
    check(n);
    if (sets_) return (*sets_)[static_cast<std::size_t>(n - 1)];
    std::vector<Element> out;
    if (kind_ == Kind::Z) {
      for (auto x = -n; x <= n; ++x) out.push_back(Element::z(x));
    } else {
      for (auto x = -n; x <= n; ++x)
        for (auto y = -n; y <= n; ++y) out.push_back(Element::z2(x, y));
    }
    return out;
  }

 private:
  Kind kind_ = Kind::Z;
  std::optional<std::vector<std::vector<Element>>> sets_;

  void check(std::int64_t n) const {
    if (n < 1) fail(ErrorKind::precondition, "Folner index starts at 1");
    if (sets_ && static_cast<std::size_t>(n) > sets_->size()) fail(ErrorKind::horizon, "explicit Folner sequence too short");
  }
};

struct DensityResult {
  Rational value;
  bool exact = false;
  std::int64_t stamp = 0;  // n_max or window used by an estimate
  std::string note;
};

inline std::vector<Element> ambient_generators(Kind k) {
  switch (k) {
    case Kind::Z: return {Element::z(1)};
    case Kind::Z2: return {Element::z2(1, 0), Element::z2(0, 1)};
    case Kind::F2: return {Element::f2("a"), Element::f2("b")};
    case Kind::N0: return {Element::n0(1)};
  }
  return {};
}

// Upper density along the sequence.  Exact for eventually periodic sets on Z
// boxes and for finite/cofinite sets; otherwise the largest ratio among the
// tail terms n in [n_max/2, n_max], stamped with n_max.
inline DensityResult upper_density(const SetExpr& s, const FolnerSeq& f, std::int64_t n_max) {
  if (s.kind() != f.kind()) fail(ErrorKind::precondition, "density ambient mismatch");
  if (n_max < 1) fail(ErrorKind::precondition, "n_max must be >= 1");
  DensityResult r;
  r.stamp = n_max;
  if (f.is_boxes()) {
    if (const auto& e = s.exact()) {
      r.value = Rational(e->mask_count(), e->period);
      r.exact = true;
      r.note = "closed form |residues|/period";
      return r;
    }
    if (auto fc = structure::fin_co(s)) {
      r.value = fc->cofinite ? 1 : 0;
      r.exact = true;
      r.note = fc->cofinite ? "cofinite" : "finite";
      return r;
    }
  }
  if (auto len = f.length()) n_max = std::min<std::int64_t>(n_max, static_cast<std::int64_t>(*len));
  auto lo = std::max<std::int64_t>(1, n_max / 2);
  std::optional<Rational> best;
  if (f.is_boxes()) {
    // Incremental counts: each step adds one shell of the box.
    std::int64_t count = s.contains(s.ambient().identity()) ? 1 : 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      if (s.kind() == Kind::Z) {
        count += s.contains(n) + s.contains(-n);
      } else {
        for (auto t = -n; t <= n; ++t) {
          count += s.contains(Element::z2(t, n)) + s.contains(Element::z2(t, -n));
          if (t != -n && t != n) count += s.contains(Element::z2(n, t)) + s.contains(Element::z2(-n, t));
        }
      }
      if (n >= lo) {
        Rational q(count, static_cast<std::int64_t>(f.size(n)));
        if (!best || *best < q) best = q;
      }
    }
  } else {
    for (std::int64_t n = lo; n <= n_max; ++n) {
      std::int64_t count = 0;
      for (const auto& g : f.members(n)) count += s.contains(g);
      Rational q(count, static_cast<std::int64_t>(f.size(n)));
      if (!best || *best < q) best = q;
    }
  }
  r.value = *best;
  r.note = "largest ratio over terms " + std::to_string(lo) + ".." + std::to_string(n_max);
  return r;
}

// Upper Banach density on Z (or N0).  Exact for eventually periodic and
// structurally thick sets; otherwise the best density of a window of length
// window_max with start in [-reach, reach], which is only an estimate.
inline DensityResult banach_density(const SetExpr& s, std::int64_t window_max, std::int64_t reach = 0) {
  if (s.kind() != Kind::Z && s.kind() != Kind::N0) fail(ErrorKind::unsupported, "Banach density is computed on Z only");
  if (window_max < 1) fail(ErrorKind::precondition, "window_max must be >= 1");
  DensityResult r;
  r.stamp = window_max;
  if (const auto& e = s.exact()) {
    r.value = Rational(e->mask_count(), e->period);
    r.exact = true;
    r.note = "closed form |residues|/period";
    return r;
  }
  if (structure::thick(s)) {
    r.value = 1;
    r.exact = true;
    r.note = "thick set";
    return r;
  }
  if (reach <= 0) reach = 8 * window_max;
  auto lo = s.kind() == Kind::N0 ? std::int64_t{0} : -reach;
  std::int64_t count = 0, best = 0;
  for (auto n = lo; n < lo + window_max; ++n) count += s.contains(n);
  best = count;
  for (auto start = lo + 1; start <= reach; ++start) {
    count += s.contains(start + window_max - 1) - s.contains(start - 1);
    best = std::max(best, count);
  }
  r.value = Rational(best, window_max);
  r.note = "best window of length " + std::to_string(window_max) + " starting in [" + std::to_string(lo) + ", " + std::to_string(reach) + "]";
  return r;
}

// |gF_n delta F_n| / |F_n| by direct counting.
inline Rational folner_quotient(const std::vector<Element>& fn, const Element& g) {
  if (fn.empty()) fail(ErrorKind::precondition, "empty Folner term");
  Ambient amb(g.kind);
  std::set<Element> s(fn.begin(), fn.end());
  std::int64_t out = 0;
  for (const auto& x : s)
    if (!s.count(amb.mul(g, x))) ++out;
  // |gF \ F| = |F \ gF| since |gF| = |F|.
  return Rational(2 * out, static_cast<std::int64_t>(s.size()));
}

inline Rational folner_quotient(const FolnerSeq& f, std::int64_t n, const Element& g) {
  if (f.is_boxes() && f.kind() == Kind::Z) {
    // A translate by t of an interval of length L differs in 2 min(|t|, L) points.
    auto len = static_cast<std::int64_t>(f.size(n));
    auto t = g.x < 0 ? -g.x : g.x;
    return Rational(2 * std::min(t, len), len);
  }
  return folner_quotient(f.members(n), g);
}

class GrowthError : public Error {
 public:
  GrowthError(std::int64_t index, std::uint64_t size, std::uint64_t bound)
      : Error(ErrorKind::precondition, std::string(to_string(ErrorKind::precondition)) + ": growth inequality fails at n=" +
                                           std::to_string(index) + ": |F_n| = " + std::to_string(size) +
                                           " is not > " + std::to_string(bound)),
        index_(index), size_(size), bound_(bound) {}
  std::int64_t index() const { return index_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t bound() const { return bound_; }

 private:
  std::int64_t index_;
  std::uint64_t size_;
  std::uint64_t bound_;
};

struct Disjointified {
  std::vector<std::vector<Element>> e;  // E_1, E_2, ...
  std::vector<Element> generators;
  std::vector<std::vector<Rational>> quotients;  // [generator][n-1]
  std::optional<std::int64_t> growth_violation;   // first failing index when not enforced
};

// Checks |F_n| > (n+1)(|F_1| + ... + |F_{n-1}|); returns the first failing index.
inline std::optional<std::pair<std::int64_t, std::uint64_t>> growth_violation(const std::vector<std::vector<Element>>& fs) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto n = static_cast<std::uint64_t>(i + 1);
    auto bound = (n + 1) * acc;
    if (i > 0 && fs[i].size() <= bound) return std::make_pair(static_cast<std::int64_t>(n), bound);
    acc += fs[i].size();
  }
  return std::nullopt;
}

// E_1 = F_1, E_n = F_n minus the earlier terms, with per-generator quotients.
inline Disjointified folner_disjointify(const FolnerSeq& seq, bool growth_checked, std::int64_t terms = 0) {
  std::vector<std::vector<Element>> fs;
  if (auto len = seq.length()) {
    terms = terms > 0 ? std::min<std::int64_t>(terms, static_cast<std::int64_t>(*len)) : static_cast<std::int64_t>(*len);
  } else if (terms <= 0) {
    fail(ErrorKind::precondition, "box sequences need an explicit term count");
  }
  for (std::int64_t n = 1; n <= terms; ++n) fs.push_back(seq.members(n));

  Disjointified out;
  if (auto v = growth_violation(fs)) {
    if (growth_checked) throw GrowthError(v->first, fs[static_cast<std::size_t>(v->first - 1)].size(), v->second);
    out.growth_violation = v->first;
  }
  std::set<Element> seen;
  for (const auto& f : fs) {
    std::vector<Element> e;
    for (const auto& g : f)
      if (!seen.count(g)) e.push_back(g);
    seen.insert(f.begin(), f.end());
    out.e.push_back(std::move(e));
  }
  out.generators = ambient_generators(seq.kind());
  for (const auto& g : out.generators) {
    std::vector<Rational> q;
    for (const auto& e : out.e) q.push_back(e.empty() ? Rational(0) : folner_quotient(e, g));
    out.quotients.push_back(std::move(q));
  }
  return out;
}

}  // namespace rl
