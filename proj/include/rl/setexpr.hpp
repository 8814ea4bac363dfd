#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rl/ambient.hpp"
#include "rl/periodic.hpp"

namespace rl {

class SetExpr;

namespace node {
struct Full {};
struct Empty {};
struct Finite {
  std::vector<Element> elems;  // sorted, unique
};
struct Periodic {
  std::int64_t offset;
  std::int64_t period;
  std::set<std::int64_t> residues;
};
struct FsGen {
  std::vector<Element> gens;
  std::set<Element> members;
};
struct FpGen {
  std::vector<Element> gens;
  std::set<Element> members;
};
// Union over k >= 1 of [b^k, b^k + len_k] with len_k = c*k (linear) or
// floor(p * b^k / q) (geometric).
struct Blocks {
  std::int64_t base;
  bool geometric;
  std::int64_t c;
  std::int64_t p;
  std::int64_t q;
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;  // precomputed [start, end]
};
// Finite sums of distinct members x_k of [b^k, b^k + c^k), k >= kmin.
struct FsBlocks {
  std::int64_t base;
  std::int64_t c;
  std::int64_t kmin;
  std::vector<std::int64_t> start, len, reach;  // reach[i] = max sum over indices < kmin + i
};
struct EvenLength {};
// Known exactly on ball(level); membership beyond is a horizon error.
struct Windowed {
  std::int64_t level;
  std::vector<Element> elems;
};
struct Predicate {
  std::string name;
  std::function<bool(const Element&)> fn;
};
struct Dilation {
  std::int64_t c;
  std::shared_ptr<const SetExpr> child;
};
struct Inflate {
  std::int64_t c;
  std::shared_ptr<const SetExpr> child;
};
struct Contract {
  std::int64_t c;
  std::shared_ptr<const SetExpr> child;
};
struct Union {
  std::vector<SetExpr> children;
};
struct Intersection {
  std::vector<SetExpr> children;
};
struct Complement {
  std::shared_ptr<const SetExpr> child;
};
// image: g*A (left) or A*g (right); preimage: {x : g*x in A} or {x : x*g in A}.
struct Translate {
  Element g;
  bool preimage;
  bool right;
  std::shared_ptr<const SetExpr> child;
};
}  // namespace node

using NodeVariant = std::variant<node::Full, node::Empty, node::Finite, node::Periodic, node::FsGen, node::FpGen,
                                 node::Blocks, node::FsBlocks, node::EvenLength, node::Windowed, node::Predicate,
                                 node::Dilation, node::Inflate, node::Contract, node::Union, node::Intersection,
                                 node::Complement, node::Translate>;

struct Node {
  Kind kind;
  NodeVariant v;
  mutable std::once_flag once;
  mutable std::optional<PeriodicForm> exact;
};

// Immutable, cheaply copyable handle to a subset of an ambient.
class SetExpr {
 public:
  SetExpr() : SetExpr(Kind::Z, node::Empty{}) {}
  SetExpr(Kind k, NodeVariant v) {
    auto m = std::make_shared<Node>();
    m->kind = k;
    m->v = std::move(v);
    n_ = std::move(m);
  }

  Kind kind() const { return n_->kind; }
  Ambient ambient() const { return Ambient(n_->kind); }
  const NodeVariant& variant() const { return n_->v; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&n_->v);
  }
  bool same_node(const SetExpr& o) const { return n_ == o.n_; }

  bool contains(const Element& g) const;
  bool contains(std::int64_t n) const;  // N0 / Z only

  // Exact eventually periodic form, when the expression is built from exact
  // parts only (N0 / Z).
  const std::optional<PeriodicForm>& exact() const;
  bool is_exact() const { return exact().has_value(); }

  std::string dsl() const;

 private:
  std::shared_ptr<const Node> n_;
};

namespace detail {
inline bool is_int_kind(Kind k) { return k == Kind::N0 || k == Kind::Z; }
inline std::shared_ptr<const SetExpr> box(const SetExpr& s) { return std::make_shared<const SetExpr>(s); }
inline std::int64_t pow_or_cap(std::int64_t b, std::int64_t k, std::int64_t cap) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (r > cap / b) return cap + 1;
    r *= b;
  }
  return r;
}
inline constexpr std::int64_t kValueCap = std::int64_t{1} << 61;
}  // namespace detail

// ---- constructors ---------------------------------------------------------

inline SetExpr full(Kind k) { return SetExpr(k, node::Full{}); }
inline SetExpr empty(Kind k) { return SetExpr(k, node::Empty{}); }

inline SetExpr finite(Kind k, std::vector<Element> elems) {
  if (elems.empty()) fail(ErrorKind::precondition, "empty finite set disallowed");
  for (const auto& e : elems)
    if (e.kind != k) fail(ErrorKind::precondition, "finite set element of wrong ambient");
  if (k == Kind::N0)
    for (const auto& e : elems)
      if (e.x < 0) fail(ErrorKind::precondition, "negative element in N0");
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return SetExpr(k, node::Finite{std::move(elems)});
}
inline SetExpr finite_ints(Kind k, const std::vector<std::int64_t>& xs) {
  std::vector<Element> e;
  e.reserve(xs.size());
  for (auto x : xs) e.push_back(Element::integer(k, x));
  return finite(k, std::move(e));
}

inline SetExpr eventually_periodic(Kind k, std::int64_t offset, std::int64_t period, std::set<std::int64_t> residues) {
  if (!detail::is_int_kind(k)) fail(ErrorKind::precondition, "eventually periodic sets live on N0 or Z");
  (void)periodic::eventually_periodic(k == Kind::N0, offset, period, residues);  // validates
  return SetExpr(k, node::Periodic{offset, period, std::move(residues)});
}

inline constexpr std::size_t kGeneratorCap = 20;

inline SetExpr fs_set(Kind k, std::vector<Element> gens);
inline SetExpr fp_set(Kind k, std::vector<Element> gens);

inline SetExpr blocks_linear(Kind k, std::int64_t base, std::int64_t c) {
  if (!detail::is_int_kind(k)) fail(ErrorKind::precondition, "block sets live on N0 or Z");
  if (base < 2 || c < 1) fail(ErrorKind::precondition, "blocks need base >= 2 and c >= 1");
  node::Blocks b{base, false, c, 0, 1, {}};
  for (std::int64_t kk = 1;; ++kk) {
    auto s = detail::pow_or_cap(base, kk, detail::kValueCap);
    if (s > detail::kValueCap) break;
    b.runs.emplace_back(s, s + c * kk);
  }
  return SetExpr(k, std::move(b));
}

inline SetExpr blocks_geometric(Kind k, std::int64_t base, std::int64_t p, std::int64_t q) {
  if (!detail::is_int_kind(k)) fail(ErrorKind::precondition, "block sets live on N0 or Z");
  if (base < 2 || p < 1 || q < 1) fail(ErrorKind::precondition, "geometric blocks need base >= 2, p, q >= 1");
  if (p >= (base - 1) * q) fail(ErrorKind::precondition, "geometric blocks need p/q < base - 1 (gaps must grow)");
  node::Blocks b{base, true, 0, p, q, {}};
  for (std::int64_t kk = 1;; ++kk) {
    auto s = detail::pow_or_cap(base, kk, detail::kValueCap / (p + 1));
    if (s > detail::kValueCap / (p + 1)) break;
    b.runs.emplace_back(s, s + (p * s) / q);
  }
  return SetExpr(k, std::move(b));
}

inline SetExpr fs_blocks(Kind k, std::int64_t base, std::int64_t c, std::int64_t kmin) {
  if (!detail::is_int_kind(k)) fail(ErrorKind::precondition, "block sets live on N0 or Z");
  if (base < 3 || c < 2 || c >= base || kmin < 1)
    fail(ErrorKind::precondition, "fs blocks need 3 <= base, 2 <= c < base, kmin >= 1");
  node::FsBlocks f{base, c, kmin, {}, {}, {0}};
  for (std::int64_t kk = kmin;; ++kk) {
    auto s = detail::pow_or_cap(base, kk, detail::kValueCap / 4);
    if (s > detail::kValueCap / 4) break;
    auto l = detail::pow_or_cap(c, kk, detail::kValueCap / 4);
    f.start.push_back(s);
    f.len.push_back(l);
    f.reach.push_back(f.reach.back() + s + l - 1);
  }
  // Super-increasing: every block starts beyond all lower sums, with growing gaps.
  for (std::size_t i = 0; i + 1 < f.start.size(); ++i)
    if (f.start[i + 1] <= f.reach[i + 1]) fail(ErrorKind::precondition, "fs blocks are not super-increasing");
  return SetExpr(k, std::move(f));
}

inline SetExpr even_length(Kind k) { return SetExpr(k, node::EvenLength{}); }

inline SetExpr windowed(Kind k, std::int64_t level, std::vector<Element> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Ambient amb(k);
  for (const auto& e : elems)
    if (e.kind != k || amb.level_of(e) > level) fail(ErrorKind::precondition, "windowed element outside its ball");
  return SetExpr(k, node::Windowed{level, std::move(elems)});
}

inline SetExpr predicate(Kind k, std::string name, std::function<bool(const Element&)> fn) {
  return SetExpr(k, node::Predicate{std::move(name), std::move(fn)});
}

inline SetExpr dilation(std::int64_t c, const SetExpr& a) {
  if (!detail::is_int_kind(a.kind())) fail(ErrorKind::precondition, "dilation lives on N0 or Z");
  if (c == 0 || (a.kind() == Kind::N0 && c < 0)) fail(ErrorKind::precondition, "bad dilation factor");
  if (c == 1) return a;
  return SetExpr(a.kind(), node::Dilation{c, detail::box(a)});
}
inline SetExpr inflate(std::int64_t c, const SetExpr& a) {
  if (!detail::is_int_kind(a.kind())) fail(ErrorKind::precondition, "inflation lives on N0 or Z");
  if (c <= 0) fail(ErrorKind::precondition, "inflation factor must be positive");
  if (c == 1) return a;
  return SetExpr(a.kind(), node::Inflate{c, detail::box(a)});
}
inline SetExpr contract(std::int64_t c, const SetExpr& a) {
  if (!detail::is_int_kind(a.kind())) fail(ErrorKind::precondition, "contraction lives on N0 or Z");
  if (c <= 0) fail(ErrorKind::precondition, "contraction factor must be positive");
  if (c == 1) return a;
  return SetExpr(a.kind(), node::Contract{c, detail::box(a)});
}

inline SetExpr unite(std::vector<SetExpr> xs) {
  if (xs.empty()) fail(ErrorKind::precondition, "empty union");
  if (xs.size() == 1) return xs[0];
  auto k = xs[0].kind();
  for (const auto& x : xs)
    if (x.kind() != k) fail(ErrorKind::precondition, "union across ambients");
  return SetExpr(k, node::Union{std::move(xs)});
}
inline SetExpr intersect(std::vector<SetExpr> xs) {
  if (xs.empty()) fail(ErrorKind::precondition, "empty intersection");
  if (xs.size() == 1) return xs[0];
  auto k = xs[0].kind();
  for (const auto& x : xs)
    if (x.kind() != k) fail(ErrorKind::precondition, "intersection across ambients");
  return SetExpr(k, node::Intersection{std::move(xs)});
}
inline SetExpr operator|(const SetExpr& a, const SetExpr& b) { return unite({a, b}); }
inline SetExpr operator&(const SetExpr& a, const SetExpr& b) { return intersect({a, b}); }
inline SetExpr complement(const SetExpr& a) { return SetExpr(a.kind(), node::Complement{detail::box(a)}); }
inline SetExpr operator!(const SetExpr& a) { return complement(a); }

// g*A.  On N0 this is A + g (a monoid image, no inversion needed).
inline SetExpr translate(const Element& g, const SetExpr& a) {
  if (g.kind != a.kind()) fail(ErrorKind::precondition, "translator of wrong ambient");
  return SetExpr(a.kind(), node::Translate{g, false, false, detail::box(a)});
}
// g^-1 A = {x : g*x in A}.
inline SetExpr pre_translate(const Element& g, const SetExpr& a) {
  if (g.kind != a.kind()) fail(ErrorKind::precondition, "translator of wrong ambient");
  return SetExpr(a.kind(), node::Translate{g, true, false, detail::box(a)});
}
// A*g.
inline SetExpr right_translate(const Element& g, const SetExpr& a) {
  if (g.kind != a.kind()) fail(ErrorKind::precondition, "translator of wrong ambient");
  return SetExpr(a.kind(), node::Translate{g, false, true, detail::box(a)});
}
// A g^-1 = {x : x*g in A}.
inline SetExpr right_pre_translate(const Element& g, const SetExpr& a) {
  if (g.kind != a.kind()) fail(ErrorKind::precondition, "translator of wrong ambient");
  return SetExpr(a.kind(), node::Translate{g, true, true, detail::box(a)});
}

// ---- generator-backed sets --------------------------------------------------

// All products over nonempty index subsets of {0..depth-1}, factors in increasing index order.
inline std::set<Element> fs_generate(const Ambient& amb, const std::vector<Element>& gens, std::size_t depth) {
  if (depth > gens.size()) fail(ErrorKind::precondition, "depth exceeds generator count");
  if (depth > kGeneratorCap) fail(ErrorKind::precondition, "depth exceeds generator cap");
  // Products over subsets of {0..i}, built by appending generator i on the right.
  std::vector<Element> prods;
  for (std::size_t i = 0; i < depth; ++i) {
    auto n = prods.size();
    for (std::size_t j = 0; j < n; ++j) prods.push_back(amb.mul(prods[j], gens[i]));
    prods.push_back(gens[i]);
  }
  return {prods.begin(), prods.end()};
}

inline SetExpr fs_set(Kind k, std::vector<Element> gens) {
  if (gens.empty()) fail(ErrorKind::precondition, "fs needs generators");
  if (k == Kind::F2) fail(ErrorKind::precondition, "fs is additive; use fp on F2");
  auto m = fs_generate(Ambient(k), gens, gens.size());
  return SetExpr(k, node::FsGen{std::move(gens), std::move(m)});
}
inline SetExpr fp_set(Kind k, std::vector<Element> gens) {
  if (gens.empty()) fail(ErrorKind::precondition, "fp needs generators");
  auto m = fs_generate(Ambient(k), gens, gens.size());
  return SetExpr(k, node::FpGen{std::move(gens), std::move(m)});
}

// ---- membership -------------------------------------------------------------

namespace detail {

inline bool fsb_hit(const node::FsBlocks& f, std::int64_t lo, std::int64_t hi, std::size_t k, bool need_term) {
  if (hi < 0) return false;
  lo = std::max<std::int64_t>(lo, 0);
  if (lo > f.reach[k]) return false;
  if (k == 0) return !need_term && lo == 0;
  auto j = k - 1;
  if (hi >= f.start[j] && fsb_hit(f, lo - f.start[j] - f.len[j] + 1, hi - f.start[j], j, false)) return true;
  return fsb_hit(f, lo, hi, j, need_term);
}

inline bool contains_int(const SetExpr& s, std::int64_t n);

struct IntVisitor {
  Kind kind;
  std::int64_t n;
  bool operator()(const node::Full&) const { return true; }
  bool operator()(const node::Empty&) const { return false; }
  bool operator()(const node::Finite& f) const {
    return std::binary_search(f.elems.begin(), f.elems.end(), Element::integer(kind, n));
  }
  bool operator()(const node::Periodic&) const { return false; }  // served by exact()
  bool operator()(const node::FsGen& f) const { return f.members.count(Element::integer(kind, n)) > 0; }
  bool operator()(const node::FpGen& f) const { return f.members.count(Element::integer(kind, n)) > 0; }
  bool operator()(const node::Blocks& b) const {
    for (const auto& [s, e] : b.runs) {
      if (s > n) break;
      if (n <= e) return true;
    }
    return false;
  }
  bool operator()(const node::FsBlocks& f) const {
    if (n <= 0) return false;
    if (n > kValueCap / 4) fail(ErrorKind::horizon, "fs-block membership beyond value cap");
    return fsb_hit(f, n, n, f.start.size(), true);
  }
  bool operator()(const node::EvenLength&) const { return floor_mod(n, 2) == 0; }
  bool operator()(const node::Windowed& w) const {
    if ((n < 0 ? -n : n) > w.level)
      fail(ErrorKind::horizon, "windowed set queried at " + std::to_string(n) + " beyond level " + std::to_string(w.level));
    return std::binary_search(w.elems.begin(), w.elems.end(), Element::integer(kind, n));
  }
  bool operator()(const node::Predicate& p) const { return p.fn(Element::integer(kind, n)); }
  bool operator()(const node::Dilation& d) const {
    return floor_mod(n, d.c) == 0 && contains_int(*d.child, n / d.c);
  }
  bool operator()(const node::Inflate& d) const { return contains_int(*d.child, floor_div(n, d.c)); }
  bool operator()(const node::Contract& d) const {
    std::int64_t m;
    if (__builtin_mul_overflow(n, d.c, &m)) fail(ErrorKind::horizon, "contraction overflow");
    return contains_int(*d.child, m);
  }
  bool operator()(const node::Union& u) const {
    for (const auto& c : u.children)
      if (contains_int(c, n)) return true;
    return false;
  }
  bool operator()(const node::Intersection& u) const {
    for (const auto& c : u.children)
      if (!contains_int(c, n)) return false;
    return true;
  }
  bool operator()(const node::Complement& c) const { return !contains_int(*c.child, n); }
  bool operator()(const node::Translate& t) const {
    // Z and N0 are abelian: left and right agree.
    if (t.preimage) return contains_int(*t.child, n + t.g.x);
    if (kind == Kind::N0 && n < t.g.x) return false;
    return contains_int(*t.child, n - t.g.x);
  }
};

inline bool contains_int(const SetExpr& s, std::int64_t n) {
  if (s.kind() == Kind::N0 && n < 0) return false;
  if (const auto& e = s.exact()) return e->contains(n);
  return std::visit(IntVisitor{s.kind(), n}, s.variant());
}

struct ElemVisitor {
  const Element& g;
  Ambient amb;
  bool operator()(const node::Full&) const { return true; }
  bool operator()(const node::Empty&) const { return false; }
  bool operator()(const node::Finite& f) const { return std::binary_search(f.elems.begin(), f.elems.end(), g); }
  bool operator()(const node::FsGen& f) const { return f.members.count(g) > 0; }
  bool operator()(const node::FpGen& f) const { return f.members.count(g) > 0; }
  bool operator()(const node::EvenLength&) const {
    switch (g.kind) {
      case Kind::Z2: return floor_mod(g.x + g.y, 2) == 0;
      case Kind::F2: return g.w.size() % 2 == 0;
      default: return floor_mod(g.x, 2) == 0;
    }
  }
  bool operator()(const node::Windowed& w) const {
    if (amb.level_of(g) > w.level)
      fail(ErrorKind::horizon, "windowed set queried at " + to_string(g) + " beyond level " + std::to_string(w.level));
    return std::binary_search(w.elems.begin(), w.elems.end(), g);
  }
  bool operator()(const node::Predicate& p) const { return p.fn(g); }
  bool operator()(const node::Union& u) const {
    for (const auto& c : u.children)
      if (c.contains(g)) return true;
    return false;
  }
  bool operator()(const node::Intersection& u) const {
    for (const auto& c : u.children)
      if (!c.contains(g)) return false;
    return true;
  }
  bool operator()(const node::Complement& c) const { return !c.child->contains(g); }
  bool operator()(const node::Translate& t) const {
    if (t.preimage) return t.child->contains(t.right ? amb.mul(g, t.g) : amb.mul(t.g, g));
    auto gi = amb.inv(t.g);
    return t.child->contains(t.right ? amb.mul(g, gi) : amb.mul(gi, g));
  }
  template <class T>
  bool operator()(const T&) const {
    fail(ErrorKind::precondition, "integer-only set node used on a non-integer ambient");
  }
};

}  // namespace detail

inline bool SetExpr::contains(std::int64_t n) const {
  if (!detail::is_int_kind(kind())) fail(ErrorKind::precondition, "integer membership on non-integer ambient");
  return detail::contains_int(*this, n);
}

inline bool SetExpr::contains(const Element& g) const {
  if (g.kind != kind()) fail(ErrorKind::precondition, "membership query with element of wrong ambient");
  if (detail::is_int_kind(kind())) return detail::contains_int(*this, g.x);
  return std::visit(detail::ElemVisitor{g, ambient()}, variant());
}

// ---- exact periodic forms ---------------------------------------------------

namespace detail {

struct ExactVisitor {
  Kind kind;
  bool nonneg() const { return kind == Kind::N0; }
  std::optional<PeriodicForm> operator()(const node::Full&) const { return periodic::full(nonneg()); }
  std::optional<PeriodicForm> operator()(const node::Empty&) const { return periodic::finite(nonneg(), {}); }
  std::optional<PeriodicForm> operator()(const node::Finite& f) const {
    std::vector<std::int64_t> xs;
    for (const auto& e : f.elems) xs.push_back(e.x);
    if (!xs.empty() && xs.back() - xs.front() > kPeriodCap) return std::nullopt;
    return periodic::finite(nonneg(), xs);
  }
  std::optional<PeriodicForm> operator()(const node::Periodic& p) const {
    return periodic::eventually_periodic(nonneg(), p.offset, p.period, p.residues);
  }
  std::optional<PeriodicForm> operator()(const node::EvenLength&) const {
    return periodic::eventually_periodic(nonneg(), 0, 2, {0});
  }
  std::optional<PeriodicForm> operator()(const node::Dilation& d) const {
    const auto& c = d.child->exact();
    if (!c) return std::nullopt;
    return periodic::dilate(*c, d.c);
  }
  std::optional<PeriodicForm> operator()(const node::Inflate& d) const {
    const auto& c = d.child->exact();
    if (!c) return std::nullopt;
    return periodic::inflate(*c, d.c);
  }
  std::optional<PeriodicForm> operator()(const node::Contract& d) const {
    const auto& c = d.child->exact();
    if (!c) return std::nullopt;
    return periodic::contract(*c, d.c);
  }
  std::optional<PeriodicForm> fold(const std::vector<SetExpr>& xs, bool conj) const {
    std::optional<PeriodicForm> acc;
    for (const auto& x : xs) {
      const auto& e = x.exact();
      if (!e) return std::nullopt;
      if (!acc)
        acc = *e;
      else {
        acc = periodic::combine(*acc, *e, conj);
        if (!acc) return std::nullopt;
      }
      if (acc->has_window() && acc->hi - acc->lo > kPeriodCap) return std::nullopt;
    }
    return acc;
  }
  std::optional<PeriodicForm> operator()(const node::Union& u) const { return fold(u.children, false); }
  std::optional<PeriodicForm> operator()(const node::Intersection& u) const { return fold(u.children, true); }
  std::optional<PeriodicForm> operator()(const node::Complement& c) const {
    const auto& e = c.child->exact();
    if (!e) return std::nullopt;
    return periodic::complement(*e);
  }
  std::optional<PeriodicForm> operator()(const node::Translate& t) const {
    const auto& e = t.child->exact();
    if (!e) return std::nullopt;
    return t.preimage ? periodic::preimage_translate(*e, t.g.x) : periodic::image_translate(*e, t.g.x);
  }
  template <class T>
  std::optional<PeriodicForm> operator()(const T&) const {
    return std::nullopt;
  }
};

}  // namespace detail

inline const std::optional<PeriodicForm>& SetExpr::exact() const {
  std::call_once(n_->once, [this] {
    if (detail::is_int_kind(kind())) n_->exact = std::visit(detail::ExactVisitor{kind()}, variant());
  });
  return n_->exact;
}

// ---- DSL printing -----------------------------------------------------------

namespace detail {

inline std::string join_elems(const std::vector<Element>& es) {
  std::string s;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) s += ',';
    s += to_string(es[i]);
  }
  return s;
}

// Binary nodes print their own parentheses, so every child is already a unary.
inline std::string unary_dsl(const SetExpr& s) { return s.dsl(); }

struct DslVisitor {
  std::string operator()(const node::Full&) const { return "full"; }
  std::string operator()(const node::Empty&) const { return "empty"; }
  std::string operator()(const node::Finite& f) const { return "fin:{" + join_elems(f.elems) + "}"; }
  std::string operator()(const node::Periodic& p) const {
    std::string s = "ep:" + std::to_string(p.offset) + "," + std::to_string(p.period) + ",{";
    bool first = true;
    for (auto r : p.residues) {
      if (!first) s += ',';
      first = false;
      s += std::to_string(r);
    }
    return s + "}";
  }
  std::string operator()(const node::FsGen& f) const { return "fs:" + join_elems(f.gens); }
  std::string operator()(const node::FpGen& f) const { return "fp:" + join_elems(f.gens); }
  std::string operator()(const node::Blocks& b) const {
    if (b.geometric)
      return "blkg:" + std::to_string(b.base) + "," + std::to_string(b.p) + "," + std::to_string(b.q);
    return "blk:" + std::to_string(b.base) + "," + std::to_string(b.c);
  }
  std::string operator()(const node::FsBlocks& f) const {
    return "fsb:" + std::to_string(f.base) + "," + std::to_string(f.c) + "," + std::to_string(f.kmin);
  }
  std::string operator()(const node::EvenLength&) const { return "evenlen"; }
  std::string operator()(const node::Windowed& w) const {
    return "win:" + std::to_string(w.level) + ",{" + join_elems(w.elems) + "}";
  }
  std::string operator()(const node::Predicate& p) const { return "pred:" + p.name; }
  std::string operator()(const node::Dilation& d) const { return "dil:" + std::to_string(d.c) + "," + unary_dsl(*d.child); }
  std::string operator()(const node::Inflate& d) const { return "infl:" + std::to_string(d.c) + "," + unary_dsl(*d.child); }
  std::string operator()(const node::Contract& d) const { return "ctr:" + std::to_string(d.c) + "," + unary_dsl(*d.child); }
  std::string operator()(const node::Union& u) const {
    std::string s = "(";
    for (std::size_t i = 0; i < u.children.size(); ++i) s += (i ? "|" : "") + u.children[i].dsl();
    return s + ")";
  }
  std::string operator()(const node::Intersection& u) const {
    std::string s = "(";
    for (std::size_t i = 0; i < u.children.size(); ++i) s += (i ? "&" : "") + u.children[i].dsl();
    return s + ")";
  }
  std::string operator()(const node::Complement& c) const { return "!" + unary_dsl(*c.child); }
  std::string operator()(const node::Translate& t) const {
    if (t.right) return std::string(t.preimage ? "rpre:" : "rtr:") + to_string(t.g) + "," + unary_dsl(*t.child);
    return to_string(t.g) + (t.preimage ? "<" : ">") + unary_dsl(*t.child);
  }
};

}  // namespace detail

inline std::string SetExpr::dsl() const { return std::visit(detail::DslVisitor{}, variant()); }

}  // namespace rl
