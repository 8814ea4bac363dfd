#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rl/subshift.hpp"

namespace rl {

// Points at distance < delta from y are those agreeing with y on ball(r), where
// d(z, w) = 2^-k for k the first ball level on which z and w differ.
inline std::int64_t metric_radius(double delta) {
  if (!(delta > 0)) fail(ErrorKind::precondition, "radius must be positive");
  std::int64_t r = 0;
  while (std::ldexp(1.0, static_cast<int>(-(r + 1))) >= delta) {
    if (++r > 60) fail(ErrorKind::horizon, "radius below 2^-61");
  }
  return r;
}

struct CentralCert {
  std::int64_t n = 0;
  std::int64_t rho = 0;   // V_n = [y | ball(rho)]
  std::int64_t rho2 = 0;  // radius for A and B (eps / 2n)
  std::size_t size = 0;   // |F_n & ball(horizon)|
  Verdict a_syndetic;     // A = N(y, [y|ball(rho2)])
  Verdict b_thick;        // B = {g : gx, gy agree on ball(rho2)}
  bool inclusion = false; // A & B inside F_n on ball(horizon)
  std::optional<Element> offender;
  Verdict pws;
};

struct CentralResult {
  ChainPresentation chain;
  double eps = 0;
  std::int64_t horizon = 0;
  std::vector<std::vector<Element>> members;  // F_1 .. F_{n_max+1} on ball(horizon)
  std::vector<CentralCert> certs;             // n = 1 .. n_max
};

namespace detail {

inline std::int64_t central_rho(double eps, std::int64_t n) { return metric_radius(eps / static_cast<double>(n)); }

// Smallest m with rho(m) >= need.
inline std::int64_t central_shift(double eps, std::int64_t need) {
  std::int64_t m = 1;
  while (central_rho(eps, m) < need) {
    if (m > (std::int64_t{1} << 40)) fail(ErrorKind::horizon, "shift witness beyond 2^40");
    m *= 2;
  }
  std::int64_t lo = m / 2 + 1, hi = m;
  while (lo < hi) {
    auto mid = lo + (hi - lo) / 2;
    if (central_rho(eps, mid) >= need) hi = mid; else lo = mid + 1;
  }
  return std::max<std::int64_t>(1, hi);
}

inline std::vector<Element> agreement_set(const SymbolicPoint& x, const SymbolicPoint& y, std::int64_t r, std::int64_t horizon) {
  auto amb = x.ambient();
  auto ball = amb.ball(r);
  std::vector<Element> out;
  for (const auto& g : amb.ball(horizon)) {
    bool ok = true;
    for (const auto& t : ball) {
      auto tg = amb.mul(t, g);
      if (x.at(tg) != y.at(tg)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(g);
  }
  return out;
}

}  // namespace detail

// F_n = N((x,y), V_n x V_n) with V_n the ball of radius eps/n around y, recorded on
// ball(horizon); the pws certificate is A & B inside F_n, A syndetic from y's
// recurrence and B thick from the proximality runs of (x, y).
inline CentralResult central_chain(const SymbolicPoint& x, const SymbolicPoint& y, double eps, std::int64_t n_max, std::int64_t horizon,
                                   Family fam = family_pws()) {
  if (x.kind() != y.kind()) fail(ErrorKind::precondition, "points live on different ambients");
  if (n_max < 1) fail(ErrorKind::precondition, "n_max must be >= 1");
  if (!(eps > 0)) fail(ErrorKind::precondition, "epsilon must be positive");
  const Kind k = x.kind();
  auto amb = x.ambient();

  struct State {
    SymbolicPoint x, y;
    double eps;
    std::int64_t horizon;
    std::shared_ptr<detail::TermCache> cache;
  };
  auto st = std::make_shared<State>(State{x, y, eps, horizon, nullptr});
  st->cache = std::make_shared<detail::TermCache>([x, y, eps, horizon, k](std::int64_t n) {
    auto cyl = Cylinder::of_point(y, detail::central_rho(eps, n));
    return windowed(k, horizon, joint_return(x, y, cyl, cyl, horizon));
  });

  CentralResult res;
  res.eps = eps;
  res.horizon = horizon;
  for (std::int64_t n = 1; n <= n_max + 1; ++n) {
    auto f = (*st->cache)(n);
    res.members.push_back(f.as<node::Windowed>()->elems);
  }

  auto certify = [st, fam](std::int64_t n, std::int64_t h) -> CentralCert {
    CentralCert c;
    c.n = n;
    c.rho = detail::central_rho(st->eps, n);
    c.rho2 = detail::central_rho(st->eps, 2 * n);
    h = std::min(h, st->horizon);
    auto fn = (*st->cache)(n);
    c.size = fn.as<node::Windowed>()->elems.size();
    auto a = return_expr(st->y, Cylinder::of_point(st->y, c.rho2), h);
    auto bset = detail::agreement_set(st->x, st->y, c.rho2, h);
    if (bset.empty()) fail(ErrorKind::precondition, "proximality not witnessed: x and y never agree on ball(" + std::to_string(c.rho2) + ") within ball(" + std::to_string(h) + ")");
    auto b = windowed(st->x.kind(), h, bset);
    c.a_syndetic = classify_syndetic(a, h);
    c.b_thick = classify_thick(b, h, 1);
    c.inclusion = true;
    for (const auto& g : bset)
      if (a.contains(g) && !fn.contains(g)) {
        c.inclusion = false;
        c.offender = g;
        break;
      }
    Verdict v;
    v.property = "piecewise syndetic";
    v.horizon = h;
    v.basis = weaker(c.a_syndetic.basis, c.b_thick.basis);
    v.pws_thick = b;
    v.pws_syndetic = a;
    v.thick_part = std::make_shared<const Verdict>(c.b_thick);
    v.syndetic_part = std::make_shared<const Verdict>(c.a_syndetic);
    if (c.a_syndetic.yes() && c.b_thick.yes() && c.inclusion) {
      v.status = Status::yes;
      v.note = "A & B inside F_" + std::to_string(n);
    } else {
      v.note = !c.a_syndetic.yes() ? "return set of y not certified syndetic: " + c.a_syndetic.note
               : !c.b_thick.yes()  ? "proximality runs not certified thick: " + c.b_thick.note
                                   : "A & B leaves F_" + std::to_string(n) + " at " + to_string(*c.offender);
    }
    c.pws = v;
    return c;
  };

  for (std::int64_t n = 1; n <= n_max; ++n) {
    res.certs.push_back(certify(n, horizon));
    if (!res.certs.back().a_syndetic.yes())
      fail(ErrorKind::precondition, "y is not certified almost periodic at n=" + std::to_string(n) + ": " + res.certs.back().a_syndetic.note);
  }

  ChainPresentation ch;
  ch.kind = k;
  ch.dsl = "central:eps=" + std::to_string(eps) + ",x=" + x.describe() + ",y=" + y.describe();
  ch.family = fam;
  ch.member = [st](std::int64_t n) { return (*st->cache)(n); };
  ch.shift = [st, amb](std::int64_t n, const Element& f) {
    return detail::central_shift(st->eps, detail::central_rho(st->eps, n) + amb.level_of(f));
  };
  ch.certify = [certify](std::int64_t n, std::int64_t h) -> std::optional<Verdict> { return certify(n, h).pws; };
  ch.hint = [certify, st](std::int64_t n) -> std::optional<PwsHint> {
    auto c = certify(n, st->horizon);
    if (!c.pws.yes()) return std::nullopt;
    return PwsHint{*c.pws.pws_thick, *c.pws.pws_syndetic};
  };
  res.chain = std::move(ch);
  return res;
}

// ---- neighborhood refinement ----------------------------------------------------------

struct RefineSample {
  std::int64_t n = 0;
  std::vector<Element> I, J;  // first n members of F' and of its complement
  std::int64_t level = 0;     // W = [x | ball(level)]
  bool inclusion = true;      // N(x, W) inside the symmetric intersection on the ball
  std::optional<Element> offender;
  Verdict w_verdict;          // family verdict of N(x, W)
};

struct RefineResult {
  Cylinder v;
  SetExpr fprime;
  std::vector<RefineSample> samples;
  bool ok() const {
    for (const auto& s : samples)
      if (!s.inclusion) return false;
    return true;
  }
};

// v = u (cylinders are clopen); F' = N(x, v).  For each sample size n the
// refined cylinder W of x satisfies N(x,W) inside the f^-1 F' / f^-1 (G \ F') intersection.
inline RefineResult refine_neighborhood(const SymbolicPoint& x, const Cylinder& u, std::int64_t horizon, const Family& fam = family_syndetic(),
                                        std::vector<std::int64_t> sizes = {1, 2, 3}) {
  auto amb = x.ambient();
  if (!x.unlimited()) horizon = std::min(horizon, x.guarantee() - u.level());
  if (horizon < 0) fail(ErrorKind::horizon, "point is not known on the cylinder support");
  RefineResult r{u, return_expr(x, u, horizon), {}};
  auto in_fprime = [&](const Element& g) {
    for (std::size_t i = 0; i < u.support.size(); ++i)
      if (x.at(amb.mul(u.support[i], g)) != u.pattern[i]) return false;
    return true;
  };
  std::vector<Element> members, others;
  for (const auto& g : amb.ball(horizon)) (in_fprime(g) ? members : others).push_back(g);
  for (auto n : sizes) {
    RefineSample s;
    s.n = n;
    s.I.assign(members.begin(), members.begin() + std::min<std::size_t>(n, members.size()));
    s.J.assign(others.begin(), others.begin() + std::min<std::size_t>(n, others.size()));
    for (const auto& k : u.support) {
      for (const auto& f : s.I) s.level = std::max(s.level, amb.level_of(amb.mul(k, f)));
      for (const auto& f : s.J) s.level = std::max(s.level, amb.level_of(amb.mul(k, f)));
    }
    auto w = Cylinder::of_point(x, s.level);
    auto scan = horizon;
    if (!x.unlimited()) scan = std::min(scan, x.guarantee() - s.level);
    for (const auto& g : return_set(x, w, scan)) {
      auto check = [&](const Element& f, bool want) {
        auto fg = amb.mul(f, g);
        if (!amb.in_ball(fg, horizon)) return true;
        return in_fprime(fg) == want;
      };
      bool ok = true;
      for (const auto& f : s.I) ok = ok && check(f, true);
      for (const auto& f : s.J) ok = ok && check(f, false);
      if (!ok) {
        s.inclusion = false;
        s.offender = g;
        break;
      }
    }
    s.w_verdict = family_member(fam, return_expr(x, w, scan), scan);
    r.samples.push_back(std::move(s));
  }
  return r;
}

}  // namespace rl
