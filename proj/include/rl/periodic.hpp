#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "rl/error.hpp"

namespace rl {

inline constexpr std::int64_t kPeriodCap = std::int64_t{1} << 20;

inline std::int64_t floor_mod(std::int64_t a, std::int64_t p) {
  auto r = a % p;
  return r < 0 ? r + p : r;
}
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Exact normal form of an eventually periodic subset of Z (or of N0 when
// nonneg is set): membership is window[n - lo] on [lo, hi] and mask[n mod period]
// elsewhere.
struct PeriodicForm {
  bool nonneg = false;
  std::int64_t period = 1;
  std::vector<char> mask{0};
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::vector<char> window;

  bool contains(std::int64_t n) const {
    if (nonneg && n < 0) return false;
    if (lo <= n && n <= hi) return window[static_cast<std::size_t>(n - lo)] != 0;
    return mask[static_cast<std::size_t>(floor_mod(n, period))] != 0;
  }
  std::int64_t mask_count() const { return std::count(mask.begin(), mask.end(), 1); }
  bool mask_full() const { return mask_count() == period; }
  bool mask_empty() const { return mask_count() == 0; }
  bool has_window() const { return lo <= hi; }
};

namespace periodic {

inline std::optional<std::int64_t> lcm_capped(std::int64_t a, std::int64_t b) {
  auto l = std::lcm(a, b);
  if (l <= 0 || l > kPeriodCap) return std::nullopt;
  return l;
}

inline void trim(PeriodicForm& f) {
  auto mk = [&](std::int64_t n) { return f.mask[static_cast<std::size_t>(floor_mod(n, f.period))]; };
  std::size_t b = 0, e = f.window.size();
  while (b < e && f.window[b] == mk(f.lo + static_cast<std::int64_t>(b))) ++b;
  while (e > b && f.window[e - 1] == mk(f.lo + static_cast<std::int64_t>(e) - 1)) --e;
  if (b == e) {
    f.window.clear();
    f.lo = 0;
    f.hi = -1;
    return;
  }
  f.window = std::vector<char>(f.window.begin() + static_cast<std::ptrdiff_t>(b), f.window.begin() + static_cast<std::ptrdiff_t>(e));
  f.lo += static_cast<std::int64_t>(b);
  f.hi = f.lo + static_cast<std::int64_t>(f.window.size()) - 1;
}

inline void minimize_period(PeriodicForm& f) {
  for (std::int64_t d = 1; d < f.period; ++d) {
    if (f.period % d) continue;
    bool ok = true;
    for (std::int64_t r = d; r < f.period && ok; ++r) ok = f.mask[static_cast<std::size_t>(r)] == f.mask[static_cast<std::size_t>(r % d)];
    if (ok) {
      f.mask.resize(static_cast<std::size_t>(d));
      f.period = d;
      break;
    }
  }
}

// Builds a form from a tail mask and an exact membership function valid on [lo, hi].
inline PeriodicForm make(bool nonneg, std::int64_t period, const std::function<bool(std::int64_t)>& tail,
                         std::int64_t lo, std::int64_t hi, const std::function<bool(std::int64_t)>& exact) {
  PeriodicForm f;
  f.nonneg = nonneg;
  f.period = period;
  f.mask.assign(static_cast<std::size_t>(period), 0);
  for (std::int64_t r = 0; r < period; ++r) f.mask[static_cast<std::size_t>(r)] = tail(r) ? 1 : 0;
  if (nonneg) lo = std::max<std::int64_t>(lo, 0);
  if (lo <= hi) {
    f.lo = lo;
    f.hi = hi;
    f.window.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) f.window[static_cast<std::size_t>(n - lo)] = exact(n) ? 1 : 0;
  }
  minimize_period(f);
  trim(f);
  return f;
}

// Members n with n mod period in residues, restricted to n >= offset on N0 and
// |n| >= offset on Z.
inline PeriodicForm eventually_periodic(bool nonneg, std::int64_t offset, std::int64_t period,
                                        const std::set<std::int64_t>& residues) {
  if (period <= 0) fail(ErrorKind::precondition, "period must be positive");
  if (offset < 0) fail(ErrorKind::precondition, "offset must be non-negative");
  for (auto r : residues)
    if (r < 0 || r >= period) fail(ErrorKind::precondition, "residue " + std::to_string(r) + " outside [0, period)");
  if (period > kPeriodCap) fail(ErrorKind::precondition, "period exceeds cap");
  auto tail = [&](std::int64_t r) { return residues.count(r) > 0; };
  auto lo = nonneg ? std::int64_t{0} : -offset + 1;
  return make(nonneg, period, tail, lo, offset - 1, [](std::int64_t) { return false; });
}

inline PeriodicForm finite(bool nonneg, const std::vector<std::int64_t>& elems) {
  if (elems.empty()) return make(nonneg, 1, [](std::int64_t) { return false; }, 0, -1, [](std::int64_t) { return false; });
  auto [mn, mx] = std::minmax_element(elems.begin(), elems.end());
  std::set<std::int64_t> s(elems.begin(), elems.end());
  return make(nonneg, 1, [](std::int64_t) { return false; }, *mn, *mx, [&](std::int64_t n) { return s.count(n) > 0; });
}

inline PeriodicForm full(bool nonneg) {
  return make(nonneg, 1, [](std::int64_t) { return true; }, 0, -1, [](std::int64_t) { return true; });
}

inline PeriodicForm complement(const PeriodicForm& f) {
  PeriodicForm g = f;
  for (auto& c : g.mask) c = !c;
  for (auto& c : g.window) c = !c;
  return g;
}

inline std::optional<PeriodicForm> combine(const PeriodicForm& f, const PeriodicForm& g, bool conj) {
  auto p = lcm_capped(f.period, g.period);
  if (!p) return std::nullopt;
  std::int64_t lo = 0, hi = -1;
  bool any = false;
  for (const auto* h : {&f, &g}) {
    if (!h->has_window()) continue;
    lo = any ? std::min(lo, h->lo) : h->lo;
    hi = any ? std::max(hi, h->hi) : h->hi;
    any = true;
  }
  auto op = [conj](bool a, bool b) { return conj ? (a && b) : (a || b); };
  return make(f.nonneg, *p,
              [&](std::int64_t r) { return op(f.mask[static_cast<std::size_t>(r % f.period)], g.mask[static_cast<std::size_t>(r % g.period)]); },
              lo, hi, [&](std::int64_t n) { return op(f.contains(n), g.contains(n)); });
}

// {x : x - t in A}; on N0 additionally x >= t.
inline PeriodicForm image_translate(const PeriodicForm& f, std::int64_t t) {
  if (f.nonneg && t < 0) fail(ErrorKind::precondition, "negative image translate on N0");
  auto lo = f.has_window() ? f.lo + t : 0;
  auto hi = f.has_window() ? f.hi + t : -1;
  if (f.nonneg) {
    lo = 0;
    hi = std::max(hi, t - 1);
  }
  return make(f.nonneg, f.period, [&](std::int64_t r) { return f.mask[static_cast<std::size_t>(floor_mod(r - t, f.period))] != 0; }, lo, hi,
              [&](std::int64_t n) { return (!f.nonneg || n >= t) && f.contains(n - t); });
}

// {x : x + t in A}.
inline PeriodicForm preimage_translate(const PeriodicForm& f, std::int64_t t) {
  if (f.nonneg && t < 0) fail(ErrorKind::precondition, "negative preimage translate on N0");
  auto lo = f.has_window() ? f.lo - t : 0;
  auto hi = f.has_window() ? f.hi - t : -1;
  return make(f.nonneg, f.period, [&](std::int64_t r) { return f.mask[static_cast<std::size_t>(floor_mod(r + t, f.period))] != 0; }, lo, hi,
              [&](std::int64_t n) { return f.contains(n + t); });
}

inline PeriodicForm negate(const PeriodicForm& f) {
  if (f.nonneg) fail(ErrorKind::unsupported, "negation on N0");
  auto lo = f.has_window() ? -f.hi : 0;
  auto hi = f.has_window() ? -f.lo : -1;
  return make(false, f.period, [&](std::int64_t r) { return f.mask[static_cast<std::size_t>(floor_mod(-r, f.period))] != 0; }, lo, hi,
              [&](std::int64_t n) { return f.contains(-n); });
}

// {c x : x in A}.
inline std::optional<PeriodicForm> dilate(const PeriodicForm& f, std::int64_t c) {
  if (c == 0) fail(ErrorKind::precondition, "dilation factor 0");
  if (c < 0) {
    auto d = dilate(f, -c);
    if (!d) return std::nullopt;
    return negate(*d);
  }
  if (f.period * c > kPeriodCap) return std::nullopt;
  auto lo = f.has_window() ? f.lo * c : 0;
  auto hi = f.has_window() ? f.hi * c : -1;
  return make(f.nonneg, f.period * c,
              [&](std::int64_t r) { return r % c == 0 && f.mask[static_cast<std::size_t>((r / c) % f.period)]; }, lo, hi,
              [&](std::int64_t n) { return floor_mod(n, c) == 0 && f.contains(n / c); });
}

// {n : floor(n / c) in A}.
inline std::optional<PeriodicForm> inflate(const PeriodicForm& f, std::int64_t c) {
  if (c <= 0) fail(ErrorKind::precondition, "inflation factor must be positive");
  if (f.period * c > kPeriodCap) return std::nullopt;
  auto lo = f.has_window() ? f.lo * c : 0;
  auto hi = f.has_window() ? f.hi * c + c - 1 : -1;
  return make(f.nonneg, f.period * c, [&](std::int64_t r) { return f.mask[static_cast<std::size_t>((r / c) % f.period)] != 0; }, lo, hi,
              [&](std::int64_t n) { return f.contains(floor_div(n, c)); });
}

// {n : c n in A}.
inline PeriodicForm contract(const PeriodicForm& f, std::int64_t c) {
  if (c <= 0) fail(ErrorKind::precondition, "contraction factor must be positive");
  auto lo = f.has_window() ? ceil_div(f.lo, c) : 0;
  auto hi = f.has_window() ? floor_div(f.hi, c) : -1;
  return make(f.nonneg, f.period, [&](std::int64_t r) { return f.mask[static_cast<std::size_t>(floor_mod(c * r, f.period))] != 0; }, lo, hi,
              [&](std::int64_t n) { return f.contains(c * n); });
}

}  // namespace periodic
}  // namespace rl
