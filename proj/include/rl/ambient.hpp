#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rl/error.hpp"

namespace rl {

enum class Kind { N0, Z, Z2, F2 };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::N0: return "N0";
    case Kind::Z: return "Z";
    case Kind::Z2: return "Z2";
    case Kind::F2: return "F2";
  }
  return "?";
}

inline Kind parse_kind(std::string_view s) {
  if (s == "N0") return Kind::N0;
  if (s == "Z") return Kind::Z;
  if (s == "Z2") return Kind::Z2;
  if (s == "F2") return Kind::F2;
  fail(ErrorKind::parse, "unknown ambient '" + std::string(s) + "'");
}

inline constexpr std::size_t kWordCap = 64;
inline constexpr std::uint64_t kBallCap = std::uint64_t{1} << 24;  // largest enumerated ball

namespace detail {
// a < A < b < B is the generator order used by the enumeration.
inline int letter_rank(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
  }
  return -1;
}
inline char letter_of(int r) { return "aAbB"[r]; }
inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  return '?';
}
}  // namespace detail

// x carries N0/Z values and the first Z2 coordinate; w is the reduced F2 word.
struct Element {
  Kind kind = Kind::Z;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::string w;

  static Element n0(std::int64_t v) { return {Kind::N0, v, 0, {}}; }
  static Element z(std::int64_t v) { return {Kind::Z, v, 0, {}}; }
  static Element z2(std::int64_t a, std::int64_t b) { return {Kind::Z2, a, b, {}}; }
  static Element f2(std::string word) { return {Kind::F2, 0, 0, std::move(word)}; }
  static Element integer(Kind k, std::int64_t v) { return {k, v, 0, {}}; }

  bool operator==(const Element&) const = default;

  // Ordering is the ambient enumeration order.
  std::strong_ordering operator<=>(const Element& o) const {
    if (kind != o.kind) return kind <=> o.kind;
    switch (kind) {
      case Kind::N0:
        return x <=> o.x;
      case Kind::Z: {
        auto ax = x < 0 ? -x : x, bx = o.x < 0 ? -o.x : o.x;
        if (ax != bx) return ax <=> bx;
        return o.x <=> x;  // positive before negative
      }
      case Kind::Z2: {
        auto ra = std::max(x < 0 ? -x : x, y < 0 ? -y : y);
        auto rb = std::max(o.x < 0 ? -o.x : o.x, o.y < 0 ? -o.y : o.y);
        if (ra != rb) return ra <=> rb;
        if (x != o.x) return x <=> o.x;
        return y <=> o.y;
      }
      case Kind::F2: {
        if (w.size() != o.w.size()) return w.size() <=> o.w.size();
        for (std::size_t i = 0; i < w.size(); ++i) {
          int a = detail::letter_rank(w[i]), b = detail::letter_rank(o.w[i]);
          if (a != b) return a <=> b;
        }
        return std::strong_ordering::equal;
      }
    }
    return std::strong_ordering::equal;
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(e.x) * 1000003u ^ std::hash<std::int64_t>{}(e.y);
    if (!e.w.empty()) h ^= std::hash<std::string>{}(e.w) + 0x9e3779b97f4a7c15ULL + (h << 6);
    return h;
  }
};

inline std::string to_string(const Element& e) {
  switch (e.kind) {
    case Kind::N0:
    case Kind::Z: return std::to_string(e.x);
    case Kind::Z2: return "(" + std::to_string(e.x) + "," + std::to_string(e.y) + ")";
    case Kind::F2: return e.w.empty() ? std::string("e") : e.w;
  }
  return "?";
}

class Ambient {
 public:
  explicit Ambient(Kind k = Kind::Z) : kind_(k) {}

  Kind kind() const { return kind_; }
  bool is_group() const { return kind_ != Kind::N0; }
  bool is_integer() const { return kind_ == Kind::N0 || kind_ == Kind::Z; }

  Element identity() const { return Element{kind_, 0, 0, {}}; }
  Element integer(std::int64_t v) const { return Element::integer(kind_, v); }

  Element enumerate(std::uint64_t i) const {
    switch (kind_) {
      case Kind::N0: return Element::n0(static_cast<std::int64_t>(i));
      case Kind::Z:
        if (i == 0) return Element::z(0);
        return Element::z(i % 2 ? static_cast<std::int64_t>((i + 1) / 2)
                                : -static_cast<std::int64_t>(i / 2));
      case Kind::Z2: return z2_enumerate(i);
      case Kind::F2: return f2_enumerate(i);
    }
    return identity();
  }

  std::uint64_t index_of(const Element& g) const {
    check_kind(g);
    switch (kind_) {
      case Kind::N0: return static_cast<std::uint64_t>(g.x);
      case Kind::Z:
        return g.x > 0 ? static_cast<std::uint64_t>(2 * g.x - 1) : static_cast<std::uint64_t>(-2 * g.x);
      case Kind::Z2: return z2_index(g);
      case Kind::F2: return f2_index(g);
    }
    return 0;
  }

  // Smallest n with g in ball(n); ball(0) is {identity}.
  std::int64_t level_of(const Element& g) const {
    check_kind(g);
    switch (kind_) {
      case Kind::N0: return g.x;
      case Kind::Z: return g.x < 0 ? -g.x : g.x;
      case Kind::Z2: return std::max(g.x < 0 ? -g.x : g.x, g.y < 0 ? -g.y : g.y);
      case Kind::F2: return static_cast<std::int64_t>(g.w.size());
    }
    return 0;
  }

  bool in_ball(const Element& g, std::int64_t level) const { return level_of(g) <= level; }

  std::uint64_t ball_size(std::int64_t level) const {
    if (level < 0) fail(ErrorKind::precondition, "ball level must be non-negative");
    auto n = static_cast<std::uint64_t>(level);
    switch (kind_) {
      case Kind::N0: return n + 1;
      case Kind::Z: return 2 * n + 1;
      case Kind::Z2: return n > (std::uint64_t{1} << 30) ? UINT64_MAX : (2 * n + 1) * (2 * n + 1);
      case Kind::F2: {
        std::uint64_t p = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
          if (p > (std::uint64_t{1} << 61) / 3) return UINT64_MAX;  // saturate
          p *= 3;
        }
        return 2 * p - 1;
      }
    }
    return 0;
  }

  // Elements of ball(level) in enumeration order.
  std::vector<Element> ball(std::int64_t level) const {
    auto n = ball_size(level);
    if (n > kBallCap)
      fail(ErrorKind::horizon, "ball(" + std::to_string(level) + ") of " + std::string(to_string(kind_)) + " is too large to enumerate");
    std::vector<Element> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(enumerate(i));
    return out;
  }

  Element mul(const Element& g, const Element& h) const {
    check_kind(g);
    check_kind(h);
    switch (kind_) {
      case Kind::N0:
      case Kind::Z: return integer(checked_add(g.x, h.x));
      case Kind::Z2: return Element::z2(checked_add(g.x, h.x), checked_add(g.y, h.y));
      case Kind::F2: {
        std::string r = g.w;
        for (char c : h.w) {
          if (!r.empty() && r.back() == detail::inverse_letter(c))
            r.pop_back();
          else
            r.push_back(c);
        }
        if (r.size() > kWordCap)
          fail(ErrorKind::word_cap, "product word length " + std::to_string(r.size()) + " exceeds " +
                                        std::to_string(kWordCap));
        return Element::f2(std::move(r));
      }
    }
    return identity();
  }

  Element inv(const Element& g) const {
    check_kind(g);
    switch (kind_) {
      case Kind::N0: fail(ErrorKind::unsupported, "inv is undefined on the monoid N0");
      case Kind::Z: return Element::z(-g.x);
      case Kind::Z2: return Element::z2(-g.x, -g.y);
      case Kind::F2: {
        std::string r(g.w.rbegin(), g.w.rend());
        for (char& c : r) c = detail::inverse_letter(c);
        return Element::f2(std::move(r));
      }
    }
    return identity();
  }

  Element parse_element(std::string_view s) const {
    auto bad = [&] { fail(ErrorKind::parse, "bad " + std::string(to_string(kind_)) + " element '" + std::string(s) + "'"); };
    switch (kind_) {
      case Kind::N0:
      case Kind::Z: {
        std::int64_t v = 0;
        if (!parse_int(s, v)) bad();
        if (kind_ == Kind::N0 && v < 0) bad();
        return integer(v);
      }
      case Kind::Z2: {
        if (s.size() < 5 || s.front() != '(' || s.back() != ')') bad();
        auto inner = s.substr(1, s.size() - 2);
        auto comma = inner.find(',');
        if (comma == std::string_view::npos) bad();
        std::int64_t a = 0, b = 0;
        if (!parse_int(inner.substr(0, comma), a) || !parse_int(inner.substr(comma + 1), b)) bad();
        return Element::z2(a, b);
      }
      case Kind::F2: {
        if (s == "e") return identity();
        if (s.empty() || s.size() > kWordCap) bad();
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (detail::letter_rank(s[i]) < 0) bad();
          if (i > 0 && s[i - 1] == detail::inverse_letter(s[i])) bad();
        }
        return Element::f2(std::string(s));
      }
    }
    fail(ErrorKind::parse, "bad element '" + std::string(s) + "'");
  }

  static bool parse_int(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return false;
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, s[i] - '0', &v)) return false;
    }
    out = neg ? -v : v;
    return true;
  }

  bool operator==(const Ambient&) const = default;

 private:
  Kind kind_;

  void check_kind(const Element& g) const {
    if (g.kind != kind_)
      fail(ErrorKind::precondition, std::string("element of ") + to_string(g.kind) + " used in " + to_string(kind_));
  }

  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::precondition, "integer overflow in mul");
    return r;
  }

  // Z2: ring r occupies indices [(2r-1)^2, (2r+1)^2), ordered lexicographically.
  static Element z2_enumerate(std::uint64_t i) {
    if (i == 0) return Element::z2(0, 0);
    std::uint64_t r = 0;
    while ((2 * r + 1) * (2 * r + 1) <= i) ++r;  // small rings only in practice
    auto R = static_cast<std::int64_t>(r);
    std::uint64_t p = i - (2 * r - 1) * (2 * r - 1);
    if (p < 2 * r + 1) return Element::z2(-R, -R + static_cast<std::int64_t>(p));
    p -= 2 * r + 1;
    if (p < 2 * (2 * r - 1)) {
      auto x = -R + 1 + static_cast<std::int64_t>(p / 2);
      return Element::z2(x, p % 2 == 0 ? -R : R);
    }
    p -= 2 * (2 * r - 1);
    return Element::z2(R, -R + static_cast<std::int64_t>(p));
  }

  static std::uint64_t z2_index(const Element& g) {
    auto ax = g.x < 0 ? -g.x : g.x, ay = g.y < 0 ? -g.y : g.y;
    auto r = static_cast<std::uint64_t>(std::max(ax, ay));
    if (r == 0) return 0;
    auto R = static_cast<std::int64_t>(r);
    std::uint64_t base = (2 * r - 1) * (2 * r - 1);
    if (g.x == -R) return base + static_cast<std::uint64_t>(g.y + R);
    base += 2 * r + 1;
    if (g.x < R) return base + 2 * static_cast<std::uint64_t>(g.x + R - 1) + (g.y == R ? 1 : 0);
    base += 2 * (2 * r - 1);
    return base + static_cast<std::uint64_t>(g.y + R);
  }

  // F2: words of length L occupy [2*3^(L-1) - 1, 2*3^L - 1).
  static Element f2_enumerate(std::uint64_t i) {
    if (i == 0) return Element::f2("");
    unsigned __int128 p = 1;
    std::size_t L = 1;
    while (2 * p * 3 - 1 <= i) {
      p *= 3;
      ++L;
    }
    unsigned __int128 r = i - (2 * p - 1);
    std::string w(L, '?');
    unsigned __int128 unit = p;  // 3^(L-1)
    int d0 = static_cast<int>(r / unit);
    r %= unit;
    w[0] = detail::letter_of(d0);
    for (std::size_t k = 1; k < L; ++k) {
      unit /= 3;
      int d = static_cast<int>(r / unit);
      r %= unit;
      char forbidden = detail::inverse_letter(w[k - 1]);
      int seen = -1;
      for (int c = 0; c < 4; ++c) {
        if (detail::letter_of(c) == forbidden) continue;
        if (++seen == d) {
          w[k] = detail::letter_of(c);
          break;
        }
      }
    }
    return Element::f2(std::move(w));
  }

  static std::uint64_t f2_index(const Element& g) {
    const auto& w = g.w;
    if (w.empty()) return 0;
    std::size_t L = w.size();
    unsigned __int128 p = 1;
    for (std::size_t k = 1; k < L; ++k) p *= 3;
    unsigned __int128 idx = 2 * p - 1;
    unsigned __int128 unit = p;
    idx += static_cast<unsigned __int128>(detail::letter_rank(w[0])) * unit;
    for (std::size_t k = 1; k < L; ++k) {
      unit /= 3;
      int d = detail::letter_rank(w[k]);
      if (detail::letter_rank(detail::inverse_letter(w[k - 1])) < d) --d;
      idx += static_cast<unsigned __int128>(d) * unit;
    }
    if (idx > static_cast<unsigned __int128>(~std::uint64_t{0}))
      fail(ErrorKind::word_cap, "enumeration index of " + w + " exceeds 64 bits");
    return static_cast<std::uint64_t>(idx);
  }
};

}  // namespace rl
