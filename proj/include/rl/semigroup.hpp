#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rl/check.hpp"
#include "rl/error.hpp"

namespace rl {

using Elems = std::vector<int>;  // sorted element indices

struct FiniteSemigroup {
  int n = 0;
  std::vector<int> table;  // row-major, table[a*n+b] = a*b
  std::vector<std::string> labels;

  int mul(int a, int b) const { return table[static_cast<std::size_t>(a * n + b)]; }
  std::string label(int a) const { return labels.empty() ? std::to_string(a) : labels[static_cast<std::size_t>(a)]; }
  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> r(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r[static_cast<std::size_t>(a)].push_back(mul(a, b));
    return r;
  }
  bool operator==(const FiniteSemigroup&) const = default;
};

// First triple (a,b,c) with (ab)c != a(bc), in lexicographic order.
inline std::optional<std::array<int, 3>> associativity_witness(int n, const std::vector<int>& t) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int ab = t[static_cast<std::size_t>(a * n + b)];
      for (int c = 0; c < n; ++c) {
        int bc = t[static_cast<std::size_t>(b * n + c)];
        if (t[static_cast<std::size_t>(ab * n + c)] != t[static_cast<std::size_t>(a * n + bc)]) return std::array<int, 3>{a, b, c};
      }
    }
  return std::nullopt;
}

inline FiniteSemigroup validate(const std::vector<std::vector<int>>& rows, std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) fail(ErrorKind::precondition, "empty table");
  if (!labels.empty() && labels.size() != rows.size()) fail(ErrorKind::precondition, "label count differs from table order");
  FiniteSemigroup s{n, {}, std::move(labels)};
  for (int a = 0; a < n; ++a) {
    const auto& row = rows[static_cast<std::size_t>(a)];
    if (static_cast<int>(row.size()) != n)
      fail(ErrorKind::precondition, "row " + std::to_string(a) + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    for (int b = 0; b < n; ++b) {
      if (row[static_cast<std::size_t>(b)] < 0 || row[static_cast<std::size_t>(b)] >= n)
        fail(ErrorKind::precondition, "entry (" + std::to_string(a) + "," + std::to_string(b) + ") = " + std::to_string(row[static_cast<std::size_t>(b)]) + " out of range");
      s.table.push_back(row[static_cast<std::size_t>(b)]);
    }
  }
  if (auto w = associativity_witness(n, s.table)) {
    auto [a, b, c] = *w;
    fail(ErrorKind::precondition, "not associative at (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "): (ab)c = " +
                                      std::to_string(s.mul(s.mul(a, b), c)) + ", a(bc) = " + std::to_string(s.mul(a, s.mul(b, c))));
  }
  return s;
}

inline FiniteSemigroup transpose(const FiniteSemigroup& s) {
  FiniteSemigroup t = s;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b) t.table[static_cast<std::size_t>(a * s.n + b)] = s.mul(b, a);
  return t;
}

// Rows separated by newlines, entries by commas.  Blank lines and '#' comments are skipped;
// a first row that is not numeric is read as labels.
inline FiniteSemigroup parse_table_csv(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::vector<std::string> labels;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    bool numeric = std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
      return !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    });
    if (!numeric) {
      if (rows.empty() && labels.empty()) {
        labels = cells;
        continue;
      }
      fail(ErrorKind::parse, "line " + std::to_string(lineno) + ": non-numeric entry");
    }
    std::vector<int> row;
    for (const auto& c : cells) {
      if (c.size() > 9) fail(ErrorKind::parse, "line " + std::to_string(lineno) + ": entry too large");
      row.push_back(std::stoi(c));
    }
    rows.push_back(std::move(row));
  }
  return validate(rows, std::move(labels));
}

inline std::string to_csv(const FiniteSemigroup& s) {
  std::string out;
  if (!s.labels.empty()) {
    for (int a = 0; a < s.n; ++a) out += (a ? "," : "") + s.labels[static_cast<std::size_t>(a)];
    out += "\n";
  }
  for (int a = 0; a < s.n; ++a) {
    for (int b = 0; b < s.n; ++b) out += (b ? "," : "") + std::to_string(s.mul(a, b));
    out += "\n";
  }
  return out;
}

inline Elems idempotents(const FiniteSemigroup& s) {
  Elems e;
  for (int a = 0; a < s.n; ++a)
    if (s.mul(a, a) == a) e.push_back(a);
  return e;
}

namespace detail {

inline Elems to_elems(const std::vector<bool>& m) {
  Elems e;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) e.push_back(static_cast<int>(i));
  return e;
}

inline bool subset(const Elems& a, const Elems& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline Elems set_union(const std::vector<Elems>& parts) {
  Elems u;
  for (const auto& p : parts) u.insert(u.end(), p.begin(), p.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

// S^1 a, a S^1, S^1 a S^1
inline Elems principal_left(const FiniteSemigroup& s, int a) {
  std::vector<bool> m(static_cast<std::size_t>(s.n));
  m[static_cast<std::size_t>(a)] = true;
  for (int x = 0; x < s.n; ++x) m[static_cast<std::size_t>(s.mul(x, a))] = true;
  return to_elems(m);
}
inline Elems principal_right(const FiniteSemigroup& s, int a) {
  std::vector<bool> m(static_cast<std::size_t>(s.n));
  m[static_cast<std::size_t>(a)] = true;
  for (int x = 0; x < s.n; ++x) m[static_cast<std::size_t>(s.mul(a, x))] = true;
  return to_elems(m);
}
inline Elems principal_ideal(const FiniteSemigroup& s, int a) {
  std::vector<bool> m(static_cast<std::size_t>(s.n));
  for (int l : principal_left(s, a))
    for (int r : principal_right(s, l)) m[static_cast<std::size_t>(r)] = true;
  return to_elems(m);
}

// Minimal members of a family of nonempty sets, deduplicated.
inline std::vector<Elems> minimal_sets(std::vector<Elems> fam) {
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  std::vector<Elems> out;
  for (const auto& a : fam) {
    bool minimal = true;
    for (const auto& b : fam)
      if (b != a && subset(b, a)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(a);
  }
  return out;
}

inline bool is_left_ideal(const FiniteSemigroup& s, const Elems& L) {
  std::vector<bool> in(static_cast<std::size_t>(s.n));
  for (int x : L) in[static_cast<std::size_t>(x)] = true;
  for (int x = 0; x < s.n; ++x)
    for (int l : L)
      if (!in[static_cast<std::size_t>(s.mul(x, l))]) return false;
  return true;
}
inline bool is_right_ideal(const FiniteSemigroup& s, const Elems& R) {
  std::vector<bool> in(static_cast<std::size_t>(s.n));
  for (int x : R) in[static_cast<std::size_t>(x)] = true;
  for (int x = 0; x < s.n; ++x)
    for (int r : R)
      if (!in[static_cast<std::size_t>(s.mul(r, x))]) return false;
  return true;
}

}  // namespace detail

struct IdealStructure {
  Elems idempotents;
  std::vector<Elems> min_left, min_right;
  Elems K;
  Elems min_idempotents;
  bool operator==(const IdealStructure&) const = default;
};

// Every left ideal contains a principal one, so the minimal left ideals are the minimal
// sets among S^1 a; same on the right.
inline IdealStructure ideal_structure(const FiniteSemigroup& s) {
  IdealStructure st;
  st.idempotents = idempotents(s);
  std::vector<Elems> lefts, rights;
  for (int a = 0; a < s.n; ++a) {
    lefts.push_back(detail::principal_left(s, a));
    rights.push_back(detail::principal_right(s, a));
  }
  st.min_left = detail::minimal_sets(std::move(lefts));
  st.min_right = detail::minimal_sets(std::move(rights));
  st.K = detail::set_union(st.min_left);
  for (int e : st.idempotents)
    for (const auto& L : st.min_left)
      if (std::binary_search(L.begin(), L.end(), e)) {
        st.min_idempotents.push_back(e);
        break;
      }
  return st;
}

inline constexpr int kSubsetSweepCap = 8;

// Independent re-derivation of the structure facts.  Subset sweeps (all ideals, all
// subsemigroups) run for order <= kSubsetSweepCap; above that only principal ideals are used.
inline CheckReport verify_section5(const FiniteSemigroup& s) {
  CheckReport rep;
  auto st = ideal_structure(s);
  auto show = [&](const Elems& e) {
    std::string o = "{";
    for (std::size_t i = 0; i < e.size(); ++i) o += (i ? "," : "") + s.label(e[i]);
    return o + "}";
  };

  auto recount = idempotents(s);
  rep.expect("idempotents nonempty", !recount.empty(), [] { return std::string("no idempotent"); });

  auto kr = detail::set_union(st.min_right);
  rep.expect("K = union of minimal left ideals = union of minimal right ideals", kr == st.K,
             [&] { return "left union " + show(st.K) + ", right union " + show(kr); });

  // K as the intersection of all principal two-sided ideals
  Elems k2;
  for (int a = 0; a < s.n; ++a) k2.push_back(a);
  for (int a = 0; a < s.n; ++a) {
    auto J = detail::principal_ideal(s, a);
    Elems t;
    std::set_intersection(k2.begin(), k2.end(), J.begin(), J.end(), std::back_inserter(t));
    k2 = std::move(t);
  }
  rep.expect("K = intersection of principal ideals", k2 == st.K, [&] { return "intersection " + show(k2) + ", K " + show(st.K); });

  rep.expect("K is an ideal", detail::is_left_ideal(s, st.K) && detail::is_right_ideal(s, st.K), [&] { return "K = " + show(st.K); });

  for (const auto& L : st.min_left) {
    rep.expect("minimal left ideal is a left ideal", detail::is_left_ideal(s, L), [&] { return show(L); });
    bool has_idem = std::any_of(L.begin(), L.end(), [&](int x) { return s.mul(x, x) == x; });
    rep.expect("minimal left ideal contains an idempotent", has_idem, [&] { return show(L); });
  }
  for (const auto& R : st.min_right) rep.expect("minimal right ideal is a right ideal", detail::is_right_ideal(s, R), [&] { return show(R); });

  auto& sweep = rep.item("subset sweep");
  if (s.n <= kSubsetSweepCap) {
    const std::uint32_t full = (1u << s.n) - 1;
    for (std::uint32_t m = 1; m <= full; ++m) {
      bool closed = true, left = true, right = true;
      for (int a = 0; a < s.n && closed; ++a) {
        if (!(m >> a & 1)) continue;
        for (int b = 0; b < s.n; ++b) {
          if ((m >> b & 1) && !(m >> s.mul(a, b) & 1)) {
            closed = left = right = false;  // ideals are closed
            break;
          }
          if (!(m >> s.mul(b, a) & 1)) left = false;
          if (!(m >> s.mul(a, b) & 1)) right = false;
        }
      }
      Elems sub;
      for (int a = 0; a < s.n; ++a)
        if (m >> a & 1) sub.push_back(a);
      if (closed) {
        bool idem = std::any_of(sub.begin(), sub.end(), [&](int x) { return s.mul(x, x) == x; });
        rep.expect("every subsemigroup contains an idempotent", idem, [&] { return show(sub); });
      }
      if (left && right) rep.expect("K inside every ideal", detail::subset(st.K, sub), [&] { return "ideal " + show(sub); });
      if (left) {
        bool contains_min = std::any_of(st.min_left.begin(), st.min_left.end(), [&](const Elems& L) { return detail::subset(L, sub); });
        rep.expect("every left ideal contains a minimal one", contains_min, [&] { return "left ideal " + show(sub); });
      }
    }
    sweep.detail = "exhaustive over " + std::to_string(full) + " subsets";
  } else {
    for (int a = 0; a < s.n; ++a) {
      auto J = detail::principal_ideal(s, a);
      rep.expect("K inside every ideal", detail::subset(st.K, J), [&] { return "principal ideal " + show(J); });
    }
    sweep.detail = "skipped: order " + std::to_string(s.n) + " above " + std::to_string(kSubsetSweepCap);
  }
  ++sweep.checked;
  return rep;
}

// ---- generators ------------------------------------------------------------------------

// All associative tables of order n, in lexicographic order of the row-major table.
template <class Fn>
void for_each_semigroup(int n, Fn&& fn) {
  if (n < 1 || n > 3) fail(ErrorKind::precondition, "exhaustive enumeration supports order 1..3");
  const std::size_t cells = static_cast<std::size_t>(n * n);
  std::vector<int> t(cells, 0);
  while (true) {
    if (!associativity_witness(n, t)) fn(FiniteSemigroup{n, t, {}});
    std::size_t i = cells;
    while (i > 0) {
      --i;
      if (++t[i] < n) break;
      t[i] = 0;
      if (i == 0) return;
    }
  }
}

inline FiniteSemigroup from_op(int n, auto op, std::vector<std::string> labels = {}) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rows[static_cast<std::size_t>(a)].push_back(op(a, b));
  return validate(rows, std::move(labels));
}

inline FiniteSemigroup zn_add(int n) { return from_op(n, [n](int a, int b) { return (a + b) % n; }); }
inline FiniteSemigroup zn_mul(int n) { return from_op(n, [n](int a, int b) { return (a * b) % n; }); }
inline FiniteSemigroup left_zero(int n) { return from_op(n, [](int a, int) { return a; }); }
inline FiniteSemigroup right_zero(int n) { return from_op(n, [](int, int b) { return b; }); }

struct NamedSemigroup {
  std::string name;
  FiniteSemigroup s;
};

inline std::vector<NamedSemigroup> order4_catalog() {
  std::vector<NamedSemigroup> c;
  c.push_back({"Z4 additive", zn_add(4)});
  c.push_back({"Z4 multiplicative", zn_mul(4)});
  c.push_back({"Klein four", from_op(4, [](int a, int b) { return a ^ b; })});
  c.push_back({"left zero", left_zero(4)});
  c.push_back({"right zero", right_zero(4)});
  c.push_back({"null", from_op(4, [](int, int) { return 0; })});
  c.push_back({"max chain", from_op(4, [](int a, int b) { return std::max(a, b); })});
  c.push_back({"min chain", from_op(4, [](int a, int b) { return std::min(a, b); })});
  c.push_back({"boolean lattice", from_op(4, [](int a, int b) { return a & b; })});
  // 2x2 rectangular band on pairs (i,j) = 2i+j
  c.push_back({"rectangular band 2x2", from_op(4, [](int a, int b) { return (a & 2) | (b & 1); })});
  c.push_back({"Z2 x left zero 2", from_op(4, [](int a, int b) { return (((a >> 1) ^ (b >> 1)) << 1) | (a & 1); })});
  // Z3 with an adjoined zero at index 3
  c.push_back({"Z3 with zero", from_op(4, [](int a, int b) { return a == 3 || b == 3 ? 3 : (a + b) % 3; })});
  // Z3 with an adjoined identity at index 3
  c.push_back({"Z3 with identity", from_op(4, [](int a, int b) { return a == 3 ? b : b == 3 ? a : (a + b) % 3; })});
  // monogenic <a | a^5 = a^3>
  c.push_back({"monogenic index 3 period 2", from_op(4, [](int a, int b) {
                 int k = (a + 1) + (b + 1);
                 while (k > 4) k -= 2;
                 return k - 1;
               })});
  return c;
}

}  // namespace rl
