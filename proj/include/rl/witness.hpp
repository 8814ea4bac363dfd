#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rl/classify.hpp"
#include "rl/setexpr.hpp"

namespace rl {

// First h in H (enumeration order) with F disjoint from F*h.  When |H| > |F|^2
// in a group such an h always exists.
inline std::optional<Element> separator(const Ambient& amb, const std::vector<Element>& f, std::vector<Element> h) {
  std::set<Element> fs(f.begin(), f.end());
  std::sort(h.begin(), h.end());
  for (const auto& c : h) {
    bool clash = false;
    for (const auto& x : fs)
      if (fs.count(amb.mul(x, c))) {
        clash = true;
        break;
      }
    if (!clash) return c;
  }
  return std::nullopt;
}

// ---- (P1) blocks inside a thick set --------------------------------------------

struct P1Block {
  std::int64_t level;  // A_n = ball(level) * translator
  Element translator;
  std::vector<Element> elems;
};

// A_n = ball(n) g_n inside the set with ball(n) g_n disjoint from
// B_n = A_1 u ... u A_{n-1} u ball(n), searching translators in ball(horizon).
// Only G_n g_n (not all of B_n g_n) is required inside the set; disjointness
// of the A_n follows from B_n g_n being disjoint from B_n all the same.
inline std::vector<P1Block> p1_witness_thick(const SetExpr& s, std::int64_t count, std::int64_t horizon) {
  if (count < 1) fail(ErrorKind::precondition, "count must be >= 1");
  auto tv = classify_thick(s, horizon);
  if (tv.no()) fail(ErrorKind::precondition, "set is not thick (" + std::string(to_string(tv.basis)) + "): " + tv.note);
  auto amb = s.ambient();
  std::vector<P1Block> out;
  std::set<Element> b;  // B_n
  auto cands = amb.ball(horizon);
  for (std::int64_t n = 1; n <= count; ++n) {
    auto gn = amb.ball(n);
    b.insert(gn.begin(), gn.end());
    std::optional<Element> found;
    for (const auto& g : cands) {
      bool ok = true;
      for (const auto& x : gn)
        if (!s.contains(amb.mul(x, g))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (n > 1) {
        for (const auto& x : b)
          if (b.count(amb.mul(x, g))) {
            ok = false;
            break;
          }
      }
      if (ok) {
        found = g;
        break;
      }
    }
    if (!found)
      fail(ErrorKind::horizon, "block " + std::to_string(n) + " of " + std::to_string(count) + " not found within ball(" +
                                   std::to_string(horizon) + ")");
    P1Block blk{n, *found, {}};
    for (const auto& x : gn) blk.elems.push_back(amb.mul(x, *found));
    b.insert(blk.elems.begin(), blk.elems.end());
    out.push_back(std::move(blk));
  }
  return out;
}

// ---- (P2) separated subsets ------------------------------------------------------

struct Separated {
  std::vector<Element> chosen;  // B, excluding the identity
  SetExpr set;                  // B as a set known on ball(horizon)
  bool separated = false;       // K b pairwise disjoint over B u {e}
  bool covering = false;        // set & ball(horizon) inside K^-1 K (B u {e})
  std::optional<Element> uncovered;
};

// Greedy in enumeration order: keep b when K b misses K b' for every kept b'
// and for b' = e.
inline Separated separated_subset(const SetExpr& s, const std::vector<Element>& k, std::int64_t horizon) {
  if (k.empty()) fail(ErrorKind::precondition, "K must be nonempty");
  auto amb = s.ambient();
  auto e = amb.identity();
  std::map<Element, Element> owner;  // element of K b -> b
  auto claim = [&](const Element& b) {
    for (const auto& x : k) owner.emplace(amb.mul(x, b), b);
  };
  auto free = [&](const Element& b) {
    for (const auto& x : k)
      if (owner.count(amb.mul(x, b))) return false;
    return true;
  };
  claim(e);
  Separated r;
  std::vector<Element> members;
  for (const auto& g : amb.ball(horizon)) {
    if (!s.contains(g)) continue;
    members.push_back(g);
    if (g == e || !free(g)) continue;
    r.chosen.push_back(g);
    claim(g);
  }
  r.set = windowed(s.kind(), horizon, r.chosen);

  // Re-derive separation from scratch: every product x b has a single owner b.
  std::vector<Element> all = r.chosen;
  all.push_back(e);
  std::map<Element, std::set<Element>> who;
  for (const auto& b : all)
    for (const auto& x : k) who[amb.mul(x, b)].insert(b);
  r.separated = std::all_of(who.begin(), who.end(), [](const auto& p) { return p.second.size() == 1; });
  r.covering = true;
  for (const auto& a : members) {
    bool hit = false;
    for (const auto& x : k)
      if (owner.count(amb.mul(x, a))) {
        hit = true;
        break;
      }
    if (!hit) {
      r.covering = false;
      r.uncovered = a;
      break;
    }
  }
  return r;
}

// ---- dilation split -------------------------------------------------------------

struct DilationSplit {
  SetExpr h;  // union over j of ((a+1) H' + j)
  SetExpr s;  // (a+1) S'
  Verdict h_thick;
  Verdict s_syndetic;
  bool s_divisible = false;
  bool inside = false;
};

// From H' thick and S' syndetic with (a+1)(H' & S') inside the target, builds
// H thick and S syndetic with S inside (a+1)N0 and H & S inside the target.
inline DilationSplit dilation_split(const SetExpr& target, std::int64_t a, const SetExpr& hprime, const SetExpr& sprime,
                                    std::int64_t horizon) {
  if (target.kind() != Kind::N0 || hprime.kind() != Kind::N0 || sprime.kind() != Kind::N0)
    fail(ErrorKind::precondition, "dilation split works over N0");
  if (a < 0) fail(ErrorKind::precondition, "a must be >= 0");
  auto c = a + 1;
  auto tv = classify_thick(hprime, horizon);
  if (!tv.yes()) fail(ErrorKind::precondition, "H' is not certified thick: " + tv.note);
  auto sv = classify_syndetic(sprime, horizon);
  if (!sv.yes()) fail(ErrorKind::precondition, "S' is not certified syndetic: " + sv.note);
  for (std::int64_t m = 0; c * m <= horizon; ++m)
    if (hprime.contains(m) && sprime.contains(m) && !target.contains(c * m))
      fail(ErrorKind::precondition, "(a+1)(H' & S') leaves the set at " + std::to_string(c * m));

  DilationSplit r{inflate(c, hprime), dilation(c, sprime), {}, {}, true, true};
  r.h_thick = classify_thick(r.h, horizon);
  r.s_syndetic = classify_syndetic(r.s, horizon);
  for (std::int64_t n = 0; n <= horizon; ++n) {
    bool ins = r.s.contains(n);
    if (ins && n % c != 0) r.s_divisible = false;
    if (ins && r.h.contains(n) && !target.contains(n)) r.inside = false;
  }
  return r;
}

}  // namespace rl
