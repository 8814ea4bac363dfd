#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "rl/classify.hpp"
#include "rl/density.hpp"
#include "rl/dsl.hpp"

namespace rl {

struct Family {
  std::string name;
  std::function<Verdict(const SetExpr&, std::int64_t)> test;
  bool ramsey = false;
  bool shift_invariant = false;
};

namespace detail {

// Exact infinitude where the tree shows it; nullopt otherwise.
inline std::optional<bool> infinite(const SetExpr& s) {
  if (const auto& e = s.exact()) return !e->mask_empty();
  if (auto fc = structure::fin_co(s)) return fc->cofinite;
  if (s.as<node::FsGen>() || s.as<node::FpGen>()) return false;
  if (s.as<node::EvenLength>() || structure::is_run_base(s) || s.as<node::Periodic>()) return true;
  if (structure::thick(s)) return true;
  if (auto u = s.as<node::Union>()) {
    bool all_finite = true;
    for (const auto& c : u->children) {
      auto r = infinite(c);
      if (r && *r) return true;
      if (!r) all_finite = false;
    }
    if (all_finite) return false;
    return std::nullopt;
  }
  if (auto u = s.as<node::Intersection>()) {
    for (const auto& c : u->children)
      if (auto r = infinite(c); r && !*r) return false;
    return std::nullopt;
  }
  if (auto c = s.as<node::Complement>()) {
    if (auto r = infinite(*c->child); r && !*r) return true;
    return std::nullopt;
  }
  if (auto t = s.as<node::Translate>()) {
    // Left and right multiplications are injective; on N0 a preimage can drop finitely many.
    if (!t->preimage || s.ambient().is_group()) return infinite(*t->child);
    if (auto r = infinite(*t->child); r && !*r) return false;
    return std::nullopt;
  }
  if (auto d = s.as<node::Dilation>()) return infinite(*d->child);
  if (auto d = s.as<node::Inflate>()) return infinite(*d->child);
  return std::nullopt;
}

inline Verdict infinite_verdict(const SetExpr& s, std::int64_t horizon) {
  Verdict v;
  v.property = "infinite";
  v.horizon = horizon;
  auto r = infinite(s);
  if (r) {
    v.status = *r ? Status::yes : Status::no;
    v.basis = s.is_exact() || structure::fin_co(s) ? Basis::exact : Basis::structural;
  }
  try {
    auto amb = s.ambient();
    std::size_t seen = 0;
    for (const auto& g : amb.ball(horizon))
      if (s.contains(g) && ++seen <= 8) v.members.push_back(g);
    if (!r) v.note = std::to_string(seen) + " members within ball(" + std::to_string(horizon) + ")";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::horizon) throw;
    if (!r) v.note = e.what();
  }
  return v;
}

inline void require_density_ambient(Kind k, const char* fam) {
  if (k != Kind::Z && k != Kind::Z2) fail(ErrorKind::unsupported, std::string(fam) + " is supported on Z and Z2 only");
}

inline Verdict density_verdict(const std::string& prop, const DensityResult& d, std::int64_t horizon) {
  Verdict v;
  v.property = prop;
  v.horizon = horizon;
  v.value = d.value;
  if (d.exact) {
    v.basis = Basis::exact;
    v.status = d.value > Rational(0) ? Status::yes : Status::no;
  } else {
    v.note = "estimate " + d.value.str() + " is not a certificate";
  }
  return v;
}

}  // namespace detail

inline Family family_inf() {
  return {"F_inf", [](const SetExpr& s, std::int64_t h) { return detail::infinite_verdict(s, h); }, true, true};
}
inline Family family_thick() {
  return {"F_t", [](const SetExpr& s, std::int64_t h) { return classify_thick(s, h); }, false, true};
}
inline Family family_syndetic() {
  return {"F_s", [](const SetExpr& s, std::int64_t h) { return classify_syndetic(s, h); }, false, true};
}
inline Family family_pws() {
  return {"F_ps", [](const SetExpr& s, std::int64_t h) { return classify_pws(s, h); }, true, true};
}
inline Family family_pud(FolnerSeq f) {
  auto fk = f.kind();
  return {"F_pud",
          [f = std::move(f), fk](const SetExpr& s, std::int64_t h) {
            if (s.kind() != fk) fail(ErrorKind::unsupported, "F_pud needs a set on the Folner sequence's ambient");
            detail::require_density_ambient(s.kind(), "F_pud");
            auto v = detail::density_verdict("pud", upper_density(s, f, h), h);
            if (!v.yes() && !v.no()) {
              // A structurally syndetic set has density at least 1/|K| along any Folner sequence.
              auto syn = classify_syndetic(s, h);
              if (syn.yes() && syn.basis != Basis::horizon) {
                v.status = Status::yes;
                v.basis = syn.basis;
                v.note = "syndetic with |K| = " + std::to_string(syn.k_set.size());
              }
            }
            return v;
          },
          true, true};
}
inline Family family_pubd() {
  return {"F_pubd",
          [](const SetExpr& s, std::int64_t h) {
            if (s.kind() != Kind::Z) fail(ErrorKind::unsupported, "F_pubd is supported on Z only");
            return detail::density_verdict("pubd", banach_density(s, h), h);
          },
          true, true};
}
inline Family family_custom(std::string name, std::function<Verdict(const SetExpr&, std::int64_t)> test, bool ramsey,
                            bool shift_invariant) {
  return {std::move(name), std::move(test), ramsey, shift_invariant};
}

// "inf", "t", "s", "ps", "pud", "pubd", with or without the "F_" prefix.
inline Family family_by_name(std::string_view name, Kind k) {
  if (name.substr(0, 2) == "F_") name.remove_prefix(2);
  if (name == "inf") return family_inf();
  if (name == "t") return family_thick();
  if (name == "s") return family_syndetic();
  if (name == "ps") return family_pws();
  if (name == "pud") return family_pud(FolnerSeq::boxes(k));
  if (name == "pubd") return family_pubd();
  fail(ErrorKind::parse, "unknown family '" + std::string(name) + "'");
}

inline Verdict family_member(const Family& f, const SetExpr& s, std::int64_t horizon) {
  if (horizon < 1) fail(ErrorKind::precondition, "horizon must be >= 1");
  return f.test(s, horizon);
}

// ---- Ramsey property ------------------------------------------------------------

struct RamseyResult {
  bool applicable = true;
  int index = 0;  // 1-based part that is CertifiedYes, 0 if none
  Verdict set_verdict;
  std::vector<Verdict> parts;
  std::string note;
};

inline RamseyResult ramsey_check(const Family& fam, const SetExpr& s, const SetExpr& p1, const SetExpr& p2,
                                 std::int64_t horizon) {
  if (p1.kind() != s.kind() || p2.kind() != s.kind()) fail(ErrorKind::precondition, "parts live on another ambient");
  for (const auto& g : s.ambient().ball(horizon)) {
    bool a = s.contains(g), b1 = p1.contains(g), b2 = p2.contains(g);
    if (b1 && b2) fail(ErrorKind::precondition, "parts overlap at " + to_string(g));
    if (a != (b1 || b2))
      fail(ErrorKind::precondition, "parts do not cover the set exactly at " + to_string(g));
  }
  RamseyResult r;
  r.set_verdict = family_member(fam, s, horizon);
  if (!fam.ramsey) {
    r.applicable = false;
    r.note = fam.name + " does not have the Ramsey property";
    for (const auto* p : {&p1, &p2}) r.parts.push_back(family_member(fam, *p, horizon));
    return r;
  }
  if (!r.set_verdict.yes()) fail(ErrorKind::precondition, "set is not CertifiedYes for " + fam.name + ": " + r.set_verdict.note);
  for (const auto* p : {&p1, &p2}) r.parts.push_back(family_member(fam, *p, horizon));
  for (std::size_t i = 0; i < r.parts.size(); ++i)
    if (r.parts[i].yes()) {
      r.index = static_cast<int>(i) + 1;
      return r;
    }
  r.note = "neither part certified within horizon";
  return r;
}

// ---- chain presentations ----------------------------------------------------------

// B thick and C syndetic with B & C inside F_n.
struct PwsHint {
  SetExpr thick;
  SetExpr syndetic;
};

struct ChainPresentation {
  Kind kind = Kind::N0;
  std::string dsl;
  Family family;
  std::function<SetExpr(std::int64_t)> member;
  std::function<std::int64_t(std::int64_t, const Element&)> shift;  // m with f F_m inside F_n
  std::function<std::optional<PwsHint>(std::int64_t)> hint;
  // Chain-supplied certificate of F_n's family membership (used instead of the family test when set).
  std::function<std::optional<Verdict>(std::int64_t, std::int64_t)> certify;

  SetExpr at(std::int64_t n) const {
    if (n < 1) fail(ErrorKind::precondition, "chain index starts at 1");
    return member(n);
  }
  std::int64_t m(std::int64_t n, const Element& f) const { return shift(n, f); }
  std::optional<PwsHint> decomposition(std::int64_t n) const {
    if (!hint) return std::nullopt;
    return hint(n);
  }
};

struct ChainFailure {
  std::string check;  // nested | family | shift
  std::int64_t n = 0;
  std::optional<Element> f;
  std::optional<Element> offender;
  std::string detail;
};

struct ShiftSample {
  std::int64_t n;
  Element f;
  std::int64_t m;
  std::size_t checked = 0;  // products f x landing in ball(horizon)
};

struct ChainCertificate {
  bool ok = true;
  std::string chain;
  std::string family;
  std::int64_t n_max = 0, sample_count = 0, horizon = 0;
  std::vector<Verdict> members;
  std::vector<bool> identity_in;
  std::vector<ShiftSample> samples;
  std::vector<ChainFailure> failures;
};

inline ChainCertificate chain_validate(const ChainPresentation& ch, std::int64_t n_max, std::int64_t sample_count,
                                       std::int64_t horizon) {
  if (n_max < 1) fail(ErrorKind::precondition, "n_max must be >= 1");
  if (sample_count < 0) fail(ErrorKind::precondition, "sample_count must be >= 0");
  Ambient amb(ch.kind);
  auto ball = amb.ball(horizon);
  ChainCertificate c;
  c.chain = ch.dsl;
  c.family = ch.family.name;
  c.n_max = n_max;
  c.sample_count = sample_count;
  c.horizon = horizon;
  auto failed = [&](ChainFailure f) {
    c.ok = false;
    c.failures.push_back(std::move(f));
  };
  std::vector<SetExpr> fs;
  for (std::int64_t n = 1; n <= n_max + 1; ++n) fs.push_back(ch.at(n));

  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto& fn = fs[static_cast<std::size_t>(n - 1)];
    const auto& next = fs[static_cast<std::size_t>(n)];
    for (const auto& g : ball)
      if (next.contains(g) && !fn.contains(g)) {
        failed({"nested", n, std::nullopt, g, "F_" + std::to_string(n + 1) + " not inside F_" + std::to_string(n)});
        break;
      }
    std::optional<Verdict> v;
    if (ch.certify) v = ch.certify(n, horizon);
    if (!v) v = family_member(ch.family, fn, horizon);
    if (!v->yes()) failed({"family", n, std::nullopt, std::nullopt, ch.family.name + " membership not certified: " + v->note});
    c.members.push_back(*v);
    c.identity_in.push_back(fn.contains(amb.identity()));

    std::int64_t taken = 0;
    for (const auto& f : ball) {
      if (taken >= sample_count) break;
      if (!fn.contains(f)) continue;
      ++taken;
      auto m = ch.m(n, f);
      if (m < 1) fail(ErrorKind::precondition, "shift witness must be >= 1");
      auto fm = m <= n_max + 1 ? fs[static_cast<std::size_t>(m - 1)] : ch.at(m);
      ShiftSample smp{n, f, m, 0};
      for (const auto& x : ball) {
        if (!fm.contains(x)) continue;
        std::optional<Element> y;
        try {
          y = amb.mul(f, x);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::word_cap) throw;
          continue;
        }
        if (!amb.in_ball(*y, horizon)) continue;
        ++smp.checked;
        if (!fn.contains(*y)) {
          failed({"shift", n, f, *y,
                  to_string(f) + " * " + to_string(x) + " with x in F_" + std::to_string(m) + " leaves F_" + std::to_string(n)});
          break;
        }
      }
      c.samples.push_back(smp);
    }
  }
  return c;
}

// ---- chain DSL ---------------------------------------------------------------------

namespace detail {

// Block number of the top block used by v in an FS-of-blocks set.
inline std::int64_t fsb_top_block(const node::FsBlocks& f, std::int64_t v) {
  std::int64_t j = -1;
  for (std::size_t i = 0; i < f.start.size() && f.start[i] <= v; ++i) j = static_cast<std::int64_t>(i);
  if (j < 0) fail(ErrorKind::precondition, std::to_string(v) + " is below every block");
  return f.kmin + j;
}

[[noreturn]] inline void reparse(const Error& e, std::size_t offset) {
  static const std::regex col("column ([0-9]+): (.*)");
  std::smatch m;
  std::string w = e.what();
  if (std::regex_search(w, m, col)) fail(ErrorKind::parse, "column " + std::to_string(std::stoul(m[1]) + offset) + ": " + std::string(m[2]));
  throw e;
}

inline std::vector<std::int64_t> int_args(std::string_view s, std::size_t offset, std::size_t lo, std::size_t hi) {
  std::vector<std::int64_t> out;
  std::size_t i = 0;
  while (true) {
    auto j = s.find(',', i);
    auto tok = s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    std::int64_t v;
    if (!Ambient::parse_int(tok, v)) fail(ErrorKind::parse, "column " + std::to_string(offset + i + 1) + ": expected an integer");
    out.push_back(v);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  if (out.size() < lo || out.size() > hi)
    fail(ErrorKind::parse, "column " + std::to_string(offset + 1) + ": expected " + std::to_string(lo) +
                               (lo == hi ? "" : "-" + std::to_string(hi)) + " integers");
  return out;
}

inline std::int64_t checked_pow(std::int64_t k, std::int64_t n) {
  auto r = pow_or_cap(k, n, std::int64_t{1} << 40);
  if (r > (std::int64_t{1} << 40)) fail(ErrorKind::horizon, "chain term " + std::to_string(k) + "^" + std::to_string(n) + " is too large");
  return r;
}

// Memoized chain terms; chain functions are pure so caching is safe.
class TermCache {
 public:
  explicit TermCache(std::function<SetExpr(std::int64_t)> f) : f_(std::move(f)) {}
  SetExpr operator()(std::int64_t n) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(n, f_(n)).first->second;
  }

 private:
  std::function<SetExpr(std::int64_t)> f_;
  std::map<std::int64_t, SetExpr> memo_;
  std::mutex mu_;
};

}  // namespace detail

// const:<set> | scaled:k | pow:k | fsb:b,c[,d]
inline ChainPresentation parse_chain(Kind k, std::string_view text, Family fam = family_pws(),
                                     const PredicateRegistry* reg = nullptr) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) fail(ErrorKind::parse, "column 1: expected '<chain kind>:'");
  auto head = text.substr(0, colon);
  auto rest = text.substr(colon + 1);
  auto off = colon + 1;
  ChainPresentation ch;
  ch.kind = k;
  ch.dsl = std::string(text);
  ch.family = std::move(fam);

  if (head == "const") {
    SetExpr s;
    try {
      s = parse_set(k, rest, reg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parse) throw;
      detail::reparse(e, off);
    }
    ch.member = [s](std::int64_t) { return s; };
    ch.shift = [](std::int64_t n, const Element&) { return n; };
    return ch;
  }
  if (!detail::is_int_kind(k)) fail(ErrorKind::unsupported, std::string(head) + " chains live on N0 or Z");
  if (head == "scaled" || head == "pow") {
    auto a = detail::int_args(rest, off, 1, 1)[0];
    if (a < (head == "pow" ? 2 : 1))
      fail(ErrorKind::parse, "column " + std::to_string(off + 1) + ": factor out of range");
    bool pw = head == "pow";
    auto term = [k, a, pw](std::int64_t n) { return eventually_periodic(k, 0, pw ? detail::checked_pow(a, n) : a, {0}); };
    ch.member = term;
    ch.shift = [](std::int64_t n, const Element&) { return n; };
    ch.hint = [k, term](std::int64_t n) { return std::optional<PwsHint>(PwsHint{full(k), term(n)}); };
    return ch;
  }
  if (head == "fsb") {
    auto a = detail::int_args(rest, off, 2, 3);
    auto b = a[0], c = a[1], d = a.size() == 3 ? a[2] : 1;
    if (d == 0 || d < -1 || (k == Kind::N0 && d < 0))
      fail(ErrorKind::parse, "column " + std::to_string(off + 1) + ": dilation must be -1 (over Z) or positive");
    (void)fs_blocks(k, b, c, 1);  // validates b, c
    auto base = [k, b, c](std::int64_t n) { return fs_blocks(k, b, c, n); };
    auto cache = std::make_shared<detail::TermCache>([k, d, base](std::int64_t n) {
      return unite({dilation(d, base(n)), finite_ints(k, {0})});
    });
    ch.member = [cache](std::int64_t n) { return (*cache)(n); };
    ch.shift = [b, c, d, k](std::int64_t n, const Element& f) -> std::int64_t {
      if (f.x == 0) return n;
      if (f.x % d != 0) fail(ErrorKind::precondition, to_string(f) + " is not in the chain term");
      auto blk = fs_blocks(k, b, c, n);
      return detail::fsb_top_block(*blk.as<node::FsBlocks>(), f.x / d) + 1;
    };
    ch.hint = [k, d, base](std::int64_t n) -> std::optional<PwsHint> {
      if (d == 1) return PwsHint{base(n), full(k)};
      if (d == -1) return PwsHint{dilation(-1, base(n)), full(k)};
      return PwsHint{inflate(d, base(n)), eventually_periodic(k, 0, d, {0})};
    };
    return ch;
  }
  fail(ErrorKind::parse, "column 1: unknown chain kind '" + std::string(head) + "'");
}

}  // namespace rl
