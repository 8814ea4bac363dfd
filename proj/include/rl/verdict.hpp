#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rl/rational.hpp"
#include "rl/setexpr.hpp"

namespace rl {

enum class Status { yes, no, inconclusive };

// How a verdict was reached: exact closed form, a structural argument about the
// expression tree, or a finite scan of ball(horizon) only.
enum class Basis { exact, structural, horizon };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::yes: return "CertifiedYes";
    case Status::no: return "CertifiedNo";
    case Status::inconclusive: return "Inconclusive";
  }
  return "?";
}
inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::exact: return "exact";
    case Basis::structural: return "structural";
    case Basis::horizon: return "horizon";
  }
  return "?";
}

// ball(level) * translator lies inside the set.
struct ThickStep {
  std::int64_t level;
  Element translator;
};

struct Verdict {
  Status status = Status::inconclusive;
  std::string property;
  Basis basis = Basis::horizon;
  std::int64_t horizon = 0;

  // thick: largest certified level and per-level translators
  std::int64_t level = 0;
  std::vector<ThickStep> runs;
  // syndetic: K with K^-1 A covering ball(horizon)
  std::vector<Element> k_set;
  // pws: A contains B & C with B thick and C syndetic
  std::optional<SetExpr> pws_thick;
  std::optional<SetExpr> pws_syndetic;
  std::shared_ptr<const Verdict> thick_part;
  std::shared_ptr<const Verdict> syndetic_part;
  // other families: sample members, density values
  std::vector<Element> members;
  std::optional<Rational> value;
  std::vector<std::shared_ptr<const Verdict>> parts;
  // refuter for CertifiedNo / diagnostic text
  std::optional<std::pair<std::int64_t, std::int64_t>> gap;
  std::string note;

  bool yes() const { return status == Status::yes; }
  bool no() const { return status == Status::no; }
};

inline Basis weaker(Basis a, Basis b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

// Ordering used to aggregate: no < inconclusive < yes.
inline int strength(Status s) {
  switch (s) {
    case Status::no: return 0;
    case Status::inconclusive: return 1;
    case Status::yes: return 2;
  }
  return 1;
}

}  // namespace rl
