#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rl/subshift.hpp"

namespace rl {

enum class ProductStatus { witnessed, refuted_at_horizon, no_return };

inline const char* to_string(ProductStatus s) {
  switch (s) {
    case ProductStatus::witnessed: return "witnessed";
    case ProductStatus::refuted_at_horizon: return "refuted-at-horizon";
    case ProductStatus::no_return: return "no-return";
  }
  return "?";
}

struct GridRow {
  std::int64_t level = 0;  // cylinders [x|ball(level)] x [y|ball(level)]
  std::int64_t horizon = 0;
  std::size_t size = 0;
  std::vector<std::pair<std::int64_t, std::size_t>> growth;  // (ball, joint returns inside it)
};

struct ProductReport {
  std::string label = "finite-horizon demonstration";
  std::int64_t horizon = 0;
  ProductStatus status = ProductStatus::no_return;
  std::vector<Element> joint;  // N(x,[1]) & N(y,[1]) on ball(horizon)
  std::vector<Element> ny;     // N(y,[1]) on ball(horizon)
  std::vector<GridRow> grid;
};

// Joint returns of (x, y) to [1] x [1] and to the cylinder grid.  A joint return set equal to
// {identity} refutes joint recurrence at this horizon; more returns witness it.
inline ProductReport product_experiment(const SymbolicPoint& x, const SymbolicPoint& y, std::int64_t horizon, std::int64_t grid) {
  if (x.kind() != y.kind()) fail(ErrorKind::precondition, "points live on different ambients");
  Ambient amb(x.kind());
  ProductReport r;
  r.horizon = horizon;
  if (!x.unlimited()) r.horizon = std::min(r.horizon, x.guarantee());
  if (!y.unlimited()) r.horizon = std::min(r.horizon, y.guarantee());
  if (r.horizon < 0) fail(ErrorKind::horizon, "points are not known at the identity");
  auto one = Cylinder::one(x.kind());
  r.joint = joint_return(x, y, one, one, r.horizon);
  r.ny = return_set(y, one, r.horizon);
  for (std::int64_t lvl = 0; lvl <= grid && r.horizon - lvl >= 0; ++lvl) {
    GridRow row;
    row.level = lvl;
    row.horizon = r.horizon - lvl;
    auto jr = joint_return(x, y, Cylinder::of_point(x, lvl), Cylinder::of_point(y, lvl), row.horizon);
    row.size = jr.size();
    std::vector<std::int64_t> balls{row.horizon / 4, row.horizon / 2, row.horizon};
    balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
    for (auto h : balls)
      row.growth.emplace_back(h, static_cast<std::size_t>(std::count_if(jr.begin(), jr.end(), [&](const Element& g) { return amb.in_ball(g, h); })));
    r.grid.push_back(std::move(row));
  }
  if (r.joint == std::vector<Element>{amb.identity()}) r.status = ProductStatus::refuted_at_horizon;
  else if (r.joint.size() > 1) r.status = ProductStatus::witnessed;
  return r;
}

}  // namespace rl
