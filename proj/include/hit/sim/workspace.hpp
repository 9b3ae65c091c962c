#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/intention.hpp"
#include "hit/prediction/geometry.hpp"

namespace hit::sim {

/// Axis-aligned rectangle on the table plane (m).
struct Rect {
  Vec2 center = Vec2::Zero();
  Vec2 size = Vec2::Zero();

  bool contains(const Vec2& p) const {
    return std::abs(p.x() - center.x()) <= 0.5 * size.x() && std::abs(p.y() - center.y()) <= 0.5 * size.y();
  }
  bool overlaps(const Rect& o) const {
    return std::abs(center.x() - o.center.x()) < 0.5 * (size.x() + o.size.x()) &&
           std::abs(center.y() - o.center.y()) < 0.5 * (size.y() + o.size.y());
  }
  bool inside(const Rect& outer) const {
    return std::abs(center.x() - outer.center.x()) + 0.5 * size.x() <= 0.5 * outer.size.x() &&
           std::abs(center.y() - outer.center.y()) + 0.5 * size.y() <= 0.5 * outer.size.y();
  }
  Vec2 clamp(const Vec2& p) const {
    const Vec2 lo = center - 0.5 * size;
    const Vec2 hi = center + 0.5 * size;
    return {std::clamp(p.x(), lo.x(), hi.x()), std::clamp(p.y(), lo.y(), hi.y())};
  }
};

/// Table layout: four square part regions, the preparation area, the table.
///
/// The human stands at y = 0; the robot's home is on the far side.
struct Workspace {
  std::array<Rect, 4> parts;
  Rect prep;
  Rect table;

  /// 10x10 cm squares in a 2x2 grid with 26 cm horizontal and 15 cm vertical
  /// gaps, a 16x5 cm preparation area at the human's edge of the table.
  static Workspace standard() {
    Workspace ws;
    const double side = 0.10;
    const double dx = 0.5 * (0.26 + side);
    const double dy = 0.5 * (0.15 + side);
    const Vec2 grid(0.0, 0.35);
    ws.parts[0] = {grid + Vec2(-dx, dy), Vec2(side, side)};
    ws.parts[1] = {grid + Vec2(dx, dy), Vec2(side, side)};
    ws.parts[2] = {grid + Vec2(-dx, -dy), Vec2(side, side)};
    ws.parts[3] = {grid + Vec2(dx, -dy), Vec2(side, side)};
    ws.prep = {Vec2(0.0, 0.04), Vec2(0.16, 0.05)};
    ws.table = {Vec2(0.0, 0.35), Vec2(0.90, 0.70)};
    return ws;
  }

  void validate() const {
    std::vector<Rect> all(parts.begin(), parts.end());
    all.push_back(prep);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!(all[i].size.x() > 0.0 && all[i].size.y() > 0.0)) throw InvalidParameter("regions need positive size");
      if (!all[i].inside(table)) throw InvalidParameter("every region must lie within the table bounds");
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (all[i].overlaps(all[j])) throw InvalidParameter("task regions must be disjoint");
    }
  }

  const Rect& part(int number) const { return parts.at(static_cast<std::size_t>(number - 1)); }

  /// Region of a task label (parts and preparation area).
  const Rect& region(core::Label l) const {
    if (l == core::Label::Prep) return prep;
    if (auto n = core::part_number(l)) return part(*n);
    throw InvalidParameter("label has no static region");
  }

  /// Ideal push point of a part.
  Vec2 push_point(int number) const { return part(number).center; }

  /// Gaussian goal regions in task-space order (parts 1-4, prep). Squares
  /// use cov = (side/4)^2 I; the preparation area uses per-axis quarters.
  std::vector<prediction::GoalRegion> goal_regions() const {
    std::vector<prediction::GoalRegion> out;
    for (const auto& p : parts) {
      Mat2 cov = Mat2::Zero();
      cov(0, 0) = std::pow(p.size.x() / 4.0, 2);
      cov(1, 1) = std::pow(p.size.y() / 4.0, 2);
      out.push_back({p.center, cov, prediction::RegionKind::StaticTaskGoal});
    }
    Mat2 cov = Mat2::Zero();
    cov(0, 0) = std::pow(prep.size.x() / 4.0, 2);
    cov(1, 1) = std::pow(prep.size.y() / 4.0, 2);
    out.push_back({prep.center, cov, prediction::RegionKind::PreparationArea});
    return out;
  }
};

}  // namespace hit::sim
