#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "darboux2d/field.hpp"

namespace testutil {

inline constexpr double kPi = std::numbers::pi;

/// 5x5 lattice of points spanning [x0, x1] x [y0, y1].
inline std::vector<darboux::Point2> lattice(double x0, double x1, double y0, double y1, int n = 5) {
  std::vector<darboux::Point2> pts;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      pts.push_back({x0 + (x1 - x0) * i / (n - 1), y0 + (y1 - y0) * j / (n - 1)});
    }
  }
  return pts;
}

inline bool outside_disk(darboux::Point2 p, double r) { return p.x * p.x + p.y * p.y >= r * r; }

}  // namespace testutil
