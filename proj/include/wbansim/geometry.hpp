#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

namespace wbansim {

/// Flat body-surface patch divided into cells, 1 cm per cell by default.
struct GridSpec {
  int length_cm = 16;
  int width_cm = 15;
  int cell_size_cm = 1;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  void validate() const {
    if (length_cm < 2) throw std::invalid_argument("GridSpec: length_cm must be >= 2");
    if (width_cm < 2) throw std::invalid_argument("GridSpec: width_cm must be >= 2");
    if (cell_size_cm < 1) throw std::invalid_argument("GridSpec: cell_size_cm must be >= 1");
  }
};

/// 1-based grid coordinates in cm; (1,1) is the corner cell.
struct NodePosition {
  int x = 1;
  int y = 1;

  auto operator<=>(const NodePosition&) const = default;
};

inline bool on_grid(NodePosition p, const GridSpec& grid) {
  return p.x >= 1 && p.x <= grid.length_cm && p.y >= 1 && p.y <= grid.width_cm;
}

/// Euclidean distance in meters. Coordinates are cm, so the cm->m scale
/// enters here and nowhere else.
inline double distance(NodePosition a, NodePosition b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy) * 0.01;
}

/// Unsigned angle in degrees, in [0, 180], between the directions
/// origin->a and origin->b. Throws when either direction is undefined.
inline double angle_between(NodePosition origin, NodePosition a, NodePosition b) {
  const double ux = a.x - origin.x;
  const double uy = a.y - origin.y;
  const double vx = b.x - origin.x;
  const double vy = b.y - origin.y;
  if (ux == 0.0 && uy == 0.0) {
    throw std::invalid_argument("angle_between: a coincides with origin, direction undefined");
  }
  if (vx == 0.0 && vy == 0.0) {
    throw std::invalid_argument("angle_between: b coincides with origin, direction undefined");
  }
  const double cross = ux * vy - uy * vx;
  const double dot = ux * vx + uy * vy;
  return std::atan2(std::abs(cross), dot) * (180.0 / std::numbers::pi);
}

/// All cells in row-major order ((1,1), (2,1), ..., x fastest) minus
/// `excluded`. Cells step by cell_size_cm starting at (1,1).
inline std::vector<NodePosition> grid_cells(const GridSpec& grid,
                                            const std::set<NodePosition>& excluded = {}) {
  grid.validate();
  std::vector<NodePosition> cells;
  cells.reserve(static_cast<std::size_t>(grid.length_cm) * static_cast<std::size_t>(grid.width_cm));
  for (int y = 1; y <= grid.width_cm; y += grid.cell_size_cm) {
    for (int x = 1; x <= grid.length_cm; x += grid.cell_size_cm) {
      const NodePosition p{x, y};
      if (!excluded.contains(p)) {
        cells.push_back(p);
      }
    }
  }
  return cells;
}

}  // namespace wbansim
