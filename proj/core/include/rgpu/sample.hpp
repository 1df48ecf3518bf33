#pragma once

#include <cstddef>
#include <vector>

namespace rgpu {

struct Point {
  double u = 0.5;
  double v = 0.5;

  friend bool operator==(const Point&, const Point&) = default;
};

/// n pairs (u, v), each coordinate strictly inside (0, 1). The common currency between
/// simulators, fitters and evaluators.
struct CopulaSample {
  std::vector<Point> rows;

  [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
  [[nodiscard]] bool empty() const noexcept { return rows.empty(); }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return rows[i]; }

  /// Throws DataError naming the first non-finite or boundary row.
  void validate() const;

  friend bool operator==(const CopulaSample&, const CopulaSample&) = default;
};

}  // namespace rgpu
