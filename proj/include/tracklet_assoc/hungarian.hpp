#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tracklet_assoc {

// Minimum-cost assignment on a rows x cols cost matrix (shortest augmenting
// paths with potentials, O(n^3) for n = max(rows, cols)). The matrix is padded
// to square with zero cost; result[r] is the assigned column or -1 when row r
// ended up on a padding column.
inline std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  const std::size_t cols = rows == 0 ? 0 : cost.front().size();
  for (const auto& r : cost) {
    if (r.size() != cols) throw std::invalid_argument("solve_assignment: ragged cost matrix");
  }
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);

  const std::size_t n = std::max(rows, cols);
  auto at = [&](std::size_t i, std::size_t j) {  // 1-based
    return (i <= rows && j <= cols) ? cost[i - 1][j - 1] : 0.0;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) result[p[j] - 1] = static_cast<int>(j - 1);
  }
  return result;
}

}  // namespace tracklet_assoc
