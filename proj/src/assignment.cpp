// Copyright 2026 The camtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "camtrack/assignment.hpp"

#include "camtrack/error.hpp"

#include <algorithm>
#include <cmath>

namespace camtrack
{

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::optional<Category> category)
: values_(Eigen::MatrixXd::Constant(
    static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), kInf)),
  category_(category)
{
}

CostMatrix CostMatrix::from_dense(const Eigen::MatrixXd & values)
{
  CostMatrix m(static_cast<std::size_t>(values.rows()), static_cast<std::size_t>(values.cols()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), values(i, j));
    }
  }
  return m;
}

void CostMatrix::set(std::size_t row, std::size_t col, double cost)
{
  values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
    std::isfinite(cost) ? cost : kInf;
}

void CostMatrix::forbid(std::size_t row, std::size_t col) { set(row, col, kInf); }

bool CostMatrix::allowed(std::size_t row, std::size_t col) const
{
  return std::isfinite(operator()(row, col));
}

double CostMatrix::operator()(std::size_t row, std::size_t col) const
{
  return values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

Assignment solve_assignment(const CostMatrix & cost)
{
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  Assignment result;
  if (n == 0 || m == 0) {
    return result;
  }

  // Node layout for the residual graph: rows [0, n), columns [n, n + m).
  // Free columns must share one potential so reduced distances to them stay
  // comparable; start every column at the global minimum cost.
  double lowest = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      lowest = std::min(lowest, cost(i, j));
    }
  }
  std::vector<double> potential(n + m, 0.0);
  std::fill(potential.begin() + static_cast<std::ptrdiff_t>(n), potential.end(),
    std::isfinite(lowest) ? lowest : 0.0);

  std::vector<std::size_t> row_match(n, kNone);
  std::vector<std::size_t> col_match(m, kNone);
  std::vector<double> dist(n + m);
  std::vector<std::size_t> parent(n + m);
  std::vector<char> done(n + m);

  for (;;) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (row_match[i] == kNone) {
        dist[i] = 0.0;
      }
    }

    std::size_t target = kNone;
    for (;;) {
      std::size_t u = kNone;
      for (std::size_t v = 0; v < n + m; ++v) {
        if (!done[v] && std::isfinite(dist[v]) && (u == kNone || dist[v] < dist[u])) {
          u = v;
        }
      }
      if (u == kNone) {
        break;
      }
      done[u] = 1;
      if (u >= n) {
        const std::size_t j = u - n;
        if (col_match[j] == kNone) {
          target = u;
          break;
        }
        const std::size_t i = col_match[j];
        const double reduced = -cost(i, j) + potential[u] - potential[i];
        if (!done[i] && dist[u] + reduced < dist[i]) {
          dist[i] = dist[u] + reduced;
          parent[i] = u;
        }
        continue;
      }
      const std::size_t i = u;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t v = n + j;
        if (done[v] || row_match[i] == j || !cost.allowed(i, j)) {
          continue;
        }
        const double reduced = cost(i, j) + potential[i] - potential[v];
        if (dist[i] + reduced < dist[v]) {
          dist[v] = dist[i] + reduced;
          parent[v] = i;
        }
      }
    }

    if (target == kNone) {
      break;
    }

    const double reach = dist[target];
    for (std::size_t v = 0; v < n + m; ++v) {
      potential[v] += std::min(dist[v], reach);
    }

    // Flip matched/unmatched edges along the path back to a free row.
    std::size_t col_node = target;
    while (col_node != kNone) {
      const std::size_t i = parent[col_node];
      const std::size_t j = col_node - n;
      const std::size_t previous_col = row_match[i];
      row_match[i] = j;
      col_match[j] = i;
      col_node = previous_col == kNone ? kNone : n + previous_col;
      if (col_node != kNone && parent[i] != col_node) {
        throw Error(ErrorCode::kInternal, "assignment: inconsistent augmenting path");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (row_match[i] != kNone) {
      result.pairs.emplace_back(i, row_match[i]);
      result.total_cost += cost(i, row_match[i]);
    }
  }
  return result;
}

Assignment gated_assignment(const CostMatrix & cost, double threshold, GatingMode mode)
{
  Assignment solved;
  if (mode == GatingMode::kPreMask) {
    CostMatrix masked = cost;
    for (std::size_t i = 0; i < cost.rows(); ++i) {
      for (std::size_t j = 0; j < cost.cols(); ++j) {
        if (cost.allowed(i, j) && cost(i, j) > threshold) {
          masked.forbid(i, j);
        }
      }
    }
    solved = solve_assignment(masked);
  } else {
    solved = solve_assignment(cost);
  }
  Assignment kept;
  for (const auto & [i, j] : solved.pairs) {
    if (cost(i, j) <= threshold) {
      kept.pairs.emplace_back(i, j);
      kept.total_cost += cost(i, j);
    }
  }
  return kept;
}

}  // namespace camtrack
