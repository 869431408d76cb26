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

#ifndef CAMTRACK__ASSIGNMENT_HPP_
#define CAMTRACK__ASSIGNMENT_HPP_

#include "camtrack/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace camtrack
{

/// Rows are detections, columns tracklets. Forbidden entries are stored as
/// +infinity and are never part of an assignment.
class CostMatrix
{
public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, std::optional<Category> category = std::nullopt);

  /// Builds from a dense matrix; non-finite entries become forbidden.
  static CostMatrix from_dense(const Eigen::MatrixXd & values);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  std::optional<Category> category() const { return category_; }

  /// NaN (an invalid similarity) and infinities are stored as forbidden.
  void set(std::size_t row, std::size_t col, double cost);
  void forbid(std::size_t row, std::size_t col);
  bool allowed(std::size_t row, std::size_t col) const;
  double operator()(std::size_t row, std::size_t col) const;

  const Eigen::MatrixXd & values() const { return values_; }

private:
  Eigen::MatrixXd values_;
  std::optional<Category> category_;
};

struct Assignment
{
  /// (row, col) pairs sorted by row.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost{0.0};
};

/// Optimal one-to-one assignment over allowed entries.
///
/// Maximizes the number of assigned pairs first and, among maximum
/// assignments, minimizes total cost. Implemented as successive shortest
/// augmenting paths with Johnson potentials, so forbidden entries are absent
/// from the graph rather than priced with a large constant.
Assignment solve_assignment(const CostMatrix & cost);

/// How a stage threshold interacts with the solver.
enum class GatingMode {
  kSolveThenFilter,  ///< solve on all allowed entries, then drop pairs above the threshold
  kPreMask,          ///< forbid entries above the threshold, then solve
};

/// Assignment restricted to pairs with cost <= threshold.
Assignment gated_assignment(const CostMatrix & cost, double threshold, GatingMode mode);

}  // namespace camtrack

#endif  // CAMTRACK__ASSIGNMENT_HPP_
