#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace bdmtsp {

/// Entries at or above this value are blocked and never enter arithmetic.
inline constexpr double kBlocked = 1e300;

/// Row-major rows×cols cost matrix. Rows are vehicles (their from-nodes),
/// columns are visible customers.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  CostMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline bool is_blocked(double c) noexcept { return c >= kBlocked; }

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending rows
  double cost = 0.0;
};

/// Minimum-cost matching of size min(rows, cols) (shortest augmenting path
/// with dual potentials, O(min² · max)). Throws InfeasibleError when no
/// complete matching avoids the blocked entries.
Assignment solve_assignment(const CostMatrix& cost);

/// Exhaustive enumeration of every injection; test oracle only.
/// Requires min(rows, cols) ≤ 8 and max(rows, cols) ≤ 12.
Assignment brute_force_assignment(const CostMatrix& cost);

}  // namespace bdmtsp
