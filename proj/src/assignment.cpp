#include "bdmtsp/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "bdmtsp/core.hpp"

namespace bdmtsp {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_)
    throw std::invalid_argument("cost matrix: entry count does not match dimensions");
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// rows ≤ cols. Returns column index per row.
std::vector<std::size_t> hungarian_wide(const CostMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double c = a(i0 - 1, j - 1);
        if (!is_blocked(c)) {
          const double cur = c - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0)
        throw InfeasibleError("assignment: row " + std::to_string(i - 1) +
                              " cannot be matched through unblocked entries");
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else if (minv[j] != kInf) {
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

  std::vector<std::size_t> col_of(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) col_of[p[j] - 1] = j - 1;
  return col_of;
}

void finish(const CostMatrix& cost, Assignment& out) {
  std::sort(out.pairs.begin(), out.pairs.end());
  out.cost = 0.0;
  for (auto [r, c] : out.pairs) out.cost += cost(r, c);
}

}  // namespace

Assignment solve_assignment(const CostMatrix& cost) {
  if (cost.rows() == 0 || cost.cols() == 0)
    throw std::invalid_argument("assignment: empty cost matrix");
  Assignment out;
  if (cost.rows() <= cost.cols()) {
    const auto col_of = hungarian_wide(cost);
    for (std::size_t r = 0; r < col_of.size(); ++r) out.pairs.emplace_back(r, col_of[r]);
  } else {
    const auto row_of = hungarian_wide(cost.transposed());
    for (std::size_t c = 0; c < row_of.size(); ++c) out.pairs.emplace_back(row_of[c], c);
  }
  finish(cost, out);
  return out;
}

namespace {

struct Enumerator {
  const CostMatrix& cost;  // rows ≤ cols
  std::vector<std::size_t> current;
  std::vector<char> taken;
  std::vector<std::size_t> best;
  double best_cost = kInf;

  void run(std::size_t row, double acc) {
    if (row == cost.rows()) {
      if (acc < best_cost) {
        best_cost = acc;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (taken[c] || is_blocked(cost(row, c))) continue;
      taken[c] = 1;
      current[row] = c;
      run(row + 1, acc + cost(row, c));
      taken[c] = 0;
    }
  }
};

}  // namespace

Assignment brute_force_assignment(const CostMatrix& cost) {
  const std::size_t lo = std::min(cost.rows(), cost.cols());
  const std::size_t hi = std::max(cost.rows(), cost.cols());
  if (lo == 0) throw std::invalid_argument("assignment: empty cost matrix");
  if (lo > 8 || hi > 12) throw std::invalid_argument("brute_force_assignment: dimension too large");

  const bool flip = cost.rows() > cost.cols();
  const CostMatrix wide = flip ? cost.transposed() : cost;
  Enumerator e{wide, std::vector<std::size_t>(wide.rows()), std::vector<char>(wide.cols(), 0), {}};
  e.run(0, 0.0);
  if (e.best.empty()) throw InfeasibleError("assignment: no feasible matching");

  Assignment out;
  for (std::size_t r = 0; r < e.best.size(); ++r) {
    if (flip)
      out.pairs.emplace_back(e.best[r], r);
    else
      out.pairs.emplace_back(r, e.best[r]);
  }
  finish(cost, out);
  return out;
}

}  // namespace bdmtsp
