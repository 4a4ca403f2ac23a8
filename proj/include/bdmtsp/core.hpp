#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdmtsp {

using NodeIndex = std::size_t;

/// Raised when a solver cannot produce a feasible result (capacity, blocked
/// assignments, exhausted variable schedules).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Metric { euclid2d, explicit_matrix, haversine };

/// Dense row-major n×n matrix of nonnegative lengths. May be asymmetric.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  DistanceMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool is_symmetric(double tol = 0.0) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A BD-mTSP instance. Node order is the reveal order of the customers.
///
/// Either coordinates or an explicit matrix back the distances. With only
/// coordinates, distances are computed on demand so that very large instances
/// never materialize an n×n matrix.
class RoutingInstance {
 public:
  static RoutingInstance from_coords(std::string name, std::vector<Point2> coords,
                                     NodeIndex depot = 0, Metric metric = Metric::euclid2d);
  static RoutingInstance from_matrix(std::string name, DistanceMatrix dist, NodeIndex depot = 0);
  /// Both representations; the matrix is authoritative for distance().
  static RoutingInstance from_coords_and_matrix(std::string name, std::vector<Point2> coords,
                                                DistanceMatrix dist, NodeIndex depot = 0,
                                                Metric metric = Metric::explicit_matrix);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t customer_count() const noexcept { return n_ - 1; }
  NodeIndex depot() const noexcept { return depot_; }
  Metric metric() const noexcept { return metric_; }
  const std::optional<std::vector<Point2>>& coords() const noexcept { return coords_; }
  const std::optional<DistanceMatrix>& matrix() const noexcept { return dist_; }

  double distance(NodeIndex i, NodeIndex j) const;

  /// Customer node indices in instance order (every node except the depot).
  std::vector<NodeIndex> customers() const;

  /// Copy with a dense matrix materialized from the coordinates.
  RoutingInstance with_matrix() const;

 private:
  RoutingInstance() = default;
  void validate() const;

  std::string name_;
  std::optional<std::vector<Point2>> coords_;
  std::optional<DistanceMatrix> dist_;
  std::size_t n_ = 0;
  NodeIndex depot_ = 0;
  Metric metric_ = Metric::euclid2d;
};

enum class ScopeKind { absolute, m_absolute, relative, m_relative, variable };

/// How many customers are visible per time step.
///
/// Relative values are fractions (0.05 for 5%). Variable scopes carry one
/// visible-count target per step.
class DynamicsScope {
 public:
  static DynamicsScope absolute(long long count);
  static DynamicsScope m_absolute(double per_vehicle);
  static DynamicsScope relative(double fraction);
  static DynamicsScope m_relative(double fraction_per_vehicle);
  static DynamicsScope variable(std::vector<long long> counts);

  /// Parses "abs:5", "mabs:1.5", "rel:5%", "rel:0.05", "mrel:2%", "var:3,4,5".
  static DynamicsScope parse(const std::string& text);

  ScopeKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  const std::vector<long long>& counts() const noexcept { return counts_; }

  std::string to_string() const;

 private:
  ScopeKind kind_ = ScopeKind::absolute;
  double value_ = 1.0;
  std::vector<long long> counts_;
};

/// Round half up, tolerant to binary representation of decimal ties.
long long round_half_up(double x);

/// Converts any non-variable scope to an absolute per-step count in [1, n−1].
/// Relative scopes are multiplied by the customer count n−1.
long long resolve_scope(const DynamicsScope& scope, std::size_t m, std::size_t n);

/// Q = ⌈(n−1)/m⌉.
std::size_t balancing_threshold(std::size_t n, std::size_t m);

struct Fleet {
  std::size_t m = 1;
  std::optional<std::size_t> capacity;

  explicit Fleet(std::size_t vehicles, std::optional<std::size_t> cap = std::nullopt);
  std::size_t capacity_for(std::size_t n) const;
};

/// Visible-count targets per step plus the order in which customers reveal.
///
/// Sequential scopes keep the same target on every step. step_counts holds the
/// nominal profile, assuming min(m, visible) customers get serviced per step;
/// the solver consumes target(k).
class RevealSchedule {
 public:
  RevealSchedule(std::vector<NodeIndex> ordering, long long sequential_target,
                 std::vector<long long> nominal_steps);
  RevealSchedule(std::vector<NodeIndex> ordering, std::vector<long long> variable_targets);

  bool sequential() const noexcept { return sequential_; }
  const std::vector<NodeIndex>& ordering() const noexcept { return ordering_; }
  const std::vector<long long>& step_counts() const noexcept { return steps_; }

  /// Target visible count at step k (0-based). Throws InfeasibleError once a
  /// variable sequence is exhausted.
  long long target(std::size_t step) const;

  /// Newly revealed customers per step under nominal service with m vehicles.
  std::vector<long long> reveal_profile(std::size_t m) const;

 private:
  std::vector<NodeIndex> ordering_;
  std::vector<long long> steps_;
  long long sequential_target_ = 0;
  bool sequential_ = true;
};

/// Builds the reveal schedule. Without an explicit ordering the instance node
/// order is used.
RevealSchedule build_schedule(const DynamicsScope& scope, const RoutingInstance& instance,
                              std::size_t m,
                              std::optional<std::vector<NodeIndex>> ordering = std::nullopt);

/// Ordering with customers shuffled by a seeded permutation. Seed 0 keeps the
/// instance order.
std::vector<NodeIndex> permuted_customers(const RoutingInstance& instance, std::uint64_t seed);

struct RouteSet {
  std::vector<std::vector<NodeIndex>> routes;
  std::vector<double> per_route_len;
  double total_len = 0.0;
  bool closed = true;

  std::vector<std::size_t> customer_counts() const;
};

}  // namespace bdmtsp
