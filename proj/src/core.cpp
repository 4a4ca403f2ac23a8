#include "bdmtsp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bdmtsp/geometry.hpp"
#include "bdmtsp/rng.hpp"

namespace bdmtsp {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n_ * n_) {
    throw std::invalid_argument("distance matrix: expected " + std::to_string(n_ * n_) +
                                " entries, got " + std::to_string(data_.size()));
  }
}

bool DistanceMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

RoutingInstance RoutingInstance::from_coords(std::string name, std::vector<Point2> coords,
                                             NodeIndex depot, Metric metric) {
  if (metric == Metric::explicit_matrix)
    throw std::invalid_argument("coordinate instance needs euclid2d or haversine metric");
  RoutingInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = coords.size();
  inst.coords_ = std::move(coords);
  inst.depot_ = depot;
  inst.metric_ = metric;
  inst.validate();
  return inst;
}

RoutingInstance RoutingInstance::from_matrix(std::string name, DistanceMatrix dist,
                                             NodeIndex depot) {
  RoutingInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = dist.size();
  inst.dist_ = std::move(dist);
  inst.depot_ = depot;
  inst.metric_ = Metric::explicit_matrix;
  inst.validate();
  return inst;
}

RoutingInstance RoutingInstance::from_coords_and_matrix(std::string name,
                                                        std::vector<Point2> coords,
                                                        DistanceMatrix dist, NodeIndex depot,
                                                        Metric metric) {
  if (coords.size() != dist.size())
    throw std::invalid_argument("coordinate count does not match matrix dimension");
  RoutingInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = dist.size();
  inst.coords_ = std::move(coords);
  inst.dist_ = std::move(dist);
  inst.depot_ = depot;
  inst.metric_ = metric;
  inst.validate();
  return inst;
}

void RoutingInstance::validate() const {
  if (n_ < 2) throw std::invalid_argument("instance needs at least 2 nodes (depot + customer)");
  if (depot_ >= n_) throw std::invalid_argument("depot index out of range");
  if (dist_) {
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*dist_)(i, i) != 0.0) throw std::invalid_argument("distance matrix diagonal must be 0");
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = (*dist_)(i, j);
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::invalid_argument("distance matrix entries must be finite and nonnegative");
      }
    }
  }
  if (coords_) {
    for (const auto& p : *coords_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("coordinates must be finite");
  }
}

double RoutingInstance::distance(NodeIndex i, NodeIndex j) const {
  if (dist_) return (*dist_)(i, j);
  const auto& c = *coords_;
  if (metric_ == Metric::haversine) {
    // Coordinates hold (lat, lon) in degrees.
    return haversine({c[i].x, c[i].y}, {c[j].x, c[j].y});
  }
  return euclid(c[i], c[j]);
}

std::vector<NodeIndex> RoutingInstance::customers() const {
  std::vector<NodeIndex> out;
  out.reserve(n_ - 1);
  for (NodeIndex i = 0; i < n_; ++i)
    if (i != depot_) out.push_back(i);
  return out;
}

RoutingInstance RoutingInstance::with_matrix() const {
  if (dist_) return *this;
  DistanceMatrix d(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) d(i, j) = i == j ? 0.0 : distance(i, j);
  RoutingInstance inst = *this;
  inst.dist_ = std::move(d);
  return inst;
}

// ---------------------------------------------------------------------------

DynamicsScope DynamicsScope::absolute(long long count) {
  if (count < 1) throw std::invalid_argument("absolute scope must be >= 1");
  DynamicsScope s;
  s.kind_ = ScopeKind::absolute;
  s.value_ = static_cast<double>(count);
  return s;
}

DynamicsScope DynamicsScope::m_absolute(double per_vehicle) {
  if (!(per_vehicle > 0.0) || !std::isfinite(per_vehicle))
    throw std::invalid_argument("m-absolute scope must be positive");
  DynamicsScope s;
  s.kind_ = ScopeKind::m_absolute;
  s.value_ = per_vehicle;
  return s;
}

DynamicsScope DynamicsScope::relative(double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("relative scope must lie in (0, 1]");
  DynamicsScope s;
  s.kind_ = ScopeKind::relative;
  s.value_ = fraction;
  return s;
}

DynamicsScope DynamicsScope::m_relative(double fraction_per_vehicle) {
  if (!(fraction_per_vehicle > 0.0) || fraction_per_vehicle > 1.0)
    throw std::invalid_argument("m-relative scope must lie in (0, 1]");
  DynamicsScope s;
  s.kind_ = ScopeKind::m_relative;
  s.value_ = fraction_per_vehicle;
  return s;
}

DynamicsScope DynamicsScope::variable(std::vector<long long> counts) {
  if (counts.empty()) throw std::invalid_argument("variable scope needs at least one step");
  for (auto c : counts)
    if (c < 1) throw std::invalid_argument("variable scope entries must be >= 1");
  DynamicsScope s;
  s.kind_ = ScopeKind::variable;
  s.counts_ = std::move(counts);
  s.value_ = 0.0;
  return s;
}

namespace {

double parse_fraction(std::string v) {
  bool percent = false;
  if (!v.empty() && v.back() == '%') {
    percent = true;
    v.pop_back();
  }
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("bad number: " + v);
  return percent ? x / 100.0 : x;
}

}  // namespace

DynamicsScope DynamicsScope::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("scope must look like kind:value, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string val = text.substr(colon + 1);
  if (kind == "abs" || kind == "absolute") {
    std::size_t used = 0;
    const long long c = std::stoll(val, &used);
    if (used != val.size()) throw std::invalid_argument("bad absolute scope: " + val);
    return absolute(c);
  }
  if (kind == "mabs" || kind == "m_absolute") return m_absolute(parse_fraction(val));
  if (kind == "rel" || kind == "relative") return relative(parse_fraction(val));
  if (kind == "mrel" || kind == "m_relative") return m_relative(parse_fraction(val));
  if (kind == "var" || kind == "variable") {
    std::vector<long long> counts;
    std::stringstream ss(val);
    std::string tok;
    while (std::getline(ss, tok, ',')) counts.push_back(std::stoll(tok));
    return variable(std::move(counts));
  }
  throw std::invalid_argument("unknown scope kind '" + kind + "'");
}

std::string DynamicsScope::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ScopeKind::absolute: os << "abs:" << static_cast<long long>(value_); break;
    case ScopeKind::m_absolute: os << "mabs:" << value_; break;
    case ScopeKind::relative: os << "rel:" << value_ * 100.0 << '%'; break;
    case ScopeKind::m_relative: os << "mrel:" << value_ * 100.0 << '%'; break;
    case ScopeKind::variable:
      os << "var:";
      for (std::size_t i = 0; i < counts_.size(); ++i) os << (i ? "," : "") << counts_[i];
      break;
  }
  return os.str();
}

long long round_half_up(double x) {
  // Decimal ties like 0.05·51 or 0.3·15 may land a hair below .5 in binary.
  return static_cast<long long>(std::floor(x + 0.5 + 1e-9));
}

long long resolve_scope(const DynamicsScope& scope, std::size_t m, std::size_t n) {
  if (m < 1) throw std::invalid_argument("fleet size must be >= 1");
  if (n < 2) throw std::invalid_argument("instance needs at least 2 nodes");
  const double customers = static_cast<double>(n - 1);
  const double vehicles = static_cast<double>(m);
  long long da = 0;
  switch (scope.kind()) {
    case ScopeKind::absolute: da = static_cast<long long>(scope.value()); break;
    case ScopeKind::m_absolute: da = round_half_up(vehicles * scope.value()); break;
    case ScopeKind::relative: da = round_half_up(customers * scope.value()); break;
    case ScopeKind::m_relative:
      if (vehicles * scope.value() > 1.0 + 1e-12)
        throw std::invalid_argument("m-relative scope times m exceeds 100%");
      da = round_half_up(customers * vehicles * scope.value());
      break;
    case ScopeKind::variable:
      throw std::invalid_argument("variable scopes have no single absolute value; use build_schedule");
  }
  return std::clamp<long long>(da, 1, static_cast<long long>(n - 1));
}

std::size_t balancing_threshold(std::size_t n, std::size_t m) {
  if (m < 1) throw std::invalid_argument("fleet size must be >= 1");
  if (n < 2) throw std::invalid_argument("instance needs at least 2 nodes");
  return (n - 1 + m - 1) / m;
}

Fleet::Fleet(std::size_t vehicles, std::optional<std::size_t> cap) : m(vehicles), capacity(cap) {
  if (m < 1) throw std::invalid_argument("fleet size must be >= 1");
  if (capacity && *capacity < 1) throw std::invalid_argument("vehicle capacity must be >= 1");
}

std::size_t Fleet::capacity_for(std::size_t n) const {
  return capacity ? *capacity : balancing_threshold(n, m);
}

// ---------------------------------------------------------------------------

RevealSchedule::RevealSchedule(std::vector<NodeIndex> ordering, long long sequential_target,
                               std::vector<long long> nominal_steps)
    : ordering_(std::move(ordering)),
      steps_(std::move(nominal_steps)),
      sequential_target_(sequential_target),
      sequential_(true) {
  if (sequential_target_ < 1) throw std::invalid_argument("sequential target must be >= 1");
}

RevealSchedule::RevealSchedule(std::vector<NodeIndex> ordering,
                               std::vector<long long> variable_targets)
    : ordering_(std::move(ordering)), steps_(std::move(variable_targets)), sequential_(false) {
  if (steps_.empty()) throw std::invalid_argument("variable schedule needs at least one step");
}

long long RevealSchedule::target(std::size_t step) const {
  if (sequential_) return sequential_target_;
  if (step >= steps_.size())
    throw InfeasibleError("variable dynamics exhausted after " + std::to_string(steps_.size()) +
                          " steps with customers still unrevealed");
  return steps_[step];
}

std::vector<long long> RevealSchedule::reveal_profile(std::size_t m) const {
  // The visible set is always a prefix of the unserviced customers, so the
  // ever-revealed set is a prefix of the ordering of length
  // max(previous, served + visible).
  std::vector<long long> fresh;
  const auto total = static_cast<long long>(ordering_.size());
  const auto mm = static_cast<long long>(m);
  long long served = 0;
  long long revealed = 0;
  for (std::size_t k = 0; served < total; ++k) {
    const long long vis = std::min(target(k), total - served);
    const long long now = std::max(revealed, served + vis);
    fresh.push_back(now - revealed);
    revealed = now;
    served += std::min(mm, vis);
  }
  return fresh;
}

RevealSchedule build_schedule(const DynamicsScope& scope, const RoutingInstance& instance,
                              std::size_t m, std::optional<std::vector<NodeIndex>> ordering) {
  std::vector<NodeIndex> order = ordering ? std::move(*ordering) : instance.customers();
  {
    std::vector<NodeIndex> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != instance.customers())
      throw std::invalid_argument("reveal ordering must be a permutation of the customers");
  }
  const auto customers = static_cast<long long>(order.size());
  const auto mm = static_cast<long long>(m);
  if (scope.kind() == ScopeKind::variable) {
    RevealSchedule sched(std::move(order), scope.counts());
    // Nominal run must reveal everyone before the sequence ends.
    long long remaining = customers;
    for (std::size_t k = 0; remaining > 0; ++k) {
      if (k >= scope.counts().size())
        throw InfeasibleError("variable dynamics sequence exhausted before all customers revealed");
      remaining -= std::min(mm, std::min(scope.counts()[k], remaining));
    }
    return sched;
  }
  const long long da = resolve_scope(scope, m, instance.size());
  std::vector<long long> steps;
  for (long long remaining = customers; remaining > 0;) {
    const long long vis = std::min(da, remaining);
    steps.push_back(vis);
    remaining -= std::min(mm, vis);
  }
  return RevealSchedule(std::move(order), da, std::move(steps));
}

std::vector<NodeIndex> permuted_customers(const RoutingInstance& instance, std::uint64_t seed) {
  std::vector<NodeIndex> order = instance.customers();
  if (seed != 0) {
    Rng rng(seed);
    rng.shuffle(std::span<NodeIndex>(order));
  }
  return order;
}

std::vector<std::size_t> RouteSet::customer_counts() const {
  std::vector<std::size_t> out;
  out.reserve(routes.size());
  for (const auto& r : routes) out.push_back(r.empty() ? 0 : r.size() - 1);
  return out;
}

}  // namespace bdmtsp
