#include "bdmtsp/solvers.hpp"

#include <algorithm>
#include <stdexcept>

#include "bdmtsp/assignment.hpp"

namespace bdmtsp {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "cvh" || name == "bd-cvh" || name == "BD-CVH") return Algorithm::cvh;
  if (name == "avh" || name == "bd-avh" || name == "BD-AVH") return Algorithm::avh;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected cvh or avh)");
}

std::string to_string(Algorithm a) { return a == Algorithm::cvh ? "BD-CVH" : "BD-AVH"; }

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;  // (row, col) into the sub-matrix

// Closest vehicle: repeated global argmin with row/column knock-out.
Pairs closest_vehicle(CostMatrix delta, std::size_t picks) {
  Pairs out;
  for (std::size_t e = 0; e < picks; ++e) {
    double best = kBlocked;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < delta.rows(); ++i)
      for (std::size_t j = 0; j < delta.cols(); ++j)
        if (delta(i, j) < best) {
          best = delta(i, j);
          bi = i;
          bj = j;
        }
    if (is_blocked(best)) break;
    out.emplace_back(bi, bj);
    for (std::size_t j = 0; j < delta.cols(); ++j) delta(bi, j) = kBlocked;
    for (std::size_t i = 0; i < delta.rows(); ++i) delta(i, bj) = kBlocked;
  }
  return out;
}

RouteSet run_dynamic(Algorithm algo, const RoutingInstance& instance, const Fleet& fleet,
                     const RevealSchedule& schedule, bool closed, SolveTrace* trace) {
  const std::size_t n = instance.size();
  const std::size_t m = fleet.m;
  const std::size_t cap = fleet.capacity_for(n);
  if (cap * m < n - 1)
    throw InfeasibleError("capacity infeasible: Q·m = " + std::to_string(cap * m) + " < " +
                          std::to_string(n - 1) + " customers");

  const NodeIndex depot = instance.depot();
  std::vector<NodeIndex> from(m, depot);
  std::vector<std::vector<NodeIndex>> routes(m, std::vector<NodeIndex>{depot});
  std::vector<std::size_t> visited(m, 0);
  std::vector<NodeIndex> unvisited = schedule.ordering();
  std::vector<char> done(n, 0);

  for (std::size_t step = 0; !unvisited.empty(); ++step) {
    const auto target = static_cast<std::size_t>(schedule.target(step));
    const std::size_t nvis = std::min(target, unvisited.size());
    const std::vector<NodeIndex> visible(unvisited.begin(),
                                         unvisited.begin() + static_cast<std::ptrdiff_t>(nvis));

    std::vector<std::size_t> avail;
    for (std::size_t k = 0; k < m; ++k)
      if (visited[k] < cap) avail.push_back(k);
    if (avail.empty()) throw InfeasibleError("no vehicle below capacity with customers remaining");

    // Sub-matrix: rows are available vehicles at their from-nodes.
    CostMatrix delta(avail.size(), nvis);
    for (std::size_t i = 0; i < avail.size(); ++i)
      for (std::size_t j = 0; j < nvis; ++j) delta(i, j) = instance.distance(from[avail[i]], visible[j]);

    Pairs pairs;
    if (algo == Algorithm::cvh) {
      pairs = closest_vehicle(delta, std::min(m, nvis));
    } else {
      pairs = solve_assignment(delta).pairs;
    }

    StepRecord rec;
    if (trace) {
      rec.visible = visible;
      rec.available = avail;
    }
    for (auto [i, j] : pairs) {
      const std::size_t k = avail[i];
      const NodeIndex node = visible[j];
      if (trace) {
        rec.assigned.emplace_back(k, node);
        rec.assignment_cost += delta(i, j);
      }
      routes[k].push_back(node);
      ++visited[k];
      from[k] = node;
      done[node] = 1;
    }
    if (pairs.empty()) throw InfeasibleError("step assigned no customers");
    std::erase_if(unvisited, [&](NodeIndex v) { return done[v] != 0; });
    if (trace) {
      std::sort(rec.assigned.begin(), rec.assigned.end());
      trace->steps.push_back(std::move(rec));
    }
  }

  RouteSet out;
  auto lens = route_lengths(routes, instance, closed);
  out.routes = std::move(routes);
  out.per_route_len = std::move(lens.per_route);
  out.total_len = lens.total;
  out.closed = closed;
  return out;
}

}  // namespace

RouteSet bd_cvh(const RoutingInstance& instance, const Fleet& fleet, const RevealSchedule& schedule,
                bool closed, SolveTrace* trace) {
  return run_dynamic(Algorithm::cvh, instance, fleet, schedule, closed, trace);
}

RouteSet bd_avh(const RoutingInstance& instance, const Fleet& fleet, const RevealSchedule& schedule,
                bool closed, SolveTrace* trace) {
  return run_dynamic(Algorithm::avh, instance, fleet, schedule, closed, trace);
}

RouteSet solve(Algorithm algorithm, const RoutingInstance& instance, const Fleet& fleet,
               const RevealSchedule& schedule, bool closed, SolveTrace* trace) {
  return run_dynamic(algorithm, instance, fleet, schedule, closed, trace);
}

RouteLengths route_lengths(const std::vector<std::vector<NodeIndex>>& routes,
                           const RoutingInstance& instance, bool closed) {
  RouteLengths out;
  out.per_route.reserve(routes.size());
  for (const auto& r : routes) {
    for (NodeIndex v : r)
      if (v >= instance.size()) throw std::out_of_range("route node index out of range");
    double len = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) len += instance.distance(r[i - 1], r[i]);
    if (closed && !r.empty()) len += instance.distance(r.back(), instance.depot());
    out.per_route.push_back(len);
    out.total += len;
  }
  return out;
}

double relative_difference(double length_avh, double length_cvh) {
  if (length_avh == 0.0) throw std::invalid_argument("relative_difference: zero reference length");
  return (length_cvh - length_avh) / length_avh;
}

}  // namespace bdmtsp
