#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bdmtsp/core.hpp"

namespace bdmtsp {

enum class Algorithm { cvh, avh };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);

/// One time step of a dynamic run, recorded on request.
struct StepRecord {
  std::vector<NodeIndex> visible;
  std::vector<std::size_t> available;                        // vehicles below capacity
  std::vector<std::pair<std::size_t, NodeIndex>> assigned;   // (vehicle, customer)
  double assignment_cost = 0.0;
};

struct SolveTrace {
  std::vector<StepRecord> steps;
};

/// Balanced dynamic closest-vehicle heuristic.
///
/// Each step exposes the first target(k) unvisited customers of the schedule
/// ordering and assigns min(available vehicles, visible) of them by repeated
/// global argmin over the vehicle×customer sub-matrix. Ties go to the first
/// entry in row-major order. A vehicle that reaches the capacity Q stops
/// drawing customers.
RouteSet bd_cvh(const RoutingInstance& instance, const Fleet& fleet, const RevealSchedule& schedule,
                bool closed = true, SolveTrace* trace = nullptr);

/// Balanced dynamic assignment-vehicle heuristic: same loop, but each step's
/// vehicle–customer matching is an optimal rectangular assignment.
RouteSet bd_avh(const RoutingInstance& instance, const Fleet& fleet, const RevealSchedule& schedule,
                bool closed = true, SolveTrace* trace = nullptr);

RouteSet solve(Algorithm algorithm, const RoutingInstance& instance, const Fleet& fleet,
               const RevealSchedule& schedule, bool closed = true, SolveTrace* trace = nullptr);

struct RouteLengths {
  std::vector<double> per_route;
  double total = 0.0;
};

/// Sums consecutive legs; with `closed` each route also returns to the depot.
RouteLengths route_lengths(const std::vector<std::vector<NodeIndex>>& routes,
                           const RoutingInstance& instance, bool closed);

/// (L_c − L_a) / L_a: positive when the closest-vehicle total is longer.
double relative_difference(double length_avh, double length_cvh);

}  // namespace bdmtsp
