#include <cmath>

#include "bdmtsp/assignment.hpp"
#include "bdmtsp/harness.hpp"
#include "bdmtsp/solvers.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdmtsp;

namespace {
RoutingInstance star() {
  return RoutingInstance::from_coords("star", {{0, 0}, {1, 0}, {0, 2}, {-3, 0}, {0, -4}, {5, 0}});
}

void check_complete(const RouteSet& rs, const RoutingInstance& inst, std::size_t q) {
  std::vector<int> seen(inst.size(), 0);
  for (const auto& r : rs.routes) {
    REQUIRE_FALSE(r.empty());
    CHECK(r.front() == inst.depot());
    CHECK(r.size() - 1 <= q);
    for (std::size_t i = 1; i < r.size(); ++i) ++seen[r[i]];
  }
  for (NodeIndex c : inst.customers()) CHECK(seen[c] == 1);
}
}  // namespace

TEST_CASE("star instance traced by hand") {
  const auto inst = star();
  const auto sched = build_schedule(DynamicsScope::absolute(1), inst, 2);
  for (auto algo : {Algorithm::cvh, Algorithm::avh}) {
    const auto rs = solve(algo, inst, Fleet(2), sched, false);
    REQUIRE(rs.routes.size() == 2);
    CHECK(rs.routes[0] == std::vector<NodeIndex>{0, 1, 4, 5});
    CHECK(rs.routes[1] == std::vector<NodeIndex>{0, 2, 3});
    CHECK(rs.per_route_len[0] == doctest::Approx(1 + std::sqrt(17.0) + std::sqrt(41.0)));
    CHECK(rs.per_route_len[1] == doctest::Approx(2 + std::sqrt(13.0)));
    const auto closed = solve(algo, inst, Fleet(2), sched, true);
    CHECK(closed.per_route_len[0] == doctest::Approx(1 + std::sqrt(17.0) + std::sqrt(41.0) + 5));
    CHECK(closed.per_route_len[1] == doctest::Approx(2 + std::sqrt(13.0) + 3));
  }
}

TEST_CASE("single customer") {
  const auto inst = RoutingInstance::from_coords("two", {{0, 0}, {3, 4}});
  const auto sched = build_schedule(DynamicsScope::absolute(1), inst, 3);
  const auto rs = bd_avh(inst, Fleet(3), sched);
  CHECK(rs.total_len == 10);
  CHECK(rs.customer_counts() == std::vector<std::size_t>{1, 0, 0});
}

TEST_CASE("one visible customer makes both heuristics agree") {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto inst = gen_uniform(30, s);
    for (std::size_t m = 1; m <= 5; ++m) {
      const auto sched = build_schedule(DynamicsScope::absolute(1), inst, m);
      const auto a = bd_avh(inst, Fleet(m), sched);
      const auto c = bd_cvh(inst, Fleet(m), sched);
      CHECK(a.routes == c.routes);
    }
  }
}

TEST_CASE("closest vehicle at full visibility matches the static heuristic") {
  for (std::uint64_t s = 1; s <= 15; ++s) {
    const auto inst = gen_uniform(25, s);
    for (std::size_t m : {1, 2, 3, 5}) {
      const auto sched = build_schedule(DynamicsScope::relative(1.0), inst, m);
      const auto rs = bd_cvh(inst, Fleet(m), sched);
      CHECK(rs.routes == oracle::static_closest_vehicle(inst, m));
      CHECK(rs.total_len == doctest::Approx(oracle::route_sum(rs.routes, inst, true)));
    }
  }
}

TEST_CASE("each assignment step is optimal") {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto inst = gen_uniform(40, s).with_matrix();
    for (std::size_t m : {2, 3, 4}) {
      for (long long d : {2, 4, 7}) {
        SolveTrace trace;
        const auto sched = build_schedule(DynamicsScope::absolute(d), inst, m);
        const auto rs = bd_avh(inst, Fleet(m), sched, true, &trace);
        // Replay positions from the trace to rebuild each step's cost matrix.
        std::vector<NodeIndex> pos(m, inst.depot());
        for (const auto& st : trace.steps) {
          CostMatrix cost(st.available.size(), st.visible.size());
          for (std::size_t i = 0; i < st.available.size(); ++i)
            for (std::size_t j = 0; j < st.visible.size(); ++j)
              cost(i, j) = inst.distance(pos[st.available[i]], st.visible[j]);
          CHECK(st.assignment_cost == doctest::Approx(brute_force_assignment(cost).cost));
          for (auto [v, c] : st.assigned) pos[v] = c;
        }
        check_complete(rs, inst, balancing_threshold(inst.size(), m));
      }
    }
  }
}

TEST_CASE("route lengths") {
  const auto inst = star();
  const auto z = route_lengths({{0}}, inst, true);
  CHECK(z.total == 0);
  const auto open = route_lengths({{0, 1, 5}}, inst, false);
  const auto shut = route_lengths({{0, 1, 5}}, inst, true);
  CHECK(open.total == 5);
  CHECK(shut.total == 10);

  DistanceMatrix asym(3, std::vector<double>{0, 1, 2, 5, 0, 1, 7, 3, 0});
  const auto a = RoutingInstance::from_matrix("asym", asym);
  CHECK(route_lengths({{0, 1, 2}}, a, true).total == 1 + 1 + 7);
  CHECK(route_lengths({{0, 2, 1}}, a, true).total == 2 + 3 + 5);
}

TEST_CASE("relative difference") {
  CHECK(relative_difference(100, 110) == doctest::Approx(0.10));
  CHECK(relative_difference(100, 95) == doctest::Approx(-0.05));
  CHECK(relative_difference(10, 10) == 0);
}

TEST_CASE("routes are complete and balanced") {
  for (std::uint64_t s = 1; s <= 6; ++s)
    for (std::size_t n : {11, 31, 52})
      for (std::size_t m = 1; m <= 7; ++m)
        for (long long d : {1, 2, 3, 6, 9, 60}) {
          const auto inst = gen_uniform(n, s * 97 + n);
          const auto sched = build_schedule(DynamicsScope::absolute(d), inst, m);
          const auto q = balancing_threshold(n, m);
          for (auto algo : {Algorithm::cvh, Algorithm::avh}) {
            const auto rs = solve(algo, inst, Fleet(m), sched);
            check_complete(rs, inst, q);
            const auto counts = rs.customer_counts();
            const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
            const auto da = std::min<long long>(d, static_cast<long long>(n - 1));
            if (da >= static_cast<long long>(m) || (n - 1) % m == 0) CHECK(*hi - *lo <= 1);
          }
        }
}

TEST_CASE("capacity too small is infeasible") {
  const auto inst = gen_uniform(11, 3);
  const auto sched = build_schedule(DynamicsScope::absolute(2), inst, 2);
  CHECK_THROWS_AS(bd_cvh(inst, Fleet(2, 4), sched), InfeasibleError);
  CHECK_THROWS_AS(bd_avh(inst, Fleet(2, 4), sched), InfeasibleError);
}
