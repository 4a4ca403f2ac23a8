#include <numeric>

#include "bdmtsp/core.hpp"
#include "bdmtsp/harness.hpp"
#include "bdmtsp/rng.hpp"
#include "doctest.h"

using namespace bdmtsp;

TEST_CASE("resolve_scope examples") {
  CHECK(resolve_scope(DynamicsScope::relative(0.05), 3, 100) == 5);
  CHECK(resolve_scope(DynamicsScope::m_absolute(2), 3, 100) == 6);
  CHECK(resolve_scope(DynamicsScope::m_relative(0.02), 3, 100) == 6);
  CHECK(resolve_scope(DynamicsScope::absolute(7), 2, 100) == 7);
}

TEST_CASE("relative scope counts customers, ties round up") {
  // 0.3 * 51 = 15.3 and 0.05 * 51 = 2.55
  CHECK(resolve_scope(DynamicsScope::relative(0.30), 5, 52) == 15);
  CHECK(resolve_scope(DynamicsScope::relative(0.05), 5, 52) == 3);
  CHECK(resolve_scope(DynamicsScope::m_absolute(1.5), 3, 51) == 5);
  CHECK(resolve_scope(DynamicsScope::m_absolute(1.5), 5, 51) == 8);
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(2.4999) == 2);
}

TEST_CASE("scopes clamp to [1, n-1]") {
  CHECK(resolve_scope(DynamicsScope::m_absolute(0.5), 1, 10) == 1);
  CHECK(resolve_scope(DynamicsScope::absolute(500), 2, 10) == 9);
  CHECK(resolve_scope(DynamicsScope::relative(1.0), 4, 37) == 36);
}

TEST_CASE("scope errors") {
  CHECK_THROWS(DynamicsScope::relative(0));
  CHECK_THROWS(DynamicsScope::relative(1.2));
  CHECK_THROWS(DynamicsScope::absolute(0));
  CHECK_THROWS(resolve_scope(DynamicsScope::variable({3, 4}), 2, 10));
  CHECK_THROWS(resolve_scope(DynamicsScope::m_relative(0.5), 3, 10));
  CHECK_THROWS(DynamicsScope::parse("bogus"));
  CHECK_THROWS(DynamicsScope::parse("abs:x"));
}

TEST_CASE("scope parsing round-trips") {
  for (const char* s : {"abs:5", "mabs:1.5", "rel:5%", "mrel:2%", "var:3,4,5"}) {
    const auto a = DynamicsScope::parse(s);
    const auto b = DynamicsScope::parse(a.to_string());
    CHECK(a.kind() == b.kind());
    CHECK(a.value() == doctest::Approx(b.value()));
    CHECK(a.counts() == b.counts());
  }
  CHECK(DynamicsScope::parse("rel:0.05").value() == doctest::Approx(0.05));
  CHECK(DynamicsScope::parse("rel:5%").value() == doctest::Approx(0.05));
}

TEST_CASE("m-absolute equals absolute of the rounded product") {
  for (double a : {0.5, 1.0, 1.5, 2.0, 2.5, 4.0, 8.0})
    for (std::size_t m = 1; m <= 7; ++m)
      for (std::size_t n : {5, 20, 51, 100}) {
        const long long direct = resolve_scope(DynamicsScope::m_absolute(a), m, n);
        const long long via = resolve_scope(DynamicsScope::absolute(std::max(1LL, round_half_up(a * double(m)))), m, n);
        CHECK(direct == via);
      }
}

TEST_CASE("balancing threshold") {
  CHECK(balancing_threshold(13, 3) == 4);
  CHECK(balancing_threshold(9, 2) == 4);
  CHECK(balancing_threshold(52, 5) == 11);
  for (std::size_t n = 2; n < 60; ++n)
    for (std::size_t m = 1; m < 12; ++m) {
      const auto q = balancing_threshold(n, m);
      CHECK(q * m >= n - 1);
      CHECK((q - 1) * m < n - 1);
    }
}

TEST_CASE("build_schedule sequential targets") {
  const auto inst = gen_uniform(101, 3);
  const auto s = build_schedule(DynamicsScope::absolute(5), inst, 1);
  CHECK(s.sequential());
  CHECK(s.target(0) == 5);
  CHECK(s.target(50) == 5);
  CHECK(s.step_counts().front() == 5);
  CHECK(s.step_counts().back() == 1);
  CHECK(s.ordering() == inst.customers());

  const auto all = build_schedule(DynamicsScope::absolute(100), inst, 4);
  CHECK(all.step_counts().front() == 100);
  CHECK(all.reveal_profile(4).front() == 100);
}

TEST_CASE("cumulative reveal equals the customer count") {
  for (std::size_t n : {2, 7, 51, 101})
    for (std::size_t m = 1; m <= 6; ++m)
      for (long long d : {1, 2, 3, 5, 13, 200}) {
        const auto inst = gen_uniform(n, n * 31 + m);
        const auto s = build_schedule(DynamicsScope::absolute(d), inst, m);
        const auto prof = s.reveal_profile(m);
        CHECK(std::accumulate(prof.begin(), prof.end(), 0LL) == static_cast<long long>(n - 1));
      }
  const auto inst = gen_uniform(101, 1);
  const auto v = build_schedule(DynamicsScope::variable({3, 4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5, 3,
                                                         4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5, 3, 4, 5}),
                                inst, 3);
  CHECK(v.target(0) == 3);
  CHECK(v.target(1) == 4);
  CHECK(v.target(2) == 5);
  const auto prof = v.reveal_profile(3);
  CHECK(std::accumulate(prof.begin(), prof.end(), 0LL) == 100);
}

TEST_CASE("variable schedule exhaustion") {
  const auto inst = gen_uniform(21, 1);
  CHECK_THROWS_AS(build_schedule(DynamicsScope::variable({2, 2}), inst, 2), InfeasibleError);
  const auto ok = build_schedule(DynamicsScope::variable({4, 4, 4, 4, 4, 4, 4, 4, 4, 4}), inst, 2);
  CHECK_THROWS_AS(ok.target(10), InfeasibleError);
}

TEST_CASE("schedule ordering must be a customer permutation") {
  const auto inst = gen_uniform(6, 1);
  CHECK_THROWS(build_schedule(DynamicsScope::absolute(1), inst, 1, std::vector<NodeIndex>{1, 2, 3}));
  CHECK_THROWS(build_schedule(DynamicsScope::absolute(1), inst, 1, std::vector<NodeIndex>{0, 1, 2, 3, 4}));
  CHECK_NOTHROW(build_schedule(DynamicsScope::absolute(1), inst, 1, std::vector<NodeIndex>{5, 4, 3, 2, 1}));
}

TEST_CASE("permuted customers") {
  const auto inst = gen_uniform(30, 2);
  CHECK(permuted_customers(inst, 0) == inst.customers());
  auto p = permuted_customers(inst, 9);
  CHECK(p != inst.customers());
  std::sort(p.begin(), p.end());
  CHECK(p == inst.customers());
  CHECK(permuted_customers(inst, 9) == permuted_customers(inst, 9));
}

TEST_CASE("instance validation") {
  CHECK_THROWS(RoutingInstance::from_coords("x", {{0, 0}}));
  CHECK_THROWS(RoutingInstance::from_coords("x", {{0, 0}, {1, 1}}, 2));
  DistanceMatrix bad(2, std::vector<double>{0, 1, 1, 1});
  CHECK_THROWS(RoutingInstance::from_matrix("x", bad));
  DistanceMatrix neg(2, std::vector<double>{0, -1, 1, 0});
  CHECK_THROWS(RoutingInstance::from_matrix("x", neg));
  DistanceMatrix asym(2, std::vector<double>{0, 1, 3, 0});
  const auto a = RoutingInstance::from_matrix("a", asym);
  CHECK(a.distance(0, 1) == 1);
  CHECK(a.distance(1, 0) == 3);
  CHECK_FALSE(asym.is_symmetric());
}

TEST_CASE("coordinate instances compute distances on demand") {
  const auto inst = RoutingInstance::from_coords("t", {{0, 0}, {3, 4}, {6, 8}});
  CHECK_FALSE(inst.matrix().has_value());
  CHECK(inst.distance(0, 1) == 5);
  CHECK(inst.distance(0, 2) == 10);
  const auto dense = inst.with_matrix();
  REQUIRE(dense.matrix().has_value());
  CHECK((*dense.matrix())(1, 2) == 5);
}

TEST_CASE("fleet capacity") {
  CHECK(Fleet(3).capacity_for(13) == 4);
  CHECK(Fleet(3, 7).capacity_for(13) == 7);
  CHECK_THROWS(Fleet(0));
  CHECK_THROWS(Fleet(2, 0));
}

TEST_CASE("rng substreams are stable and distinct") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {0}) != derive_seed(2, {0}));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}
