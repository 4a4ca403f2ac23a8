#include <algorithm>
#include <cmath>

#include "bdmtsp/geometry.hpp"
#include "bdmtsp/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdmtsp;

TEST_CASE("euclid") {
  CHECK(euclid({0, 0}, {3, 4}) == 5);
  CHECK(euclid({2, 2}, {2, 2}) == 0);
  CHECK(euclid({0, 0}, {1, 1}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("haversine basics") {
  const GeoPoint depot{19.3702, -99.1799};
  CHECK(haversine(depot, depot) == 0);
  const GeoPoint a{19.37, -99.18}, b{19.40, -99.10};
  CHECK(haversine(a, b) == doctest::Approx(oracle::law_of_cosines_km(a, b)).epsilon(1e-6));
  CHECK(haversine(a, b) == haversine(b, a));
  // Antipodes: half the circumference.
  CHECK(haversine({0, 0}, {0, 180}) == doctest::Approx(kPi * 6378.4));
}

TEST_CASE("haversine properties on random pairs") {
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint p{-90 + 180 * rng.uniform_open(), -180 + 360 * rng.uniform_open()};
    const GeoPoint q{-90 + 180 * rng.uniform_open(), -180 + 360 * rng.uniform_open()};
    const double d = haversine(p, q);
    CHECK(d >= 0);
    CHECK(d <= kPi * kEarthRadiusKm * (1 + 1e-12));
    CHECK(d == doctest::Approx(haversine(q, p)).epsilon(1e-12));
  }
}

TEST_CASE("simple distance") {
  const GeoPoint p{19.37, -99.18};
  CHECK(simple_dist(p, p) == 0);
  CHECK(simple_dist({0, 0}, {0, 1}) == doctest::Approx(kPi / 180 * 6378.4));
  CHECK(simple_dist({0, 0}, {0, 1}) == doctest::Approx(111.32).epsilon(1e-4));
  CHECK(simple_dist({0, 0}, {3, 4}, Norm::l1) == doctest::Approx(7 * kPi / 180 * 6378.4));
  const GeoPoint a{19.37, -99.18}, b{19.40, -99.10};
  // Near the equator-ish latitudes the planar formula overstates east-west distance by about 1/cos(lat).
  const double h = haversine(a, b), s = simple_dist(a, b);
  CHECK(std::abs(s - h) / h < 0.06);
  CHECK(simple_dist(a, b) == simple_dist(b, a));
}

namespace {
TripRecord trip(GeoPoint p, GeoPoint q, double ratio) {
  TripRecord t;
  t.pickup = p;
  t.dropoff = q;
  t.recorded_km = ratio * haversine(p, q);
  return t;
}
}  // namespace

TEST_CASE("detour factor") {
  std::vector<TripRecord> same;
  for (int i = 0; i < 5; ++i) same.push_back(trip({19.3 + 0.01 * i, -99.2}, {19.4, -99.1 + 0.01 * i}, 1.0));
  const auto one = detour_factor(same);
  CHECK(one.factor == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.outliers.empty());
  CHECK(one.inliers == 5);

  std::vector<TripRecord> four{trip({19.3, -99.2}, {19.35, -99.1}, 1.2), trip({19.31, -99.2}, {19.37, -99.11}, 1.4),
                               trip({19.32, -99.2}, {19.39, -99.12}, 2.0), trip({19.33, -99.2}, {19.41, -99.13}, 5.0)};
  const auto r = detour_factor(four);
  CHECK(r.factor == doctest::Approx((1.2 + 1.4 + 2.0) / 3).epsilon(1e-12));
  REQUIRE(r.outliers.size() == 1);
  CHECK(r.outliers[0] == 3);

  auto shuffled = four;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(detour_factor(shuffled).factor == doctest::Approx(r.factor).epsilon(1e-15));
}

TEST_CASE("detour factor edge cases") {
  std::vector<TripRecord> t{trip({19.3, -99.2}, {19.35, -99.1}, 1.5)};
  TripRecord zero;
  zero.pickup = zero.dropoff = {19.3, -99.2};
  zero.recorded_km = 2.0;
  t.push_back(zero);
  const auto r = detour_factor(t);
  CHECK(r.factor == doctest::Approx(1.5));
  CHECK(r.outliers == std::vector<std::size_t>{1});

  CHECK_THROWS(detour_factor(std::vector<TripRecord>{}));
  CHECK_THROWS(detour_factor(std::vector<TripRecord>{trip({19.3, -99.2}, {19.35, -99.1}, 4.0)}));
}

TEST_CASE("repair outliers") {
  std::vector<TripRecord> none{trip({19.3, -99.2}, {19.35, -99.1}, 1.2)};
  const auto same = repair_outliers(none, 1.5);
  CHECK(same[0].recorded_km == none[0].recorded_km);

  TripRecord t;
  t.pickup = {0, 0};
  t.dropoff = {0, 0.1};
  const double dh = haversine(t.pickup, t.dropoff);
  t.recorded_km = 10 * dh;
  const auto fixed = repair_outliers(std::vector<TripRecord>{t}, 1.5);
  CHECK(fixed[0].recorded_km == doctest::Approx(1.5 * dh));
}

TEST_CASE("repairing lowers the mean ratio") {
  Rng rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<TripRecord> trips;
    for (int i = 0; i < 20; ++i)
      trips.push_back(trip({19 + rng.uniform_open(), -99.5 + rng.uniform_open()},
                           {19 + rng.uniform_open(), -99.5 + rng.uniform_open()}, 1 + 6 * rng.uniform_open()));
    const auto df = detour_factor(trips);
    auto mean_ratio = [](const std::vector<TripRecord>& v) {
      double s = 0;
      for (const auto& t : v) s += t.recorded_km / haversine(t.pickup, t.dropoff);
      return s / static_cast<double>(v.size());
    };
    const auto repaired = repair_outliers(trips, df.factor);
    if (!df.outliers.empty()) CHECK(mean_ratio(repaired) <= mean_ratio(trips));
  }
}
