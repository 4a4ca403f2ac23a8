#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bdmtsp/core.hpp"

namespace bdmtsp {

inline constexpr double kEarthRadiusKm = 6378.4;
inline constexpr double kPi = 3.14159265358979323846;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct TripRecord {
  GeoPoint pickup;
  GeoPoint dropoff;
  double recorded_km = 0.0;
  double duration_min = 0.0;
  double wait_min = 0.0;
  std::string timestamp;        // as read, e.g. "2016-12-10 08:31:00"
  long long timestamp_sec = 0;  // seconds since 1970-01-01, for ordering
};

double euclid(Point2 p, Point2 q) noexcept;

/// Great-circle distance on a sphere of radius 6378.4 km.
double haversine(GeoPoint p, GeoPoint q) noexcept;

enum class Norm { l2, l1 };

/// Degree differences scaled to km: (π/180)·r·‖(Δlat, Δlon)‖.
double simple_dist(GeoPoint p, GeoPoint q, Norm norm = Norm::l2) noexcept;

enum class GeoDistance { haversine, simple_l2, simple_l1 };

double geo_distance(GeoPoint p, GeoPoint q, GeoDistance kind) noexcept;

struct DetourResult {
  double factor = 1.0;
  std::vector<std::size_t> outliers;  // ascending trip indices
  std::size_t inliers = 0;
};

/// Mean recorded/geometric ratio over trips whose ratio is ≤ outlier_ratio.
/// Trips with zero geometric distance and nonzero recorded distance count as
/// outliers; trips where both are zero carry no ratio and are skipped.
DetourResult detour_factor(std::span<const TripRecord> trips, double outlier_ratio = 3.0,
                           GeoDistance kind = GeoDistance::haversine);

/// Replaces each outlier's recorded distance by factor·geometric distance.
std::vector<TripRecord> repair_outliers(std::span<const TripRecord> trips, double factor,
                                        double outlier_ratio = 3.0,
                                        GeoDistance kind = GeoDistance::haversine);

}  // namespace bdmtsp
