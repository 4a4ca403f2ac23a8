#include "bdmtsp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdmtsp {

namespace {

constexpr double kDegToRad = kPi / 180.0;

double ratio_of(const TripRecord& t, GeoDistance kind, bool& defined) {
  const double geo = geo_distance(t.pickup, t.dropoff, kind);
  if (geo > 0.0) {
    defined = true;
    return t.recorded_km / geo;
  }
  defined = t.recorded_km > 0.0;
  return defined ? INFINITY : 0.0;
}

}  // namespace

double euclid(Point2 p, Point2 q) noexcept {
  return std::hypot(p.x - q.x, p.y - q.y);
}

double haversine(GeoPoint p, GeoPoint q) noexcept {
  const double dlat = kDegToRad * (q.lat - p.lat);
  const double dlon = kDegToRad * (q.lon - p.lon);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  double alpha = s1 * s1 + std::cos(kDegToRad * p.lat) * std::cos(kDegToRad * q.lat) * s2 * s2;
  alpha = std::min(1.0, std::max(0.0, alpha));
  return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(alpha), std::sqrt(1.0 - alpha));
}

double simple_dist(GeoPoint p, GeoPoint q, Norm norm) noexcept {
  const double dlat = p.lat - q.lat;
  const double dlon = p.lon - q.lon;
  const double len = norm == Norm::l2 ? std::hypot(dlat, dlon) : std::abs(dlat) + std::abs(dlon);
  return kDegToRad * kEarthRadiusKm * len;
}

double geo_distance(GeoPoint p, GeoPoint q, GeoDistance kind) noexcept {
  switch (kind) {
    case GeoDistance::haversine: return haversine(p, q);
    case GeoDistance::simple_l2: return simple_dist(p, q, Norm::l2);
    case GeoDistance::simple_l1: return simple_dist(p, q, Norm::l1);
  }
  return haversine(p, q);
}

DetourResult detour_factor(std::span<const TripRecord> trips, double outlier_ratio,
                           GeoDistance kind) {
  if (trips.empty()) throw std::invalid_argument("detour_factor: no trips");
  DetourResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    bool defined = false;
    const double r = ratio_of(trips[i], kind, defined);
    if (!defined) continue;
    if (r > outlier_ratio) {
      out.outliers.push_back(i);
    } else {
      sum += r;
      ++out.inliers;
    }
  }
  if (out.inliers == 0) throw std::invalid_argument("detour_factor: every trip is an outlier");
  out.factor = sum / static_cast<double>(out.inliers);
  return out;
}

std::vector<TripRecord> repair_outliers(std::span<const TripRecord> trips, double factor,
                                        double outlier_ratio, GeoDistance kind) {
  if (!(factor > 0.0)) throw std::invalid_argument("repair_outliers: factor must be positive");
  std::vector<TripRecord> out(trips.begin(), trips.end());
  for (auto& t : out) {
    bool defined = false;
    const double r = ratio_of(t, kind, defined);
    if (defined && r > outlier_ratio) t.recorded_km = factor * geo_distance(t.pickup, t.dropoff, kind);
  }
  return out;
}

}  // namespace bdmtsp
