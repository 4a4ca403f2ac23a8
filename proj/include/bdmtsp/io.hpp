#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bdmtsp/core.hpp"
#include "bdmtsp/geometry.hpp"

namespace bdmtsp {

/// Everything read from a TSPLIB/CVRPLIB file that the tools care about.
struct TsplibFile {
  std::string name;
  std::string type;               // TSP, CVRP, ATSP ...
  std::string edge_weight_type;   // EUC_2D or EXPLICIT
  std::string edge_weight_format; // FULL_MATRIX, LOWER_ROW, ... (EXPLICIT only)
  std::optional<std::vector<Point2>> coords;
  std::optional<DistanceMatrix> matrix;
  std::vector<double> demands;    // per node, empty without DEMAND_SECTION
  std::optional<double> capacity;
  NodeIndex depot = 0;
};

TsplibFile read_tsplib(std::string_view text);

/// EUC_2D (unrounded Euclidean) or EXPLICIT edge weights as a routing instance;
/// node order is kept as reveal order.
RoutingInstance parse_tsplib(std::string_view text);
RoutingInstance load_tsplib(const std::string& path);

/// EUC_2D when the instance is coordinate-based, EXPLICIT FULL_MATRIX otherwise.
std::string serialize_tsplib(const RoutingInstance& instance);

std::string read_text_file(const std::string& path);

struct RawCvrpInstance {
  std::string name;
  std::vector<Point2> coords;
  std::optional<DistanceMatrix> matrix;
  std::vector<double> demands;  // per node, depot entry ignored
  double capacity = 0;          // q*
  NodeIndex depot = 0;
};

RawCvrpInstance raw_cvrp_from_tsplib(const TsplibFile& f);

enum class ConversionMode { fisher, xxl };

struct FisherScenario {
  std::size_t vehicles = 0;        // m
  std::size_t customer_limit = 0;  // L
};

struct ConvertedInstance {
  RoutingInstance instance;        // depot at node 0, customers in reveal order
  Fleet fleet;
  std::vector<NodeIndex> original;  // original[new node] = node in the raw instance
};

/// Unitary-demand conversion. xxl: m = ⌊1.05·Σq/q*⌋ and Q = ⌈customers/m⌉.
/// fisher: m and L from the scenario, customers permuted by `seed` (0 keeps
/// the file order).
ConvertedInstance cvrp_to_bdmtsp(const RawCvrpInstance& raw, ConversionMode mode,
                                 std::uint64_t seed = 0,
                                 std::optional<FisherScenario> scenario = std::nullopt);

std::size_t xxl_vehicle_count(std::span<const double> customer_demands, double capacity);

struct TaxiFilters {
  double max_wait_min = 90;
  double max_duration_min = 180;
  double max_distance_km = 100;
  double pickup_lat_min = 19;
  double pickup_lat_max = 20;
  double pickup_lon_below = -98;  // strict
};

/// Column names and unit scales of the trip CSV. Defaults follow the public
/// Mexico City taxi trip dump (seconds and meters).
struct TaxiSchema {
  std::string pickup_lat = "pickup_latitude";
  std::string pickup_lon = "pickup_longitude";
  std::string dropoff_lat = "dropoff_latitude";
  std::string dropoff_lon = "dropoff_longitude";
  std::string timestamp = "pickup_datetime";
  std::string duration = "trip_duration";
  std::string distance = "dist_meters";
  std::string wait = "wait_sec";
  double duration_to_min = 1.0 / 60.0;
  double distance_to_km = 1.0 / 1000.0;
  double wait_to_min = 1.0 / 60.0;
};

struct TaxiLoad {
  std::vector<TripRecord> trips;
  std::size_t rows = 0;
  std::size_t malformed = 0;
  std::size_t dropped_wait = 0;
  std::size_t dropped_duration = 0;
  std::size_t dropped_distance = 0;
  std::size_t dropped_area = 0;
  std::size_t kept() const noexcept { return trips.size(); }
};

/// Keeps rows passing every filter. A row failing several filters is counted
/// under the first failed one in the order wait, duration, distance, area.
TaxiLoad load_taxi_csv(std::string_view text, const TaxiFilters& filters = {},
                       const TaxiSchema& schema = {});

bool passes(const TripRecord& trip, const TaxiFilters& filters);

/// "YYYY-MM-DD HH:MM[:SS]" (also with 'T') to seconds since the epoch, UTC.
std::optional<long long> parse_timestamp(std::string_view text);

inline constexpr GeoPoint kTaxiDepot{19.3702, -99.1799};

struct TaxiInstance {
  RoutingInstance instance;      // node 0 depot, node k = k-th trip by time
  std::vector<TripRecord> trips; // timestamp order, ties by input order
  double internal_total = 0;     // L_i, recorded trip distances
};

/// (0,k) = dist(depot, pickup_k), (j,k) = dist(dropoff_j, pickup_k),
/// (j,0) = dist(dropoff_j, depot).
TaxiInstance trips_to_instance(std::vector<TripRecord> trips, GeoPoint depot = kTaxiDepot,
                               GeoDistance kind = GeoDistance::haversine);

}  // namespace bdmtsp
