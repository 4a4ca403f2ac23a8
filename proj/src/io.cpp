#include "bdmtsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "bdmtsp/rng.hpp"
#include "text_util.hpp"

namespace bdmtsp {

namespace {

using detail::split_ws;
using detail::trim;

bool starts_alpha(std::string_view s) {
  return !s.empty() && (std::isalpha(static_cast<unsigned char>(s.front())) != 0);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

DistanceMatrix explicit_matrix(const std::vector<double>& w, std::size_t n, const std::string& format) {
  DistanceMatrix d(n);
  std::size_t expected = 0;
  if (format == "FULL_MATRIX") expected = n * n;
  else if (format == "LOWER_ROW" || format == "UPPER_ROW") expected = n * (n - 1) / 2;
  else if (format == "LOWER_DIAG_ROW" || format == "UPPER_DIAG_ROW") expected = n * (n + 1) / 2;
  else throw std::invalid_argument("unsupported EDGE_WEIGHT_FORMAT '" + format + "'");
  if (w.size() != expected)
    throw std::invalid_argument("EDGE_WEIGHT_SECTION has " + std::to_string(w.size()) + " entries, " +
                                format + " with DIMENSION " + std::to_string(n) + " needs " +
                                std::to_string(expected));
  std::size_t k = 0;
  auto set = [&](std::size_t i, std::size_t j) {
    d(i, j) = w[k];
    d(j, i) = w[k];
    ++k;
  };
  if (format == "FULL_MATRIX") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = w[k++];
  } else if (format == "UPPER_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) set(i, j);
  } else if (format == "LOWER_ROW") {
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) set(i, j);
  } else if (format == "UPPER_DIAG_ROW") {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) set(i, j);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) set(i, j);
  }
  return d;
}

}  // namespace

TsplibFile read_tsplib(std::string_view text) {
  TsplibFile f;
  std::size_t dim = 0;
  enum class Section { header, coords, weights, demand, depot, done } sec = Section::header;
  std::vector<double> weights;
  std::vector<std::pair<std::size_t, Point2>> coord_rows;
  std::vector<std::pair<std::size_t, double>> demand_rows;
  std::optional<std::size_t> depot_id;

  std::size_t line_no = 0;
  for (auto raw : detail::split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "tsplib line " + std::to_string(line_no);

    if (starts_alpha(line)) {
      const auto colon = line.find(':');
      const std::string key = upper(trim(colon == std::string_view::npos ? line : line.substr(0, colon)));
      const std::string value(colon == std::string_view::npos ? std::string_view{} : trim(line.substr(colon + 1)));
      if (key == "EOF") { sec = Section::done; break; }
      if (key == "NODE_COORD_SECTION") { sec = Section::coords; continue; }
      if (key == "EDGE_WEIGHT_SECTION") { sec = Section::weights; continue; }
      if (key == "DEMAND_SECTION") { sec = Section::demand; continue; }
      if (key == "DEPOT_SECTION") { sec = Section::depot; continue; }
      if (key.ends_with("_SECTION")) throw std::invalid_argument(where + ": unsupported section " + key);
      sec = Section::header;
      if (key == "NAME") f.name = value;
      else if (key == "TYPE") f.type = upper(value);
      else if (key == "DIMENSION") dim = static_cast<std::size_t>(detail::to_int(value, "DIMENSION"));
      else if (key == "EDGE_WEIGHT_TYPE") f.edge_weight_type = upper(value);
      else if (key == "EDGE_WEIGHT_FORMAT") f.edge_weight_format = upper(value);
      else if (key == "CAPACITY") f.capacity = detail::to_double(value, "CAPACITY");
      continue;
    }

    const auto tok = split_ws(line);
    switch (sec) {
      case Section::coords:
        if (tok.size() < 3) throw std::invalid_argument(where + ": coordinate line needs id x y");
        coord_rows.emplace_back(static_cast<std::size_t>(detail::to_int(tok[0], "node id")),
                                Point2{detail::to_double(tok[1], "x"), detail::to_double(tok[2], "y")});
        break;
      case Section::weights:
        for (auto t : tok) weights.push_back(detail::to_double(t, "edge weight"));
        break;
      case Section::demand:
        if (tok.size() < 2) throw std::invalid_argument(where + ": demand line needs id q");
        demand_rows.emplace_back(static_cast<std::size_t>(detail::to_int(tok[0], "node id")),
                                 detail::to_double(tok[1], "demand"));
        break;
      case Section::depot:
        for (auto t : tok) {
          const auto v = detail::to_int(t, "depot");
          if (v >= 1 && !depot_id) depot_id = static_cast<std::size_t>(v);
        }
        break;
      default:
        throw std::invalid_argument(where + ": data outside of a section");
    }
  }

  if (dim < 2) throw std::invalid_argument("tsplib: DIMENSION missing or < 2");
  if (f.edge_weight_type.empty()) f.edge_weight_type = coord_rows.empty() ? "EXPLICIT" : "EUC_2D";

  if (!coord_rows.empty()) {
    if (coord_rows.size() != dim)
      throw std::invalid_argument("tsplib: " + std::to_string(coord_rows.size()) +
                                  " coordinates for DIMENSION " + std::to_string(dim));
    std::vector<Point2> c(dim);
    std::vector<char> seen(dim, 0);
    for (auto [id, p] : coord_rows) {
      if (id < 1 || id > dim || seen[id - 1]) throw std::invalid_argument("tsplib: bad or repeated node id");
      seen[id - 1] = 1;
      c[id - 1] = p;
    }
    f.coords = std::move(c);
  }
  if (f.edge_weight_type == "EXPLICIT") {
    if (f.edge_weight_format.empty()) f.edge_weight_format = "FULL_MATRIX";
    f.matrix = explicit_matrix(weights, dim, f.edge_weight_format);
  } else if (f.edge_weight_type == "EUC_2D") {
    if (!f.coords) throw std::invalid_argument("tsplib: EUC_2D without NODE_COORD_SECTION");
  } else {
    throw std::invalid_argument("unsupported EDGE_WEIGHT_TYPE '" + f.edge_weight_type + "'");
  }
  if (!demand_rows.empty()) {
    if (demand_rows.size() != dim) throw std::invalid_argument("tsplib: DEMAND_SECTION size differs from DIMENSION");
    f.demands.assign(dim, 0.0);
    for (auto [id, q] : demand_rows) {
      if (id < 1 || id > dim) throw std::invalid_argument("tsplib: bad demand node id");
      f.demands[id - 1] = q;
    }
  }
  if (depot_id) {
    if (*depot_id > dim) throw std::invalid_argument("tsplib: depot id out of range");
    f.depot = *depot_id - 1;
  }
  return f;
}

RoutingInstance parse_tsplib(std::string_view text) {
  auto f = read_tsplib(text);
  if (f.matrix) {
    if (f.coords)
      return RoutingInstance::from_coords_and_matrix(f.name, std::move(*f.coords), std::move(*f.matrix), f.depot);
    return RoutingInstance::from_matrix(f.name, std::move(*f.matrix), f.depot);
  }
  return RoutingInstance::from_coords(f.name, std::move(*f.coords), f.depot, Metric::euclid2d);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RoutingInstance load_tsplib(const std::string& path) { return parse_tsplib(read_text_file(path)); }

std::string serialize_tsplib(const RoutingInstance& inst) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t n = inst.size();
  os << "NAME : " << (inst.name().empty() ? "instance" : inst.name()) << '\n';
  const bool euclid = inst.coords() && !inst.matrix() && inst.metric() == Metric::euclid2d;
  os << "TYPE : " << (inst.matrix() && !inst.matrix()->is_symmetric() ? "ATSP" : "TSP") << '\n';
  os << "DIMENSION : " << n << '\n';
  if (euclid) {
    os << "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < n; ++i)
      os << i + 1 << ' ' << (*inst.coords())[i].x << ' ' << (*inst.coords())[i].y << '\n';
  } else {
    os << "EDGE_WEIGHT_TYPE : EXPLICIT\nEDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << inst.distance(i, j);
      os << '\n';
    }
  }
  if (inst.depot() != 0) os << "DEPOT_SECTION\n" << inst.depot() + 1 << "\n-1\n";
  os << "EOF\n";
  return os.str();
}

RawCvrpInstance raw_cvrp_from_tsplib(const TsplibFile& f) {
  RawCvrpInstance r;
  r.name = f.name;
  if (f.coords) r.coords = *f.coords;
  r.matrix = f.matrix;
  r.demands = f.demands;
  if (!f.capacity) throw std::invalid_argument("CVRP file without CAPACITY");
  r.capacity = *f.capacity;
  r.depot = f.depot;
  return r;
}

std::size_t xxl_vehicle_count(std::span<const double> customer_demands, double capacity) {
  if (!(capacity > 0)) throw std::invalid_argument("vehicle capacity q* must be positive");
  const double total = std::accumulate(customer_demands.begin(), customer_demands.end(), 0.0);
  // 1e-9 guards ratios that are integral in decimal, e.g. 1.05·100/21 = 5.
  const auto m = static_cast<long long>(std::floor(1.05 * total / capacity + 1e-9));
  if (m < 1) throw std::invalid_argument("vehicle count computes to 0");
  return static_cast<std::size_t>(m);
}

ConvertedInstance cvrp_to_bdmtsp(const RawCvrpInstance& raw, ConversionMode mode, std::uint64_t seed,
                                 std::optional<FisherScenario> scenario) {
  const std::size_t n = raw.matrix ? raw.matrix->size() : raw.coords.size();
  if (n < 2) throw std::invalid_argument("cvrp instance needs a depot and a customer");
  if (!(raw.capacity > 0)) throw std::invalid_argument("vehicle capacity q* must be positive");
  if (raw.depot >= n) throw std::invalid_argument("depot out of range");
  for (double q : raw.demands)
    if (q < 0) throw std::invalid_argument("negative demand");

  std::vector<NodeIndex> customers;
  for (NodeIndex i = 0; i < n; ++i)
    if (i != raw.depot) customers.push_back(i);

  std::size_t m = 0;
  std::size_t limit = 0;
  if (mode == ConversionMode::xxl) {
    std::vector<double> q;
    for (auto c : customers) q.push_back(raw.demands.empty() ? 1.0 : raw.demands.at(c));
    m = xxl_vehicle_count(q, raw.capacity);
    limit = (customers.size() + m - 1) / m;
  } else {
    if (!scenario || scenario->vehicles == 0)
      throw std::invalid_argument("fisher conversion needs the scenario vehicle count");
    m = scenario->vehicles;
    limit = scenario->customer_limit ? scenario->customer_limit : (customers.size() + m - 1) / m;
    if (seed != 0) {
      Rng rng(seed);
      rng.shuffle(std::span<NodeIndex>(customers));
    }
  }

  std::vector<NodeIndex> original{raw.depot};
  original.insert(original.end(), customers.begin(), customers.end());

  std::optional<std::vector<Point2>> coords;
  if (!raw.coords.empty()) {
    coords.emplace();
    for (auto o : original) coords->push_back(raw.coords.at(o));
  }
  std::optional<RoutingInstance> inst;
  if (raw.matrix) {
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = (*raw.matrix)(original[i], original[j]);
    inst = coords ? RoutingInstance::from_coords_and_matrix(raw.name, std::move(*coords), std::move(d), 0)
                  : RoutingInstance::from_matrix(raw.name, std::move(d), 0);
  } else {
    inst = RoutingInstance::from_coords(raw.name, std::move(*coords), 0, Metric::euclid2d);
  }
  return ConvertedInstance{std::move(*inst), Fleet(m, limit), std::move(original)};
}

std::optional<long long> parse_timestamp(std::string_view s) {
  s = trim(s);
  int v[6] = {0, 0, 0, 0, 0, 0};
  std::size_t pos = 0;
  const char seps[] = {'-', '-', ' ', ':', ':'};
  for (int k = 0; k < 6; ++k) {
    if (k > 0) {
      if (pos >= s.size()) {
        if (k >= 5) break;
        return std::nullopt;
      }
      const char want = seps[k - 1];
      const char got = s[pos];
      if (!(got == want || (want == ' ' && got == 'T'))) return std::nullopt;
      ++pos;
    }
    const std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == b) return std::nullopt;
    v[k] = static_cast<int>(detail::to_int(s.substr(b, pos - b), "timestamp"));
  }
  // Fractional seconds or a trailing zone marker are ignored.
  if (v[1] < 1 || v[1] > 12 || v[2] < 1 || v[2] > 31 || v[3] > 23 || v[4] > 59 || v[5] > 60) return std::nullopt;
  // days_from_civil (H. Hinnant)
  int y = v[0];
  const unsigned mth = static_cast<unsigned>(v[1]);
  y -= mth <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (mth + (mth > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(v[2]) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const long long days = static_cast<long long>(era) * 146097 + static_cast<long long>(doe) - 719468;
  return days * 86400 + v[3] * 3600LL + v[4] * 60LL + v[5];
}

bool passes(const TripRecord& t, const TaxiFilters& f) {
  return t.wait_min <= f.max_wait_min && t.duration_min <= f.max_duration_min &&
         t.recorded_km <= f.max_distance_km && t.pickup.lat >= f.pickup_lat_min &&
         t.pickup.lat <= f.pickup_lat_max && t.pickup.lon < f.pickup_lon_below;
}

TaxiLoad load_taxi_csv(std::string_view text, const TaxiFilters& filters, const TaxiSchema& schema) {
  const auto lines = detail::split_lines(text);
  TaxiLoad out;
  std::size_t li = 0;
  while (li < lines.size() && trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw std::invalid_argument("taxi CSV is empty");

  const auto header = detail::split_csv(lines[li++]);
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(header[i]), i);
  auto need = [&](const std::string& name) {
    const auto it = col.find(name);
    if (it == col.end()) throw std::invalid_argument("taxi CSV: missing column '" + name + "'");
    return it->second;
  };
  const std::size_t c_plat = need(schema.pickup_lat), c_plon = need(schema.pickup_lon),
                    c_dlat = need(schema.dropoff_lat), c_dlon = need(schema.dropoff_lon),
                    c_ts = need(schema.timestamp), c_dur = need(schema.duration),
                    c_dist = need(schema.distance), c_wait = need(schema.wait);
  const std::size_t width = std::max({c_plat, c_plon, c_dlat, c_dlon, c_ts, c_dur, c_dist, c_wait});

  for (; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    ++out.rows;
    const auto f = detail::split_csv(lines[li]);
    if (f.size() <= width) {
      ++out.malformed;
      continue;
    }
    TripRecord t;
    double dur = 0, dist = 0, wait = 0;
    const auto ts = parse_timestamp(f[c_ts]);
    if (!detail::parse_double(f[c_plat], t.pickup.lat) || !detail::parse_double(f[c_plon], t.pickup.lon) ||
        !detail::parse_double(f[c_dlat], t.dropoff.lat) || !detail::parse_double(f[c_dlon], t.dropoff.lon) ||
        !detail::parse_double(f[c_dur], dur) || !detail::parse_double(f[c_dist], dist) ||
        !detail::parse_double(f[c_wait], wait) || !ts || dur < 0 || dist < 0 || wait < 0 ||
        std::abs(t.pickup.lat) > 90 || std::abs(t.dropoff.lat) > 90 || std::abs(t.pickup.lon) > 180 ||
        std::abs(t.dropoff.lon) > 180) {
      ++out.malformed;
      continue;
    }
    t.duration_min = dur * schema.duration_to_min;
    t.recorded_km = dist * schema.distance_to_km;
    t.wait_min = wait * schema.wait_to_min;
    t.timestamp = std::string(trim(f[c_ts]));
    t.timestamp_sec = *ts;

    if (t.wait_min > filters.max_wait_min) ++out.dropped_wait;
    else if (t.duration_min > filters.max_duration_min) ++out.dropped_duration;
    else if (t.recorded_km > filters.max_distance_km) ++out.dropped_distance;
    else if (!passes(t, filters)) ++out.dropped_area;
    else out.trips.push_back(std::move(t));
  }
  return out;
}

TaxiInstance trips_to_instance(std::vector<TripRecord> trips, GeoPoint depot, GeoDistance kind) {
  if (trips.empty()) throw std::invalid_argument("trips_to_instance: no trips");
  std::stable_sort(trips.begin(), trips.end(),
                   [](const TripRecord& a, const TripRecord& b) { return a.timestamp_sec < b.timestamp_sec; });
  const std::size_t n = trips.size() + 1;
  DistanceMatrix d(n);
  double internal = 0;
  for (std::size_t k = 0; k < trips.size(); ++k) {
    internal += trips[k].recorded_km;
    d(0, k + 1) = geo_distance(depot, trips[k].pickup, kind);
    d(k + 1, 0) = geo_distance(trips[k].dropoff, depot, kind);
    for (std::size_t j = 0; j < trips.size(); ++j)
      if (j != k) d(k + 1, j + 1) = geo_distance(trips[k].dropoff, trips[j].pickup, kind);
  }
  std::vector<Point2> coords{{depot.lat, depot.lon}};
  for (const auto& t : trips) coords.push_back({t.pickup.lat, t.pickup.lon});
  auto inst = RoutingInstance::from_coords_and_matrix("taxi", std::move(coords), std::move(d), 0);
  return TaxiInstance{std::move(inst), std::move(trips), internal};
}

}  // namespace bdmtsp
