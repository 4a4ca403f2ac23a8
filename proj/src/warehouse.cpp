#include "bdmtsp/warehouse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "bdmtsp/parallel.hpp"
#include "text_util.hpp"

namespace bdmtsp {

std::size_t WarehouseNetwork::add_node(const std::string& id, Point2 position) {
  if (index_.contains(id)) throw std::invalid_argument("duplicate node id '" + id + "'");
  const std::size_t idx = ids_.size();
  ids_.push_back(id);
  pos_.push_back(position);
  adj_.emplace_back();
  index_.emplace(id, idx);
  return idx;
}

void WarehouseNetwork::add_edge(const std::string& a, const std::string& b, double length) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("edge " + a + "-" + b + ": length must be positive");
  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);
  if (ia == ib) throw std::invalid_argument("self-loop on node '" + a + "'");
  adj_[ia].push_back({ib, length});
  adj_[ib].push_back({ia, length});
  ++edges_;
}

std::size_t WarehouseNetwork::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown storage location '" + id + "'");
  return it->second;
}

bool WarehouseNetwork::is_connected() const {
  if (ids_.empty()) return true;
  std::vector<char> seen(ids_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& a : adj_[v])
      if (!seen[a.to]) {
        seen[a.to] = 1;
        ++reached;
        stack.push_back(a.to);
      }
  }
  return reached == ids_.size();
}

ShortestPathTree dijkstra(const WarehouseNetwork& net, std::size_t source) {
  const std::size_t n = net.size();
  ShortestPathTree t;
  t.source = source;
  t.dist.assign(n, std::numeric_limits<double>::infinity());
  t.pred.assign(n, kNoPredecessor);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  t.dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > t.dist[v]) continue;
    for (const auto& a : net.arcs(v)) {
      const double nd = d + a.length;
      if (nd < t.dist[a.to]) {
        t.dist[a.to] = nd;
        t.pred[a.to] = v;
        heap.emplace(nd, a.to);
      }
    }
  }
  return t;
}

double shortest_path(const WarehouseNetwork& net, const std::string& a, const std::string& b) {
  const std::size_t ia = net.index_of(a);
  const std::size_t ib = net.index_of(b);
  if (ia == ib) return 0.0;
  const double d = dijkstra(net, ia).dist[ib];
  if (!std::isfinite(d)) throw std::runtime_error("no path between '" + a + "' and '" + b + "'");
  return d;
}

std::vector<std::size_t> path_to(const ShortestPathTree& tree, std::size_t target) {
  if (!std::isfinite(tree.dist.at(target))) throw std::runtime_error("target unreachable");
  std::vector<std::size_t> path;
  for (std::size_t v = target; v != kNoPredecessor; v = tree.pred[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Trees for each distinct node index, built in parallel.
std::map<std::size_t, ShortestPathTree> trees_for(const WarehouseNetwork& net,
                                                  std::vector<std::size_t> sources,
                                                  std::size_t threads) {
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  std::vector<ShortestPathTree> built(sources.size());
  parallel_for(sources.size(), threads == 0 ? default_threads() : threads,
               [&](std::size_t i) { built[i] = dijkstra(net, sources[i]); });
  std::map<std::size_t, ShortestPathTree> out;
  for (std::size_t i = 0; i < sources.size(); ++i) out.emplace(sources[i], std::move(built[i]));
  return out;
}

double reach(const ShortestPathTree& t, std::size_t target, const WarehouseNetwork& net) {
  const double d = t.dist[target];
  if (!std::isfinite(d))
    throw std::runtime_error("storage location '" + net.id_of(target) + "' unreachable from '" +
                             net.id_of(t.source) + "'");
  return d;
}

double arc_length(const WarehouseNetwork& net, std::size_t a, std::size_t b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : net.arcs(a))
    if (arc.to == b) best = std::min(best, arc.length);
  return best;
}

}  // namespace

WarehouseInstance jobs_to_instance(const WarehouseNetwork& net, std::vector<TransferJob> jobs,
                                   const std::string& depot, std::size_t threads) {
  if (jobs.empty()) throw std::invalid_argument("warehouse: no transfer jobs");
  const std::size_t depot_idx = net.index_of(depot);
  std::vector<std::size_t> src(jobs.size()), dst(jobs.size());
  std::vector<std::size_t> roots{depot_idx};
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    src[k] = net.index_of(jobs[k].source);
    dst[k] = net.index_of(jobs[k].dest);
    if (src[k] == dst[k]) throw std::invalid_argument("job '" + jobs[k].id + "': source equals destination");
    roots.push_back(dst[k]);
    roots.push_back(src[k]);
  }
  const auto trees = trees_for(net, roots, threads);

  const std::size_t n = jobs.size() + 1;
  DistanceMatrix d(n);
  const auto& from_depot = trees.at(depot_idx);
  double internal = 0.0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    jobs[k].internal_len = reach(trees.at(src[k]), dst[k], net);
    internal += jobs[k].internal_len;
    d(0, k + 1) = reach(from_depot, src[k], net);
    const auto& from_dest = trees.at(dst[k]);
    d(k + 1, 0) = reach(from_dest, depot_idx, net);
    for (std::size_t j = 0; j < jobs.size(); ++j)
      if (j != k) d(k + 1, j + 1) = reach(from_dest, src[j], net);
  }

  std::vector<Point2> coords;
  coords.push_back(net.position(depot_idx));
  for (std::size_t k = 0; k < jobs.size(); ++k) coords.push_back(net.position(src[k]));
  auto inst = RoutingInstance::from_coords_and_matrix("warehouse", std::move(coords), std::move(d), 0);
  return WarehouseInstance{std::move(inst), std::move(jobs), depot, internal};
}

TopologicalWalk expand_route(const WarehouseNetwork& net, const WarehouseInstance& wi,
                             const std::vector<NodeIndex>& route, bool closed) {
  TopologicalWalk walk;
  const std::size_t depot_idx = net.index_of(wi.depot);
  std::size_t at = depot_idx;
  walk.nodes.push_back(at);
  auto go = [&](std::size_t target) {
    const auto path = path_to(dijkstra(net, at), target);
    for (std::size_t i = 1; i < path.size(); ++i) {
      walk.length += arc_length(net, path[i - 1], path[i]);
      walk.nodes.push_back(path[i]);
    }
    at = target;
  };
  for (std::size_t i = 0; i < route.size(); ++i) {
    const NodeIndex logical = route[i];
    if (logical == 0) continue;
    const auto& job = wi.jobs.at(logical - 1);
    go(net.index_of(job.source));
    go(net.index_of(job.dest));
  }
  if (closed) go(depot_idx);
  return walk;
}

WarehouseNetwork grid_network(std::size_t rows, std::size_t cols, const AisleSpec& spec) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid_network: rows and cols must be >= 1");
  if (!(spec.spacing > 0.0) || !(spec.shelf_offset > 0.0))
    throw std::invalid_argument("grid_network: spacing and shelf offset must be positive");
  if (rows * cols * (1 + spec.shelves_per_node) < 2)
    throw std::invalid_argument("grid_network: layout has a single node");

  auto aisle = [](std::size_t r, std::size_t c) {
    return "A" + std::to_string(r) + "_" + std::to_string(c);
  };
  WarehouseNetwork net;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      net.add_node(aisle(r, c), {static_cast<double>(c) * spec.spacing, static_cast<double>(r) * spec.spacing});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) net.add_edge(aisle(r, c), aisle(r, c + 1), spec.spacing);
      if (r + 1 < rows) net.add_edge(aisle(r, c), aisle(r + 1, c), spec.spacing);
    }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t s = 0; s < spec.shelves_per_node; ++s) {
        const std::string id = "S" + std::to_string(r) + "_" + std::to_string(c) + "_" + std::to_string(s);
        const double side = (s % 2 == 0) ? 1.0 : -1.0;
        const Point2 base = net.position(net.index_of(aisle(r, c)));
        net.add_node(id, {base.x + side * spec.shelf_offset,
                          base.y + static_cast<double>(s / 2) * spec.shelf_offset});
        net.add_edge(aisle(r, c), id, spec.shelf_offset);
      }
  return net;
}

WarehouseNetwork parse_layout(std::string_view text) {
  WarehouseNetwork net;
  std::size_t line_no = 0;
  for (auto raw : detail::split_lines(text)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = detail::trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    const std::string where = "layout line " + std::to_string(line_no);
    if (tok[0] == "NODE" && (tok.size() == 4 || tok.size() == 2)) {
      Point2 p{};
      if (tok.size() == 4) p = {detail::to_double(tok[2], where.c_str()), detail::to_double(tok[3], where.c_str())};
      net.add_node(std::string(tok[1]), p);
    } else if (tok[0] == "EDGE" && tok.size() == 4) {
      net.add_edge(std::string(tok[1]), std::string(tok[2]), detail::to_double(tok[3], where.c_str()));
    } else {
      throw std::invalid_argument(where + ": expected NODE or EDGE record");
    }
  }
  return net;
}

std::string format_layout(const WarehouseNetwork& net) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < net.size(); ++i)
    os << "NODE " << net.id_of(i) << ' ' << net.position(i).x << ' ' << net.position(i).y << '\n';
  for (std::size_t i = 0; i < net.size(); ++i)
    for (const auto& a : net.arcs(i))
      if (i < a.to) os << "EDGE " << net.id_of(i) << ' ' << net.id_of(a.to) << ' ' << a.length << '\n';
  return os.str();
}

std::vector<TransferJob> parse_jobs_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::vector<TransferJob> jobs;
  bool header = true;
  int c_id = -1, c_src = -1, c_dst = -1;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = detail::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split_csv(line);
    if (header) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == "id") c_id = static_cast<int>(i);
        if (f[i] == "source") c_src = static_cast<int>(i);
        if (f[i] == "dest") c_dst = static_cast<int>(i);
      }
      if (c_id < 0 || c_src < 0 || c_dst < 0)
        throw std::invalid_argument("job CSV header must contain id,source,dest");
      header = false;
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max({c_id, c_src, c_dst}));
    if (f.size() <= need) throw std::invalid_argument("job CSV line " + std::to_string(ln + 1) + ": too few fields");
    jobs.push_back({std::string(f[c_id]), std::string(f[c_src]), std::string(f[c_dst]), 0.0});
  }
  if (header) throw std::invalid_argument("job CSV is empty");
  return jobs;
}

double transfer_utilisation(std::size_t jobs, std::size_t storage_locations) {
  if (storage_locations == 0) throw std::invalid_argument("no storage locations");
  return static_cast<double>(jobs) / static_cast<double>(storage_locations);
}

}  // namespace bdmtsp
