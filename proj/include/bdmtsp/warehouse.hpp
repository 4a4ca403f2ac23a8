#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bdmtsp/core.hpp"

namespace bdmtsp {

/// Storage locations joined by undirected aisle segments (lengths in meters).
class WarehouseNetwork {
 public:
  struct Arc {
    std::size_t to;
    double length;
  };

  std::size_t add_node(const std::string& id, Point2 position = {});
  void add_edge(const std::string& a, const std::string& b, double length);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  bool contains(const std::string& id) const { return index_.contains(id); }
  std::size_t index_of(const std::string& id) const;
  const std::string& id_of(std::size_t idx) const { return ids_.at(idx); }
  Point2 position(std::size_t idx) const { return pos_.at(idx); }
  const std::vector<Arc>& arcs(std::size_t idx) const { return adj_.at(idx); }

  bool is_connected() const;

 private:
  std::vector<std::string> ids_;
  std::vector<Point2> pos_;
  std::vector<std::vector<Arc>> adj_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t edges_ = 0;
};

inline constexpr std::size_t kNoPredecessor = static_cast<std::size_t>(-1);

struct ShortestPathTree {
  std::size_t source = 0;
  std::vector<double> dist;  // +inf when unreachable
  std::vector<std::size_t> pred;
};

/// Single-source Dijkstra with a binary-heap frontier.
ShortestPathTree dijkstra(const WarehouseNetwork& net, std::size_t source);

/// Length of a shortest a→b path. Throws on unknown ids or disconnected pairs.
double shortest_path(const WarehouseNetwork& net, const std::string& a, const std::string& b);

/// Node indices of a shortest path from the tree's source to `target`.
std::vector<std::size_t> path_to(const ShortestPathTree& tree, std::size_t target);

struct TransferJob {
  std::string id;
  std::string source;
  std::string dest;
  double internal_len = 0.0;  // shortest source→dest path
};

struct WarehouseInstance {
  RoutingInstance instance;         // node 0 = depot, node k = job k
  std::vector<TransferJob> jobs;    // internal_len filled in
  std::string depot;
  double internal_total = 0.0;      // L_i
};

/// Builds the asymmetric logical-node instance:
/// (0,k) = sp(depot, source_k), (j,k) = sp(dest_j, source_k), (j,0) = sp(dest_j, depot).
/// Shortest-path trees are computed per distinct source node, in parallel.
WarehouseInstance jobs_to_instance(const WarehouseNetwork& net, std::vector<TransferJob> jobs,
                                   const std::string& depot, std::size_t threads = 0);

struct TopologicalWalk {
  std::vector<std::size_t> nodes;  // network node indices, consecutive nodes adjacent
  double length = 0.0;             // sum of traversed edge lengths
};

/// Expands a logical route (depot, job, job, ...) into the physical walk through
/// the network, including each job's internal transfer path.
TopologicalWalk expand_route(const WarehouseNetwork& net, const WarehouseInstance& wi,
                             const std::vector<NodeIndex>& route, bool closed);

struct AisleSpec {
  double spacing = 1.0;            // between neighbouring aisle intersections
  std::size_t shelves_per_node = 0;
  double shelf_offset = 0.5;       // edge length intersection→shelf
};

/// rows×cols rectilinear aisle grid. Intersections are "A<r>_<c>", shelves
/// "S<r>_<c>_<s>". Node count rows·cols·(1+shelves); edge count
/// rows·(cols−1) + cols·(rows−1) + rows·cols·shelves.
WarehouseNetwork grid_network(std::size_t rows, std::size_t cols, const AisleSpec& spec = {});

/// Layout text: "NODE <id> <x> <y>" and "EDGE <a> <b> <length>" lines; '#' comments.
WarehouseNetwork parse_layout(std::string_view text);
std::string format_layout(const WarehouseNetwork& net);

/// Job CSV with header id,source,dest.
std::vector<TransferJob> parse_jobs_csv(std::string_view text);

/// Transfer utilisation as tabulated: #jobs / #storage locations.
double transfer_utilisation(std::size_t jobs, std::size_t storage_locations);

}  // namespace bdmtsp
