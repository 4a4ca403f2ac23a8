#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdmtsp/cam.hpp"
#include "bdmtsp/core.hpp"
#include "bdmtsp/solvers.hpp"

namespace bdmtsp {

/// n points i.i.d. uniform on the open unit square; node 0 is the depot.
RoutingInstance gen_uniform(std::size_t n, std::uint64_t seed);

/// Seed of replication `rep` of configuration `config` within a sweep.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t config, std::size_t rep);

struct SweepSpec {
  std::vector<cam::Configuration> configs = cam::sweep_configs();
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::avh;
  bool closed = true;
  bool compare_cvh = false;  // also run BD-CVH on every instance
  std::size_t threads = 0;   // 0 = hardware concurrency
};

struct SweepRow {
  cam::Configuration config;
  double mean_len = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::optional<double> mean_cvh_len;
  std::optional<double> mean_rel_diff;  // mean over reps of (L_cvh − L_avh)/L_avh
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool closed = true;
};

/// Configuration n is the node count of the generated instance (depot included),
/// d the absolute dynamics, m the fleet size.
double sweep_run(const cam::Configuration& c, std::uint64_t instance_seed, Algorithm algorithm, bool closed);

SweepResult run_sweep(const SweepSpec& spec);

std::string sweep_to_csv(const SweepResult& r);
SweepResult sweep_from_csv(const std::string& text);

/// Sweep as regression data.
std::vector<cam::Configuration> sweep_inputs(const SweepResult& r);
Eigen::VectorXd sweep_response(const SweepResult& r);

struct PublishedCell {
  Algorithm algorithm;
  std::size_t m;
  std::string scope;     // DynamicsScope text
  double value;          // published total
  double precision;      // unit of the last printed digit
};

struct PublishedTable {
  std::string id;
  std::string instance;  // file stem, looked up as <data_dir>/<instance>.tsp
  std::vector<PublishedCell> cells;
};

const std::vector<PublishedTable>& published_tables();

struct ReproducedCell {
  PublishedCell published;
  long long resolved_da = 0;
  double closed_len = 0;
  double open_len = 0;
  double rel_err_closed = 0;
  double rel_err_open = 0;
};

struct HardCheck {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ReproductionReport {
  std::string table_id;
  std::vector<std::string> missing_files;
  std::vector<ReproducedCell> cells;
  std::vector<HardCheck> checks;
  bool ok() const;
};

/// table_id is a catalogue id or "all". Unknown ids throw.
ReproductionReport reproduce_table(const std::string& table_id, const std::string& data_dir);

std::string format_report(const ReproductionReport& r);

/// Batch run description read from JSON.
struct ExperimentSpec {
  std::optional<std::string> instance_file;
  std::size_t uniform_n = 0;  // used when instance_file is absent
  std::size_t m = 1;
  std::optional<std::size_t> capacity;
  std::vector<std::string> scopes{"abs:1"};
  std::vector<Algorithm> algorithms{Algorithm::avh};
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  bool closed = true;
  bool permute = false;  // shuffle reveal order of file instances per replication
  std::optional<std::string> output_json;
  std::optional<std::string> output_csv;
};

ExperimentSpec experiment_from_json(const std::string& text);

struct ExperimentRow {
  std::string scope;
  long long resolved_da = 0;
  Algorithm algorithm = Algorithm::avh;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double total_len = 0;
  std::vector<std::size_t> counts;
};

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);
std::string experiment_to_json(const std::vector<ExperimentRow>& rows);
std::string experiment_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace bdmtsp
