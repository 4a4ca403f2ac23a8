// bdmtsp: command line driver for the balanced dynamic mTSP solvers.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "bdmtsp/cam.hpp"
#include "bdmtsp/harness.hpp"
#include "bdmtsp/io.hpp"
#include "bdmtsp/rng.hpp"
#include "bdmtsp/solvers.hpp"
#include "bdmtsp/warehouse.hpp"
#include "json.hpp"

using namespace bdmtsp;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string join_counts(const std::vector<std::size_t>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s;
}

nlohmann::json routes_json(const RouteSet& rs) {
  nlohmann::json j;
  j["total_len"] = rs.total_len;
  j["closed"] = rs.closed;
  j["per_route_len"] = rs.per_route_len;
  j["routes"] = rs.routes;
  j["counts"] = rs.customer_counts();
  return j;
}

void print_routes(const RouteSet& rs, bool verbose) {
  std::cout << std::fixed << std::setprecision(3) << "total " << rs.total_len << (rs.closed ? " (closed)" : " (open)")
            << "  counts " << join_counts(rs.customer_counts()) << '\n';
  if (!verbose) return;
  for (std::size_t k = 0; k < rs.routes.size(); ++k) {
    std::cout << "  vehicle " << k << " len " << rs.per_route_len[k] << ":";
    for (auto v : rs.routes[k]) std::cout << ' ' << v;
    std::cout << '\n';
  }
}

struct Common {
  std::size_t m = 1;
  std::string scope = "abs:1";
  std::string algo = "avh";
  bool closed = true;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-m,--vehicles", c.m, "Fleet size")->check(CLI::PositiveNumber);
  sub->add_option("--scope", c.scope, "Dynamics scope: abs:N, mabs:X, rel:P%, mrel:P%, var:a,b,...");
  sub->add_option("--algo", c.algo, "cvh or avh");
  sub->add_flag("--closed,!--open", c.closed, "Count the return-to-depot legs (default on)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced dynamic multiple TSP solvers and experiment harness"};
  app.require_subcommand(1);

  // solve
  Common sc;
  std::string s_file, s_config, s_json;
  std::size_t s_uniform = 0;
  std::optional<std::size_t> s_capacity;
  bool s_verbose = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance with one scope and algorithm");
  add_common(solve_cmd, sc);
  solve_cmd->add_option("--instance", s_file, "TSPLIB file");
  solve_cmd->add_option("--uniform", s_uniform, "Generate n uniform nodes instead of reading a file");
  solve_cmd->add_option("--capacity", s_capacity, "Per-vehicle customer limit (default ceil((n-1)/m))");
  solve_cmd->add_option("--seed", sc.seed, "Uniform generator seed, or reveal-order permutation seed for files");
  solve_cmd->add_option("--config", s_config, "JSON experiment file (overrides the other options)");
  solve_cmd->add_option("--json", s_json, "Write result JSON here");
  solve_cmd->add_flag("-v,--verbose", s_verbose, "Print routes");

  // sweep
  SweepSpec sw;
  std::string sw_out = "sweep.csv", sw_algo = "avh";
  std::size_t sw_limit = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Uniform-instance configuration sweep (420 configurations)");
  sweep_cmd->add_option("--reps", sw.reps, "Replications per configuration")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sw.seed, "Base seed");
  sweep_cmd->add_option("--algo", sw_algo, "cvh or avh");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--limit", sw_limit, "Only the first N configurations");
  sweep_cmd->add_flag("--compare-cvh", sw.compare_cvh, "Also run BD-CVH and report the relative difference");
  sweep_cmd->add_flag("--closed,!--open", sw.closed, "Count the return-to-depot legs (default on)");
  sweep_cmd->add_option("-o,--out", sw_out, "CSV output");

  // cam-fit
  std::string cf_sweep, cf_out, cf_steps;
  std::optional<std::size_t> cf_features;
  auto* fit_cmd = app.add_subcommand("cam-fit", "Fit the 64-feature map and run backward selection");
  fit_cmd->add_option("--sweep", cf_sweep, "Sweep CSV")->required();
  fit_cmd->add_option("--features", cf_features, "Feature count of the exported model (default: BIC choice)");
  fit_cmd->add_option("-o,--out", cf_out, "Model JSON output");
  fit_cmd->add_option("--steps", cf_steps, "Per-step metrics CSV output");

  // cam-predict
  std::string cp_model = "published_3f";
  cam::Configuration cp_cfg{3, 100, 15};
  auto* pred_cmd = app.add_subcommand("cam-predict", "Predict the mean route length for a configuration");
  pred_cmd->add_option("--model", cp_model, "published_3f, published_9f, published_16f or a model JSON file");
  pred_cmd->add_option("-m,--vehicles", cp_cfg.m, "x1");
  pred_cmd->add_option("-n,--customers", cp_cfg.n, "x2");
  pred_cmd->add_option("-d,--dynamics", cp_cfg.d, "x3");

  // warehouse
  Common wc;
  std::string w_layout, w_jobs, w_grid = "4x6", w_depot;
  std::size_t w_shelves = 2, w_random = 0;
  double w_spacing = 1.0;
  bool w_verbose = false;
  auto* wh_cmd = app.add_subcommand("warehouse", "Transfer jobs on a warehouse network");
  add_common(wh_cmd, wc);
  wh_cmd->add_option("--layout", w_layout, "Layout file (NODE/EDGE lines)");
  wh_cmd->add_option("--grid", w_grid, "Synthetic grid RxC when no layout is given");
  wh_cmd->add_option("--shelves", w_shelves, "Shelves per aisle intersection of the synthetic grid");
  wh_cmd->add_option("--spacing", w_spacing, "Aisle spacing of the synthetic grid");
  wh_cmd->add_option("--jobs", w_jobs, "Job CSV (id,source,dest)");
  wh_cmd->add_option("--random-jobs", w_random, "Draw this many random jobs instead");
  wh_cmd->add_option("--seed", wc.seed, "Seed for random jobs");
  wh_cmd->add_option("--depot", w_depot, "Depot node id (default first node)");
  wh_cmd->add_flag("-v,--verbose", w_verbose, "Print expanded walks");

  // taxi
  Common tc;
  std::string t_csv, t_day;
  std::size_t t_limit = 0;
  std::string t_kind = "haversine";
  auto* taxi_cmd = app.add_subcommand("taxi", "Taxi trip log to BD-mTSP instance");
  add_common(taxi_cmd, tc);
  taxi_cmd->add_option("--csv", t_csv, "Trip CSV")->required();
  taxi_cmd->add_option("--day", t_day, "Keep trips whose timestamp starts with this date (YYYY-MM-DD)");
  taxi_cmd->add_option("--limit", t_limit, "Keep at most this many trips (after sorting by time)");
  taxi_cmd->add_option("--distance", t_kind, "haversine, simple or taxicab");

  // reproduce
  std::string r_table = "all";
  std::string r_data = BDMTSP_DATA_DIR;
  auto* rep_cmd = app.add_subcommand("reproduce", "Compare solver output with published table values");
  rep_cmd->add_option("--table", r_table, "berlin52-m5, eil51-mabs, eil51-rel or all");
  rep_cmd->add_option("--data-dir", r_data, "Directory holding <instance>.tsp files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      if (!s_config.empty()) {
        const auto spec = experiment_from_json(read_text_file(s_config));
        const auto rows = run_experiment(spec);
        if (spec.output_json) write_file(*spec.output_json, experiment_to_json(rows));
        if (spec.output_csv) write_file(*spec.output_csv, experiment_to_csv(rows));
        std::cout << experiment_to_csv(rows);
        return 0;
      }
      if (s_file.empty() && s_uniform == 0) throw std::invalid_argument("solve needs --instance or --uniform");
      const RoutingInstance inst = s_file.empty() ? gen_uniform(s_uniform, sc.seed) : load_tsplib(s_file);
      std::optional<std::vector<NodeIndex>> ordering;
      if (!s_file.empty() && sc.seed != 0) ordering = permuted_customers(inst, sc.seed);
      const auto scope = DynamicsScope::parse(sc.scope);
      const auto sched = build_schedule(scope, inst, sc.m, ordering);
      const auto algo = parse_algorithm(sc.algo);
      const auto rs = solve(algo, inst, Fleet(sc.m, s_capacity), sched, sc.closed);
      std::cout << inst.name() << " n=" << inst.size() << " m=" << sc.m << ' ' << to_string(algo) << ' '
                << scope.to_string();
      if (scope.kind() != ScopeKind::variable) std::cout << " (D_a=" << resolve_scope(scope, sc.m, inst.size()) << ")";
      std::cout << '\n';
      print_routes(rs, s_verbose);
      if (!s_json.empty()) write_file(s_json, routes_json(rs).dump(2));
      return 0;
    }

    if (sweep_cmd->parsed()) {
      sw.algorithm = parse_algorithm(sw_algo);
      if (sw_limit > 0 && sw_limit < sw.configs.size()) sw.configs.resize(sw_limit);
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = run_sweep(sw);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_file(sw_out, sweep_to_csv(r));
      std::cout << r.rows.size() << " configurations x " << sw.reps << " reps in " << std::fixed << std::setprecision(1)
                << secs << " s -> " << sw_out << '\n';
      if (sw.compare_cvh) {
        double s = 0;
        for (const auto& row : r.rows) s += *row.mean_rel_diff;
        std::cout << "mean (CVH-AVH)/AVH: " << std::setprecision(2) << 100 * s / static_cast<double>(r.rows.size())
                  << "%\n";
      }
      return 0;
    }

    if (fit_cmd->parsed()) {
      const auto sr = sweep_from_csv(read_text_file(cf_sweep));
      const auto cfgs = sweep_inputs(sr);
      const cam::FeatureMap fm;
      const auto X = cam::feature_matrix(cfgs, fm.terms());
      const auto y = sweep_response(sr);
      const auto steps = cam::backward_select(X, y, fm.terms());
      const auto rec = cam::recommend(steps);
      std::cout << "features  rmse_std  rmse_scaled mape%     cp        bic        adj_r2\n";
      for (const auto& s : steps)
        std::cout << std::setw(8) << s.stats.features << std::fixed << std::setprecision(4) << std::setw(10)
                  << s.stats.rmse_std << std::setw(12) << s.stats.rmse_scaled << std::setw(8) << std::setprecision(2)
                  << 100 * s.stats.mape << std::setw(10) << s.stats.cp << std::setw(11) << s.stats.bic
                  << std::setprecision(5) << std::setw(11) << s.stats.adj_r2 << '\n';
      std::cout << "recommended features: cp " << rec.by_cp << ", aic " << rec.by_aic << ", bic " << rec.by_bic
                << ", adj_r2 " << rec.by_adj_r2 << '\n';
      const std::size_t k = cf_features.value_or(rec.by_bic);
      if (k < 1 || k > steps.size()) throw std::invalid_argument("--features out of range");
      const auto& chosen = steps[k - 1].model;
      std::cout << k << "-feature model:\n";
      for (const auto& t : chosen.terms)
        std::cout << "  " << std::setw(22) << std::left << cam::term_label(t.powers) << std::right << std::scientific
                  << std::setprecision(5) << t.coef << '\n';
      if (!cf_out.empty()) write_file(cf_out, cam::model_to_json(chosen));
      if (!cf_steps.empty()) {
        std::ostringstream os;
        os << std::setprecision(10) << "features,sse,rmse_std,rmse_scaled,mape,cp,aic,bic,adj_r2\n";
        for (const auto& s : steps)
          os << s.stats.features << ',' << s.stats.sse << ',' << s.stats.rmse_std << ',' << s.stats.rmse_scaled << ','
             << s.stats.mape << ',' << s.stats.cp << ',' << s.stats.aic << ',' << s.stats.bic << ','
             << s.stats.adj_r2 << '\n';
        write_file(cf_steps, os.str());
      }
      return 0;
    }

    if (pred_cmd->parsed()) {
      cam::Model model;
      if (cp_model == "published_3f") model = cam::published_3f();
      else if (cp_model == "published_9f") model = cam::published_9f();
      else if (cp_model == "published_16f") model = cam::published_16f();
      else model = cam::model_from_json(read_text_file(cp_model));
      std::cout << std::fixed << std::setprecision(4) << cam::predict(model, cp_cfg) << '\n';
      return 0;
    }

    if (wh_cmd->parsed()) {
      WarehouseNetwork net;
      if (!w_layout.empty()) {
        net = parse_layout(read_text_file(w_layout));
      } else {
        const auto x = w_grid.find('x');
        if (x == std::string::npos) throw std::invalid_argument("--grid expects RxC");
        net = grid_network(std::stoul(w_grid.substr(0, x)), std::stoul(w_grid.substr(x + 1)),
                           AisleSpec{w_spacing, w_shelves, 0.5 * w_spacing});
      }
      if (!net.is_connected()) throw std::invalid_argument("warehouse network is not connected");
      std::vector<TransferJob> jobs;
      if (!w_jobs.empty()) {
        jobs = parse_jobs_csv(read_text_file(w_jobs));
      } else {
        if (w_random == 0) w_random = 10;
        Rng rng(wc.seed);
        for (std::size_t k = 0; k < w_random; ++k) {
          const auto a = rng.below(net.size());
          auto b = rng.below(net.size() - 1);
          if (b >= a) ++b;
          jobs.push_back({"J" + std::to_string(k + 1), net.id_of(a), net.id_of(b), 0.0});
        }
      }
      const std::string depot = w_depot.empty() ? net.id_of(0) : w_depot;
      const auto wi = jobs_to_instance(net, jobs, depot);
      const auto scope = DynamicsScope::parse(wc.scope);
      const auto rs = solve(parse_algorithm(wc.algo), wi.instance, Fleet(wc.m),
                            build_schedule(scope, wi.instance, wc.m), wc.closed);
      std::cout << std::fixed << std::setprecision(2) << "storage locations " << net.size() << ", jobs " << jobs.size()
                << ", utilisation " << 100 * transfer_utilisation(jobs.size(), net.size()) << "%\n"
                << "L_j " << rs.total_len << "  L_i " << wi.internal_total << "  L_j/L_i "
                << 100 * rs.total_len / wi.internal_total << "%  total " << rs.total_len + wi.internal_total << '\n';
      print_routes(rs, false);
      if (w_verbose)
        for (const auto& r : rs.routes) {
          const auto walk = expand_route(net, wi, r, wc.closed);
          std::cout << "  walk " << walk.length << ":";
          for (auto v : walk.nodes) std::cout << ' ' << net.id_of(v);
          std::cout << '\n';
        }
      return 0;
    }

    if (taxi_cmd->parsed()) {
      auto load = load_taxi_csv(read_text_file(t_csv));
      std::cout << "rows " << load.rows << ", malformed " << load.malformed << ", dropped wait " << load.dropped_wait
                << ", duration " << load.dropped_duration << ", distance " << load.dropped_distance << ", area "
                << load.dropped_area << ", kept " << load.kept() << '\n';
      GeoDistance kind = GeoDistance::haversine;
      if (t_kind == "simple") kind = GeoDistance::simple_l2;
      else if (t_kind == "taxicab") kind = GeoDistance::simple_l1;
      else if (t_kind != "haversine") throw std::invalid_argument("unknown --distance '" + t_kind + "'");
      const auto detour = detour_factor(load.trips, 3.0, kind);
      std::cout << std::fixed << std::setprecision(4) << "detour factor " << detour.factor << " (" << detour.outliers.size()
                << " outliers repaired)\n";
      auto trips = repair_outliers(load.trips, detour.factor, 3.0, kind);
      if (!t_day.empty())
        std::erase_if(trips, [&](const TripRecord& t) { return t.timestamp.rfind(t_day, 0) != 0; });
      auto ti = trips_to_instance(std::move(trips), kTaxiDepot, kind);
      if (t_limit > 0 && t_limit < ti.trips.size()) {
        ti.trips.resize(t_limit);
        ti = trips_to_instance(std::move(ti.trips), kTaxiDepot, kind);
      }
      const auto scope = DynamicsScope::parse(tc.scope);
      const auto rs = solve(parse_algorithm(tc.algo), ti.instance, Fleet(tc.m),
                            build_schedule(scope, ti.instance, tc.m), tc.closed);
      std::cout << std::setprecision(1) << ti.trips.size() << " trips, L_i " << ti.internal_total << " km, L_j "
                << rs.total_len << " km, total " << ti.internal_total + rs.total_len << " km\n";
      print_routes(rs, false);
      return 0;
    }

    if (rep_cmd->parsed()) {
      const auto report = reproduce_table(r_table, r_data);
      std::cout << format_report(report);
      return report.ok() && report.missing_files.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
