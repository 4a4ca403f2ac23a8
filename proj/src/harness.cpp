#include "bdmtsp/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "bdmtsp/io.hpp"
#include "bdmtsp/parallel.hpp"
#include "bdmtsp/rng.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace bdmtsp {

RoutingInstance gen_uniform(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_uniform: n must be >= 2");
  Rng rng(seed);
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p.x = rng.uniform_open();
    p.y = rng.uniform_open();
  }
  return RoutingInstance::from_coords("uniform-n" + std::to_string(n), std::move(pts), 0, Metric::euclid2d);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t config, std::size_t rep) {
  return derive_seed(seed, {config, rep});
}

double sweep_run(const cam::Configuration& c, std::uint64_t instance_seed, Algorithm algorithm, bool closed) {
  const auto n = static_cast<std::size_t>(c.n);
  const auto m = static_cast<std::size_t>(c.m);
  const auto inst = gen_uniform(n, instance_seed);
  const auto sched = build_schedule(DynamicsScope::absolute(static_cast<long long>(c.d)), inst, m);
  return solve(algorithm, inst, Fleet(m), sched, closed).total_len;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("sweep: reps must be >= 1");
  const std::size_t tasks = spec.configs.size() * spec.reps;
  std::vector<double> primary(tasks), cvh(tasks);
  parallel_for(tasks, spec.threads == 0 ? default_threads() : spec.threads, [&](std::size_t t) {
    const std::size_t ci = t / spec.reps, rep = t % spec.reps;
    const auto& c = spec.configs[ci];
    const auto s = replication_seed(spec.seed, ci, rep);
    try {
      primary[t] = sweep_run(c, s, spec.algorithm, spec.closed);
      if (spec.compare_cvh) cvh[t] = sweep_run(c, s, Algorithm::cvh, spec.closed);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "configuration (m=" << c.m << ", n=" << c.n << ", d=" << c.d << ") rep " << rep << ": " << e.what();
      throw std::runtime_error(os.str());
    }
  });

  SweepResult r;
  r.reps = spec.reps;
  r.seed = spec.seed;
  r.closed = spec.closed;
  for (std::size_t ci = 0; ci < spec.configs.size(); ++ci) {
    SweepRow row;
    row.config = spec.configs[ci];
    row.reps = spec.reps;
    row.seed = spec.seed;
    double sum = 0, sum_c = 0, sum_rel = 0;
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      const std::size_t t = ci * spec.reps + rep;
      sum += primary[t];
      if (spec.compare_cvh) {
        sum_c += cvh[t];
        sum_rel += relative_difference(primary[t], cvh[t]);
      }
    }
    const double k = static_cast<double>(spec.reps);
    row.mean_len = sum / k;
    if (spec.compare_cvh) {
      row.mean_cvh_len = sum_c / k;
      row.mean_rel_diff = sum_rel / k;
    }
    r.rows.push_back(row);
  }
  return r;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  const bool cmp = !r.rows.empty() && r.rows.front().mean_cvh_len.has_value();
  os << "m,n,d,mean_len,reps,seed";
  if (cmp) os << ",mean_cvh_len,mean_rel_diff";
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.config.m << ',' << row.config.n << ',' << row.config.d << ',' << row.mean_len << ','
       << row.reps << ',' << row.seed;
    if (cmp) os << ',' << row.mean_cvh_len.value_or(NAN) << ',' << row.mean_rel_diff.value_or(NAN);
    os << '\n';
  }
  return os.str();
}

SweepResult sweep_from_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  SweepResult r;
  bool header = true;
  std::vector<std::string> cols;
  auto idx = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return static_cast<int>(i);
    return -1;
  };
  int cm = -1, cn = -1, cd = -1, cy = -1, cr = -1, cs = -1, cc = -1, cx = -1;
  for (auto raw : lines) {
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    const auto f = detail::split_csv(line);
    if (header) {
      for (auto s : f) cols.emplace_back(s);
      cm = idx("m"), cn = idx("n"), cd = idx("d"), cy = idx("mean_len"), cr = idx("reps"), cs = idx("seed");
      cc = idx("mean_cvh_len"), cx = idx("mean_rel_diff");
      if (cm < 0 || cn < 0 || cd < 0 || cy < 0) throw std::invalid_argument("sweep CSV needs m,n,d,mean_len columns");
      header = false;
      continue;
    }
    if (f.size() < cols.size()) throw std::invalid_argument("sweep CSV: short row");
    SweepRow row;
    row.config = {detail::to_double(f[cm], "m"), detail::to_double(f[cn], "n"), detail::to_double(f[cd], "d")};
    row.mean_len = detail::to_double(f[cy], "mean_len");
    if (cr >= 0) row.reps = static_cast<std::size_t>(detail::to_int(f[cr], "reps"));
    if (cs >= 0) row.seed = static_cast<std::uint64_t>(detail::to_int(f[cs], "seed"));
    if (cc >= 0) row.mean_cvh_len = detail::to_double(f[cc], "mean_cvh_len");
    if (cx >= 0) row.mean_rel_diff = detail::to_double(f[cx], "mean_rel_diff");
    r.rows.push_back(row);
  }
  if (!r.rows.empty()) {
    r.reps = r.rows.front().reps;
    r.seed = r.rows.front().seed;
  }
  return r;
}

std::vector<cam::Configuration> sweep_inputs(const SweepResult& r) {
  std::vector<cam::Configuration> out;
  for (const auto& row : r.rows) out.push_back(row.config);
  return out;
}

Eigen::VectorXd sweep_response(const SweepResult& r) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(r.rows.size()));
  for (std::size_t i = 0; i < r.rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = r.rows[i].mean_len;
  return y;
}

namespace {

void add_row(PublishedTable& t, Algorithm a, std::size_t m, const std::vector<std::string>& scopes,
             const std::vector<double>& values, double precision) {
  for (std::size_t i = 0; i < scopes.size(); ++i) t.cells.push_back({a, m, scopes[i], values[i], precision});
}

std::vector<PublishedTable> make_catalogue() {
  std::vector<PublishedTable> out;
  const auto A = Algorithm::avh;
  const auto C = Algorithm::cvh;

  PublishedTable berlin{"berlin52-m5", "berlin52", {}};
  const std::vector<std::string> bs{"abs:1", "abs:3", "abs:4", "abs:5", "abs:10", "abs:15", "abs:51"};
  add_row(berlin, A, 5, bs, {16400, 22600, 22300, 25700, 17100, 15200, 13600}, 100);
  add_row(berlin, C, 5, bs, {16400, 23200, 22600, 26800, 18200, 15900, 13600}, 100);
  out.push_back(std::move(berlin));

  PublishedTable mabs{"eil51-mabs", "eil51", {}};
  const std::vector<std::string> ms{"mabs:0.5", "mabs:1", "mabs:1.5", "mabs:2", "mabs:4", "mabs:8"};
  add_row(mabs, A, 2, ms, {1251.6, 1374.8, 1124.8, 944.4, 717.7, 718.6}, 0.1);
  add_row(mabs, C, 2, ms, {1251.6, 1436.5, 1202.9, 1069.8, 717.7, 719.5}, 0.1);
  add_row(mabs, A, 3, ms, {1185.8, 1369.6, 957.6, 990.7, 886.0, 650.9}, 0.1);
  add_row(mabs, C, 3, ms, {1236.3, 1507.1, 966.6, 1007.7, 891.2, 664.0}, 0.1);
  add_row(mabs, A, 4, ms, {1143.4, 1224.5, 1057.4, 1002.6, 680.6, 784.6}, 0.1);
  add_row(mabs, C, 4, ms, {1116.9, 1269.7, 1075.9, 1064.9, 661.0, 705.6}, 0.1);
  add_row(mabs, A, 5, ms, {1194.4, 1236.7, 1117.5, 1036.4, 691.3, 725.5}, 0.1);
  add_row(mabs, C, 5, ms, {1304.5, 1319.9, 1121.7, 1019.1, 698.7, 748.3}, 0.1);
  out.push_back(std::move(mabs));

  PublishedTable rel{"eil51-rel", "eil51", {}};
  const std::vector<std::string> rs{"rel:2%", "rel:5%", "rel:7%", "rel:10%", "rel:20%", "rel:30%", "rel:100%"};
  add_row(rel, A, 2, rs, {1251.6, 1124.8, 944.4, 992.4, 831.7, 798.3, 609.2}, 0.1);
  add_row(rel, C, 2, rs, {1251.6, 1202.9, 1069.8, 1031.4, 792.4, 811.8, 605.0}, 0.1);
  add_row(rel, A, 3, rs, {1036.9, 1369.6, 1112.7, 957.6, 935.8, 892.0, 656.1}, 0.1);
  add_row(rel, C, 3, rs, {1036.9, 1507.1, 1168.5, 966.6, 983.9, 907.2, 622.0}, 0.1);
  add_row(rel, A, 4, rs, {1112.1, 1323.0, 1224.5, 1074.5, 912.0, 704.0, 689.1}, 0.1);
  add_row(rel, C, 4, rs, {1112.1, 1382.2, 1269.7, 1123.8, 1010.4, 716.6, 691.2}, 0.1);
  add_row(rel, A, 5, rs, {1036.7, 1194.4, 1192.0, 1236.7, 1036.4, 799.6, 725.4}, 0.1);
  add_row(rel, C, 5, rs, {1036.7, 1304.5, 1212.9, 1319.9, 1019.1, 852.4, 800.4}, 0.1);
  out.push_back(std::move(rel));
  return out;
}

struct HardRule {
  std::string table;
  std::size_t m;
  std::string scope;
  double target;
  double tolerance;
  bool either_closure;
};

const std::vector<HardRule>& hard_rules() {
  static const std::vector<HardRule> rules{
      {"berlin52-m5", 5, "abs:51", 13600, 0.02, true},
      {"eil51-mabs", 2, "mabs:0.5", 1251.6, 0.01, false},
  };
  return rules;
}

}  // namespace

const std::vector<PublishedTable>& published_tables() {
  static const std::vector<PublishedTable> tables = make_catalogue();
  return tables;
}

bool ReproductionReport::ok() const {
  if (!missing_files.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ReproductionReport reproduce_table(const std::string& table_id, const std::string& data_dir) {
  std::vector<const PublishedTable*> chosen;
  for (const auto& t : published_tables())
    if (table_id == "all" || t.id == table_id) chosen.push_back(&t);
  if (chosen.empty()) throw std::invalid_argument("unknown table '" + table_id + "'");

  ReproductionReport rep;
  rep.table_id = table_id;
  for (const auto* t : chosen) {
    const auto path = (std::filesystem::path(data_dir) / (t->instance + ".tsp")).string();
    if (!std::filesystem::exists(path)) {
      rep.missing_files.push_back(path);
      continue;
    }
    const auto inst = load_tsplib(path);
    for (const auto& cell : t->cells) {
      ReproducedCell rc;
      rc.published = cell;
      const auto scope = DynamicsScope::parse(cell.scope);
      rc.resolved_da = resolve_scope(scope, cell.m, inst.size());
      const auto sched = build_schedule(scope, inst, cell.m);
      const auto rs = solve(cell.algorithm, inst, Fleet(cell.m), sched, true);
      rc.closed_len = rs.total_len;
      rc.open_len = route_lengths(rs.routes, inst, false).total;
      rc.rel_err_closed = (rc.closed_len - cell.value) / cell.value;
      rc.rel_err_open = (rc.open_len - cell.value) / cell.value;
      rep.cells.push_back(rc);
    }
    for (const auto& rule : hard_rules()) {
      if (rule.table != t->id) continue;
      for (auto algo : {Algorithm::avh, Algorithm::cvh}) {
        for (const auto& rc : rep.cells) {
          if (rc.published.algorithm != algo || rc.published.m != rule.m || rc.published.scope != rule.scope)
            continue;
          const double ec = std::abs(rc.closed_len - rule.target) / rule.target;
          const double eo = std::abs(rc.open_len - rule.target) / rule.target;
          HardCheck hc;
          std::ostringstream label, detail;
          label << t->id << ' ' << to_string(algo) << " m=" << rule.m << ' ' << rule.scope << " within ±"
                << rule.tolerance * 100 << "% of " << rule.target;
          hc.label = label.str();
          hc.pass = ec <= rule.tolerance || (rule.either_closure && eo <= rule.tolerance);
          detail << std::fixed << std::setprecision(1) << "closed " << rc.closed_len << " (" << std::showpos
                 << 100 * (rc.closed_len - rule.target) / rule.target << "%)" << std::noshowpos << ", open "
                 << rc.open_len << " (" << std::showpos << 100 * (rc.open_len - rule.target) / rule.target
                 << "%)";
          hc.detail = detail.str();
          rep.checks.push_back(hc);
        }
      }
    }
  }
  return rep;
}

std::string format_report(const ReproductionReport& r) {
  std::ostringstream os;
  if (r.cells.empty() && r.missing_files.empty()) os << "no cells for table " << r.table_id << '\n';
  for (const auto& f : r.missing_files) os << "missing instance file: " << f << '\n';
  if (!r.cells.empty()) {
    os << std::left << std::setw(8) << "algo" << std::setw(4) << "m" << std::setw(10) << "scope" << std::right
       << std::setw(5) << "D_a" << std::setw(12) << "published" << std::setw(12) << "closed" << std::setw(9)
       << "err%" << std::setw(12) << "open" << std::setw(9) << "err%" << '\n';
    for (const auto& c : r.cells) {
      os << std::left << std::setw(8) << to_string(c.published.algorithm) << std::setw(4) << c.published.m
         << std::setw(10) << c.published.scope << std::right << std::setw(5) << c.resolved_da << std::fixed
         << std::setprecision(1) << std::setw(12) << c.published.value << std::setw(12) << c.closed_len
         << std::setw(9) << 100 * c.rel_err_closed << std::setw(12) << c.open_len << std::setw(9)
         << 100 * c.rel_err_open << '\n';
    }
  }
  for (const auto& h : r.checks) os << (h.pass ? "PASS " : "FAIL ") << h.label << ": " << h.detail << '\n';
  return os.str();
}

ExperimentSpec experiment_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentSpec s;
  const auto& inst = j.at("instance");
  if (inst.contains("file")) {
    s.instance_file = inst.at("file").get<std::string>();
  } else if (inst.contains("uniform")) {
    s.uniform_n = inst.at("uniform").at("n").get<std::size_t>();
  } else {
    throw std::invalid_argument("experiment: instance needs 'file' or 'uniform'");
  }
  s.m = j.value("m", std::size_t{1});
  if (j.contains("capacity") && !j.at("capacity").is_null()) s.capacity = j.at("capacity").get<std::size_t>();
  if (j.contains("scopes")) s.scopes = j.at("scopes").get<std::vector<std::string>>();
  if (j.contains("algorithms")) {
    s.algorithms.clear();
    for (const auto& a : j.at("algorithms")) s.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }
  s.reps = j.value("reps", std::size_t{1});
  s.seed = j.value("seed", std::uint64_t{1});
  s.closed = j.value("closed", true);
  s.permute = j.value("permute", false);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("json")) s.output_json = o.at("json").get<std::string>();
    if (o.contains("csv")) s.output_csv = o.at("csv").get<std::string>();
  }
  if (s.reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
  if (s.m < 1) throw std::invalid_argument("experiment: m must be >= 1");
  for (const auto& sc : s.scopes) (void)DynamicsScope::parse(sc);
  return s;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  std::optional<RoutingInstance> file_inst;
  if (spec.instance_file) file_inst = load_tsplib(*spec.instance_file);
  else if (spec.uniform_n < 2) throw std::invalid_argument("experiment: uniform n must be >= 2");

  std::vector<ExperimentRow> rows;
  for (std::size_t rep = 0; rep < spec.reps; ++rep) {
    const auto s = derive_seed(spec.seed, {rep});
    const RoutingInstance inst = file_inst ? *file_inst : gen_uniform(spec.uniform_n, s);
    std::optional<std::vector<NodeIndex>> ordering;
    if (file_inst && spec.permute) ordering = permuted_customers(inst, s);
    for (const auto& sc : spec.scopes) {
      const auto scope = DynamicsScope::parse(sc);
      const auto sched = build_schedule(scope, inst, spec.m, ordering);
      for (auto algo : spec.algorithms) {
        const auto rs = solve(algo, inst, Fleet(spec.m, spec.capacity), sched, spec.closed);
        ExperimentRow row;
        row.scope = sc;
        row.resolved_da = scope.kind() == ScopeKind::variable ? 0 : resolve_scope(scope, spec.m, inst.size());
        row.algorithm = algo;
        row.rep = rep;
        row.seed = s;
        row.total_len = rs.total_len;
        row.counts = rs.customer_counts();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string experiment_to_json(const std::vector<ExperimentRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"scope", r.scope},
                 {"d_a", r.resolved_da},
                 {"algorithm", to_string(r.algorithm)},
                 {"rep", r.rep},
                 {"seed", r.seed},
                 {"total_len", r.total_len},
                 {"counts", r.counts}});
  return j.dump(2);
}

std::string experiment_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(17) << "scope,d_a,algorithm,rep,seed,total_len\n";
  for (const auto& r : rows)
    os << r.scope << ',' << r.resolved_da << ',' << to_string(r.algorithm) << ',' << r.rep << ',' << r.seed << ','
       << r.total_len << '\n';
  return os.str();
}

}  // namespace bdmtsp
