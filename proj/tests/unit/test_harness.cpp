#include <filesystem>

#include "bdmtsp/harness.hpp"
#include "doctest.h"

using namespace bdmtsp;

TEST_CASE("uniform instances") {
  const auto a = gen_uniform(200, 7), b = gen_uniform(200, 7), c = gen_uniform(200, 8);
  REQUIRE(a.coords().has_value());
  CHECK(a.size() == 200);
  CHECK(a.depot() == 0);
  bool same = true, differ = false;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto p = (*a.coords())[i], q = (*b.coords())[i], r = (*c.coords())[i];
    same = same && p.x == q.x && p.y == q.y;
    differ = differ || p.x != r.x;
    CHECK(p.x > 0);
    CHECK(p.x < 1);
    CHECK(p.y > 0);
    CHECK(p.y < 1);
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("mean pairwise distance on the unit square") {
  const auto inst = gen_uniform(2000, 3);
  double s = 0;
  std::size_t k = 0;
  for (NodeIndex i = 0; i < 2000; ++i)
    for (NodeIndex j = i + 1; j < 2000; ++j, ++k) s += inst.distance(i, j);
  CHECK(s / double(k) == doctest::Approx(0.5214).epsilon(0.01));
}

TEST_CASE("one replication equals a direct solve") {
  SweepSpec spec;
  spec.configs = {{2, 30, 5}, {3, 50, 10}};
  spec.reps = 1;
  spec.seed = 4;
  const auto r = run_sweep(spec);
  REQUIRE(r.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& c = spec.configs[i];
    const auto inst = gen_uniform(std::size_t(c.n), replication_seed(4, i, 0));
    const auto sched = build_schedule(DynamicsScope::absolute((long long)c.d), inst, std::size_t(c.m));
    const auto rs = bd_avh(inst, Fleet(std::size_t(c.m)), sched, true);
    CHECK(r.rows[i].mean_len == doctest::Approx(rs.total_len).epsilon(1e-14));
    CHECK(sweep_run(c, replication_seed(4, i, 0), Algorithm::avh, true) == rs.total_len);
  }
}

TEST_CASE("sweep results do not depend on the thread count") {
  SweepSpec spec;
  spec.configs = {{1, 50, 5}, {4, 100, 10}, {7, 60, 30}};
  spec.reps = 3;
  spec.compare_cvh = true;
  spec.threads = 1;
  const auto one = run_sweep(spec);
  spec.threads = 4;
  const auto four = run_sweep(spec);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].mean_len == four.rows[i].mean_len);
    CHECK(one.rows[i].mean_rel_diff == four.rows[i].mean_rel_diff);
  }

  const auto back = sweep_from_csv(sweep_to_csv(one));
  REQUIRE(back.rows.size() == one.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(back.rows[i].config == one.rows[i].config);
    CHECK(back.rows[i].mean_len == one.rows[i].mean_len);
    REQUIRE(back.rows[i].mean_rel_diff.has_value());
    CHECK(*back.rows[i].mean_rel_diff == *one.rows[i].mean_rel_diff);
  }
  CHECK(sweep_inputs(one).size() == 3);
  CHECK(sweep_response(one).size() == 3);
}

TEST_CASE("reproduction reports missing files") {
  const auto dir = std::filesystem::temp_directory_path() / "bdmtsp_empty_data";
  std::filesystem::create_directories(dir);
  const auto r = reproduce_table("berlin52-m5", dir.string());
  CHECK_FALSE(r.ok());
  CHECK(r.missing_files.size() == 1);
  CHECK_THROWS(reproduce_table("nope", dir.string()));
}

TEST_CASE("experiment json") {
  const auto spec = experiment_from_json(R"({"instance": {"uniform": {"n": 21}}, "m": 3,
      "scopes": ["abs:2", "rel:50%"], "algorithms": ["avh", "cvh"], "reps": 2, "seed": 5})");
  CHECK(spec.uniform_n == 21);
  CHECK(spec.m == 3);
  CHECK(spec.scopes.size() == 2);
  const auto rows = run_experiment(spec);
  CHECK(rows.size() == 2 * 2 * 2);
  for (const auto& row : rows) {
    std::size_t total = 0;
    for (auto c : row.counts) total += c;
    CHECK(total == 20);
  }
  CHECK(rows.front().resolved_da == 2);
  CHECK(rows.back().resolved_da == 10);
  CHECK_THROWS(experiment_from_json(R"({"m": 2})"));
}
