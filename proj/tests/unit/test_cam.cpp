#include <cmath>

#include "bdmtsp/cam.hpp"
#include "bdmtsp/rng.hpp"
#include "doctest.h"

using namespace bdmtsp;
using namespace bdmtsp::cam;

TEST_CASE("feature map layout") {
  const FeatureMap fm;
  REQUIRE(fm.size() == 64);
  CHECK(fm.terms()[0] == PowerTriple{0, 0, 0});
  CHECK(fm.terms()[1] == PowerTriple{0, 0, 0.5});
  CHECK(fm.terms()[4] == PowerTriple{0, 0.5, 0});
  CHECK(fm.terms()[63] == PowerTriple{2, 2, 2});
  CHECK(term_label({0, 0, 0}) == "1");
  CHECK(term_label({0.5, 1, 2}) == "sqrt(x1)*x2*x3^2");
  CHECK(term_label({2, 1, 0}) == "x1^2*x2");
}

TEST_CASE("term values") {
  const Configuration c{5, 100, 25};
  CHECK(evaluate_term({0.5, 1, 1}, c) == doctest::Approx(std::sqrt(5.0) * 2500));
  CHECK(evaluate_term({0, 0, 0}, c) == 1);
  CHECK(evaluate_term({0, 0.5, 2}, c) == doctest::Approx(6250));
  const Configuration k{2, 50, 5};
  CHECK(evaluate_term({1, 1, 0.5}, k) == doctest::Approx(100 * std::sqrt(5.0)));
  CHECK(evaluate_term({2, 0, 1}, {2, 1, 150}) == 600);
  CHECK(evaluate_term({1, 1, 0}, Configuration{5, 50, 5}) == 250);
}

TEST_CASE("ols recovers exact linear data") {
  Eigen::MatrixXd X(6, 2);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = i + 1;
    X(i, 1) = (i * i) % 5 + 0.5;
    y(i) = 2 * X(i, 0) + 3 * X(i, 1);
  }
  const auto b = fit_ols(X, y);
  CHECK(b(0) == doctest::Approx(2).epsilon(1e-10));
  CHECK(b(1) == doctest::Approx(3).epsilon(1e-10));
  CHECK(fit_ols(X, Eigen::VectorXd::Zero(6)).norm() == 0);
}

TEST_CASE("ols matches a gradient descent fit") {
  Rng rng(17);
  Eigen::MatrixXd X(100, 5);
  Eigen::VectorXd y(100);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 5; ++j) X(i, j) = rng.uniform_open() - 0.5;
    y(i) = 1.5 * X(i, 0) - 2 * X(i, 3) + 0.3 * (rng.uniform_open() - 0.5);
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(5);
  const double step = 1.0 / (X.transpose() * X).eigenvalues().real().maxCoeff();
  for (int it = 0; it < 20000; ++it) b -= step * X.transpose() * (X * b - y);
  const auto ols = fit_ols(X, y);
  for (int j = 0; j < 5; ++j) CHECK(ols(j) == doctest::Approx(b(j)).epsilon(1e-8));
}

TEST_CASE("metrics") {
  Eigen::VectorXd y(2), yhat(2);
  y << 1, 1;
  yhat << 2, 0;
  const auto m = metrics(y, yhat, 1, 1.0);
  CHECK(m.sse == 2);
  CHECK(m.mape == doctest::Approx(1));
  CHECK(m.rmse_std == doctest::Approx(1));
  CHECK(m.rmse_scaled == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(m.cp == doctest::Approx(2.0 / 1.0 - 2 + 2 * 1));
  CHECK(m.features == 1);
}

TEST_CASE("backward selection") {
  Rng rng(5);
  Eigen::MatrixXd X(60, 5);
  Eigen::VectorXd y(60);
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 5; ++j) X(i, j) = rng.uniform_open();
    y(i) = 4 * X(i, 1) + 7 * X(i, 4) + 1e-3 * (rng.uniform_open() - 0.5);
  }
  const FeatureMap fm;
  std::vector<PowerTriple> terms(fm.terms().begin(), fm.terms().begin() + 5);
  const auto steps = backward_select(X, y, terms);
  REQUIRE(steps.size() == 5);
  for (std::size_t k = 0; k < steps.size(); ++k) CHECK(steps[k].kept.size() == k + 1);
  for (std::size_t k = 0; k + 1 < steps.size(); ++k) CHECK(steps[k].stats.sse >= steps[k + 1].stats.sse - 1e-12);
  CHECK(steps[1].kept == std::vector<std::size_t>{1, 4});
  const auto r = recommend(steps);
  CHECK(r.by_bic == 2);
}

TEST_CASE("published models") {
  const Configuration c{3, 100, 15};
  // Values computed independently from the printed coefficients.
  CHECK(predict(published_9f(), c) == doctest::Approx(19.84327977071543).epsilon(1e-12));
  CHECK(predict(published_16f(), c) == doctest::Approx(20.138610622213214).epsilon(1e-12));
  CHECK(predict(published_3f(), c) == doctest::Approx(18.847091595859208).epsilon(1e-12));
  CHECK(published_3f().terms.size() == 3);
  CHECK(published_9f().terms.size() == 9);
  CHECK(published_16f().terms.size() == 16);
  // Every 3f term carries x2.
  CHECK(predict(published_3f(), {4, 0, 20}) == 0);
}

TEST_CASE("sweep configurations") {
  const auto cfg = sweep_configs();
  REQUIRE(cfg.size() == 420);
  CHECK(cfg[0] == Configuration{1, 50, 5});
  CHECK(cfg[1] == Configuration{1, 50, 10});
  CHECK(cfg[6] == Configuration{1, 100, 5});
  CHECK(cfg[129] == Configuration{3, 100, 20});
  CHECK(cfg[419] == Configuration{7, 500, 30});
}

TEST_CASE("model json round-trip") {
  for (const auto& m : {published_3f(), published_9f(), published_16f()}) {
    const auto back = model_from_json(model_to_json(m));
    REQUIRE(back.terms.size() == m.terms.size());
    CHECK(back.provenance == m.provenance);
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
      CHECK(back.terms[i].powers == m.terms[i].powers);
      CHECK(back.terms[i].coef == m.terms[i].coef);
    }
  }
  CHECK_THROWS(model_from_json("{"));
}
