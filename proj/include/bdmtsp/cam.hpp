#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bdmtsp::cam {

/// Base features: vehicles, customers, absolute dynamics.
struct Configuration {
  double m = 1;
  double n = 1;
  double d = 1;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct PowerTriple {
  double p1 = 0, p2 = 0, p3 = 0;
  friend bool operator==(const PowerTriple&, const PowerTriple&) = default;
};

/// Human-readable term such as "sqrt(x1)*x2*x3^2"; "1" for the intercept.
std::string term_label(const PowerTriple& t);

double evaluate_term(const PowerTriple& t, const Configuration& c);

/// All |P|³ power triples, lexicographic over (p1, p2, p3) with p3 varying fastest.
class FeatureMap {
 public:
  FeatureMap();  // powers {0, 1/2, 1, 2}
  explicit FeatureMap(std::vector<double> powers);

  const std::vector<double>& powers() const noexcept { return powers_; }
  const std::vector<PowerTriple>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

 private:
  std::vector<double> powers_;
  std::vector<PowerTriple> terms_;
};

Eigen::MatrixXd feature_matrix(std::span<const Configuration> configs,
                               std::span<const PowerTriple> terms);

/// Least squares via column-scaled complete orthogonal decomposition.
/// Rank-deficient systems get the minimum-norm solution in scaled coordinates.
Eigen::VectorXd fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct Metrics {
  double sse = 0;
  double rmse_std = 0;    // sqrt(SSE/n)
  double rmse_scaled = 0;  // sqrt(SSE)/n
  double mape = 0;        // fraction, not percent
  double cp = 0;
  double aic = 0;
  double bic = 0;
  double adj_r2 = 0;
  std::size_t features = 0;
};

/// sigma2 feeds Mallows' Cp; when absent SSE/(n−p) of this fit is used.
Metrics metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, std::size_t p,
                std::optional<double> sigma2 = std::nullopt);

enum class Provenance { fitted, published_3f, published_9f, published_16f };
std::string to_string(Provenance p);

struct Term {
  PowerTriple powers;
  double coef = 0;
};

struct Model {
  std::vector<Term> terms;
  Provenance provenance = Provenance::fitted;
  std::optional<Metrics> stats;
};

double predict(const Model& model, const Configuration& c);

/// 0.391·x2 − 0.055·x2·√x3 + 2.33e−4·x1·x2·x3 (the rounded closed form).
Model published_3f();
Model published_9f();
Model published_16f();

struct SelectionStep {
  std::vector<std::size_t> kept;  // column indices into the full matrix, ascending
  Model model;
  Metrics stats;
};

/// Greedy backward elimination from all columns down to one. Each step drops
/// the column whose removal gives the smallest refitted SSE (lowest index on
/// ties). Result is ordered by feature count, steps[k] has k+1 features.
std::vector<SelectionStep> backward_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           std::span<const PowerTriple> terms);

/// Step chosen by each criterion (feature counts).
struct Recommendation {
  std::size_t by_cp = 0, by_aic = 0, by_bic = 0, by_adj_r2 = 0;
};
Recommendation recommend(const std::vector<SelectionStep>& steps);

/// m ∈ 1..7, n ∈ 50..500 step 50, d ∈ 5..30 step 5; d varies fastest, then n.
std::vector<Configuration> sweep_configs();

std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

}  // namespace bdmtsp::cam
