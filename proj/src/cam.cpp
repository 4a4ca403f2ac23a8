#include "bdmtsp/cam.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bdmtsp::cam {

namespace {

std::string factor(const char* name, double p) {
  if (p == 0.0) return {};
  if (p == 0.5) return std::string("sqrt(") + name + ")";
  if (p == 1.0) return name;
  std::ostringstream os;
  os << name << '^' << p;
  return os.str();
}

double power(double x, double p) {
  if (p == 0.0) return 1.0;
  if (p == 0.5) return std::sqrt(x);
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

}  // namespace

std::string term_label(const PowerTriple& t) {
  std::string out;
  for (auto f : {factor("x1", t.p1), factor("x2", t.p2), factor("x3", t.p3)}) {
    if (f.empty()) continue;
    if (!out.empty()) out += '*';
    out += f;
  }
  return out.empty() ? "1" : out;
}

double evaluate_term(const PowerTriple& t, const Configuration& c) {
  return power(c.m, t.p1) * power(c.n, t.p2) * power(c.d, t.p3);
}

FeatureMap::FeatureMap() : FeatureMap({0.0, 0.5, 1.0, 2.0}) {}

FeatureMap::FeatureMap(std::vector<double> powers) : powers_(std::move(powers)) {
  if (powers_.empty()) throw std::invalid_argument("feature map needs at least one power");
  for (double a : powers_)
    for (double b : powers_)
      for (double c : powers_) terms_.push_back({a, b, c});
}

Eigen::MatrixXd feature_matrix(std::span<const Configuration> configs,
                               std::span<const PowerTriple> terms) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(configs.size()), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate_term(terms[j], configs[i]);
  return X;
}

Eigen::VectorXd fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("fit_ols: empty design matrix");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_ols: row count differs from response length");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("fit_ols: non-finite input");
  if (X.rows() < X.cols()) throw std::invalid_argument("fit_ols: fewer rows than columns");

  Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Xs);
  return scale.cwiseInverse().asDiagonal() * cod.solve(y);
}

Metrics metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat, std::size_t p,
                std::optional<double> sigma2) {
  const auto n = static_cast<double>(y.size());
  if (y.size() != yhat.size()) throw std::invalid_argument("metrics: length mismatch");
  if (y.size() == 0 || static_cast<std::size_t>(y.size()) <= p)
    throw std::invalid_argument("metrics: need more observations than features");

  Metrics out;
  out.features = p;
  const Eigen::VectorXd r = y - yhat;
  out.sse = r.squaredNorm();
  out.rmse_std = std::sqrt(out.sse / n);
  out.rmse_scaled = std::sqrt(out.sse) / n;

  double ape = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) == 0.0) throw std::invalid_argument("metrics: MAPE undefined for a zero observation");
    ape += std::abs(r(i)) / std::abs(y(i));
  }
  out.mape = ape / n;

  const double pd = static_cast<double>(p);
  const double s2 = sigma2 ? *sigma2 : out.sse / (n - pd);
  out.cp = (out.sse + 2.0 * pd * s2) / n;
  const double mse = std::max(out.sse / n, std::numeric_limits<double>::min());
  out.aic = n * std::log(mse) + 2.0 * pd;
  out.bic = n * std::log(mse) + pd * std::log(n);

  const double sst = (y.array() - y.mean()).square().sum();
  const double r2 = sst > 0.0 ? 1.0 - out.sse / sst : (out.sse == 0.0 ? 1.0 : 0.0);
  out.adj_r2 = n - pd - 1.0 > 0.0 ? 1.0 - (1.0 - r2) * (n - 1.0) / (n - pd - 1.0)
                                  : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::fitted: return "fitted";
    case Provenance::published_3f: return "published_3f";
    case Provenance::published_9f: return "published_9f";
    case Provenance::published_16f: return "published_16f";
  }
  return "fitted";
}

namespace {
Provenance provenance_from(const std::string& s) {
  for (auto p : {Provenance::fitted, Provenance::published_3f, Provenance::published_9f,
                 Provenance::published_16f})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown model provenance '" + s + "'");
}
}  // namespace

double predict(const Model& model, const Configuration& c) {
  double s = 0.0;
  for (const auto& t : model.terms) s += t.coef * evaluate_term(t.powers, c);
  return s;
}

Model published_3f() {
  return {{{{0, 1, 0}, 0.391}, {{0, 1, 0.5}, -0.055}, {{1, 1, 1}, 2.33e-4}},
          Provenance::published_3f,
          std::nullopt};
}

Model published_9f() {
  return {{{{0.5, 0, 0.5}, 0.52829},
           {{0, 1, 0}, 0.29958},
           {{1, 1, 0}, 0.17818},
           {{1, 1, 0.5}, -0.08168},
           {{0, 1, 0.5}, -0.03651},
           {{2, 1, 0}, -0.02354},
           {{2, 1, 0.5}, 0.01102},
           {{1, 1, 1}, 0.00927},
           {{2, 1, 1}, -0.00126}},
          Provenance::published_9f,
          std::nullopt};
}

Model published_16f() {
  return {{{{0.5, 1, 0}, -2.82526},
           {{0, 1, 0}, 1.93401},
           {{1, 1, 0}, 1.56537},
           {{0.5, 1, 0.5}, 1.40787},
           {{1, 1, 0.5}, -0.82816},
           {{0, 1, 0.5}, -0.81389},
           {{0.5, 0, 0.5}, 0.52925},
           {{0.5, 1, 1}, -0.17718},
           {{1, 1, 1}, 0.11576},
           {{2, 1, 0}, -0.10610},
           {{0, 1, 1}, 0.08903},
           {{2, 1, 0.5}, 0.06008},
           {{2, 1, 1}, -0.00922},
           {{1, 1, 2}, -0.00053},
           {{0.5, 1, 2}, 0.00041},
           {{2, 1, 2}, 0.00006}},
          Provenance::published_16f,
          std::nullopt};
}

namespace {

Eigen::MatrixXd columns(const Eigen::MatrixXd& X, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(static_cast<Eigen::Index>(cols[j]));
  return out;
}

}  // namespace

std::vector<SelectionStep> backward_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           std::span<const PowerTriple> terms) {
  if (static_cast<std::size_t>(X.cols()) != terms.size())
    throw std::invalid_argument("backward_select: term count differs from column count");
  const std::size_t p = terms.size();

  std::vector<std::size_t> kept(p);
  for (std::size_t j = 0; j < p; ++j) kept[j] = j;

  Eigen::VectorXd b = fit_ols(X, y);
  const double full_sse = (y - X * b).squaredNorm();
  const double dof = static_cast<double>(X.rows()) - static_cast<double>(p);
  const double sigma2 = dof > 0 ? full_sse / dof : 0.0;

  std::vector<SelectionStep> desc;
  auto record = [&](const std::vector<std::size_t>& cols, const Eigen::VectorXd& coef) {
    const Eigen::MatrixXd Xk = columns(X, cols);
    SelectionStep s;
    s.kept = cols;
    s.stats = metrics(y, Xk * coef, cols.size(), sigma2);
    for (std::size_t j = 0; j < cols.size(); ++j)
      s.model.terms.push_back({terms[cols[j]], coef(static_cast<Eigen::Index>(j))});
    s.model.stats = s.stats;
    desc.push_back(std::move(s));
  };
  record(kept, b);

  while (kept.size() > 1) {
    double best_sse = std::numeric_limits<double>::infinity();
    std::size_t best_drop = 0;
    Eigen::VectorXd best_b;
    for (std::size_t drop = 0; drop < kept.size(); ++drop) {
      std::vector<std::size_t> trial;
      trial.reserve(kept.size() - 1);
      for (std::size_t j = 0; j < kept.size(); ++j)
        if (j != drop) trial.push_back(kept[j]);
      const Eigen::MatrixXd Xt = columns(X, trial);
      Eigen::VectorXd bt = fit_ols(Xt, y);
      const double sse = (y - Xt * bt).squaredNorm();
      if (sse < best_sse) {
        best_sse = sse;
        best_drop = drop;
        best_b = std::move(bt);
      }
    }
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(best_drop));
    record(kept, best_b);
  }
  return {desc.rbegin(), desc.rend()};
}

Recommendation recommend(const std::vector<SelectionStep>& steps) {
  if (steps.empty()) throw std::invalid_argument("recommend: no steps");
  Recommendation r;
  auto pick = [&](auto key, bool maximize) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < steps.size(); ++i) {
      const double a = key(steps[i].stats), b = key(steps[best].stats);
      if (std::isnan(b) || (maximize ? a > b : a < b)) best = i;
    }
    return steps[best].stats.features;
  };
  r.by_cp = pick([](const Metrics& m) { return m.cp; }, false);
  r.by_aic = pick([](const Metrics& m) { return m.aic; }, false);
  r.by_bic = pick([](const Metrics& m) { return m.bic; }, false);
  r.by_adj_r2 = pick([](const Metrics& m) { return m.adj_r2; }, true);
  return r;
}

std::vector<Configuration> sweep_configs() {
  std::vector<Configuration> out;
  out.reserve(420);
  for (int m = 1; m <= 7; ++m)
    for (int n = 50; n <= 500; n += 50)
      for (int d = 5; d <= 30; d += 5) out.push_back({double(m), double(n), double(d)});
  return out;
}

std::string model_to_json(const Model& model) {
  nlohmann::json j;
  j["provenance"] = to_string(model.provenance);
  j["terms"] = nlohmann::json::array();
  for (const auto& t : model.terms)
    j["terms"].push_back({{"powers", {t.powers.p1, t.powers.p2, t.powers.p3}},
                          {"label", term_label(t.powers)},
                          {"coef", t.coef}});
  if (model.stats) {
    const auto& s = *model.stats;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["stats"] = {{"features", s.features}, {"sse", num(s.sse)},   {"rmse_std", num(s.rmse_std)},
                  {"rmse_scaled", num(s.rmse_scaled)}, {"mape", num(s.mape)}, {"cp", num(s.cp)},
                  {"aic", num(s.aic)},   {"bic", num(s.bic)},     {"adj_r2", num(s.adj_r2)}};
  }
  return j.dump(2);
}

Model model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Model m;
  m.provenance = provenance_from(j.value("provenance", std::string("fitted")));
  for (const auto& t : j.at("terms")) {
    const auto& p = t.at("powers");
    if (!p.is_array() || p.size() != 3) throw std::invalid_argument("model term needs three powers");
    const double coef = t.at("coef").get<double>();
    if (!std::isfinite(coef)) throw std::invalid_argument("model coefficient is not finite");
    m.terms.push_back({{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}, coef});
  }
  return m;
}

}  // namespace bdmtsp::cam
