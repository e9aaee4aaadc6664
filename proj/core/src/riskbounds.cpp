#include "rsbounds/riskbounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "rsbounds/error.hpp"
#include "rsbounds/numeric.hpp"

namespace rsbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    std::ostringstream os;
    os << "risk-sensitivity c must be positive and finite, got " << c;
    throw PreconditionError(os.str());
  }
}

double checked_value(const RiskFunction& f, double x, double y) {
  const double v = f(x, y);
  if (std::isnan(v) || !std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "F is not finite (" << v << ") at node (z1=" << x << ", z2=" << y << ")";
    throw PreconditionError(os.str());
  }
  return v;
}

void check_rule(const QuadratureRule& rule, const char* what) {
  if (rule.order() == 0 || rule.weights.size() != rule.order()) {
    throw PreconditionError(std::string(what) + " rule is empty or malformed");
  }
  CompensatedSum s;
  for (double w : rule.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError(std::string(what) + " rule has a negative weight");
    s.add(w);
  }
  if (std::abs(s.value() - 1.0) > 1e-10) {
    throw PreconditionError(std::string(what) + " rule weights do not sum to 1");
  }
}

// (1/c) log of the mean of exp(c v_k) over equally weighted samples, with the
// delta-method standard error.
MonteCarloEstimate log_mean_exp_estimate(const std::vector<double>& v, double c) {
  const std::size_t n = v.size();
  double m = -kInf;
  for (double x : v) m = std::max(m, c * x);
  CompensatedSum s;
  for (double x : v) s.add(std::exp(c * x - m));
  const double mean_s = s.value() / static_cast<double>(n);
  CompensatedSum sq;
  for (double x : v) {
    const double d = std::exp(c * x - m) - mean_s;
    sq.add(d * d);
  }
  const double var_s = n > 1 ? sq.value() / static_cast<double>(n - 1) : 0.0;
  const double se = std::sqrt(var_s / static_cast<double>(n)) / (mean_s * c);
  return {(m + std::log(mean_s)) / c, se};
}

}  // namespace

std::string form_name(RiskForm form) {
  switch (form) {
    case RiskForm::Standard:
      return "lambda";
    case RiskForm::Hybrid1:
      return "lambda1";
    case RiskForm::Hybrid2:
      return "lambda2";
  }
  return "unknown";
}

std::vector<double> default_c_grid() { return log_space(0.01, 1000.0, 200); }

RiskConfig::RiskConfig(RiskFunction f, QuadratureRule aleatoric, QuadratureRule epistemic,
                       std::vector<double> c_grid)
    : f_(std::move(f)), aleatoric_(std::move(aleatoric)), epistemic_(std::move(epistemic)), c_grid_(std::move(c_grid)) {
  if (!f_) throw PreconditionError("RiskConfig requires an F evaluator");
  check_rule(aleatoric_, "aleatoric");
  check_rule(epistemic_, "epistemic");
  for (double c : c_grid_) check_c(c);

  const std::size_t n1 = aleatoric_.order();
  const std::size_t n2 = epistemic_.order();
  values_.resize(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      values_[i * n2 + j] = checked_value(f_, aleatoric_.nodes[i], epistemic_.nodes[j]);
    }
  }
  aleatoric_means_.resize(n2);
  for (std::size_t j = 0; j < n2; ++j) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n1; ++i) s.add(aleatoric_.weights[i] * values_[i * n2 + j]);
    aleatoric_means_[j] = s.value();
  }
}

RiskConfig RiskConfig::from_laws(RiskFunction f, const Distribution& aleatoric_law, const Distribution& epistemic_law,
                                 std::size_t aleatoric_order, std::size_t epistemic_order,
                                 std::vector<double> c_grid) {
  RiskConfig cfg(std::move(f), gauss_rule(basis_for(aleatoric_law), aleatoric_order),
                 gauss_rule(basis_for(epistemic_law), epistemic_order), std::move(c_grid));
  cfg.aleatoric_law_ = aleatoric_law;
  cfg.epistemic_law_ = epistemic_law;
  return cfg;
}

double expectation(const RiskConfig& cfg) {
  CompensatedSum s;
  const auto& means = cfg.aleatoric_means();
  for (std::size_t j = 0; j < means.size(); ++j) s.add(cfg.epistemic().weights[j] * means[j]);
  return s.value();
}

double variance(const RiskConfig& cfg) {
  const double m = expectation(cfg);
  const std::size_t n1 = cfg.aleatoric().order();
  const std::size_t n2 = cfg.epistemic().order();
  CompensatedSum s;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double d = cfg.value(i, j) - m;
      s.add(cfg.aleatoric().weights[i] * cfg.epistemic().weights[j] * d * d);
    }
  }
  return s.value();
}

double lambda_c(const RiskConfig& cfg, double c) {
  check_c(c);
  const std::size_t n1 = cfg.aleatoric().order();
  const std::size_t n2 = cfg.epistemic().order();
  const auto& v = cfg.values();
  const auto& w1 = cfg.aleatoric().weights;
  const auto& w2 = cfg.epistemic().weights;
  double m = -kInf;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (w1[i] * w2[j] > 0.0) m = std::max(m, c * v[i * n2 + j]);
    }
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = w1[i] * w2[j];
      if (w > 0.0) s.add(w * std::exp(c * v[i * n2 + j] - m));
    }
  }
  return (m + std::log(s.value())) / c;
}

double lambda1_c(const RiskConfig& cfg, double c) {
  check_c(c);
  return weighted_log_sum_exp_strided(cfg.aleatoric_means().data(), 1, cfg.epistemic().weights, c) / c;
}

double lambda2_c(const RiskConfig& cfg, double c) {
  check_c(c);
  const std::size_t n1 = cfg.aleatoric().order();
  const std::size_t n2 = cfg.epistemic().order();
  CompensatedSum s;
  for (std::size_t i = 0; i < n1; ++i) {
    s.add(cfg.aleatoric().weights[i] *
          weighted_log_sum_exp_strided(cfg.values().data() + i * n2, 1, cfg.epistemic().weights, c));
  }
  return s.value() / c;
}

double lambda_form(const RiskConfig& cfg, RiskForm form, double c) {
  switch (form) {
    case RiskForm::Standard:
      return lambda_c(cfg, c);
    case RiskForm::Hybrid1:
      return lambda1_c(cfg, c);
    case RiskForm::Hybrid2:
      return lambda2_c(cfg, c);
  }
  throw PreconditionError("unknown risk form");
}

double bound(double B, double c, double lambda_value) { return B / c + lambda_value; }

RiskConfig conditional_aleatoric_config(const RiskFunction& f, const std::function<double(double, double)>& transform,
                                        const QuadratureRule& base_rule, const QuadratureRule& epistemic_rule,
                                        std::vector<double> c_grid) {
  if (!f || !transform) throw PreconditionError("conditional_aleatoric_config requires F and a transform");
  RiskFunction g = [f, transform](double z, double z2) { return f(transform(z, z2), z2); };
  return RiskConfig(std::move(g), base_rule, epistemic_rule, std::move(c_grid));
}

double lambda1_bar_c(const RiskConfig& conditional_cfg, double c) { return lambda1_c(conditional_cfg, c); }

ConditionalEpistemicConfig::ConditionalEpistemicConfig(RiskFunction f, QuadratureRule aleatoric,
                                                       std::vector<QuadratureRule> epistemic_rules)
    : aleatoric_(std::move(aleatoric)), rules_(std::move(epistemic_rules)) {
  if (!f) throw PreconditionError("ConditionalEpistemicConfig requires an F evaluator");
  check_rule(aleatoric_, "aleatoric");
  if (rules_.size() != aleatoric_.order()) {
    std::ostringstream os;
    os << "conditional epistemic rules: expected one rule per aleatoric node (" << aleatoric_.order() << "), got "
       << rules_.size();
    throw ConfigError(os.str());
  }
  values_.resize(rules_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    check_rule(rules_[i], "conditional epistemic");
    values_[i].reserve(rules_[i].order());
    for (double y : rules_[i].nodes) values_[i].push_back(checked_value(f, aleatoric_.nodes[i], y));
  }
}

double lambda2_bar_c(const ConditionalEpistemicConfig& cfg, double c) {
  check_c(c);
  CompensatedSum s;
  for (std::size_t i = 0; i < cfg.values().size(); ++i) {
    s.add(cfg.aleatoric().weights[i] *
          weighted_log_sum_exp_strided(cfg.values()[i].data(), 1, cfg.epistemic_rules()[i].weights, c));
  }
  return s.value() / c;
}

RiskCurve sweep(const RiskConfig& cfg, double B) {
  if (!(B >= 0.0)) throw PreconditionError("B must be nonnegative");
  RiskCurve curve;
  curve.B = B;
  curve.rows.reserve(cfg.c_grid().size());
  for (double c : cfg.c_grid()) {
    RiskRow r{};
    r.c = c;
    r.lambda = lambda_c(cfg, c);
    r.lambda1 = lambda1_c(cfg, c);
    r.lambda2 = lambda2_c(cfg, c);
    r.bound = bound(B, c, r.lambda);
    r.bound1 = bound(B, c, r.lambda1);
    r.bound2 = bound(B, c, r.lambda2);
    curve.rows.push_back(r);
  }
  return curve;
}

void write_csv(std::ostream& os, const RiskCurve& curve, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "c,lambda,lambda1,lambda2,bound,bound1,bound2\n";
  char buf[256];
  for (const auto& r : curve.rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.c, r.lambda, r.lambda1,
                  r.lambda2, r.bound, r.bound1, r.bound2);
    os << buf;
  }
}

std::size_t count_direction_changes(const std::vector<double>& values, double tol) {
  std::size_t changes = 0;
  int last_sign = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double d = values[k] - values[k - 1];
    if (std::abs(d) <= tol) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

double lambda1_infinity(const RiskConfig& cfg, std::vector<double> y_search_grid, double tol) {
  const auto* leg = std::get_if<Legendre>(&cfg.epistemic().family);
  if (leg == nullptr) {
    throw ConfigError("lambda1_infinity requires a uniform epistemic nominal on a bounded interval, got " +
                      describe(cfg.epistemic().family));
  }
  const double lo = leg->lo;
  const double hi = leg->hi;
  const QuadratureRule& mu = cfg.aleatoric();
  auto inner = [&](double y) {
    CompensatedSum s;
    for (std::size_t i = 0; i < mu.order(); ++i) s.add(mu.weights[i] * checked_value(cfg.function(), mu.nodes[i], y));
    return s.value();
  };
  auto linspace = [](double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return g;
  };
  constexpr std::size_t kPoints = 256;
  if (y_search_grid.empty()) y_search_grid = linspace(lo, hi, kPoints);
  std::sort(y_search_grid.begin(), y_search_grid.end());

  std::vector<double> grid = std::move(y_search_grid);
  double best = -kInf;
  constexpr int kMinPasses = 3;   // coarse scan plus two refinements
  constexpr int kMaxPasses = 12;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    std::size_t arg = 0;
    double pass_best = -kInf;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double v = inner(grid[k]);
      if (v > pass_best) {
        pass_best = v;
        arg = k;
      }
    }
    const double previous = best;
    best = std::max(best, pass_best);
    if (pass + 1 >= kMinPasses && std::abs(best - previous) < tol) break;
    if (grid.size() < 2) break;
    const std::size_t left = arg >= 2 ? arg - 2 : 0;
    const std::size_t right = std::min(arg + 2, grid.size() - 1);
    if (!(grid[right] > grid[left])) break;
    grid = linspace(grid[left], grid[right], kPoints);
  }
  return best;
}

DualityReport verify_duality_bound(const RiskConfig& cfg, double c, const Distribution& alternative) {
  check_c(c);
  if (!cfg.epistemic_law()) {
    throw PreconditionError("verify_duality_bound requires a RiskConfig built from nominal laws");
  }
  const Distribution& nominal = *cfg.epistemic_law();
  const QuadratureRule theta = gauss_rule(basis_for(alternative), cfg.epistemic().order());
  const QuadratureRule& mu = cfg.aleatoric();

  CompensatedSum lhs;
  for (std::size_t k = 0; k < theta.order(); ++k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < mu.order(); ++i) {
      s.add(mu.weights[i] * checked_value(cfg.function(), mu.nodes[i], theta.nodes[k]));
    }
    lhs.add(theta.weights[k] * s.value());
  }

  DualityReport r{};
  r.lhs = lhs.value();
  r.relative_entropy = relative_entropy(alternative, nominal);
  if (!std::isfinite(r.relative_entropy)) {
    r.rhs = kInf;
    r.satisfied = true;
    return r;
  }
  r.rhs = r.relative_entropy / c + lambda1_c(cfg, c);
  r.satisfied = r.lhs <= r.rhs + 1e-9;
  return r;
}

MonteCarloEstimate mc_estimate(const RiskConfig& cfg, RiskForm which, double c, std::size_t n_outer,
                               std::size_t n_inner, std::uint64_t seed) {
  check_c(c);
  if (n_outer == 0 || n_inner == 0) throw PreconditionError("mc_estimate: sample counts must be >= 1");
  if (!cfg.aleatoric_law() || !cfg.epistemic_law()) {
    throw PreconditionError("mc_estimate requires a RiskConfig built from nominal laws");
  }
  const Distribution& mu = *cfg.aleatoric_law();
  const Distribution& gamma = *cfg.epistemic_law();
  const RiskFunction& f = cfg.function();
  std::mt19937_64 rng(seed);

  switch (which) {
    case RiskForm::Standard: {
      std::vector<double> v(n_outer);
      for (auto& x : v) {
        const double z1 = sample(mu, rng);
        const double z2 = sample(gamma, rng);
        x = checked_value(f, z1, z2);
      }
      return log_mean_exp_estimate(v, c);
    }
    case RiskForm::Hybrid1: {
      std::vector<double> v(n_outer);
      for (auto& x : v) {
        const double z2 = sample(gamma, rng);
        CompensatedSum s;
        for (std::size_t k = 0; k < n_inner; ++k) s.add(checked_value(f, sample(mu, rng), z2));
        x = s.value() / static_cast<double>(n_inner);
      }
      return log_mean_exp_estimate(v, c);
    }
    case RiskForm::Hybrid2: {
      std::vector<double> v(n_outer);
      std::vector<double> inner(n_inner);
      for (auto& x : v) {
        const double z1 = sample(mu, rng);
        for (auto& y : inner) y = checked_value(f, z1, sample(gamma, rng));
        x = log_mean_exp_estimate(inner, c).estimate;
      }
      CompensatedSum s;
      for (double x : v) s.add(x);
      const double m = s.value() / static_cast<double>(n_outer);
      CompensatedSum sq;
      for (double x : v) sq.add((x - m) * (x - m));
      const double var = n_outer > 1 ? sq.value() / static_cast<double>(n_outer - 1) : 0.0;
      return {m, std::sqrt(var / static_cast<double>(n_outer))};
    }
  }
  throw PreconditionError("unknown risk form");
}

}  // namespace rsbounds
