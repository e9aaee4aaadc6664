#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rsbounds/distributions.hpp"
#include "rsbounds/orthopoly.hpp"

namespace rsbounds {

using RiskFunction = std::function<double(double, double)>;

// Selects one of the three risk-sensitive integrals.
//   Standard: (1/c) log int int e^{cF} dgamma dmu
//   Hybrid1:  (1/c) log int e^{c int F dmu} dgamma
//   Hybrid2:  (1/c) int log( int e^{cF} dgamma ) dmu
enum class RiskForm { Standard = 0, Hybrid1 = 1, Hybrid2 = 2 };

std::string form_name(RiskForm form);

// Default c grid: 200 log-spaced points on [0.01, 1000].
std::vector<double> default_c_grid();

// Default per-dimension order of the risk-integral quadrature.
inline constexpr std::size_t kDefaultRiskOrder = 256;

// F tabulated on (aleatoric rule) x (epistemic rule), plus the rules, the c
// grid and, optionally, the nominal laws they came from. Immutable.
class RiskConfig {
 public:
  RiskConfig(RiskFunction f, QuadratureRule aleatoric, QuadratureRule epistemic,
             std::vector<double> c_grid = default_c_grid());

  // Rules built from the nominal laws' Gauss rules of the given orders.
  static RiskConfig from_laws(RiskFunction f, const Distribution& aleatoric_law,
                              const Distribution& epistemic_law,
                              std::size_t aleatoric_order = kDefaultRiskOrder,
                              std::size_t epistemic_order = kDefaultRiskOrder,
                              std::vector<double> c_grid = default_c_grid());

  const RiskFunction& function() const noexcept { return f_; }
  const QuadratureRule& aleatoric() const noexcept { return aleatoric_; }
  const QuadratureRule& epistemic() const noexcept { return epistemic_; }
  const std::vector<double>& c_grid() const noexcept { return c_grid_; }
  const std::optional<Distribution>& aleatoric_law() const noexcept { return aleatoric_law_; }
  const std::optional<Distribution>& epistemic_law() const noexcept { return epistemic_law_; }

  // F at (aleatoric node i, epistemic node j).
  double value(std::size_t i, std::size_t j) const noexcept {
    return values_[i * epistemic_.order() + j];
  }
  const std::vector<double>& values() const noexcept { return values_; }

  // int F dmu at each epistemic node.
  const std::vector<double>& aleatoric_means() const noexcept { return aleatoric_means_; }

 private:
  RiskFunction f_;
  QuadratureRule aleatoric_;
  QuadratureRule epistemic_;
  std::vector<double> c_grid_;
  std::vector<double> values_;
  std::vector<double> aleatoric_means_;
  std::optional<Distribution> aleatoric_law_;
  std::optional<Distribution> epistemic_law_;
};

// Quadrature of F under mu x gamma.
double expectation(const RiskConfig& cfg);
double variance(const RiskConfig& cfg);

double lambda_c(const RiskConfig& cfg, double c);
double lambda1_c(const RiskConfig& cfg, double c);
double lambda2_c(const RiskConfig& cfg, double c);
double lambda_form(const RiskConfig& cfg, RiskForm form, double c);

// B / c + lambda.
double bound(double B, double c, double lambda_value);

// ---------------------------------------------------------------------------
// Dependent uncertainties.

// The aleatoric variable is Z1 = transform(Z, Z2) with Z independent of Z2.
// The returned config tabulates G(z, z2) = F(transform(z, z2), z2) on
// (base rule for Z) x (epistemic rule); lambda1_bar_c evaluates on it.
RiskConfig conditional_aleatoric_config(const RiskFunction& f,
                                        const std::function<double(double, double)>& transform,
                                        const QuadratureRule& base_rule,
                                        const QuadratureRule& epistemic_rule,
                                        std::vector<double> c_grid = default_c_grid());

double lambda1_bar_c(const RiskConfig& conditional_cfg, double c);

// gamma(. | x) given as one epistemic rule per aleatoric node.
class ConditionalEpistemicConfig {
 public:
  ConditionalEpistemicConfig(RiskFunction f, QuadratureRule aleatoric,
                             std::vector<QuadratureRule> epistemic_rules);

  const QuadratureRule& aleatoric() const noexcept { return aleatoric_; }
  const std::vector<QuadratureRule>& epistemic_rules() const noexcept { return rules_; }
  const std::vector<std::vector<double>>& values() const noexcept { return values_; }

 private:
  QuadratureRule aleatoric_;
  std::vector<QuadratureRule> rules_;
  std::vector<std::vector<double>> values_;
};

double lambda2_bar_c(const ConditionalEpistemicConfig& cfg, double c);

// ---------------------------------------------------------------------------
// Curves and bounds.

struct RiskRow {
  double c;
  double lambda;
  double lambda1;
  double lambda2;
  double bound;
  double bound1;
  double bound2;
};

struct RiskCurve {
  std::vector<RiskRow> rows;
  double B = 0.0;
};

RiskCurve sweep(const RiskConfig& cfg, double B);

// CSV with header `c,lambda,lambda1,lambda2,bound,bound1,bound2`, values with
// 12 significant digits. `comment`, if non-empty, is written first as a
// `# ` line.
void write_csv(std::ostream& os, const RiskCurve& curve, const std::string& comment = {});

// Number of sign changes in the forward differences of `values`, ignoring
// differences with magnitude <= tol.
std::size_t count_direction_changes(const std::vector<double>& values, double tol);

struct OptimalC {
  double c_star = 0.0;  // +infinity when the infimum is the c -> infinity limit
  double bound_value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool finite() const noexcept;
};

// Minimizes c -> B/c + lambda(c) over c > 0: scan `c_grid` for a discrete
// minimum, extend the scan by doubling/halving past the grid ends, then
// golden-section search in log c to relative tolerance 1e-6. When doubling
// changes both lambda and the objective by less than `tol`, the minimum is
// reported at c = +infinity with the last lambda as its value.
OptimalC minimize_bound(const std::function<double(double)>& lambda, double B,
                        const std::vector<double>& c_grid, double tol = 1e-6);

OptimalC optimal_c(const RiskConfig& cfg, RiskForm which, double B, double tol = 1e-6);

// sup_y int F(x, y) mu(dx) over the epistemic support, which must be a bounded
// interval carried by a Legendre (uniform) epistemic rule. `y_search_grid`
// defaults to 256 equispaced points; two refinement passes of 256 points
// around the running maximum follow.
double lambda1_infinity(const RiskConfig& cfg, std::vector<double> y_search_grid = {},
                        double tol = 1e-12);

struct DualityReport {
  double lhs;               // int int F dmu dtheta
  double rhs;               // R(theta || gamma) / c + Lambda^1_c
  double relative_entropy;  // R(theta || gamma)
  bool satisfied;
};

// Requires cfg to carry its epistemic nominal law.
DualityReport verify_duality_bound(const RiskConfig& cfg, double c, const Distribution& alternative);

struct MonteCarloEstimate {
  double estimate;
  double stderr_;
};

// Nested Monte Carlo estimate of the chosen integral from the nominal laws
// carried by cfg:
//   Standard: n_outer iid pairs (n_inner unused);
//   Hybrid1:  n_outer epistemic samples, each with n_inner aleatoric samples;
//   Hybrid2:  n_outer aleatoric samples, each with n_inner epistemic samples.
// The standard error comes from the spread of the outer samples (delta method
// for the log forms).
MonteCarloEstimate mc_estimate(const RiskConfig& cfg, RiskForm which, double c,
                               std::size_t n_outer, std::size_t n_inner, std::uint64_t seed);

}  // namespace rsbounds
