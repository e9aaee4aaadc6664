#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsbounds/models.hpp"
#include "rsbounds/orthopoly.hpp"

namespace rsbounds {

using ModelFunction = std::function<double(double, double)>;

// Model values on a tensor collocation grid, aligned with rule.nodes.
struct CollocationGrid {
  TensorRule rule;
  std::vector<double> values;
};

// What the collocation grid samples when the output functional is not smooth.
enum class SurrogateTarget {
  Output,  // F = h(u) is interpolated directly
  State,   // u is interpolated, h is applied afterwards
};

// Evaluates `f` at every node of `rule`, in node order. Throws NumericalError
// carrying the node coordinates if an evaluation fails or is non-finite.
CollocationGrid solve_at_nodes(const ModelFunction& f, const TensorRule& rule);
CollocationGrid solve_at_nodes(const Model& model, const TensorRule& rule,
                               SurrogateTarget target = SurrogateTarget::Output);

// Generalized polynomial chaos expansion in the full tensor basis
// Phi_j(z1, z2) = phi_{j1}(z1) phi_{j2}(z2), j = j2 * (P1 + 1) + j1.
class Surrogate {
 public:
  Surrogate(std::array<PolynomialFamily, 2> families, std::array<std::size_t, 2> degrees,
            std::vector<double> coefficients, std::array<std::size_t, 2> grid_orders = {0, 0});

  double operator()(double z1, double z2) const { return evaluate(z1, z2); }
  double evaluate(double z1, double z2) const;

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double coefficient(std::size_t j1, std::size_t j2) const;
  const std::array<PolynomialFamily, 2>& families() const noexcept { return families_; }
  const std::array<std::size_t, 2>& degrees() const noexcept { return degrees_; }
  const std::array<std::size_t, 2>& grid_orders() const noexcept { return grid_orders_; }

 private:
  std::array<PolynomialFamily, 2> families_;
  std::array<std::size_t, 2> degrees_;
  std::vector<double> coefficients_;
  std::array<std::size_t, 2> grid_orders_;
  BasisEvaluator basis1_;
  BasisEvaluator basis2_;
};

// Discrete projection v_j = sum_k v(z_k) Phi_j(z_k) w_k. Requires the grid
// order in each dimension to be at least degree + 1.
Surrogate compute_coefficients(const CollocationGrid& grid, std::array<std::size_t, 2> degrees);

// Projection with degrees = grid order - 1 (interpolating surrogate).
Surrogate compute_coefficients(const CollocationGrid& grid);

double evaluate(const Surrogate& s, double z1, double z2);
double mean(const Surrogate& s);
double second_moment(const Surrogate& s);

// Builds F~ for the risk integrals. With SurrogateTarget::State the returned
// evaluator applies h to the interpolated state.
ModelFunction build_output_evaluator(const Model& model,
                                     const std::array<PolynomialFamily, 2>& families,
                                     std::array<std::size_t, 2> orders, SurrogateTarget target);

// Default collocation order per dimension: 8 for smooth h, 12 for indicators.
std::size_t default_collocation_order(const OutputFunctional& h) noexcept;
// Default target: Output for smooth h, State for indicators.
SurrogateTarget default_target(const OutputFunctional& h) noexcept;

struct ReferenceMoments {
  double mean;
  double second_moment;
};

struct ConvergenceRow {
  std::size_t order;
  double mean;
  double second_moment;
  double mean_rel_error;
  double second_moment_rel_error;
};

enum class ActiveDimensions { Both, FirstOnly };

// For each order n, builds the order-n interpolating surrogate (order 1 in the
// second dimension with FirstOnly) and reports moment errors against
// `reference`.
std::vector<ConvergenceRow> convergence_study(const ModelFunction& f,
                                              const std::array<PolynomialFamily, 2>& families,
                                              std::span<const std::size_t> orders,
                                              const ReferenceMoments& reference,
                                              ActiveDimensions dims = ActiveDimensions::Both);

// JSON artifact: families, degrees and coefficients (decimal strings with
// round-trip precision).
nlohmann::json to_json(const Surrogate& s);
Surrogate surrogate_from_json(const nlohmann::json& j);

nlohmann::json family_to_json(const PolynomialFamily& f);
PolynomialFamily family_from_json(const nlohmann::json& j);

}  // namespace rsbounds
