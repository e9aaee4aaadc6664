#include "rsbounds/surrogate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "rsbounds/error.hpp"

namespace rsbounds {

namespace {

std::string node_tag(const std::array<double, 2>& z) {
  std::ostringstream os;
  os.precision(17);
  os << "(z1=" << z[0] << ", z2=" << z[1] << ")";
  return os.str();
}

std::string format_coefficient(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CollocationGrid solve_at_nodes(const ModelFunction& f, const TensorRule& rule) {
  CollocationGrid grid{rule, {}};
  grid.values.reserve(rule.size());
  for (const auto& z : rule.nodes) {
    double v = 0.0;
    try {
      v = f(z[0], z[1]);
    } catch (const PhysicalValidityError& e) {
      throw PhysicalValidityError(std::string(e.what()) + " at collocation node " + node_tag(z));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at collocation node " + node_tag(z));
    }
    if (!std::isfinite(v)) throw NumericalError("non-finite model value at collocation node " + node_tag(z));
    grid.values.push_back(v);
  }
  return grid;
}

CollocationGrid solve_at_nodes(const Model& model, const TensorRule& rule, SurrogateTarget target) {
  if (target == SurrogateTarget::State) {
    return solve_at_nodes([&model](double z1, double z2) { return model.state(z1, z2); }, rule);
  }
  return solve_at_nodes([&model](double z1, double z2) { return model(z1, z2); }, rule);
}

Surrogate::Surrogate(std::array<PolynomialFamily, 2> families, std::array<std::size_t, 2> degrees,
                     std::vector<double> coefficients, std::array<std::size_t, 2> grid_orders)
    : families_(std::move(families)),
      degrees_(degrees),
      coefficients_(std::move(coefficients)),
      grid_orders_(grid_orders),
      basis1_(families_[0], degrees_[0]),
      basis2_(families_[1], degrees_[1]) {
  if (coefficients_.size() != (degrees_[0] + 1) * (degrees_[1] + 1)) {
    throw PreconditionError("Surrogate: expected " + std::to_string((degrees_[0] + 1) * (degrees_[1] + 1)) +
                            " coefficients, got " + std::to_string(coefficients_.size()));
  }
}

double Surrogate::evaluate(double z1, double z2) const {
  const std::size_t n1 = degrees_[0] + 1;
  const std::size_t n2 = degrees_[1] + 1;
  thread_local std::vector<double> phi1;
  thread_local std::vector<double> phi2;
  phi1.resize(n1);
  phi2.resize(n2);
  basis1_.values(z1, phi1);
  basis2_.values(z2, phi2);
  double total = 0.0;
  for (std::size_t j2 = 0; j2 < n2; ++j2) {
    double inner = 0.0;
    const double* row = coefficients_.data() + j2 * n1;
    for (std::size_t j1 = 0; j1 < n1; ++j1) inner += row[j1] * phi1[j1];
    total += inner * phi2[j2];
  }
  return total;
}

double Surrogate::coefficient(std::size_t j1, std::size_t j2) const {
  if (j1 > degrees_[0] || j2 > degrees_[1]) throw PreconditionError("Surrogate::coefficient: index out of range");
  return coefficients_[j2 * (degrees_[0] + 1) + j1];
}

Surrogate compute_coefficients(const CollocationGrid& grid, std::array<std::size_t, 2> degrees) {
  const QuadratureRule& r1 = grid.rule.factors[0];
  const QuadratureRule& r2 = grid.rule.factors[1];
  const std::size_t m1 = r1.order();
  const std::size_t m2 = r2.order();
  if (grid.values.size() != m1 * m2) throw PreconditionError("compute_coefficients: grid values do not match the rule");
  if (m1 < degrees[0] + 1 || m2 < degrees[1] + 1) {
    std::ostringstream os;
    os << "compute_coefficients: degrees (" << degrees[0] << ", " << degrees[1] << ") need grid orders of at least ("
       << degrees[0] + 1 << ", " << degrees[1] + 1 << "), got (" << m1 << ", " << m2 << ")";
    throw PreconditionError(os.str());
  }
  const std::size_t n1 = degrees[0] + 1;
  const std::size_t n2 = degrees[1] + 1;

  BasisEvaluator b1(r1.family, degrees[0]);
  BasisEvaluator b2(r2.family, degrees[1]);
  std::vector<double> phi1(m1 * n1);
  std::vector<double> phi2(m2 * n2);
  for (std::size_t i = 0; i < m1; ++i) b1.values(r1.nodes[i], std::span<double>(phi1.data() + i * n1, n1));
  for (std::size_t k = 0; k < m2; ++k) b2.values(r2.nodes[k], std::span<double>(phi2.data() + k * n2, n2));

  // Contract the second dimension first, then the first.
  std::vector<double> partial(m1 * n2, 0.0);
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t k = 0; k < m2; ++k) {
      const double v = grid.values[i * m2 + k] * r2.weights[k];
      for (std::size_t j2 = 0; j2 < n2; ++j2) partial[i * n2 + j2] += v * phi2[k * n2 + j2];
    }
  }
  std::vector<double> coefficients(n1 * n2, 0.0);
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j2 = 0; j2 < n2; ++j2) {
      const double v = partial[i * n2 + j2] * r1.weights[i];
      for (std::size_t j1 = 0; j1 < n1; ++j1) coefficients[j2 * n1 + j1] += v * phi1[i * n1 + j1];
    }
  }
  return Surrogate({r1.family, r2.family}, degrees, std::move(coefficients), {m1, m2});
}

Surrogate compute_coefficients(const CollocationGrid& grid) {
  const std::size_t m1 = grid.rule.factors[0].order();
  const std::size_t m2 = grid.rule.factors[1].order();
  if (m1 == 0 || m2 == 0) throw PreconditionError("compute_coefficients: empty collocation grid");
  return compute_coefficients(grid, {m1 - 1, m2 - 1});
}

double evaluate(const Surrogate& s, double z1, double z2) { return s.evaluate(z1, z2); }

double mean(const Surrogate& s) { return s.coefficients().front(); }

double second_moment(const Surrogate& s) {
  double total = 0.0;
  for (double v : s.coefficients()) total += v * v;
  return total;
}

ModelFunction build_output_evaluator(const Model& model, const std::array<PolynomialFamily, 2>& families,
                                     std::array<std::size_t, 2> orders, SurrogateTarget target) {
  const TensorRule rule = tensor_rule(gauss_rule(families[0], orders[0]), gauss_rule(families[1], orders[1]));
  Surrogate s = compute_coefficients(solve_at_nodes(model, rule, target));
  if (target == SurrogateTarget::State) {
    return [s = std::move(s), h = model.output()](double z1, double z2) { return apply_output(h, s(z1, z2)); };
  }
  return [s = std::move(s)](double z1, double z2) { return s(z1, z2); };
}

std::size_t default_collocation_order(const OutputFunctional& h) noexcept { return is_smooth(h) ? 8 : 12; }

SurrogateTarget default_target(const OutputFunctional& h) noexcept {
  return is_smooth(h) ? SurrogateTarget::Output : SurrogateTarget::State;
}

std::vector<ConvergenceRow> convergence_study(const ModelFunction& f, const std::array<PolynomialFamily, 2>& families,
                                              std::span<const std::size_t> orders, const ReferenceMoments& reference,
                                              ActiveDimensions dims) {
  auto rel = [](double value, double ref) {
    const double err = std::abs(value - ref);
    return ref == 0.0 ? err : err / std::abs(ref);
  };
  std::vector<ConvergenceRow> rows;
  rows.reserve(orders.size());
  for (std::size_t n : orders) {
    if (n == 0) throw PreconditionError("convergence_study: orders must be positive");
    const std::size_t n2 = dims == ActiveDimensions::Both ? n : 1;
    const TensorRule rule = tensor_rule(gauss_rule(families[0], n), gauss_rule(families[1], n2));
    const Surrogate s = compute_coefficients(solve_at_nodes(f, rule));
    const double m = mean(s);
    const double m2 = second_moment(s);
    rows.push_back({n, m, m2, rel(m, reference.mean), rel(m2, reference.second_moment)});
  }
  return rows;
}

nlohmann::json family_to_json(const PolynomialFamily& f) {
  using nlohmann::json;
  if (const auto* h = std::get_if<Hermite>(&f)) return json{{"type", "hermite"}, {"mean", h->mean}, {"stddev", h->stddev}};
  if (const auto* l = std::get_if<Legendre>(&f)) return json{{"type", "legendre"}, {"lo", l->lo}, {"hi", l->hi}};
  if (const auto* j = std::get_if<Jacobi>(&f)) {
    return json{{"type", "jacobi"}, {"alpha", j->alpha}, {"beta", j->beta}, {"lo", j->lo}, {"hi", j->hi}};
  }
  const auto& g = std::get<Laguerre>(f);
  return json{{"type", "laguerre"}, {"alpha", g.alpha}, {"scale", g.scale}};
}

PolynomialFamily family_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    PolynomialFamily f;
    if (type == "hermite") {
      f = Hermite{j.at("mean").get<double>(), j.at("stddev").get<double>()};
    } else if (type == "legendre") {
      f = Legendre{j.at("lo").get<double>(), j.at("hi").get<double>()};
    } else if (type == "jacobi") {
      f = Jacobi{j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("lo").get<double>(),
                 j.at("hi").get<double>()};
    } else if (type == "laguerre") {
      f = Laguerre{j.at("alpha").get<double>(), j.at("scale").get<double>()};
    } else {
      throw ConfigError("unknown polynomial family '" + type + "'");
    }
    validate(f);
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid polynomial family: ") + e.what());
  }
}

nlohmann::json to_json(const Surrogate& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (double v : s.coefficients()) coeffs.push_back(format_coefficient(v));
  return nlohmann::json{
      {"families", {family_to_json(s.families()[0]), family_to_json(s.families()[1])}},
      {"degrees", {s.degrees()[0], s.degrees()[1]}},
      {"grid_orders", {s.grid_orders()[0], s.grid_orders()[1]}},
      {"coefficients", std::move(coeffs)},
  };
}

Surrogate surrogate_from_json(const nlohmann::json& j) {
  try {
    std::array<PolynomialFamily, 2> families{family_from_json(j.at("families").at(0)),
                                             family_from_json(j.at("families").at(1))};
    std::array<std::size_t, 2> degrees{j.at("degrees").at(0).get<std::size_t>(),
                                       j.at("degrees").at(1).get<std::size_t>()};
    std::array<std::size_t, 2> grid_orders{0, 0};
    if (j.contains("grid_orders")) {
      grid_orders = {j.at("grid_orders").at(0).get<std::size_t>(), j.at("grid_orders").at(1).get<std::size_t>()};
    }
    std::vector<double> coefficients;
    for (const auto& c : j.at("coefficients")) {
      if (c.is_string()) {
        const std::string text = c.get<std::string>();
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw ConfigError("invalid surrogate coefficient '" + text + "'");
        coefficients.push_back(v);
      } else {
        coefficients.push_back(c.get<double>());
      }
    }
    return Surrogate(std::move(families), degrees, std::move(coefficients), grid_orders);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid surrogate artifact: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid surrogate coefficient");
  } catch (const std::out_of_range&) {
    throw ConfigError("surrogate coefficient out of range");
  }
}

}  // namespace rsbounds
