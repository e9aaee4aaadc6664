#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rsbounds {

// Orthonormal polynomial families. Each carries the affine placement of its
// weight so that the weight is always a unit-mass probability density:
//
//   Hermite   <-> Normal(mean, stddev)
//   Legendre  <-> Uniform(lo, hi)
//   Jacobi    <-> (1-x)^alpha (1+x)^beta mapped onto [lo, hi],
//                 i.e. Beta(beta + 1, alpha + 1) on [lo, hi]
//   Laguerre  <-> Gamma(alpha + 1, 1 / scale)
struct Hermite {
  double mean = 0.0;
  double stddev = 1.0;
};

struct Legendre {
  double lo = -1.0;
  double hi = 1.0;
};

struct Jacobi {
  double alpha = 0.0;
  double beta = 0.0;
  double lo = -1.0;
  double hi = 1.0;
};

struct Laguerre {
  double alpha = 0.0;
  double scale = 1.0;
};

using PolynomialFamily = std::variant<Hermite, Legendre, Jacobi, Laguerre>;

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

// Support of the family's weight; infinite ends are +-infinity.
Interval support(const PolynomialFamily& family);

std::string describe(const PolynomialFamily& family);

// Throws ParameterDomainError for alpha/beta <= -1, nonpositive scales or
// empty intervals.
void validate(const PolynomialFamily& family);

// Three-term recurrence of the orthonormal polynomials,
//
//   b[k+1] phi_{k+1}(x) = (x - a[k]) phi_k(x) - b[k] phi_{k-1}(x),
//
// with phi_{-1} = 0, phi_0 = 1. b[0] is the square root of the total mass of
// the weight, which is 1 for every family here.
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
};

Recurrence recurrence_coefficients(const PolynomialFamily& family, std::size_t n);

// phi_degree(z), by forward recurrence.
double evaluate_basis(const PolynomialFamily& family, std::size_t degree, double z);

// Caches recurrence coefficients for repeated evaluation of phi_0..phi_max.
class BasisEvaluator {
 public:
  BasisEvaluator(const PolynomialFamily& family, std::size_t max_degree);

  std::size_t max_degree() const noexcept { return max_degree_; }
  const PolynomialFamily& family() const noexcept { return family_; }

  // out[m] = phi_m(z) for m = 0..max_degree; out.size() must be max_degree + 1.
  void values(double z, std::span<double> out) const;
  std::vector<double> values(double z) const;

 private:
  PolynomialFamily family_;
  std::size_t max_degree_;
  Recurrence rec_;
};

// Gauss rule for the family's unit-mass weight. Nodes strictly increasing,
// weights summing to one. Weights are positive except where they fall below
// the double range (far tail nodes of large Laguerre or Hermite rules), in
// which case they are exactly zero.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  PolynomialFamily family;

  std::size_t order() const noexcept { return nodes.size(); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
  }
};

QuadratureRule gauss_rule(const PolynomialFamily& family, std::size_t order);

// Full tensor product of two rules, first factor major:
// node index = i * r2.order() + j.
struct TensorRule {
  std::array<QuadratureRule, 2> factors;
  std::vector<std::array<double, 2>> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

TensorRule tensor_rule(const QuadratureRule& r1, const QuadratureRule& r2);

}  // namespace rsbounds
