#include "rsbounds/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rsbounds/error.hpp"
#include "rsbounds/numeric.hpp"

namespace rsbounds {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Monic Jacobi recurrence on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
// normalized to unit mass.
void jacobi_monic(double alpha, double beta, std::size_t n, std::vector<double>& a,
                  std::vector<double>& b2) {
  const double ab = alpha + beta;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    if (k == 0) {
      a[0] = (beta - alpha) / (ab + 2.0);
      b2[0] = 1.0;
    } else {
      const double s = 2.0 * kk + ab;
      a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
      if (k == 1) {
        b2[1] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b2[k] = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                (s * s * (s + 1.0) * (s - 1.0));
      }
    }
  }
}

}  // namespace

Interval support(const PolynomialFamily& family) {
  return std::visit(Overloaded{
                        [](const Hermite&) { return Interval{-kInf, kInf}; },
                        [](const Legendre& f) { return Interval{f.lo, f.hi}; },
                        [](const Jacobi& f) { return Interval{f.lo, f.hi}; },
                        [](const Laguerre&) { return Interval{0.0, kInf}; },
                    },
                    family);
}

std::string describe(const PolynomialFamily& family) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Hermite& f) { os << "Hermite(mean=" << f.mean << ", stddev=" << f.stddev << ")"; },
                 [&](const Legendre& f) { os << "Legendre[" << f.lo << ", " << f.hi << "]"; },
                 [&](const Jacobi& f) {
                   os << "Jacobi(alpha=" << f.alpha << ", beta=" << f.beta << ")[" << f.lo << ", " << f.hi
                      << "]";
                 },
                 [&](const Laguerre& f) { os << "Laguerre(alpha=" << f.alpha << ", scale=" << f.scale << ")"; },
             },
             family);
  return os.str();
}

void validate(const PolynomialFamily& family) {
  std::visit(Overloaded{
                 [](const Hermite& f) {
                   if (!(f.stddev > 0.0) || !std::isfinite(f.mean) || !std::isfinite(f.stddev))
                     throw ParameterDomainError("Hermite: stddev must be positive and finite");
                 },
                 [](const Legendre& f) {
                   if (!(f.hi > f.lo) || !std::isfinite(f.lo) || !std::isfinite(f.hi))
                     throw ParameterDomainError("Legendre: need finite lo < hi");
                 },
                 [](const Jacobi& f) {
                   if (!(f.alpha > -1.0) || !(f.beta > -1.0))
                     throw ParameterDomainError("Jacobi: alpha and beta must exceed -1");
                   if (!(f.hi > f.lo) || !std::isfinite(f.lo) || !std::isfinite(f.hi))
                     throw ParameterDomainError("Jacobi: need finite lo < hi");
                 },
                 [](const Laguerre& f) {
                   if (!(f.alpha > -1.0)) throw ParameterDomainError("Laguerre: alpha must exceed -1");
                   if (!(f.scale > 0.0) || !std::isfinite(f.scale))
                     throw ParameterDomainError("Laguerre: scale must be positive");
                 },
             },
             family);
}

Recurrence recurrence_coefficients(const PolynomialFamily& family, std::size_t n) {
  if (n == 0) throw PreconditionError("recurrence_coefficients: n must be >= 1");
  validate(family);
  Recurrence r{std::vector<double>(n), std::vector<double>(n)};
  std::visit(Overloaded{
                 [&](const Hermite& f) {
                   for (std::size_t k = 0; k < n; ++k) {
                     r.a[k] = f.mean;
                     r.b[k] = k == 0 ? 1.0 : f.stddev * std::sqrt(static_cast<double>(k));
                   }
                 },
                 [&](const Legendre& f) {
                   const double mid = 0.5 * (f.lo + f.hi);
                   const double half = 0.5 * (f.hi - f.lo);
                   for (std::size_t k = 0; k < n; ++k) {
                     const double kk = static_cast<double>(k);
                     r.a[k] = mid;
                     r.b[k] = k == 0 ? 1.0 : half * kk / std::sqrt(4.0 * kk * kk - 1.0);
                   }
                 },
                 [&](const Jacobi& f) {
                   std::vector<double> b2(n);
                   jacobi_monic(f.alpha, f.beta, n, r.a, b2);
                   const double mid = 0.5 * (f.lo + f.hi);
                   const double half = 0.5 * (f.hi - f.lo);
                   for (std::size_t k = 0; k < n; ++k) {
                     r.a[k] = mid + half * r.a[k];
                     r.b[k] = k == 0 ? 1.0 : half * std::sqrt(b2[k]);
                   }
                 },
                 [&](const Laguerre& f) {
                   for (std::size_t k = 0; k < n; ++k) {
                     const double kk = static_cast<double>(k);
                     r.a[k] = f.scale * (2.0 * kk + f.alpha + 1.0);
                     r.b[k] = k == 0 ? 1.0 : f.scale * std::sqrt(kk * (kk + f.alpha));
                   }
                 },
             },
             family);
  return r;
}

namespace {

// phi_0..phi_{out.size()-1} at z; rec must hold out.size() coefficients.
void forward_recurrence(const Recurrence& rec, double z, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const double next = ((z - rec.a[k]) * cur - rec.b[k] * prev) / rec.b[k + 1];
    prev = cur;
    cur = next;
    out[k + 1] = cur;
  }
}

}  // namespace

double evaluate_basis(const PolynomialFamily& family, std::size_t degree, double z) {
  const Recurrence rec = recurrence_coefficients(family, degree + 1);
  std::vector<double> v(degree + 1);
  forward_recurrence(rec, z, v);
  return v[degree];
}

BasisEvaluator::BasisEvaluator(const PolynomialFamily& family, std::size_t max_degree)
    : family_(family), max_degree_(max_degree), rec_(recurrence_coefficients(family, max_degree + 1)) {}

void BasisEvaluator::values(double z, std::span<double> out) const {
  if (out.size() != max_degree_ + 1)
    throw PreconditionError("BasisEvaluator::values: output span has wrong size");
  forward_recurrence(rec_, z, out);
}

std::vector<double> BasisEvaluator::values(double z) const {
  std::vector<double> v(max_degree_ + 1);
  forward_recurrence(rec_, z, v);
  return v;
}

QuadratureRule gauss_rule(const PolynomialFamily& family, std::size_t order) {
  if (order == 0) throw PreconditionError("gauss_rule: order must be >= 1");
  // One extra coefficient for phi_order, used by the Newton polish below.
  const Recurrence rec = recurrence_coefficients(family, order + 1);

  QuadratureRule rule{std::vector<double>(order), std::vector<double>(order), family};
  if (order == 1) {
    rule.nodes[0] = rec.a[0];
    rule.weights[0] = 1.0;
    return rule;
  }

  // Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
  // Jacobi matrix.
  Eigen::VectorXd diag(order);
  Eigen::VectorXd sub(order - 1);
  for (std::size_t k = 0; k < order; ++k) diag[static_cast<Eigen::Index>(k)] = rec.a[k];
  for (std::size_t k = 1; k < order; ++k) sub[static_cast<Eigen::Index>(k - 1)] = rec.b[k];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_rule: eigen-solve did not converge for " + describe(family) +
                         ", order " + std::to_string(order));
  }
  for (std::size_t k = 0; k < order; ++k) rule.nodes[k] = solver.eigenvalues()[static_cast<Eigen::Index>(k)];
  std::sort(rule.nodes.begin(), rule.nodes.end());

  // Newton polish on phi_order and Christoffel weights
  // w_k = 1 / sum_{j<order} phi_j(x_k)^2, which keep full relative accuracy
  // in the tails where eigenvector-based weights do not.
  std::vector<double> phi(order + 1);
  std::vector<double> dphi(order + 1);
  bool finite_weights = true;
  for (std::size_t k = 0; k < order; ++k) {
    double x = rule.nodes[k];
    for (int it = 0; it < 2; ++it) {
      phi[0] = 1.0;
      dphi[0] = 0.0;
      double pm1 = 0.0;
      double dpm1 = 0.0;
      for (std::size_t m = 0; m < order; ++m) {
        const double p = ((x - rec.a[m]) * phi[m] - rec.b[m] * pm1) / rec.b[m + 1];
        const double dp = (phi[m] + (x - rec.a[m]) * dphi[m] - rec.b[m] * dpm1) / rec.b[m + 1];
        pm1 = phi[m];
        dpm1 = dphi[m];
        phi[m + 1] = p;
        dphi[m + 1] = dp;
      }
      if (!(std::isfinite(phi[order]) && std::isfinite(dphi[order])) || dphi[order] == 0.0) break;
      const double step = phi[order] / dphi[order];
      const double gap_lo = k > 0 ? x - rule.nodes[k - 1] : kInf;
      const double gap_hi = k + 1 < order ? rule.nodes[k + 1] - x : kInf;
      if (std::abs(step) > 1e-3 * std::min(gap_lo, gap_hi)) break;
      x -= step;
    }
    rule.nodes[k] = x;
    forward_recurrence(rec, x, std::span<double>(phi.data(), order));
    CompensatedSum s;
    for (std::size_t m = 0; m < order; ++m) s.add(phi[m] * phi[m]);
    rule.weights[k] = 1.0 / s.value();
    if (!std::isfinite(s.value()) || !(rule.weights[k] > 0.0)) finite_weights = false;
  }

  if (!finite_weights) {
    // Fall back to the first eigenvector components.
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("gauss_rule: eigenvector solve did not converge for " + describe(family) +
                           ", order " + std::to_string(order));
    }
    for (std::size_t k = 0; k < order; ++k) {
      const auto idx = static_cast<Eigen::Index>(k);
      rule.nodes[k] = solver.eigenvalues()[idx];
      const double v0 = solver.eigenvectors()(0, idx);
      rule.weights[k] = v0 * v0;
    }
  }

  CompensatedSum total;
  for (double w : rule.weights) total.add(w);
  for (double& w : rule.weights) w /= total.value();

  for (std::size_t k = 1; k < order; ++k) {
    if (!(rule.nodes[k] > rule.nodes[k - 1])) {
      throw NumericalError("gauss_rule: nodes not strictly increasing for " + describe(family) +
                           ", order " + std::to_string(order));
    }
  }
  return rule;
}

TensorRule tensor_rule(const QuadratureRule& r1, const QuadratureRule& r2) {
  TensorRule t{{r1, r2}, {}, {}};
  t.nodes.reserve(r1.order() * r2.order());
  t.weights.reserve(r1.order() * r2.order());
  for (std::size_t i = 0; i < r1.order(); ++i) {
    for (std::size_t j = 0; j < r2.order(); ++j) {
      t.nodes.push_back({r1.nodes[i], r2.nodes[j]});
      t.weights.push_back(r1.weights[i] * r2.weights[j]);
    }
  }
  return t;
}

}  // namespace rsbounds
