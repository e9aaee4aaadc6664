#include "rsbounds/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsbounds/error.hpp"

namespace rsbounds {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

double weighted_log_sum_exp(std::span<const double> exponents, std::span<const double> weights) {
  return weighted_log_sum_exp_strided(exponents.data(), 1, weights, 1.0);
}

double weighted_log_sum_exp_strided(const double* exponents, std::size_t stride,
                                    std::span<const double> weights, double scale) {
  const std::size_t n = weights.size();
  if (n == 0) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (weights[k] > 0.0) m = std::max(m, scale * exponents[k * stride]);
  }
  if (!std::isfinite(m)) return m;
  CompensatedSum s;
  for (std::size_t k = 0; k < n; ++k) {
    if (weights[k] > 0.0) s.add(weights[k] * std::exp(scale * exponents[k * stride] - m));
  }
  return m + std::log(s.value());
}

GoldenResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                     double hi, double tol, int max_iterations) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  if (hi < lo) std::swap(lo, hi);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  GoldenResult r;
  while (hi - lo > tol && r.iterations < max_iterations) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
    ++r.iterations;
  }
  r.converged = hi - lo <= tol;
  if (f1 <= f2) {
    r.x = x1;
    r.fx = f1;
  } else {
    r.x = x2;
    r.fx = f2;
  }
  return r;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw PreconditionError("log_space requires 0 < lo <= hi");
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace rsbounds
