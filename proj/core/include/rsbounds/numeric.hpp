#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rsbounds {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

// log( sum_k weights[k] * exp(exponents[k]) ), shifted by the largest
// exponent so that nothing overflows. Weights must be nonnegative; entries
// with zero weight are ignored.
double weighted_log_sum_exp(std::span<const double> exponents,
                            std::span<const double> weights);

// Same, with a stride over `exponents` (for column access in row-major data).
double weighted_log_sum_exp_strided(const double* exponents, std::size_t stride,
                                    std::span<const double> weights, double scale);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Golden-section search for the minimum of a unimodal f on [lo, hi].
// Stops once the bracket is narrower than `tol`.
GoldenResult golden_section_minimize(const std::function<double(double)>& f,
                                     double lo, double hi, double tol,
                                     int max_iterations = 200);

// n points log-spaced on [lo, hi], both ends included.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace rsbounds
