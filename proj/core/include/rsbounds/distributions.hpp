#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

#include "rsbounds/orthopoly.hpp"

namespace rsbounds {

struct Gaussian {
  double mu = 0.0;
  double sigma = 1.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

// Beta(alpha, beta) on the interval [lo, hi].
struct Beta {
  double alpha = 1.0;
  double beta = 1.0;
  double lo = 0.0;
  double hi = 1.0;
};

struct Gamma {
  double shape = 1.0;
  double rate = 1.0;
};

struct Binomial {
  int n = 1;
  double p = 0.5;
};

struct Poisson {
  double lambda = 1.0;
};

using Distribution = std::variant<Gaussian, Uniform, Beta, Gamma, Binomial, Poisson>;

bool is_discrete(const Distribution& d) noexcept;
std::string kind_name(const Distribution& d);
std::string describe(const Distribution& d);

// Throws ParameterDomainError when parameters are outside their domain.
void validate(const Distribution& d);

Interval support(const Distribution& d);

// Density (pmf for discrete kinds); zero outside the support.
double pdf(const Distribution& d, double x);

// log pdf; -infinity outside the support.
double log_pdf(const Distribution& d, double x);

double mean(const Distribution& d);
double variance(const Distribution& d);

// Gaussian -> Hermite, Uniform -> Legendre, Beta -> Jacobi(beta-1, alpha-1),
// Gamma -> Laguerre(shape-1). Discrete kinds throw UnsupportedError.
PolynomialFamily basis_for(const Distribution& d);

// Law of scale * X + shift. Gamma accepts positive scale without shift;
// discrete kinds accept only the identity map.
Distribution affine_image(const Distribution& d, double scale, double shift);

// Uniform(lo, hi) is carried as Beta(1, 1, lo, hi) where a common
// parameterization is needed.
Beta as_beta(const Uniform& u) noexcept;

double sample(const Distribution& d, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Relative entropy R(P || Q) = int p log(p / q), P the alternative law, Q the
// nominal. +infinity when P is not absolutely continuous w.r.t. Q.

// Closed form for same-family pairs (Uniform counts as Beta(1,1)). Throws
// IncompatibleError when the pair has no common parameterization.
double relative_entropy_closed(const Distribution& p, const Distribution& q);

// Numerical evaluation of the defining integral (double-exponential
// quadrature on the support of P) or series (discrete kinds, summed until the
// remaining P-mass is below 1e-14). `resolution` bounds the quadrature
// refinement levels; the series is capped at resolution * 10^4 terms.
double relative_entropy_numeric(const Distribution& p, const Distribution& q,
                                int resolution = 12);

// Closed form when available, otherwise the numerical integral.
double relative_entropy(const Distribution& p, const Distribution& q);

// True when supp(P) is contained in supp(Q) (the only absolute-continuity
// test performed).
bool support_contained(const Distribution& p, const Distribution& q);

// ---------------------------------------------------------------------------
// Exponential-family form  h(x) exp( sum_i eta_i T_i(x) - A ).

enum class SufficientStatistic {
  Identity,  // x
  Square,    // x^2
  Log,       // log y, y the standardized coordinate in (0, 1) or x itself
  Log1m,     // log (1 - y)
};

enum class BaseMeasure {
  Unit,                // 1
  InvSqrt2Pi,          // 1 / sqrt(2 pi)
  InvIntervalLength,   // 1 / (hi - lo) on [lo, hi]
  InvFactorial,        // 1 / x!
  BinomialCoefficient  // C(n, x)
};

struct ExponentialFamilyForm {
  std::vector<double> eta;
  std::vector<SufficientStatistic> statistics;
  double log_partition = 0.0;
  BaseMeasure base = BaseMeasure::Unit;
  // Standardization used by Log / Log1m statistics and the interval measure.
  double lo = 0.0;
  double hi = 1.0;
  int trials = 0;  // binomial n

  double statistic(std::size_t i, double x) const;
  double log_base(double x) const;
  double log_density(double x) const;
  double density(double x) const;
};

// Uniform is represented as Beta(1, 1).
ExponentialFamilyForm exponential_family_form(const Distribution& d);

}  // namespace rsbounds
