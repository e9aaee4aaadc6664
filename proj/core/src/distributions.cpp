#include "rsbounds/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rsbounds/error.hpp"

namespace rsbounds {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_beta_fn(double a, double b) {
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

// a * log(y) with the convention 0 * log(0) = 0.
double xlogy(double a, double y) {
  if (a == 0.0) return 0.0;
  return a * std::log(y);
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

}  // namespace

bool is_discrete(const Distribution& d) noexcept {
  return std::holds_alternative<Binomial>(d) || std::holds_alternative<Poisson>(d);
}

std::string kind_name(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Gaussian&) { return std::string("gaussian"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const Beta&) { return std::string("beta"); },
                        [](const Gamma&) { return std::string("gamma"); },
                        [](const Binomial&) { return std::string("binomial"); },
                        [](const Poisson&) { return std::string("poisson"); },
                    },
                    d);
}

std::string describe(const Distribution& d) {
  std::ostringstream os;
  os.precision(12);
  std::visit(Overloaded{
                 [&](const Gaussian& g) { os << "Gaussian(mu=" << g.mu << ", sigma=" << g.sigma << ")"; },
                 [&](const Uniform& u) { os << "Uniform(" << u.lo << ", " << u.hi << ")"; },
                 [&](const Beta& b) {
                   os << "Beta(" << b.alpha << ", " << b.beta << ") on [" << b.lo << ", " << b.hi << "]";
                 },
                 [&](const Gamma& g) { os << "Gamma(shape=" << g.shape << ", rate=" << g.rate << ")"; },
                 [&](const Binomial& b) { os << "Binomial(n=" << b.n << ", p=" << b.p << ")"; },
                 [&](const Poisson& p) { os << "Poisson(lambda=" << p.lambda << ")"; },
             },
             d);
  return os.str();
}

void validate(const Distribution& d) {
  auto fail = [&](const char* what) { throw ParameterDomainError(describe(d) + ": " + what); };
  std::visit(Overloaded{
                 [&](const Gaussian& g) {
                   if (!std::isfinite(g.mu) || !(g.sigma > 0.0) || !std::isfinite(g.sigma))
                     fail("need finite mu and sigma > 0");
                 },
                 [&](const Uniform& u) {
                   if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.hi > u.lo)) fail("need lo < hi");
                 },
                 [&](const Beta& b) {
                   if (!(b.alpha > 0.0) || !(b.beta > 0.0) || !std::isfinite(b.alpha) || !std::isfinite(b.beta))
                     fail("need alpha, beta > 0");
                   if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.hi > b.lo)) fail("need lo < hi");
                 },
                 [&](const Gamma& g) {
                   if (!(g.shape > 0.0) || !(g.rate > 0.0) || !std::isfinite(g.shape) || !std::isfinite(g.rate))
                     fail("need shape, rate > 0");
                 },
                 [&](const Binomial& b) {
                   if (b.n < 1) fail("need n >= 1");
                   if (!(b.p > 0.0 && b.p < 1.0)) fail("need 0 < p < 1");
                 },
                 [&](const Poisson& p) {
                   if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) fail("need lambda > 0");
                 },
             },
             d);
}

Interval support(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Gaussian&) { return Interval{-kInf, kInf}; },
                        [](const Uniform& u) { return Interval{u.lo, u.hi}; },
                        [](const Beta& b) { return Interval{b.lo, b.hi}; },
                        [](const Gamma&) { return Interval{0.0, kInf}; },
                        [](const Binomial& b) { return Interval{0.0, static_cast<double>(b.n)}; },
                        [](const Poisson&) { return Interval{0.0, kInf}; },
                    },
                    d);
}

double log_pdf(const Distribution& d, double x) {
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) {
            const double z = (x - g.mu) / g.sigma;
            return -0.5 * z * z - std::log(g.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
          },
          [&](const Uniform& u) { return (x >= u.lo && x <= u.hi) ? -std::log(u.hi - u.lo) : -kInf; },
          [&](const Beta& b) {
            if (!(x >= b.lo && x <= b.hi)) return -kInf;
            const double width = b.hi - b.lo;
            const double y = (x - b.lo) / width;
            const double ym = (b.hi - x) / width;
            return xlogy(b.alpha - 1.0, y) + xlogy(b.beta - 1.0, ym) - log_beta_fn(b.alpha, b.beta) -
                   std::log(width);
          },
          [&](const Gamma& g) {
            if (x < 0.0) return -kInf;
            return g.shape * std::log(g.rate) - boost::math::lgamma(g.shape) + xlogy(g.shape - 1.0, x) -
                   g.rate * x;
          },
          [&](const Binomial& b) {
            if (!is_integer(x) || x < 0.0 || x > b.n) return -kInf;
            const double n = b.n;
            return boost::math::lgamma(n + 1.0) - boost::math::lgamma(x + 1.0) -
                   boost::math::lgamma(n - x + 1.0) + x * std::log(b.p) + (n - x) * std::log1p(-b.p);
          },
          [&](const Poisson& p) {
            if (!is_integer(x) || x < 0.0) return -kInf;
            return x * std::log(p.lambda) - p.lambda - boost::math::lgamma(x + 1.0);
          },
      },
      d);
}

double pdf(const Distribution& d, double x) { return std::exp(log_pdf(d, x)); }

double mean(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return g.mu; },
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Beta& b) { return b.lo + (b.hi - b.lo) * b.alpha / (b.alpha + b.beta); },
                        [](const Gamma& g) { return g.shape / g.rate; },
                        [](const Binomial& b) { return b.n * b.p; },
                        [](const Poisson& p) { return p.lambda; },
                    },
                    d);
}

double variance(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return g.sigma * g.sigma; },
                        [](const Uniform& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12.0; },
                        [](const Beta& b) {
                          const double s = b.alpha + b.beta;
                          const double w = b.hi - b.lo;
                          return w * w * b.alpha * b.beta / (s * s * (s + 1.0));
                        },
                        [](const Gamma& g) { return g.shape / (g.rate * g.rate); },
                        [](const Binomial& b) { return b.n * b.p * (1.0 - b.p); },
                        [](const Poisson& p) { return p.lambda; },
                    },
                    d);
}

PolynomialFamily basis_for(const Distribution& d) {
  validate(d);
  return std::visit(Overloaded{
                        [](const Gaussian& g) -> PolynomialFamily { return Hermite{g.mu, g.sigma}; },
                        [](const Uniform& u) -> PolynomialFamily { return Legendre{u.lo, u.hi}; },
                        [](const Beta& b) -> PolynomialFamily {
                          return Jacobi{b.beta - 1.0, b.alpha - 1.0, b.lo, b.hi};
                        },
                        [](const Gamma& g) -> PolynomialFamily { return Laguerre{g.shape - 1.0, 1.0 / g.rate}; },
                        [&](const Binomial&) -> PolynomialFamily {
                          throw UnsupportedError("no continuous polynomial basis for " + describe(d));
                        },
                        [&](const Poisson&) -> PolynomialFamily {
                          throw UnsupportedError("no continuous polynomial basis for " + describe(d));
                        },
                    },
                    d);
}

Beta as_beta(const Uniform& u) noexcept { return Beta{1.0, 1.0, u.lo, u.hi}; }

Distribution affine_image(const Distribution& d, double scale, double shift) {
  validate(d);
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift))
    throw ParameterDomainError("affine_image: scale must be nonzero and finite");
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) -> Distribution { return Gaussian{scale * g.mu + shift, std::abs(scale) * g.sigma}; },
          [&](const Uniform& u) -> Distribution {
            return scale > 0 ? Uniform{scale * u.lo + shift, scale * u.hi + shift}
                             : Uniform{scale * u.hi + shift, scale * u.lo + shift};
          },
          [&](const Beta& b) -> Distribution {
            return scale > 0 ? Beta{b.alpha, b.beta, scale * b.lo + shift, scale * b.hi + shift}
                             : Beta{b.beta, b.alpha, scale * b.hi + shift, scale * b.lo + shift};
          },
          [&](const Gamma& g) -> Distribution {
            if (shift != 0.0 || scale < 0.0)
              throw UnsupportedError("affine_image: Gamma laws admit only positive scaling");
            return Gamma{g.shape, g.rate / scale};
          },
          [&](const Binomial& b) -> Distribution {
            if (scale != 1.0 || shift != 0.0) throw UnsupportedError("affine_image: discrete laws are not affine-closed");
            return b;
          },
          [&](const Poisson& p) -> Distribution {
            if (scale != 1.0 || shift != 0.0) throw UnsupportedError("affine_image: discrete laws are not affine-closed");
            return p;
          },
      },
      d);
}

double sample(const Distribution& d, std::mt19937_64& rng) {
  return std::visit(Overloaded{
                        [&](const Gaussian& g) { return std::normal_distribution<double>(g.mu, g.sigma)(rng); },
                        [&](const Uniform& u) { return std::uniform_real_distribution<double>(u.lo, u.hi)(rng); },
                        [&](const Beta& b) {
                          const double x = std::gamma_distribution<double>(b.alpha, 1.0)(rng);
                          const double y = std::gamma_distribution<double>(b.beta, 1.0)(rng);
                          return b.lo + (b.hi - b.lo) * x / (x + y);
                        },
                        [&](const Gamma& g) { return std::gamma_distribution<double>(g.shape, 1.0 / g.rate)(rng); },
                        [&](const Binomial& b) {
                          return static_cast<double>(std::binomial_distribution<int>(b.n, b.p)(rng));
                        },
                        [&](const Poisson& p) {
                          return static_cast<double>(std::poisson_distribution<long>(p.lambda)(rng));
                        },
                    },
                    d);
}

// ---------------------------------------------------------------------------

double ExponentialFamilyForm::statistic(std::size_t i, double x) const {
  switch (statistics.at(i)) {
    case SufficientStatistic::Identity:
      return x;
    case SufficientStatistic::Square:
      return x * x;
    case SufficientStatistic::Log:
      return std::log((x - lo) / (hi - lo));
    case SufficientStatistic::Log1m:
      return std::log((hi - x) / (hi - lo));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ExponentialFamilyForm::log_base(double x) const {
  switch (base) {
    case BaseMeasure::Unit:
      return 0.0;
    case BaseMeasure::InvSqrt2Pi:
      return -0.5 * std::log(2.0 * std::numbers::pi);
    case BaseMeasure::InvIntervalLength:
      return (x >= lo && x <= hi) ? -std::log(hi - lo) : -kInf;
    case BaseMeasure::InvFactorial:
      return -boost::math::lgamma(x + 1.0);
    case BaseMeasure::BinomialCoefficient:
      return boost::math::lgamma(trials + 1.0) - boost::math::lgamma(x + 1.0) -
             boost::math::lgamma(trials - x + 1.0);
  }
  return -kInf;
}

double ExponentialFamilyForm::log_density(double x) const {
  double s = log_base(x) - log_partition;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    // A zero natural parameter drops its statistic, which may be infinite at an endpoint.
    if (eta[i] != 0.0) s += eta[i] * statistic(i, x);
  }
  return s;
}

double ExponentialFamilyForm::density(double x) const { return std::exp(log_density(x)); }

ExponentialFamilyForm exponential_family_form(const Distribution& d) {
  validate(d);
  auto beta_form = [](const Beta& b) {
    ExponentialFamilyForm f;
    f.eta = {b.alpha - 1.0, b.beta - 1.0};
    f.statistics = {SufficientStatistic::Log, SufficientStatistic::Log1m};
    f.log_partition = log_beta_fn(b.alpha, b.beta);
    f.base = BaseMeasure::InvIntervalLength;
    f.lo = b.lo;
    f.hi = b.hi;
    return f;
  };
  return std::visit(Overloaded{
                        [](const Gaussian& g) {
                          ExponentialFamilyForm f;
                          const double s2 = g.sigma * g.sigma;
                          f.eta = {g.mu / s2, -1.0 / (2.0 * s2)};
                          f.statistics = {SufficientStatistic::Identity, SufficientStatistic::Square};
                          f.log_partition = g.mu * g.mu / (2.0 * s2) + std::log(g.sigma);
                          f.base = BaseMeasure::InvSqrt2Pi;
                          return f;
                        },
                        [&](const Uniform& u) { return beta_form(as_beta(u)); },
                        [&](const Beta& b) { return beta_form(b); },
                        [](const Gamma& g) {
                          ExponentialFamilyForm f;
                          f.eta = {-g.rate, g.shape - 1.0};
                          f.statistics = {SufficientStatistic::Identity, SufficientStatistic::Log};
                          f.log_partition = boost::math::lgamma(g.shape) - g.shape * std::log(g.rate);
                          f.base = BaseMeasure::Unit;
                          return f;
                        },
                        [](const Binomial& b) {
                          ExponentialFamilyForm f;
                          f.eta = {std::log(b.p / (1.0 - b.p))};
                          f.statistics = {SufficientStatistic::Identity};
                          f.log_partition = -b.n * std::log1p(-b.p);
                          f.base = BaseMeasure::BinomialCoefficient;
                          f.trials = b.n;
                          return f;
                        },
                        [](const Poisson& p) {
                          ExponentialFamilyForm f;
                          f.eta = {std::log(p.lambda)};
                          f.statistics = {SufficientStatistic::Identity};
                          f.log_partition = p.lambda;
                          f.base = BaseMeasure::InvFactorial;
                          return f;
                        },
                    },
                    d);
}

}  // namespace rsbounds
