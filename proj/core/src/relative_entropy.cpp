#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rsbounds/distributions.hpp"
#include "rsbounds/error.hpp"
#include "rsbounds/numeric.hpp"

namespace rsbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_beta_fn(double a, double b) {
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

std::optional<Beta> beta_like(const Distribution& d) {
  if (const auto* b = std::get_if<Beta>(&d)) return *b;
  if (const auto* u = std::get_if<Uniform>(&d)) return as_beta(*u);
  return std::nullopt;
}

// Intervals produced by affine maps carry rounding noise.
bool same_endpoint(double a, double b, double width) { return std::abs(a - b) <= 1e-12 * width; }

double gaussian_re(const Gaussian& p, const Gaussian& q) {
  const double r = p.sigma / q.sigma;
  const double d = (p.mu - q.mu) / q.sigma;
  return -std::log(r) + 0.5 * (r * r + d * d) - 0.5;
}

double beta_re(const Beta& p, const Beta& q) {
  const double psum = boost::math::digamma(p.alpha + p.beta);
  return (p.alpha - q.alpha) * (boost::math::digamma(p.alpha) - psum) +
         (p.beta - q.beta) * (boost::math::digamma(p.beta) - psum) + log_beta_fn(q.alpha, q.beta) -
         log_beta_fn(p.alpha, p.beta);
}

// Shape/rate parameterization. Derived from the exponential-family identity
// with E_P[x] = a_p / b_p and E_P[log x] = psi(a_p) - log b_p.
double gamma_re(const Gamma& p, const Gamma& q) {
  return (p.shape - q.shape) * boost::math::digamma(p.shape) - boost::math::lgamma(p.shape) +
         boost::math::lgamma(q.shape) + q.shape * (std::log(p.rate) - std::log(q.rate)) +
         p.shape * (q.rate - p.rate) / p.rate;
}

double binomial_re(const Binomial& p, const Binomial& q) {
  const double n = p.n;
  return n * (p.p * std::log(p.p / q.p) + (1.0 - p.p) * std::log((1.0 - p.p) / (1.0 - q.p)));
}

double poisson_re(const Poisson& p, const Poisson& q) {
  return q.lambda - p.lambda + p.lambda * std::log(p.lambda / q.lambda);
}

// A point inside supp(P) = [a, b] together with its distances to both ends,
// so that densities with endpoint singularities can be evaluated without
// cancellation (x near b cannot represent b - x accurately).
struct Point {
  double x;
  double a;
  double from_a;  // x - a
  double b;
  double to_b;    // b - x
};

double log_density_at(const Distribution& d, const Point& pt) {
  if (const auto* bd = std::get_if<Beta>(&d)) {
    const double width = bd->hi - bd->lo;
    const double y = ((pt.a - bd->lo) + pt.from_a) / width;
    const double ym = ((bd->hi - pt.b) + pt.to_b) / width;
    if (!(y >= 0.0 && ym >= 0.0)) return -kInf;
    auto xlogy = [](double c, double v) { return c == 0.0 ? 0.0 : c * std::log(v); };
    return xlogy(bd->alpha - 1.0, y) + xlogy(bd->beta - 1.0, ym) - log_beta_fn(bd->alpha, bd->beta) -
           std::log(width);
  }
  if (const auto* ud = std::get_if<Uniform>(&d)) {
    const double y = (pt.a - ud->lo) + pt.from_a;
    const double ym = (ud->hi - pt.b) + pt.to_b;
    return (y >= 0.0 && ym >= 0.0) ? -std::log(ud->hi - ud->lo) : -kInf;
  }
  if (const auto* gd = std::get_if<Gamma>(&d)) {
    const double x = std::isfinite(pt.a) ? pt.a + pt.from_a : pt.x;
    if (x < 0.0) return -kInf;
    const double lx = gd->shape == 1.0 ? 0.0 : (gd->shape - 1.0) * std::log(x);
    return gd->shape * std::log(gd->rate) - boost::math::lgamma(gd->shape) + lx - gd->rate * x;
  }
  return log_pdf(d, pt.x);
}

double integrand(const Distribution& p, const Distribution& q, const Point& pt) {
  const double lp = log_density_at(p, pt);
  if (lp == -kInf) return 0.0;
  const double lq = log_density_at(q, pt);
  const double w = std::exp(lp);
  if (w == 0.0) return 0.0;
  if (lq == -kInf) return kInf;
  return w * (lp - lq);
}

double numeric_continuous(const Distribution& p, const Distribution& q, int resolution) {
  using namespace boost::math::quadrature;
  const std::size_t levels = static_cast<std::size_t>(std::max(resolution, 4));
  const double tol = 1e-13;
  const Interval sp = support(p);

  if (std::isfinite(sp.lo) && std::isfinite(sp.hi)) {
    tanh_sinh<double> integrator(levels);
    const double a = sp.lo;
    const double b = sp.hi;
    auto f = [&](double x, double xc) {
      // xc is a - x (<= 0) left of the midpoint and b - x (>= 0) right of it.
      Point pt{x, a, xc <= 0.0 ? -xc : x - a, b, xc > 0.0 ? xc : b - x};
      return integrand(p, q, pt);
    };
    return integrator.integrate(f, a, b, tol);
  }
  if (std::isfinite(sp.lo)) {
    // Gamma: integrate in t = rate * x.
    const double scale = 1.0 / std::get<Gamma>(p).rate;
    exp_sinh<double> integrator(levels);
    auto f = [&](double t) {
      const double x = scale * t;
      Point pt{x, sp.lo, x - sp.lo, kInf, kInf};
      return scale * integrand(p, q, pt);
    };
    return integrator.integrate(f, tol);
  }
  // Gaussian: integrate in the standardized variable.
  const auto& g = std::get<Gaussian>(p);
  sinh_sinh<double> integrator(levels);
  auto f = [&](double t) {
    const double x = g.mu + g.sigma * t;
    Point pt{x, -kInf, kInf, kInf, kInf};
    return g.sigma * integrand(p, q, pt);
  };
  return integrator.integrate(f, tol);
}

double numeric_discrete(const Distribution& p, const Distribution& q, int resolution) {
  const Interval sp = support(p);
  const long cap = static_cast<long>(resolution) * 10000L;
  CompensatedSum total;
  CompensatedSum mass;
  const double centre = mean(p);
  for (long k = 0; k <= cap; ++k) {
    const double x = static_cast<double>(k);
    if (x > sp.hi) break;
    const double lp = log_pdf(p, x);
    if (lp == -kInf) continue;
    const double w = std::exp(lp);
    mass.add(w);
    if (w > 0.0) {
      const double lq = log_pdf(q, x);
      if (lq == -kInf) return kInf;
      total.add(w * (lp - lq));
    }
    if (x > centre && 1.0 - mass.value() < 1e-14) break;
  }
  return total.value();
}

}  // namespace

bool support_contained(const Distribution& p, const Distribution& q) {
  if (is_discrete(p) != is_discrete(q)) return false;
  const Interval a = support(p);
  const Interval b = support(q);
  const double width = std::isfinite(b.hi - b.lo) ? b.hi - b.lo : 1.0;
  const bool lo_ok = a.lo >= b.lo || same_endpoint(a.lo, b.lo, width);
  const bool hi_ok = a.hi <= b.hi || same_endpoint(a.hi, b.hi, width);
  return lo_ok && hi_ok;
}

double relative_entropy_closed(const Distribution& p, const Distribution& q) {
  validate(p);
  validate(q);
  if (!support_contained(p, q)) return kInf;

  if (const auto* gp = std::get_if<Gaussian>(&p)) {
    if (const auto* gq = std::get_if<Gaussian>(&q)) return gaussian_re(*gp, *gq);
  }
  if (auto bp = beta_like(p)) {
    if (auto bq = beta_like(q)) {
      const double width = bq->hi - bq->lo;
      if (same_endpoint(bp->lo, bq->lo, width) && same_endpoint(bp->hi, bq->hi, width)) {
        return beta_re(*bp, *bq);
      }
    }
  }
  if (const auto* gp = std::get_if<Gamma>(&p)) {
    if (const auto* gq = std::get_if<Gamma>(&q)) return gamma_re(*gp, *gq);
  }
  if (const auto* bp = std::get_if<Binomial>(&p)) {
    if (const auto* bq = std::get_if<Binomial>(&q)) {
      if (bp->n == bq->n) return binomial_re(*bp, *bq);
    }
  }
  if (const auto* pp = std::get_if<Poisson>(&p)) {
    if (const auto* pq = std::get_if<Poisson>(&q)) return poisson_re(*pp, *pq);
  }
  throw IncompatibleError("no closed-form relative entropy for " + describe(p) + " against " + describe(q));
}

double relative_entropy_numeric(const Distribution& p, const Distribution& q, int resolution) {
  validate(p);
  validate(q);
  if (resolution < 1) throw PreconditionError("relative_entropy_numeric: resolution must be >= 1");
  if (!support_contained(p, q)) return kInf;
  const double r = is_discrete(p) ? numeric_discrete(p, q, resolution) : numeric_continuous(p, q, resolution);
  if (std::isnan(r)) throw NumericalError("relative_entropy_numeric: NaN for " + describe(p) + " vs " + describe(q));
  return r;
}

double relative_entropy(const Distribution& p, const Distribution& q) {
  try {
    return relative_entropy_closed(p, q);
  } catch (const IncompatibleError&) {
    return relative_entropy_numeric(p, q);
  }
}

}  // namespace rsbounds
