#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

namespace bm = boost::math;
using namespace rsbounds;

namespace {

// Jacobi weight on [lo, hi] from the distances to both ends, so that the
// endpoint singularities are resolved without cancellation.
double jacobi_density(const Jacobi& j, double from_lo, double to_hi) {
  if (from_lo <= 0.0 || to_hi <= 0.0) return 0.0;
  const double half = 0.5 * (j.hi - j.lo);
  const double norm = std::pow(2.0, j.alpha + j.beta + 1.0) * bm::beta(j.alpha + 1.0, j.beta + 1.0);
  return std::pow(to_hi / half, j.alpha) * std::pow(from_lo / half, j.beta) / (norm * half);
}

}  // namespace

double weight_density(const PolynomialFamily& family, double x) {
  if (const auto* h = std::get_if<Hermite>(&family)) {
    const double z = (x - h->mean) / h->stddev;
    return std::exp(-0.5 * z * z) / (h->stddev * std::sqrt(2.0 * bm::constants::pi<double>()));
  }
  if (const auto* l = std::get_if<Legendre>(&family)) {
    return (x >= l->lo && x <= l->hi) ? 1.0 / (l->hi - l->lo) : 0.0;
  }
  if (const auto* j = std::get_if<Jacobi>(&family)) return jacobi_density(*j, x - j->lo, j->hi - x);
  const auto& g = std::get<Laguerre>(family);
  if (x <= 0.0) return 0.0;
  const double y = x / g.scale;
  return std::pow(y, g.alpha) * std::exp(-y) / (bm::tgamma(g.alpha + 1.0) * g.scale);
}

double integrate_weight(const PolynomialFamily& family, const std::function<double(double)>& f) {
  auto integrand = [&](double x) {
    const double w = weight_density(family, x);
    return w == 0.0 ? 0.0 : f(x) * w;
  };
  if (const auto* h = std::get_if<Hermite>(&family)) {
    bm::quadrature::sinh_sinh<double> q(12);
    return h->stddev * q.integrate([&](double t) { return integrand(h->mean + h->stddev * t); }, 1e-14);
  }
  if (std::holds_alternative<Laguerre>(family)) {
    const double s = std::get<Laguerre>(family).scale;
    bm::quadrature::exp_sinh<double> q(12);
    return s * q.integrate([&](double t) { return integrand(s * t); }, 1e-14);
  }
  bm::quadrature::tanh_sinh<double> q(15);
  if (const auto* l = std::get_if<Legendre>(&family)) return q.integrate(integrand, l->lo, l->hi, 1e-14);
  const auto& j = std::get<Jacobi>(family);
  // xc is lo - x left of the midpoint and hi - x right of it.
  auto with_complement = [&](double x, double xc) {
    const double from_lo = xc <= 0.0 ? -xc : x - j.lo;
    const double to_hi = xc > 0.0 ? xc : j.hi - x;
    const double w = jacobi_density(j, from_lo, to_hi);
    return w == 0.0 ? 0.0 : f(x) * w;
  };
  return q.integrate(with_complement, j.lo, j.hi, 1e-14);
}

Recurrence stieltjes(const PolynomialFamily& family, std::size_t n) {
  // Monic polynomials pi_k evaluated by their own recurrence.
  std::vector<double> alpha;
  std::vector<double> beta;
  auto pi = [&](std::size_t k, double x) {
    double prev = 0.0;
    double cur = 1.0;
    for (std::size_t m = 0; m < k; ++m) {
      const double next = (x - alpha[m]) * cur - (m == 0 ? 0.0 : beta[m]) * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  };
  double norm_prev = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double norm = integrate_weight(family, [&](double x) {
      const double p = pi(k, x);
      return p * p;
    });
    const double xnorm = integrate_weight(family, [&](double x) {
      const double p = pi(k, x);
      return x * p * p;
    });
    alpha.push_back(xnorm / norm);
    beta.push_back(k == 0 ? 1.0 : norm / norm_prev);
    norm_prev = norm;
  }
  Recurrence r;
  r.a = alpha;
  for (double b : beta) r.b.push_back(std::sqrt(b));
  return r;
}

double standardize(const PolynomialFamily& family, double x) {
  if (const auto* h = std::get_if<Hermite>(&family)) return (x - h->mean) / h->stddev;
  if (const auto* l = std::get_if<Legendre>(&family)) return (x - l->lo) / (l->hi - l->lo);
  if (const auto* j = std::get_if<Jacobi>(&family)) return (x - j->lo) / (j->hi - j->lo);
  return x / std::get<Laguerre>(family).scale;
}

double standardized_moment(const PolynomialFamily& family, int k) {
  if (std::holds_alternative<Hermite>(family)) {
    if (k % 2 == 1) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 0; j -= 2) m *= j;
    return m;
  }
  if (std::holds_alternative<Legendre>(family)) return 1.0 / (k + 1.0);
  if (const auto* j = std::get_if<Jacobi>(&family)) {
    // y = (1 + t) / 2 has density proportional to y^beta (1 - y)^alpha.
    const double a = j->beta + 1.0;
    const double b = j->alpha + 1.0;
    return std::exp(std::lgamma(a + k) - std::lgamma(a) + std::lgamma(a + b) - std::lgamma(a + b + k));
  }
  const double a = std::get<Laguerre>(family).alpha + 1.0;
  return std::exp(std::lgamma(a + k) - std::lgamma(a));
}

namespace {

double log_density(const Distribution& d, double x) {
  if (const auto* g = std::get_if<Gaussian>(&d)) {
    const double z = (x - g->mu) / g->sigma;
    return -0.5 * z * z - std::log(g->sigma) - 0.5 * std::log(2.0 * bm::constants::pi<double>());
  }
  if (const auto* u = std::get_if<Uniform>(&d)) {
    return (x >= u->lo && x <= u->hi) ? -std::log(u->hi - u->lo) : -std::numeric_limits<double>::infinity();
  }
  if (const auto* b = std::get_if<Beta>(&d)) {
    const double w = b->hi - b->lo;
    const double y = (x - b->lo) / w;
    if (y <= 0.0 || y >= 1.0) return -std::numeric_limits<double>::infinity();
    return (b->alpha - 1.0) * std::log(y) + (b->beta - 1.0) * std::log1p(-y) - std::log(bm::beta(b->alpha, b->beta)) -
           std::log(w);
  }
  if (const auto* g = std::get_if<Gamma>(&d)) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    return g->shape * std::log(g->rate) - std::lgamma(g->shape) + (g->shape - 1.0) * std::log(x) - g->rate * x;
  }
  if (const auto* b = std::get_if<Binomial>(&d)) {
    const int k = static_cast<int>(x);
    return std::lgamma(b->n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(b->n - k + 1.0) + k * std::log(b->p) +
           (b->n - k) * std::log1p(-b->p);
  }
  const auto& p = std::get<Poisson>(d);
  return x * std::log(p.lambda) - p.lambda - std::lgamma(x + 1.0);
}

double density(const Distribution& d, double x) {
  if (const auto* g = std::get_if<Gaussian>(&d)) return bm::pdf(bm::normal_distribution<>(g->mu, g->sigma), x);
  if (const auto* u = std::get_if<Uniform>(&d)) return (x >= u->lo && x <= u->hi) ? 1.0 / (u->hi - u->lo) : 0.0;
  if (const auto* b = std::get_if<Beta>(&d)) {
    const double w = b->hi - b->lo;
    const double y = (x - b->lo) / w;
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return bm::pdf(bm::beta_distribution<>(b->alpha, b->beta), y) / w;
  }
  if (const auto* g = std::get_if<Gamma>(&d)) {
    return x <= 0.0 ? 0.0 : bm::pdf(bm::gamma_distribution<>(g->shape, 1.0 / g->rate), x);
  }
  if (const auto* b = std::get_if<Binomial>(&d)) return bm::pdf(bm::binomial_distribution<>(b->n, b->p), x);
  return bm::pdf(bm::poisson_distribution<>(std::get<Poisson>(d).lambda), x);
}

}  // namespace

double relative_entropy(const Distribution& p, const Distribution& q) {
  auto term = [&](double x) {
    const double w = density(p, x);
    if (w == 0.0) return 0.0;
    return w * (log_density(p, x) - log_density(q, x));
  };
  if (const auto* b = std::get_if<Binomial>(&p)) {
    double s = 0.0;
    for (int k = 0; k <= b->n; ++k) s += term(k);
    return s;
  }
  if (const auto* pp = std::get_if<Poisson>(&p)) {
    double s = 0.0;
    const int kmax = static_cast<int>(pp->lambda + 40.0 * std::sqrt(pp->lambda) + 60.0);
    for (int k = 0; k <= kmax; ++k) s += term(k);
    return s;
  }
  if (const auto* g = std::get_if<Gaussian>(&p)) {
    bm::quadrature::sinh_sinh<double> integ(12);
    return g->sigma * integ.integrate([&](double t) { return term(g->mu + g->sigma * t); }, 1e-14);
  }
  if (const auto* g = std::get_if<Gamma>(&p)) {
    bm::quadrature::exp_sinh<double> integ(12);
    const double s = 1.0 / g->rate;
    return s * integ.integrate([&](double t) { return term(s * t); }, 1e-14);
  }
  double lo = 0.0;
  double hi = 0.0;
  if (const auto* u = std::get_if<Uniform>(&p)) {
    lo = u->lo;
    hi = u->hi;
  } else {
    lo = std::get<Beta>(p).lo;
    hi = std::get<Beta>(p).hi;
  }
  bm::quadrature::tanh_sinh<double> integ(15);
  return integ.integrate(term, lo, hi, 1e-14);
}

double oscillator(double z1, double z2, double t, const OscillatorParams& prm) {
  using State = std::vector<double>;
  const double k = prm.spring_scale * z1;
  const double damping = prm.damping_scale * z2;
  auto rhs = [&](const State& y, State& dy, double s) {
    dy[0] = y[1];
    dy[1] = prm.amplitude * std::cos(prm.frequency * s) + prm.offset - damping * y[1] - k * y[0];
  };
  State y{prm.u0, prm.v0};
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13);
  ode::integrate_adaptive(stepper, rhs, y, 0.0, t, 1e-4);
  return y[0];
}

double heat_linear_series(double x, double t, double k, double m, double q, double L, double u0, int terms) {
  const double pi = bm::constants::pi<double>();
  const double D = k / m;
  double s = 0.0;
  for (int n = terms; n >= 1; --n) {
    const double lam = n * pi / L;
    s += 2.0 / (n * n * pi * pi) * (-std::expm1(-lam * lam * D * t)) * std::cos(lam * x);
  }
  return u0 + q * t / (m * L) + q * L / k * s;
}

}  // namespace oracle
