#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/distributions/uniform.hpp>

#include "oracles.hpp"
#include "rsbounds/distributions.hpp"
#include "rsbounds/error.hpp"

using namespace rsbounds;
namespace bm = boost::math;

namespace {

struct Case {
  Distribution d;
  std::vector<double> points;
};

std::vector<Case> cases() {
  return {
      {Gaussian{0.3, 1.7}, {-3.0, 0.0, 0.3, 2.5}},
      {Uniform{-1.0, 3.0}, {-1.0, 0.0, 2.9}},
      {Beta{2.5, 4.0}, {0.01, 0.3, 0.99}},
      {Beta{0.7, 1.3, 2.0, 5.0}, {2.001, 3.0, 4.9}},
      {Gamma{3.5, 2.0}, {0.1, 1.0, 4.0}},
      {Binomial{12, 0.35}, {0.0, 4.0, 12.0}},
      {Poisson{4.2}, {0.0, 3.0, 11.0}},
  };
}

double boost_pdf(const Distribution& d, double x) {
  if (const auto* g = std::get_if<Gaussian>(&d)) return bm::pdf(bm::normal_distribution<>(g->mu, g->sigma), x);
  if (const auto* u = std::get_if<Uniform>(&d)) return bm::pdf(bm::uniform_distribution<>(u->lo, u->hi), x);
  if (const auto* b = std::get_if<Beta>(&d)) {
    const double w = b->hi - b->lo;
    return bm::pdf(bm::beta_distribution<>(b->alpha, b->beta), (x - b->lo) / w) / w;
  }
  if (const auto* g = std::get_if<Gamma>(&d)) return bm::pdf(bm::gamma_distribution<>(g->shape, 1.0 / g->rate), x);
  if (const auto* b = std::get_if<Binomial>(&d)) return bm::pdf(bm::binomial_distribution<>(b->n, b->p), x);
  return bm::pdf(bm::poisson_distribution<>(std::get<Poisson>(d).lambda), x);
}

std::pair<double, double> boost_mean_variance(const Distribution& d) {
  if (const auto* g = std::get_if<Gaussian>(&d)) return {g->mu, g->sigma * g->sigma};
  if (const auto* u = std::get_if<Uniform>(&d)) {
    bm::uniform_distribution<> b(u->lo, u->hi);
    return {bm::mean(b), bm::variance(b)};
  }
  if (const auto* b = std::get_if<Beta>(&d)) {
    bm::beta_distribution<> bd(b->alpha, b->beta);
    const double w = b->hi - b->lo;
    return {b->lo + w * bm::mean(bd), w * w * bm::variance(bd)};
  }
  if (const auto* g = std::get_if<Gamma>(&d)) {
    bm::gamma_distribution<> gd(g->shape, 1.0 / g->rate);
    return {bm::mean(gd), bm::variance(gd)};
  }
  if (const auto* b = std::get_if<Binomial>(&d)) {
    bm::binomial_distribution<> bd(b->n, b->p);
    return {bm::mean(bd), bm::variance(bd)};
  }
  bm::poisson_distribution<> pd(std::get<Poisson>(d).lambda);
  return {bm::mean(pd), bm::variance(pd)};
}

}  // namespace

TEST(Distribution, DensityMatchesBoost) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(describe(c.d));
    for (double x : c.points) {
      const double ref = boost_pdf(c.d, x);
      EXPECT_NEAR(pdf(c.d, x), ref, 1e-12 * std::max(1.0, ref)) << "x=" << x;
      EXPECT_NEAR(log_pdf(c.d, x), std::log(ref), 1e-11) << "x=" << x;
    }
  }
}

TEST(Distribution, DensityVanishesOutsideSupport) {
  EXPECT_EQ(pdf(Uniform{0.0, 1.0}, 1.5), 0.0);
  EXPECT_EQ(pdf(Beta{2.0, 2.0}, -0.1), 0.0);
  EXPECT_EQ(pdf(Gamma{2.0, 1.0}, -1.0), 0.0);
  EXPECT_EQ(pdf(Binomial{5, 0.5}, 6.0), 0.0);
  EXPECT_EQ(pdf(Poisson{1.0}, 2.5), 0.0);
  EXPECT_EQ(log_pdf(Uniform{0.0, 1.0}, 2.0), -std::numeric_limits<double>::infinity());
}

TEST(Distribution, MeanAndVarianceMatchBoost) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(describe(c.d));
    const auto [m, v] = boost_mean_variance(c.d);
    EXPECT_NEAR(mean(c.d), m, 1e-12 * (1.0 + std::abs(m)));
    EXPECT_NEAR(variance(c.d), v, 1e-12 * (1.0 + v));
  }
}

TEST(Distribution, BasisRuleReproducesFirstTwoMoments) {
  for (const auto& c : cases()) {
    if (is_discrete(c.d)) continue;
    SCOPED_TRACE(describe(c.d));
    const QuadratureRule rule = gauss_rule(basis_for(c.d), 6);
    const double m1 = rule.integrate([](double x) { return x; });
    const double m2 = rule.integrate([](double x) { return x * x; });
    const auto [m, v] = boost_mean_variance(c.d);
    EXPECT_NEAR(m1, m, 1e-12 * (1.0 + std::abs(m)));
    EXPECT_NEAR(m2 - m1 * m1, v, 1e-11 * (1.0 + v));
  }
}

TEST(Distribution, BasisForMapsFamiliesAsDocumented) {
  const auto j = std::get<Jacobi>(basis_for(Beta{3.0, 1.5, 0.0, 2.0}));
  EXPECT_DOUBLE_EQ(j.alpha, 0.5);
  EXPECT_DOUBLE_EQ(j.beta, 2.0);
  EXPECT_DOUBLE_EQ(j.hi, 2.0);
  const auto l = std::get<Laguerre>(basis_for(Gamma{2.5, 4.0}));
  EXPECT_DOUBLE_EQ(l.alpha, 1.5);
  EXPECT_DOUBLE_EQ(l.scale, 0.25);
  EXPECT_TRUE(std::holds_alternative<Legendre>(basis_for(Uniform{0.0, 1.0})));
  EXPECT_TRUE(std::holds_alternative<Hermite>(basis_for(Gaussian{})));
  EXPECT_THROW(basis_for(Poisson{2.0}), UnsupportedError);
}

TEST(Distribution, ValidationRejectsOutOfDomainParameters) {
  EXPECT_THROW(validate(Gaussian{0.0, 0.0}), ParameterDomainError);
  EXPECT_THROW(validate(Uniform{1.0, 1.0}), ParameterDomainError);
  EXPECT_THROW(validate(Beta{0.0, 1.0}), ParameterDomainError);
  EXPECT_THROW(validate(Gamma{1.0, -2.0}), ParameterDomainError);
  EXPECT_THROW(validate(Binomial{0, 0.5}), ParameterDomainError);
  EXPECT_THROW(validate(Binomial{3, 1.5}), ParameterDomainError);
  EXPECT_THROW(validate(Poisson{0.0}), ParameterDomainError);
  EXPECT_THROW(validate(Gaussian{std::nan(""), 1.0}), ParameterDomainError);
}

TEST(Distribution, AffineImageTransformsMoments) {
  for (const Distribution& d : {Distribution{Gaussian{1.0, 2.0}}, Distribution{Uniform{0.0, 3.0}},
                                Distribution{Beta{2.0, 5.0, 1.0, 2.0}}}) {
    SCOPED_TRACE(describe(d));
    for (double s : {2.5, -0.5}) {
      const Distribution img = affine_image(d, s, 0.75);
      EXPECT_NEAR(mean(img), s * mean(d) + 0.75, 1e-12);
      EXPECT_NEAR(variance(img), s * s * variance(d), 1e-12);
      // Density transforms with the Jacobian.
      const double x = mean(d) + 0.1;
      EXPECT_NEAR(pdf(img, s * x + 0.75), pdf(d, x) / std::abs(s), 1e-12);
    }
  }
  const Distribution g = affine_image(Gamma{2.0, 3.0}, 2.0, 0.0);
  EXPECT_NEAR(mean(g), 2.0 * mean(Gamma{2.0, 3.0}), 1e-12);
  EXPECT_THROW(affine_image(Gamma{2.0, 3.0}, -1.0, 0.0), UnsupportedError);
  EXPECT_THROW(affine_image(Poisson{2.0}, 2.0, 0.0), UnsupportedError);
  EXPECT_THROW(affine_image(Gaussian{}, 0.0, 1.0), ParameterDomainError);
}

TEST(ExponentialFamily, FormReproducesTheDensity) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(describe(c.d));
    const ExponentialFamilyForm form = exponential_family_form(c.d);
    for (double x : c.points) {
      EXPECT_NEAR(form.log_density(x), log_pdf(c.d, x), 1e-10) << "x=" << x;
    }
  }
}

// R(P || Q) = sum_i (eta_i(P) - eta_i(Q)) E_P[T_i] - A(P) + A(Q), with E_P[T_i]
// taken by quadrature on the test side.
TEST(ExponentialFamily, GeneralIdentityMatchesDirectRelativeEntropy) {
  const std::vector<std::pair<Distribution, Distribution>> pairs{
      {Gaussian{0.5, 1.3}, Gaussian{-0.2, 0.8}},
      {Beta{2.0, 3.0}, Beta{1.5, 1.5}},
      {Gamma{2.0, 1.5}, Gamma{3.0, 0.7}},
      {Binomial{9, 0.3}, Binomial{9, 0.55}},
      {Poisson{2.5}, Poisson{4.0}},
  };
  for (const auto& [p, q] : pairs) {
    SCOPED_TRACE(describe(p) + " vs " + describe(q));
    const auto fp = exponential_family_form(p);
    const auto fq = exponential_family_form(q);
    ASSERT_EQ(fp.eta.size(), fq.eta.size());
    double r = fq.log_partition - fp.log_partition;
    for (std::size_t i = 0; i < fp.eta.size(); ++i) {
      double expected_t = 0.0;
      if (is_discrete(p)) {
        for (int k = 0; k <= 200; ++k) expected_t += pdf(p, k) * fp.statistic(i, k);
      } else {
        // Log statistics diverge at the endpoints where the weight vanishes faster.
        expected_t = oracle::integrate_weight(basis_for(p), [&](double x) {
          const double t = fp.statistic(i, x);
          return std::isfinite(t) ? t : 0.0;
        });
      }
      r += (fp.eta[i] - fq.eta[i]) * expected_t;
    }
    EXPECT_NEAR(r, oracle::relative_entropy(p, q), 1e-9);
  }
}

TEST(Sampling, SeededAndConsistentWithMoments) {
  for (const auto& c : cases()) {
    SCOPED_TRACE(describe(c.d));
    std::mt19937_64 a(42);
    std::mt19937_64 b(42);
    EXPECT_EQ(sample(c.d, a), sample(c.d, b));
    const int n = 100000;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double x = sample(c.d, a);
      ASSERT_TRUE(support(c.d).contains(x));
      s += x;
    }
    EXPECT_NEAR(s / n, mean(c.d), 5.0 * std::sqrt(variance(c.d) / n));
  }
}
