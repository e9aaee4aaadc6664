#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/digamma.hpp>

#include "oracles.hpp"
#include "rsbounds/distributions.hpp"
#include "rsbounds/error.hpp"

using namespace rsbounds;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Random same-family pairs, fixed seed.
class RandomPairs : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20240611};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

void expect_agreement(const Distribution& p, const Distribution& q) {
  SCOPED_TRACE(describe(p) + " || " + describe(q));
  const double closed = relative_entropy_closed(p, q);
  EXPECT_NEAR(closed, oracle::relative_entropy(p, q), 1e-6);
  EXPECT_NEAR(closed, relative_entropy_numeric(p, q), 1e-6);
  EXPECT_GE(closed, 0.0);
}

}  // namespace

TEST_F(RandomPairs, Gaussian) {
  for (int k = 0; k < 25; ++k) {
    expect_agreement(Gaussian{uniform(-2, 2), uniform(0.3, 3)}, Gaussian{uniform(-2, 2), uniform(0.3, 3)});
  }
}

TEST_F(RandomPairs, Beta) {
  for (int k = 0; k < 25; ++k) {
    const double lo = uniform(-1, 1);
    const double hi = lo + uniform(0.5, 3);
    expect_agreement(Beta{uniform(0.6, 12), uniform(0.6, 12), lo, hi}, Beta{uniform(0.6, 12), uniform(0.6, 12), lo, hi});
  }
}

TEST_F(RandomPairs, Gamma) {
  for (int k = 0; k < 25; ++k) {
    expect_agreement(Gamma{uniform(0.7, 9), uniform(0.2, 4)}, Gamma{uniform(0.7, 9), uniform(0.2, 4)});
  }
}

TEST_F(RandomPairs, Binomial) {
  for (int k = 0; k < 25; ++k) {
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    expect_agreement(Binomial{n, uniform(0.02, 0.98)}, Binomial{n, uniform(0.02, 0.98)});
  }
}

TEST_F(RandomPairs, Poisson) {
  for (int k = 0; k < 25; ++k) expect_agreement(Poisson{uniform(0.1, 40)}, Poisson{uniform(0.1, 40)});
}

TEST(RelativeEntropy, BetaAgainstUniformOnUnitInterval) {
  const double b = relative_entropy(Beta{1.5, 1.5}, Uniform{0.0, 1.0});
  EXPECT_NEAR(b, 0.0484172947, 1e-9);
  EXPECT_NEAR(b, oracle::relative_entropy(Beta{1.5, 1.5}, Uniform{0.0, 1.0}), 1e-10);
}

TEST(RelativeEntropy, IdenticalLawsGiveZero) {
  for (const Distribution& d : {Distribution{Gaussian{1.0, 2.0}}, Distribution{Beta{2.0, 3.0}},
                                Distribution{Gamma{2.0, 1.0}}, Distribution{Binomial{10, 0.3}},
                                Distribution{Poisson{3.0}}, Distribution{Uniform{0.0, 2.0}}}) {
    EXPECT_NEAR(relative_entropy(d, d), 0.0, 1e-14) << describe(d);
  }
}

TEST(RelativeEntropy, InfiniteWithoutAbsoluteContinuity) {
  EXPECT_EQ(relative_entropy(Uniform{0.0, 2.0}, Uniform{0.0, 1.0}), kInf);
  EXPECT_EQ(relative_entropy(Gaussian{}, Uniform{0.0, 1.0}), kInf);
  EXPECT_EQ(relative_entropy(Gaussian{}, Gamma{2.0, 1.0}), kInf);
  EXPECT_EQ(relative_entropy(Binomial{10, 0.5}, Binomial{5, 0.5}), kInf);
  EXPECT_EQ(relative_entropy(Poisson{1.0}, Binomial{5, 0.5}), kInf);
  EXPECT_EQ(relative_entropy_numeric(Uniform{0.0, 2.0}, Uniform{0.0, 1.0}), kInf);
}

TEST(RelativeEntropy, CrossFamilyPairsFallBackToTheNumericalIntegral) {
  EXPECT_THROW(relative_entropy_closed(Beta{2.0, 2.0}, Gaussian{0.5, 1.0}), IncompatibleError);
  const double r = relative_entropy(Beta{2.0, 2.0}, Gaussian{0.5, 1.0});
  EXPECT_NEAR(r, oracle::relative_entropy(Beta{2.0, 2.0}, Gaussian{0.5, 1.0}), 1e-9);
  // Binomial with fewer trials sits inside the support of one with more.
  EXPECT_THROW(relative_entropy_closed(Binomial{4, 0.5}, Binomial{9, 0.4}), IncompatibleError);
  EXPECT_NEAR(relative_entropy(Binomial{4, 0.5}, Binomial{9, 0.4}),
              oracle::relative_entropy(Binomial{4, 0.5}, Binomial{9, 0.4}), 1e-10);
}

TEST(RelativeEntropy, UniformSubintervalOfBeta) {
  // Beta on a sub-interval has no common parameterization with the outer law.
  const Distribution p = Uniform{0.2, 0.6};
  const Distribution q = Beta{2.0, 3.0};
  EXPECT_NEAR(relative_entropy(p, q), oracle::relative_entropy(p, q), 1e-9);
}

// R is invariant when the same invertible affine map is applied to both laws.
TEST(RelativeEntropy, AffineInvariance) {
  const std::vector<std::pair<Distribution, Distribution>> pairs{
      {Gaussian{0.5, 1.3}, Gaussian{-0.2, 0.8}},
      {Beta{2.0, 3.0}, Beta{1.5, 1.5}},
      {Beta{10.0, 10.0}, Uniform{0.0, 1.0}},
      {Uniform{0.2, 0.7}, Uniform{0.0, 1.0}},
  };
  for (const auto& [p, q] : pairs) {
    for (const auto& [s, t] : std::vector<std::pair<double, double>>{{3.0, -1.0}, {-0.25, 2.0}, {1e-3, 3e-3}}) {
      SCOPED_TRACE(describe(p) + " || " + describe(q) + " under " + std::to_string(s) + " x + " + std::to_string(t));
      EXPECT_NEAR(relative_entropy(affine_image(p, s, t), affine_image(q, s, t)), relative_entropy(p, q), 1e-10);
    }
  }
  const double g = relative_entropy(Gamma{2.0, 1.5}, Gamma{3.0, 0.7});
  EXPECT_NEAR(relative_entropy(affine_image(Gamma{2.0, 1.5}, 4.0, 0.0), affine_image(Gamma{3.0, 0.7}, 4.0, 0.0)), g,
              1e-10);
}

TEST(RelativeEntropy, BinomialDirection) {
  const Binomial p{20, 0.2};
  const Binomial q{20, 0.6};
  const double forward = relative_entropy(p, q);
  const double reverse = relative_entropy(q, p);
  EXPECT_GT(std::abs(forward - reverse), 0.1);
  EXPECT_NEAR(forward, oracle::relative_entropy(p, q), 1e-10);
}

// ---------------------------------------------------------------------------
// Commonly printed table entries checked against the oracle. The Gaussian entry
// as printed is not a relative entropy (it can be negative); the Gamma and
// Binomial entries are the reverse direction R(Q || P).

namespace printed {

double gaussian(const Gaussian& p, const Gaussian& q) {
  const double m1 = q.mu, s1 = q.sigma, m2 = p.mu, s2 = p.sigma;
  return ((m1 * m1 - m2 * m2) + (s2 - s1)) / (2.0 * s1 * s1) + std::log(s1 / s2);
}

double gamma(const Gamma& p, const Gamma& q) {
  const double a1 = q.shape, b1 = q.rate, a2 = p.shape, b2 = p.rate;
  return a1 / b1 * (b2 - b1) + (a1 - a2) * (boost::math::digamma(a1) - std::log(b1)) +
         std::log(std::tgamma(a2) * std::pow(b1, a1) / (std::tgamma(a1) * std::pow(b2, a2)));
}

double binomial(const Binomial& p, const Binomial& q) {
  const double n = q.n, p1 = q.p, p2 = p.p, mu1 = n * q.p;
  return std::log(std::pow(p1, mu1) * std::pow(1 - p2, mu1 - n) / (std::pow(p2, mu1) * std::pow(1 - p1, mu1 - n)));
}

}  // namespace printed

TEST(PrintedTable, GaussianEntryDisagreesWithTheOracle) {
  const Gaussian p{1.0, 1.0};
  const Gaussian q{0.0, 1.0};
  EXPECT_NEAR(oracle::relative_entropy(p, q), 0.5, 1e-12);
  EXPECT_NEAR(relative_entropy(p, q), 0.5, 1e-14);
  EXPECT_NEAR(printed::gaussian(p, q), -0.5, 1e-14);  // negative, so not a divergence
  const Gaussian p2{0.3, 2.0};
  const Gaussian q2{-0.4, 1.2};
  EXPECT_GT(std::abs(printed::gaussian(p2, q2) - oracle::relative_entropy(p2, q2)), 0.1);
}

TEST(PrintedTable, GammaEntryIsTheReverseDirection) {
  const Gamma p{2.0, 1.5};
  const Gamma q{5.0, 0.7};
  EXPECT_NEAR(printed::gamma(p, q), oracle::relative_entropy(q, p), 1e-9);
  EXPECT_GT(std::abs(printed::gamma(p, q) - oracle::relative_entropy(p, q)), 0.1);
  EXPECT_NEAR(relative_entropy(p, q), oracle::relative_entropy(p, q), 1e-9);
}

TEST(PrintedTable, BinomialEntryIsTheReverseDirection) {
  const Binomial p{20, 0.2};
  const Binomial q{20, 0.6};
  EXPECT_NEAR(printed::binomial(p, q), oracle::relative_entropy(q, p), 1e-9);
  EXPECT_GT(std::abs(printed::binomial(p, q) - oracle::relative_entropy(p, q)), 0.1);
}

TEST(PrintedTable, BetaTenTenAgainstBetaFiveFive) {
  // Value used as B in the oscillator and heat examples.
  const double r = relative_entropy(Beta{10.0, 10.0}, Beta{5.0, 5.0});
  EXPECT_NEAR(r, oracle::relative_entropy(Beta{10.0, 10.0}, Beta{5.0, 5.0}), 1e-10);
  EXPECT_NEAR(r, 0.10280, 5e-5);
}

TEST(RelativeEntropy, NumericRejectsBadResolution) {
  EXPECT_THROW(relative_entropy_numeric(Gaussian{}, Gaussian{}, 0), PreconditionError);
}
