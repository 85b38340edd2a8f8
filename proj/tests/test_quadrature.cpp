#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bergman/quadrature.hpp"

using namespace bergman;

namespace {

double pi2() { return kPi * kPi; }

}  // namespace

TEST(RadialRules, GaussIntegratesPolynomialsOnUnitInterval) {
  const RadialRule r = radial_gauss(12, 1.0);
  for (int k = 0; k <= 23; ++k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.r[i], k);
    EXPECT_NEAR(s.value(), 1.0 / (k + 1), 1e-14) << k;
  }
}

TEST(RadialRules, ComplementsAreConsistent) {
  for (const RadialRule& r : {radial_gauss(16, 3.0), radial_double_exponential(40), radial_log_boundary(8, 10.0)}) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_GT(r.r[i], 0.0);
      EXPECT_GT(r.comp[i], 0.0);
      EXPECT_NEAR(r.r[i] + r.comp[i], 1.0, 1e-15);
      EXPECT_NEAR(std::exp(r.log_w[i]), r.w[i], 1e-13 * r.w[i] + 1e-300);
    }
  }
}

TEST(RadialRules, DoubleExponentialAbsorbsStrongOriginSingularity) {
  // int_0^1 r^(a) dr = 1/(a+1) for a close to -1
  // The rule stops at r = 1e-290, so the mass below it, 1e-290^(a+1), is lost.
  const RadialRule r = radial_double_exponential(60);
  for (double a : {-0.5, -0.9, -0.92, -0.98, -0.995}) {
    CompensatedSum s;
    for (std::size_t i = 0; i < r.size(); ++i) s += std::exp(r.log_w[i] + a * r.log_r[i]);
    const double lost = std::pow(1e-290, a + 1.0);
    EXPECT_NEAR(s.value() * (a + 1.0), 1.0, 1e-12 + lost) << a;
  }
}

TEST(RadialRules, LogBoundaryIntegratesToTruncationDepth) {
  const RadialRule r = radial_log_boundary(24, 12.0);
  CompensatedSum s;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i];
  EXPECT_NEAR(s.value(), 1.0 - 1e-12, 1e-13);
}

TEST(BuildRule, DiscAreaAtGradingTwo) {
  const auto q = build_rule(DomainSpec::disc(), 64, 64, 2.0);
  EXPECT_NEAR(sum_of_weights(q), kPi, 1e-10);
  EXPECT_NEAR(integrate(q, [](const CPoint&) { return 1.0; }).real(), kPi, 1e-10);
}

TEST(BuildRule, HartogsVolume) {
  const auto q = build_rule(DomainSpec::hartogs(), 64, 64, 3.0);
  EXPECT_NEAR(sum_of_weights(q), pi2() / 2.0, 1e-6);
}

TEST(BuildRule, BidiscVolume) {
  const auto q = build_rule(DomainSpec::polydisc(2), 32, 32, 2.0);
  EXPECT_NEAR(sum_of_weights(q), pi2(), 1e-8);
}

TEST(BuildRule, BallVolume) {
  EXPECT_NEAR(sum_of_weights(build_rule(DomainSpec::ball(2), 16, 16, 1.0)), pi2() / 2.0, 1e-12);
  EXPECT_NEAR(sum_of_weights(build_rule(DomainSpec::ball(2), 16, 16, 2.0)), pi2() / 2.0, 1e-6);
}

TEST(BuildRule, NodesInsideWithPositiveWeights) {
  for (const DomainSpec& d : {DomainSpec::disc(), DomainSpec::punctured_disc(), DomainSpec::upper_half_plane(),
                              DomainSpec::polydisc(2), DomainSpec::ball(2), DomainSpec::hartogs()}) {
    const auto q = build_rule(d, 8, 8, 3.0);
    std::size_t count = 0;
    q.for_each([&](const Node& n) {
      EXPECT_TRUE(contains(d, n.point)) << d.tag();
      EXPECT_GT(n.weight, 0.0);
      ++count;
    });
    EXPECT_EQ(count, q.size());
  }
  RuleOptions de;
  de.scheme = RadialScheme::DoubleExponential;
  const auto q = build_rule(DomainSpec::hartogs(), 40, 8, 1.0, de);
  q.for_each([&](const Node& n) { EXPECT_TRUE(contains(DomainSpec::hartogs(), n.point)); });
}

TEST(BuildRule, NodeAccessMatchesIteration) {
  const auto q = build_rule(DomainSpec::hartogs(), 5, 6, 2.0);
  std::size_t i = 0;
  q.for_each([&](const Node& n) {
    const Node m = q.node(i++);
    EXPECT_EQ(n.point, m.point);
    EXPECT_EQ(n.weight, m.weight);
  });
}

TEST(BuildRule, RejectsBadResolution) {
  EXPECT_THROW(build_rule(DomainSpec::disc(), 3, 8, 1.0), Error);
  EXPECT_THROW(build_rule(DomainSpec::disc(), 8, 3, 1.0), Error);
  try {
    build_rule(DomainSpec::disc(), 8, 8, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidResolution);
  }
}

TEST(BuildRule, RefinementChangesVolumeNegligibly) {
  for (const DomainSpec& d : {DomainSpec::disc(), DomainSpec::polydisc(2), DomainSpec::ball(2), DomainSpec::hartogs()}) {
    const double g = d.kind == DomainKind::HartogsTriangle ? 3.0 : 2.0;
    const double a = sum_of_weights(build_rule(d, 32, 8, g));
    const double b = sum_of_weights(build_rule(d, 64, 8, g));
    EXPECT_LT(std::abs(a - b) / b, 1e-8) << d.tag();
  }
}

TEST(Integrate, DiscExactnessForEvenPowers) {
  const int n = 16;
  const auto q = build_rule(DomainSpec::disc(), n, 8, 1.0);
  for (int m = 0; m <= n / 2; ++m) {
    const double v = integrate(q, [m](const CPoint& z) { return std::pow(std::norm(z[0]), m); }).real();
    EXPECT_NEAR(v * (m + 1) / kPi, 1.0, 1e-10) << m;
  }
}

// int_H |w1|^s dV = 2 pi^2 / (s + 4)
TEST(Integrate, HartogsSingularPowerOfFirstModulus) {
  const auto q = build_rule(DomainSpec::hartogs(), 32, 16, 3.0);
  for (double eps : {0.5, 0.1, 0.02}) {
    const double v =
        integrate(q, [eps](const CPoint& w) { return std::pow(std::abs(w[0]), -2.0 + 2.0 * eps); }).real();
    EXPECT_NEAR(v / (2.0 * pi2() / (2.0 + 2.0 * eps)), 1.0, 1e-8) << eps;
  }
}

TEST(Integrate, HartogsSquaredSingularPowerNeedsDoubleExponential) {
  RuleOptions de;
  de.scheme = RadialScheme::DoubleExponential;
  const auto q = build_rule(DomainSpec::hartogs(), 48, 8, 1.0, de);
  for (double eps : {0.5, 0.1, 0.02}) {
    // |w1|^(-4+4 eps) overflows at the deepest nodes; only the product with the weight is finite.
    EXPECT_THROW(integrate(q, [eps](const CPoint& w) { return std::pow(std::abs(w[0]), -4.0 + 4.0 * eps); }), Error);
    const double v = integrate_scaled(q, [eps](const CPoint& w) {
                       return ScaledValue{(-4.0 + 4.0 * eps) * std::log(std::abs(w[0])), 1.0};
                     }).real();
    EXPECT_NEAR(v / (pi2() / (2.0 * eps)), 1.0, 1e-8) << eps;
  }
  // The default graded Gauss rule misses most of this at eps = 0.02.
  const auto g = build_rule(DomainSpec::hartogs(), 32, 8, 3.0);
  const double v = integrate(g, [](const CPoint& w) { return std::pow(std::abs(w[0]), -4.0 + 0.08); }).real();
  EXPECT_GT(std::abs(v / (pi2() / 0.04) - 1.0), 5e-3);
}

TEST(Integrate, HartogsBoundaryWeightFourthPower) {
  const auto q = build_rule(DomainSpec::hartogs(), 32, 16, 3.0);
  const double v = integrate(q, [](const CPoint& w) { return std::pow(1.0 - std::norm(w[0]), 4); }).real();
  EXPECT_NEAR(v, pi2() / 30.0, 1e-4);
}

TEST(Integrate, RejectsNonFiniteIntegrand) {
  const auto q = build_rule(DomainSpec::disc(), 8, 8, 1.0);
  try {
    integrate(q, [](const CPoint&) { return std::nan(""); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteValue);
  }
}

TEST(Integrate, ScaledMatchesPlain) {
  const auto q = build_rule(DomainSpec::hartogs(), 16, 8, 3.0);
  const cd a = integrate(q, [](const CPoint& w) { return std::norm(w[1]); });
  const cd b = integrate_scaled(q, [](const CPoint& w) { return ScaledValue{2.0 * std::log(std::abs(w[1])), 1.0}; });
  EXPECT_NEAR(std::abs(a - b) / std::abs(a), 0.0, 1e-13);
}

TEST(Integrate, GridFunctionAgreesWithCallable) {
  const auto q = build_rule(DomainSpec::polydisc(2), 8, 8, 2.0);
  auto f = [](const CPoint& z) { return std::norm(z[0]) + cd{0.0, 1.0} * std::norm(z[1] * z[0]); };
  const auto g = GridFunction::sample(q, f);
  EXPECT_EQ(g.size(), q.size());
  EXPECT_EQ(integrate(q, g), integrate(q, f));
}

TEST(Integrate, HalfPlaneChartIntegratesDecayingFunction) {
  // int over Im z > 0 of 1/|z + i|^4 = pi/4... checked by the 1-D polar reduction:
  // with z + i = s e^{it}, Im z = s sin t - 1 > 0, so the integral is
  // int_0^pi int_{1/sin t}^inf s^-3 ds dt = int_0^pi sin^2 t / 2 dt = pi/4.
  const auto q = build_rule(DomainSpec::upper_half_plane(), 32, 64, 2.0);
  const double v = integrate(q, [](const CPoint& z) { return 1.0 / std::pow(std::norm(z[0] + cd{0.0, 1.0}), 2); }).real();
  EXPECT_NEAR(v, kPi / 4.0, 1e-10);
}

TEST(Serialization, RoundTripsNodesAndWeights) {
  const auto q = build_rule(DomainSpec::hartogs(), 5, 4, 3.0);
  std::stringstream ss;
  write_rule(ss, q);
  const auto r = read_rule(ss);
  ASSERT_EQ(r.size(), q.size());
  EXPECT_EQ(r.meta().domain_tag, "hartogs");
  EXPECT_EQ(r.meta().radial_n, 5);
  EXPECT_EQ(r.meta().grading, 3.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(r.node(i).point, q.node(i).point);
    EXPECT_EQ(r.node(i).weight, q.node(i).weight);
  }
  EXPECT_EQ(sum_of_weights(r), sum_of_weights(q));
}

TEST(Serialization, RejectsGarbage) {
  std::stringstream ss("not a rule at all");
  EXPECT_THROW(read_rule(ss), Error);
}

TEST(TailExponents, BoasOuterIntegral) {
  auto at_inf = [](int j, int k) { return TailExponent{TailEnd::AtInfinity, 2.0 * j + 1.0 - (2.0 * k + 2.0)}; };
  EXPECT_EQ(tail_exponent_classify(at_inf(0, 1)), Convergence::Converges);
  EXPECT_EQ(tail_exponent_classify(at_inf(1, 1)), Convergence::Diverges);
}

TEST(TailExponents, OriginAndBorderline) {
  EXPECT_EQ(tail_exponent_classify(TailExponent{TailEnd::AtZero, -1.0 + 0.4}), Convergence::Converges);
  EXPECT_EQ(tail_exponent_classify(TailExponent{TailEnd::AtZero, -1.2}), Convergence::Diverges);
  try {
    tail_exponent_classify(TailExponent{TailEnd::AtZero, -1.0 + 1e-11});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BorderlineExponent);
  }
}
