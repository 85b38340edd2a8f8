#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bergman/hartogs.hpp"
#include "bergman/reinhardt.hpp"

using namespace bergman;
using namespace bergman::hartogs;

namespace {

constexpr double kPi2 = kPi * kPi;

std::mt19937_64& rng() {
  static std::mt19937_64 g(77031);
  return g;
}

double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng()); }

CPoint random_point(double r1_max = 0.95, double t_max = 0.95) {
  const double r1 = 0.02 + (r1_max - 0.02) * std::sqrt(uniform());
  const double t = t_max * std::sqrt(uniform());
  return CPoint{std::polar(r1, 2.0 * kPi * uniform()), std::polar(r1 * t, 2.0 * kPi * uniform())};
}

const QuadratureRule& de_rule() {
  static const QuadratureRule q = [] {
    RuleOptions o;
    o.scheme = RadialScheme::DoubleExponential;
    return build_rule(domain(), 48, 24, 1.0, o);
  }();
  return q;
}

cd monomial(const CPoint& w, int n, int m) { return std::pow(w[0], n) * std::pow(w[1], m); }

}  // namespace

TEST(Coefficients, Values) {
  EXPECT_DOUBLE_EQ(a_nm(0, 0), 2.0 / kPi2);
  EXPECT_DOUBLE_EQ(a_nm(-1, 0), 1.0 / kPi2);
  EXPECT_DOUBLE_EQ(a_nm(3, 2), 3.0 * 7.0 / kPi2);
}

TEST(Coefficients, InadmissibleIndices) {
  EXPECT_THROW(a_nm(-2, 0), Error);
  EXPECT_THROW(a_nm(0, -1), Error);
  EXPECT_THROW(a_nm(-4, 2), Error);
  try {
    a_nm(-2, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InadmissibleIndex);
  }
}

TEST(Coefficients, InverseIsQuadratureNorm) {
  const auto q = build_rule(domain(), 48, 16, 3.0);
  for (auto [n, m] : {std::pair{-1, 0}, std::pair{0, 0}, std::pair{2, 1}}) {
    const double v = integrate(q, [n, m](const CPoint& w) { return std::norm(monomial(w, n, m)); }).real();
    EXPECT_NEAR(v * a_nm(n, m), 1.0, 1e-6) << n << "," << m;
  }
}

TEST(Basis, Orthogonality) {
  const auto q = build_rule(domain(), 24, 12, 3.0);
  std::vector<std::pair<int, int>> idx;
  for (int n = -3; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m)
      if (n + m >= -1) idx.emplace_back(n, m);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const auto [n1, m1] = idx[i];
      const auto [n2, m2] = idx[j];
      const cd ip = integrate(q, [&](const CPoint& w) { return monomial(w, n1, m1) * std::conj(monomial(w, n2, m2)); });
      const double scale = std::sqrt(1.0 / (a_nm(n1, m1) * a_nm(n2, m2)));
      EXPECT_LE(std::abs(ip), 1e-8 * scale) << n1 << "," << m1 << " vs " << n2 << "," << m2;
    }
}

TEST(KernelSeries, MatchesClosedFormOnBox) {
  for (int i = 0; i < 30; ++i) {
    const CPoint z = random_point(0.8, 0.8);
    const CPoint w = random_point(0.8, 0.8);
    const cd s = kernel_series(z, w, 80);
    const cd k = kernel(domain(), z, w);
    EXPECT_LE(std::abs(s - k), 1e-8 * std::abs(k));
  }
}

TEST(FEps, ClosedFormNorm) {
  EXPECT_NEAR(f_eps_norm(0.5) * f_eps_norm(0.5), kPi2, 1e-12);
  EXPECT_NEAR(f_eps_norm(1.0) * f_eps_norm(1.0), volume(domain()), 1e-12);
  EXPECT_DOUBLE_EQ(f_eps(1.0, CPoint{0.3, 0.1}), 1.0);
  EXPECT_NEAR(f_eps(0.5, CPoint{0.25, 0.1}), 4.0, 1e-14);
}

TEST(FEps, QuadratureNorm) {
  for (double eps : {0.5, 0.1, 0.02}) {
    const double v = integrate_scaled(de_rule(), [eps](const CPoint& w) {
                       return ScaledValue{2.0 * log_f_eps(eps, w), 1.0};
                     }).real();
    EXPECT_NEAR(v / (kPi2 / (2.0 * eps)), 1.0, 5e-3) << eps;
  }
}

TEST(FEps, OutOfRange) {
  for (double eps : {0.0, -0.1, 1.5, std::nan("")}) {
    try {
      f_eps_norm(eps);
      ADD_FAILURE() << eps;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::EpsilonOutOfRange);
    }
  }
  EXPECT_THROW(f_eps(0.5, CPoint{0.3, 0.4}), Error);
}

TEST(ClosedForm, IndependentOfSecondCoordinate) {
  EXPECT_DOUBLE_EQ(berezin_feps_closed(0.3, CPoint{0.5, 0.2}).value, berezin_feps_closed(0.3, CPoint{0.5, 0.1}).value);
  EXPECT_DOUBLE_EQ(berezin_feps_closed(0.3, CPoint{0.5, cd(0.0, 0.4)}).value,
                   berezin_feps_closed(0.3, CPoint{0.5, 0.0}).value);
}

TEST(ClosedForm, SmallEpsilonScaling) {
  const CPoint z{0.4, 0.1};
  const double r = berezin_feps_closed(1e-4, z).value / berezin_feps_closed(1e-3, z).value;
  EXPECT_GE(r, 9.0);
  EXPECT_LE(r, 11.0);
}

TEST(ClosedForm, ConstantAtEpsOne) {
  for (double r : {0.0, 0.3, 0.9, 0.999}) {
    const CPoint z{std::max(r, 1e-3), 0.0};
    EXPECT_NEAR(berezin_feps_closed(1.0, z).value, 1.0, 1e-10);
    EXPECT_NEAR(berezin_feps_resummed(1.0, z), 1.0, 1e-14);
  }
}

TEST(ClosedForm, ResummedAgreesWithSeries) {
  for (double eps : {0.5, 0.1, 1e-2, 1e-4}) {
    for (double r : {0.01, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999}) {
      const CPoint z{r, 0.3 * r};
      const double a = berezin_feps_closed(eps, z).value;
      const double b = berezin_feps_resummed(eps, z);
      EXPECT_NEAR(a / b, 1.0, 1e-10) << eps << " " << r;
    }
  }
}

TEST(ClosedForm, RefusesNearBoundaryAndShortTruncation) {
  try {
    berezin_feps_closed(0.1, CPoint{0.9995, 0.0});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TruncationInsufficient);
  }
  EXPECT_THROW(berezin_feps_closed(0.1, CPoint{0.9, 0.0}, 5), Error);
  EXPECT_NO_THROW(berezin_feps_closed(0.1, CPoint{0.1, 0.0}, 20));
}

TEST(ClosedForm, MatchesDirectQuadrature) {
  const auto d = domain();
  RuleOptions o;
  o.scheme = RadialScheme::DoubleExponential;
  const auto q = build_rule(d, 48, 32, 1.0, o);
  {
    const CPoint z{0.3, 0.1};
    const double v = berezin(d, f_eps_symbol(0.1), z, q).real();
    EXPECT_NEAR(v / berezin_feps_closed(0.1, z).value, 1.0, 1e-4);
  }
  for (double eps : {0.1, 0.01}) {
    for (int i = 0; i < 10; ++i) {
      const CPoint z = random_point(0.7, 0.6);
      const double v = berezin(d, f_eps_symbol(eps), z, q).real();
      EXPECT_NEAR(v / berezin_feps_closed(eps, z).value, 1.0, 1e-4) << eps << " " << z[0] << " " << z[1];
    }
  }
}

TEST(DiagonalIdentity, Examples) {
  const auto a = diagonal_identity(CPoint{0.5, 0.0});
  EXPECT_NEAR(a.lhs, 0.5625, 1e-14);
  EXPECT_NEAR(a.rhs, 0.5625, 1e-14);
  EXPECT_TRUE(a.holds());
  const auto b = diagonal_identity(CPoint{0.5, 0.49999});
  EXPECT_LT(b.rhs, 1e-8);
  EXPECT_TRUE(b.holds());
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(diagonal_identity_check(random_point()));
}

TEST(Blowup, RatioLowerAtOnePercent) {
  const auto t = blowup_table({0.01});
  EXPECT_NEAR(t.rows[0].ratio_lower, 1.0 / std::sqrt(0.15), 1e-12);
  EXPECT_NEAR(t.rows[0].ratio_lower, 2.582, 1e-3);
  EXPECT_NEAR(kBoundaryWeightNorm, kPi / std::sqrt(30.0), 1e-15);
}

TEST(Blowup, NormAtEpsOneIsVolume) {
  EXPECT_NEAR(berezin_feps_norm(1.0), kPi / std::sqrt(2.0), 1e-12);
}

TEST(Blowup, RadialReductionAgreesWithSeriesQuadrature) {
  // pi^2 int_0^1 Bf^2 x dx, with the truncated series up to |z1| = 0.999 and
  // the resummed form beyond.
  for (double eps : {0.3, 0.05}) {
    auto g = [eps](double r) {
      const double b = r < 0.999 ? berezin_feps_closed(eps, CPoint{r, 0.0}).value
                                 : berezin_feps_resummed(eps, r * r, (1.0 - r) * (1.0 + r));
      return 2.0 * b * b * r * r * r;
    };
    const double v = integrate_panels(g, 0.0, 0.9, 30) + integrate_panels(g, 0.9, 0.999, 60) +
                     integrate_panels(g, 0.999, 1.0, 10);
    EXPECT_NEAR(kPi * std::sqrt(v) / berezin_feps_norm(eps), 1.0, 1e-9) << eps;
  }
}

TEST(Blowup, DefaultTable) {
  const auto t = blowup_table({1e-1, 1e-2, 1e-3, 1e-4});
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    EXPECT_NEAR(r.ratio_lower, 1.0 / std::sqrt(15.0 * r.eps), 1e-12);
    EXPECT_NEAR(r.ratio_lower, r.lower_bound_Bf / r.norm_f, 1e-12);
    EXPECT_GE(r.ratio_quadrature, 0.99 * r.ratio_lower);
    if (i > 0) {
      EXPECT_GT(r.ratio_quadrature, t.rows[i - 1].ratio_quadrature);
    }
  }
  EXPECT_GE(t.slope, -0.55);
  EXPECT_LE(t.slope, -0.45);
}

TEST(Blowup, Csv) {
  const auto t = blowup_table({0.1, 0.01});
  std::ostringstream os;
  write_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "eps,norm_f,lower_bound_Bf,ratio_lower,ratio_quadrature");
  std::getline(is, line);
  EXPECT_EQ(line.substr(0, 4), "0.1,");
  EXPECT_NE(line.find("7.02481473104"), std::string::npos);  // pi / sqrt(0.2)
  EXPECT_THROW(blowup_table({0.0}), Error);
}

TEST(WeakPairing, ClosedForm) {
  EXPECT_NEAR(weak_pairing(2), 3.0 * kPi / 4.0, 1e-14);
  for (int j = 2; j <= 10; ++j) EXPECT_NEAR(weak_pairing(j), kPi * (1.0 - 1.0 / (j * j)), 1e-8);
  EXPECT_NEAR(weak_pairing(1000), kPi, 1e-5);
  EXPECT_THROW(weak_pairing(1), Error);
}

TEST(WeakPairing, Quadrature) {
  const auto q = build_rule(domain(), 32, 16, 2.0);
  EXPECT_NEAR(weak_pairing_quadrature(3, q), weak_pairing(3), 1e-4);
}
