#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bergman/berezin.hpp"
#include "bergman/opnorm.hpp"

using namespace bergman;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(5151);
  return g;
}

double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng()); }

cd disc_point(double rmax) { return std::polar(rmax * std::sqrt(uniform()), 2.0 * kPi * uniform()); }

const double kDiscNorm2 = 3.0 * kPi / 4.0;
const double kDiscNorm3 = 4.0 * kPi / (9.0 * std::sin(kPi / 3.0));

const OperatorMatrix& disc_quotient() {
  static const OperatorMatrix m = discretize_berezin_quotient(DomainSpec::disc());
  return m;
}

}  // namespace

TEST(Discretize, PointRowSumsAtInteriorRows) {
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 64, 256, 1.0);
  std::vector<CPoint> rows;
  for (int i = 0; i < 20; ++i) rows.push_back(CPoint{disc_point(0.85)});
  const auto M = discretize_berezin(d, q, rows);
  const Eigen::VectorXd s = M.row_sums();
  for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], 1.0, 1e-6);
}

TEST(Discretize, QuotientRowSums) {
  const auto& M = disc_quotient();
  const Eigen::VectorXd s = M.row_sums();
  int checked = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    // a row at 1 - r = c misses about 1e-12 / c of its mass past the mesh cut-off
    if (M.row_moduli[static_cast<std::size_t>(i)][0].comp < 1e-5) continue;
    EXPECT_NEAR(s[i], 1.0, 1e-6) << M.row_moduli[static_cast<std::size_t>(i)][0].comp;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Discretize, ApplyReproducesBerezinOnDisc) {
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 16, 32, 2.0);
  const auto phi = OperatorSymbol::bounded([](const CPoint& w) { return cd(std::cos(3.0 * w[0].real()), w[0].imag()); }, "g");
  std::vector<CPoint> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(CPoint{disc_point(0.9)});
  const auto M = discretize_berezin(d, q, rows);
  Eigen::VectorXcd f(static_cast<Eigen::Index>(M.cols.size()));
  for (std::size_t j = 0; j < M.cols.size(); ++j) f[static_cast<Eigen::Index>(j)] = phi.value(M.cols[j]);
  const Eigen::VectorXcd Bf = M.apply(f);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const cd b = berezin(d, phi, rows[i], q);
    EXPECT_LE(std::abs(Bf[static_cast<Eigen::Index>(i)] - b), 1e-10 * std::max(1.0, std::abs(b)));
  }
}

TEST(Discretize, ApplyReproducesBerezinOnHartogs) {
  const auto d = DomainSpec::hartogs();
  const auto q = build_rule(d, 16, 16, 3.0);
  const auto phi = hartogs::f_eps_symbol(0.1);
  std::vector<CPoint> rows;
  for (int i = 0; i < 10; ++i) {
    const double r = 0.1 + 0.8 * uniform();
    rows.push_back(CPoint{std::polar(r, 6.0 * uniform()), std::polar(0.7 * r * uniform(), 6.0 * uniform())});
  }
  const auto M = discretize_berezin(d, q, rows);
  Eigen::VectorXd f(static_cast<Eigen::Index>(M.cols.size()));
  for (std::size_t j = 0; j < M.cols.size(); ++j) f[static_cast<Eigen::Index>(j)] = phi.value(M.cols[j]).real();
  const Eigen::VectorXd Bf = M.apply(f);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double b = berezin(d, phi, rows[i], q).real();
    EXPECT_NEAR(Bf[static_cast<Eigen::Index>(i)] / b, 1.0, 1e-8);
  }
}

TEST(Discretize, RejectsMismatchedRule) {
  const auto q = build_rule(DomainSpec::polydisc(2), 4, 4, 1.0);
  EXPECT_THROW(discretize_berezin(DomainSpec::disc(), q), Error);
  EXPECT_THROW(discretize_berezin_quotient(DomainSpec::hartogs()), Error);
}

TEST(EstimateNorm, DiscAtTwo) {
  const auto e = estimate_norm(disc_quotient(), 2.0);
  EXPECT_NEAR(e.value / kDiscNorm2, 1.0, 0.05);
  EXPECT_LE(e.value, kDiscNorm2 * (1.0 + 1e-9));
  EXPECT_EQ(e.bound_kind, BoundKind::Approximate);
}

TEST(EstimateNorm, DiscAtInfinity) {
  const auto e = estimate_norm(disc_quotient(), kInfP);
  EXPECT_NEAR(e.value, 1.0, 1e-6);
  EXPECT_EQ(e.method, "row-sum");
}

TEST(EstimateNorm, DiscAtThreeIsLowerBound) {
  const auto e = estimate_norm(disc_quotient(), 3.0);
  EXPECT_TRUE(e.converged);
  EXPECT_EQ(e.bound_kind, BoundKind::Lower);
  EXPECT_GE(e.value, 0.9 * kDiscNorm3);
  EXPECT_LE(e.value, 1.01 * kDiscNorm3);
}

TEST(EstimateNorm, RefinementChangesLittle) {
  const double a = estimate_norm(discretize_berezin_quotient(DomainSpec::disc(), {24, 12.0, 6}), 2.0).value;
  const double b = estimate_norm(discretize_berezin_quotient(DomainSpec::disc(), {48, 12.0, 12}), 2.0).value;
  EXPECT_LT(std::abs(a - b) / a, 0.01);
}

TEST(EstimateNorm, InvariantUnderNodeReordering) {
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 12, 16, 2.0);
  std::vector<Node> nodes = q.materialize();
  std::shuffle(nodes.begin(), nodes.end(), rng());
  const auto p = QuadratureRule::from_nodes(d, q.meta(), nodes);
  const double a = estimate_norm(discretize_berezin(d, q), 2.0).value;
  const double b = estimate_norm(discretize_berezin(d, p), 2.0).value;
  EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(EstimateNorm, NeedsSquareMatrixAndValidP) {
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 8, 8, 1.0);
  const std::vector<CPoint> rows{CPoint{0.1}};
  EXPECT_THROW(estimate_norm(discretize_berezin(d, q, rows), 2.0), Error);
  EXPECT_THROW(estimate_norm(disc_quotient(), 0.5), Error);
}

TEST(EstimateNorm, StallReportsFlag) {
  PowerOptions opt;
  opt.max_iterations = 2;
  const auto e = estimate_norm(disc_quotient(), 3.0, opt);
  EXPECT_FALSE(e.converged);
  EXPECT_GT(e.value, 0.0);
}

TEST(Witness, DiscAtThree) {
  WitnessFamily f;
  f.a = {0.0, 1.0};
  f.b.clear();
  for (int i = 0; i <= 40; ++i) f.b.push_back(-0.33 + 0.33 * i / 40.0);
  const auto e = witness_lower_bound(disc_quotient(), 3.0, f);
  EXPECT_EQ(e.bound_kind, BoundKind::Lower);
  EXPECT_GE(e.value, 0.8 * kDiscNorm3);
  EXPECT_LE(e.value, 1.01 * kDiscNorm3);
}

TEST(Witness, BelowSpectralEstimate) {
  WitnessFamily f;
  f.a = {0.0, 0.5, 2.0};
  f.b = {-0.49, -0.45, -0.3, 0.0, 1.0};
  const auto& M = disc_quotient();
  EXPECT_LE(witness_lower_bound(M, 2.0, f).value, estimate_norm(M, 2.0).value + 1e-6);
}

TEST(Witness, ConstantAtInfinity) {
  EXPECT_NEAR(witness_lower_bound(disc_quotient(), kInfP, WitnessFamily{}).value, 1.0, 1e-6);
  const auto d = DomainSpec::polydisc(2);
  EXPECT_NEAR(witness_lower_bound(d, kInfP, WitnessFamily{}, {10, 8.0, 6}).value, 1.0, 1e-5);
}

TEST(Witness, EmptyFamily) {
  WitnessFamily f;
  f.a = {-5.0};
  f.b = {-0.5};
  try {
    witness_lower_bound(disc_quotient(), 2.0, f);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyFamily);
  }
}

TEST(Witness, HartogsGrowsAsEpsDecreases) {
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    WitnessFamily f;
    f.eps = {eps};
    const double v = witness_lower_bound(DomainSpec::hartogs(), 2.0, f).value;
    EXPECT_GT(v, prev);
    EXPECT_GE(v, hartogs::ratio_lower_bound(eps));
    prev = v;
  }
}

TEST(Scan, DiscSupremum) {
  const auto r = br_scan(DomainSpec::disc());
  EXPECT_GE(r.supremum, 3.92);
  EXPECT_LE(r.supremum, 4.0);
  EXPECT_FALSE(r.divergent);
  const auto& z = r.argmax_z;
  EXPECT_LE(r.supremum, std::pow(1.0 + std::abs(z[0]), 2) * (1.0 + 1e-12));
}

TEST(Scan, FlagsAtDefaultResolution) {
  EXPECT_TRUE(br_scan(DomainSpec::hartogs()).divergent);
  for (const auto& d : {DomainSpec::disc(), DomainSpec::ball(2), DomainSpec::polydisc(2), DomainSpec::upper_half_plane()})
    EXPECT_FALSE(br_scan(d).divergent) << d.tag();
}

TEST(Scan, HartogsPathRatio) {
  const auto d = DomainSpec::hartogs();
  for (double delta : {0.5, 0.1, 0.9})
    for (double eps : {1e-4, 1e-2, 0.3}) {
      const double v = kernel_ratio(d, CPoint{delta, 0.0}, CPoint{eps, 0.0});
      const double f = delta * std::pow(1.0 - delta * delta, 2) / (eps * std::pow(1.0 - delta * eps, 2));
      EXPECT_NEAR(v / f, 1.0, 1e-10);
    }
  EXPECT_GE(kernel_ratio(d, CPoint{0.5, 0.0}, CPoint{1e-4, 0.0}), 1e3);
}

TEST(Scan, EverySampledRatioBelowSupremum) {
  for (const auto& d : {DomainSpec::disc(), DomainSpec::hartogs(), DomainSpec::ball(2)}) {
    const auto g = scan_grid(d, 0);
    const auto r = br_scan(d, g, g);
    for (const CPoint& z : g)
      for (const CPoint& w : g) EXPECT_LE(kernel_ratio(d, z, w), r.supremum);
    EXPECT_DOUBLE_EQ(kernel_ratio(d, r.argmax_z, r.argmax_w), r.supremum);
  }
}

TEST(Scan, InfimumDecreasesTowardBoundary) {
  const auto d = DomainSpec::disc();
  const std::vector<CPoint> w{CPoint{0.3}};
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 6; ++k) {
    std::vector<CPoint> zs;
    for (int a = 0; a < 16; ++a) zs.push_back(CPoint{std::polar(1.0 - std::pow(10.0, -k), 2.0 * kPi * a / 16)});
    const double inf = br_scan(d, zs, w).infimum;
    EXPECT_LT(inf, prev);
    prev = inf;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Product, AgreesAtTwo) {
  const auto c = product_norm_check(2.0);
  EXPECT_LT(c.relative_gap(), 0.05);
}

TEST(Product, AgreesAtFour) {
  const auto c = product_norm_check(4.0);
  EXPECT_LT(c.relative_gap(), 0.08);
}

TEST(Schur, ProbeIsStable) {
  const auto a = schur_probe(0.3, 0);
  const auto b = schur_probe(0.3, 1);
  EXPECT_TRUE(std::isfinite(a.max_ratio));
  EXPECT_GT(a.max_ratio, 1.0);
  EXPECT_LT(std::abs(b.max_ratio / a.max_ratio - 1.0), 0.05);
  // the ratio approaches pi / sin(0.3 pi) as |z| -> 1
  EXPECT_LT(b.max_ratio, kPi / std::sin(0.3 * kPi));
  EXPECT_GT(b.max_ratio, 0.98 * kPi / std::sin(0.3 * kPi));
}
