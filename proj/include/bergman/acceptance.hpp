#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bergman/berezin.hpp"
#include "bergman/domains.hpp"
#include "bergman/hartogs.hpp"
#include "bergman/opnorm.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reinhardt.hpp"

// The reproduction suite: thirteen numerical checks, each with its measured
// value, tolerance, grid and wall time.

namespace bergman::acceptance {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string tolerance;
  std::string grid;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string sci(double v) { return fmt("%.3e", v); }
inline std::string fix(double v) { return fmt("%.6f", v); }

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : g_(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(g_); }
  cd disc(double rmax) { return std::polar(rmax * std::sqrt(uniform()), 2.0 * kPi * uniform()); }

 private:
  std::mt19937_64 g_;
};

// (1 - |w - c|^2 / r^2)^3 on |w - c| < r
inline OperatorSymbol bump(cd c, double r) {
  return OperatorSymbol::bounded(
      [c, r](const CPoint& w) {
        const double t = 1.0 - std::norm(w[0] - c) / (r * r);
        return t > 0.0 ? cd(t * t * t, 0.0) : cd(0.0, 0.0);
      },
      "bump");
}

inline OperatorSymbol random_bump(Sampler& s) {
  const cd c = s.disc(0.6);
  const double r = 0.1 + 0.25 * s.uniform();
  return bump(c, r);
}

inline QuadratureRule de_hartogs_rule(int angular_n) {
  RuleOptions o;
  o.scheme = RadialScheme::DoubleExponential;
  return build_rule(DomainSpec::hartogs(), 48, angular_n, 1.0, o);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CheckResult normalization() {
  using detail::Sampler;
  CheckResult c{1, "normalization of k_z", true, "", "", "", 0.0};
  struct Case {
    DomainSpec d;
    QuadratureRule q;
    double tol;
    std::function<CPoint(Sampler&)> sample;
    std::string region;
  };
  std::vector<Case> cases;
  cases.push_back({DomainSpec::disc(), build_rule(DomainSpec::disc(), 64, 256, 1.0), 1e-8,
                   [](Sampler& s) { return CPoint{s.disc(0.85)}; }, "|z|<=0.85"});
  cases.push_back({DomainSpec::ball(2), build_rule(DomainSpec::ball(2), 16, 48, 1.0), 1e-6,
                   [](Sampler& s) {
                     for (;;) {
                       const CPoint z{s.disc(0.7), s.disc(0.7)};
                       if (std::sqrt(z.norm2()) < 0.7) return z;
                     }
                   },
                   "|z|<0.7"});
  cases.push_back({DomainSpec::polydisc(2), build_rule(DomainSpec::polydisc(2), 24, 64, 1.0), 1e-8,
                   [](Sampler& s) { return CPoint{s.disc(0.7), s.disc(0.7)}; }, "|z_j|<=0.7"});
  cases.push_back({DomainSpec::hartogs(), build_rule(DomainSpec::hartogs(), 24, 48, 3.0), 1e-6,
                   [](Sampler& s) {
                     const cd z1 = std::polar(0.1 + 0.6 * s.uniform(), 2.0 * kPi * s.uniform());
                     return CPoint{z1, z1 * s.disc(0.6)};
                   },
                   "0.1<|z1|<0.7,|z2/z1|<=0.6"});
  Sampler s(1);
  const auto one = OperatorSymbol::constant(1.0);
  for (const Case& k : cases) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, std::abs(berezin(k.d, one, k.sample(s), k.q).real() - 1.0));
    c.passed = c.passed && worst <= k.tol;
    c.measured += k.d.tag() + ":" + detail::sci(worst) + " ";
    c.tolerance += k.d.tag() + ":" + detail::sci(k.tol) + " ";
    const auto& m = k.q.meta();
    c.grid += k.d.tag() + "[" + std::to_string(m.radial_n) + "x" + std::to_string(m.angular_n) + ",g" +
              detail::fmt("%g", m.grading) + "," + k.region + "] ";
  }
  return c;
}

inline CheckResult disc_constant() {
  CheckResult c{2, "B 1 = 1 on the disc; discrete row sums", true, "", "pointwise 1e-8; row sums 1e-6", "", 0.0};
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 64, 256, 1.0);
  detail::Sampler s(2);
  std::vector<CPoint> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(CPoint{s.disc(0.85)});
  double pointwise = 0.0;
  for (const CPoint& z : pts)
    pointwise = std::max(pointwise, std::abs(berezin(d, OperatorSymbol::constant(1.0), z, q).real() - 1.0));
  // point-to-point matrix with rows at the sample points
  double rows = (discretize_berezin(d, q, pts).row_sums().array() - 1.0).abs().maxCoeff();
  // torus-quotient matrix used for norms: rows at least 1e-5 from the boundary
  const auto M = discretize_berezin_quotient(d);
  const Eigen::VectorXd rs = M.row_sums();
  for (Eigen::Index i = 0; i < rs.size(); ++i)
    if (M.row_moduli[static_cast<std::size_t>(i)][0].comp >= 1e-5) rows = std::max(rows, std::abs(rs[i] - 1.0));
  c.passed = pointwise <= 1e-8 && rows <= 1e-6;
  c.measured = "pointwise:" + detail::sci(pointwise) + " rows:" + detail::sci(rows);
  c.grid = "disc[64x256,g1,|z|<=0.85]; quotient[24 cells,depth 12,rows 1-|z|>=1e-5]";
  return c;
}

inline CheckResult adjoint() {
  CheckResult c{3, "B* 1(0) = 1/3; duality", true, "", "B*1(0) 1e-8; duality 1e-6 relative", "", 0.0};
  const auto d = DomainSpec::disc();
  const auto q0 = build_rule(d, 64, 256, 1.0);
  const double b = std::abs(berezin_adjoint(d, OperatorSymbol::constant(1.0), CPoint{0.0}, q0).real() - 1.0 / 3.0);
  const auto q = build_rule(d, 40, 96, 1.0);
  detail::Sampler s(3);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto phi = detail::random_bump(s);
    const auto psi = detail::random_bump(s);
    const cd lhs = integrate(q, [&](const CPoint& z) {
      const cd p = psi(z);
      return p == cd(0.0) ? cd(0.0) : berezin(d, phi, z, q) * std::conj(p);
    });
    const cd rhs = integrate(q, [&](const CPoint& w) {
      const cd f = phi(w);
      return f == cd(0.0) ? cd(0.0) : f * std::conj(berezin_adjoint(d, psi, w, q));
    });
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  c.passed = b <= 1e-8 && worst <= 1e-6;
  c.measured = "B*1(0)-1/3:" + detail::sci(b) + " duality:" + detail::sci(worst);
  c.grid = "disc[64x256,g1]; duality disc[40x96,g1], 5 bump pairs";
  return c;
}

inline CheckResult disc_norms() {
  CheckResult c{4, "disc Berezin norms p = 2, inf, 3", true, "", "", "", 0.0};
  const auto M = discretize_berezin_quotient(DomainSpec::disc());
  const double t2 = 3.0 * kPi / 4.0;
  const double t3 = 4.0 * kPi / (9.0 * std::sin(kPi / 3.0));
  const double n2 = estimate_norm(M, 2.0).value;
  const double ninf = estimate_norm(M, kInfP).value;
  WitnessFamily f;
  f.a = {0.0, 1.0};
  f.b.clear();
  for (int i = 0; i <= 40; ++i) f.b.push_back(-0.33 + 0.33 * i / 40.0);
  const double w3 = witness_lower_bound(M, 3.0, f).value;
  const bool ok2 = std::abs(n2 / t2 - 1.0) <= 0.05;
  const bool okinf = std::abs(ninf - 1.0) <= 1e-6;
  const bool ok3 = w3 >= 0.8 * t3 && w3 <= 1.01 * t3;
  c.passed = ok2 && okinf && ok3;
  c.measured = "p2/(3pi/4):" + detail::fix(n2 / t2) + " pinf-1:" + detail::sci(ninf - 1.0) +
               " p3 witness/target:" + detail::fix(w3 / t3);
  c.tolerance = "p2 within 5%; pinf 1e-6; p3 in [0.8,1.01]";
  c.grid = "torus quotient, log-boundary 24 cells x 6, depth 12; witness |z|^a(1-|z|^2)^b, a in {0,1}, b in [-0.33,0]";
  return c;
}

inline CheckResult hartogs_kernel() {
  CheckResult c{5, "Hartogs kernel, ratio path, BR scan", true, "", "", "", 0.0};
  const auto H = DomainSpec::hartogs();
  detail::Sampler s(5);
  auto box_point = [&s]() {
    const cd z1 = std::polar(0.02 + 0.78 * std::sqrt(s.uniform()), 2.0 * kPi * s.uniform());
    return CPoint{z1, z1 * s.disc(0.8)};
  };
  double series = 0.0;
  for (int i = 0; i < 30; ++i) {
    const CPoint z = box_point(), w = box_point();
    const cd k = kernel(H, z, w);
    series = std::max(series, std::abs(hartogs::kernel_series(z, w, 80) - k) / std::abs(k));
  }
  double path = 0.0;
  for (double delta : {0.5, 0.1, 0.9})
    for (double eps : {1e-4, 1e-2, 0.3}) {
      const double f = delta * std::pow(1.0 - delta * delta, 2) / (eps * std::pow(1.0 - delta * eps, 2));
      path = std::max(path, std::abs(kernel_ratio(H, CPoint{delta, 0.0}, CPoint{eps, 0.0}) / f - 1.0));
    }
  const bool hflag = br_scan(H).divergent;
  bool others = false;
  for (const auto& d : {DomainSpec::ball(2), DomainSpec::polydisc(2), DomainSpec::upper_half_plane()})
    others = others || br_scan(d).divergent;
  const auto disc = br_scan(DomainSpec::disc());
  others = others || disc.divergent;
  c.passed = series <= 1e-8 && path <= 1e-10 && hflag && !others && disc.supremum >= 3.92 && disc.supremum <= 4.0;
  c.measured = "series:" + detail::sci(series) + " path:" + detail::sci(path) + " flags H/others:" +
               (hflag ? "true" : "false") + "/" + (others ? "true" : "false") + " disc sup:" + detail::fix(disc.supremum);
  c.tolerance = "series 1e-8; path 1e-10; H true, others false; disc sup in [3.92,4]";
  c.grid = "series N=80 on |z1|,|w1|<=0.8, |z2/z1|,|w2/w1|<=0.8; scans at levels 0 and 1";
  return c;
}

inline CheckResult feps_norm() {
  CheckResult c{6, "||f_eps||^2 = pi^2/(2 eps) by quadrature", true, "", "0.5% relative", "", 0.0};
  const auto q = detail::de_hartogs_rule(24);
  double worst = 0.0;
  for (double eps : {0.5, 0.1, 0.02}) {
    const double v =
        integrate_scaled(q, [eps](const CPoint& w) { return ScaledValue{2.0 * hartogs::log_f_eps(eps, w), 1.0}; }).real();
    worst = std::max(worst, std::abs(v / (kPi * kPi / (2.0 * eps)) - 1.0));
  }
  c.passed = worst <= 5e-3;
  c.measured = "max rel dev:" + detail::sci(worst);
  c.grid = "hartogs[48x24, double-exponential radial]";
  return c;
}

inline CheckResult feps_berezin() {
  CheckResult c{7, "closed-form B f_eps vs quadrature", true, "", "1e-4 relative", "", 0.0};
  const auto H = DomainSpec::hartogs();
  // the angular trapezoid, not the radial rule, limits accuracy here
  const auto q = detail::de_hartogs_rule(32);
  detail::Sampler s(7);
  double worst = 0.0;
  for (double eps : {0.1, 0.01})
    for (int i = 0; i < 10; ++i) {
      const cd z1 = std::polar(0.05 + 0.65 * std::sqrt(s.uniform()), 2.0 * kPi * s.uniform());
      const CPoint z{z1, z1 * s.disc(0.6)};
      const double v = berezin(H, hartogs::f_eps_symbol(eps), z, q).real();
      worst = std::max(worst, std::abs(v / hartogs::berezin_feps_closed(eps, z).value - 1.0));
    }
  c.passed = worst <= 1e-4;
  c.measured = "max rel dev:" + detail::sci(worst);
  c.grid = "hartogs[48x32, double-exponential radial], |z1|<=0.7, |z2/z1|<=0.6";
  return c;
}

inline CheckResult blowup() {
  CheckResult c{8, "blow-up of ||B f_eps|| / ||f_eps||", true, "", "ratio >= 0.99/sqrt(15 eps); slope in [-0.55,-0.45]",
                "", 0.0};
  const auto t = hartogs::blowup_table({1e-1, 1e-2, 1e-3, 1e-4});
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& r : t.rows) margin = std::min(margin, r.ratio_quadrature / (1.0 / std::sqrt(15.0 * r.eps)));
  c.passed = margin >= 0.99 && t.slope >= -0.55 && t.slope <= -0.45;
  c.measured = "min ratio/bound:" + detail::fix(margin) + " slope:" + detail::fix(t.slope);
  c.grid = "radial reduction, 2 Gauss-20 panels per octave toward |z1|=1";
  return c;
}

inline CheckResult weak_pairing() {
  CheckResult c{9, "weak pairing pi(1 - j^-2)", true, "", "closed form 1e-8; quadrature 1e-4", "", 0.0};
  double closed = 0.0;
  for (int j = 2; j <= 10; ++j) closed = std::max(closed, std::abs(hartogs::weak_pairing(j) - kPi * (1.0 - 1.0 / (j * j))));
  const auto q = build_rule(DomainSpec::hartogs(), 32, 16, 2.0);
  const double quad = std::abs(hartogs::weak_pairing_quadrature(3, q) - kPi * (1.0 - 1.0 / 9.0));
  c.passed = closed <= 1e-8 && quad <= 1e-4;
  c.measured = "closed:" + detail::sci(closed) + " quadrature:" + detail::sci(quad);
  c.grid = "hartogs[32x16,g2] for j=3";
  return c;
}

inline CheckResult boas() {
  CheckResult c{10, "Boas monomial classification", true, "", "exact, 25 cases", "", 0.0};
  const auto p = ReinhardtProfile::boas();
  int matches = 0;
  for (int j = 0; j <= 4; ++j)
    for (int k = 0; k <= 4; ++k) matches += monomial_l2_norm2(p, {j, k}).finite == (j < k);
  c.passed = matches == 25;
  c.measured = std::to_string(matches) + "/25";
  c.grid = "tail-exponent classification, 1-D radial quadrature";
  return c;
}

inline CheckResult product_norms() {
  CheckResult c{11, "product structure of ||P+||", true, "", "5% relative at p=2", "", 0.0};
  const auto r = product_norm_check(2.0);
  c.passed = r.relative_gap() <= 0.05;
  c.measured = "bidisc:" + detail::fix(r.bidisc.value) + " disc^2:" + detail::fix(r.disc_squared) +
               " gap:" + detail::sci(r.relative_gap());
  c.grid = "torus quotient, log-boundary 6 cells x 6, depth 12 (bidisc on the product mesh)";
  return c;
}

inline CheckResult schur() {
  CheckResult c{12, "Schur probe P+ rho^-0.3 / rho^-0.3", true, "", "finite; growth < 5% under refinement", "", 0.0};
  const auto a = schur_probe(0.3, 0);
  const auto b = schur_probe(0.3, 1);
  const double growth = b.max_ratio / a.max_ratio - 1.0;
  c.passed = std::isfinite(a.max_ratio) && std::isfinite(b.max_ratio) && std::abs(growth) < 0.05;
  c.measured = "max:" + detail::fix(a.max_ratio) + " refined:" + detail::fix(b.max_ratio) + " growth:" + detail::sci(growth);
  c.grid = "rows to 1-|z|=1e-6 (refined 1e-12, twice the rows), quotient mesh 8 decades deeper";
  return c;
}

inline CheckResult domination() {
  CheckResult c{13, "|B phi| <= 4 P+|phi| on the disc", true, "", "slack 1e-8 + 1e-6 max", "", 0.0};
  const auto d = DomainSpec::disc();
  const auto q = build_rule(d, 48, 128, 1.0);
  detail::Sampler s(13);
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    const auto b = detail::random_bump(s);
    const cd phase = std::polar(1.0, 2.0 * kPi * s.uniform());
    const auto phi = OperatorSymbol::bounded([b, phase](const CPoint& w) { return phase * b(w) * (w[0] - 0.2); });
    ok += pointwise_domination(d, phi, CPoint{s.disc(0.9)}, 4.0, q);
  }
  c.passed = ok == 50;
  c.measured = std::to_string(ok) + "/50";
  c.grid = "disc[48x128,g1], bumps times (w - 0.2) with random phase, |z|<=0.9";
  return c;
}

inline const std::vector<std::function<CheckResult()>>& checks() {
  static const std::vector<std::function<CheckResult()>> all{
      normalization, disc_constant, adjoint,      disc_norms,    hartogs_kernel, feps_norm, feps_berezin,
      blowup,        weak_pairing,  boas,         product_norms, schur,          domination};
  return all;
}

/// Runs every check; a check that throws fails with the error as its measurement.
inline std::vector<CheckResult> run(const std::function<void(const CheckResult&)>& on_result = {}) {
  std::vector<CheckResult> out;
  int id = 1;
  for (const auto& check : checks()) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "check " + std::to_string(id);
      r.passed = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
    ++id;
  }
  return out;
}

inline std::string format_line(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %-44s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[48];
  std::snprintf(tail, sizeof tail, "  time=%.2fs", r.seconds);
  return std::string(head) + " measured=[" + r.measured + "] tol=[" + r.tolerance + "]" + tail;
}

}  // namespace bergman::acceptance
