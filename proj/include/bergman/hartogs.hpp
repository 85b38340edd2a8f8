#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bergman/berezin.hpp"
#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/gauss.hpp"
#include "bergman/summation.hpp"

// The Hartogs triangle H = { |z2| < |z1| < 1 } and the family
// f_eps(w) = |w1|^(-2+2 eps) on which its Berezin transform is unbounded.

namespace bergman::hartogs {

inline const DomainSpec& domain() {
  static const DomainSpec d = DomainSpec::hartogs();
  return d;
}

/// 1 / ||z1^n z2^m||^2 = (m+1)(n+m+2) / pi^2, for m >= 0 and n + m >= -1.
inline double a_nm(int n, int m) {
  if (m < 0 || n + m < -1)
    throw Error(Errc::InadmissibleIndex,
                "(" + std::to_string(n) + "," + std::to_string(m) + ") is not an A^2 index on the Hartogs triangle");
  return (m + 1.0) * (n + m + 2.0) / (kPi * kPi);
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw Error(Errc::EpsilonOutOfRange, "eps must lie in (0, 1]; f_eps is not square integrable for eps <= 0");
}

inline double f_eps(double eps, const CPoint& w) {
  check_eps(eps);
  require_inside(domain(), w, "w");
  return std::pow(std::abs(w[0]), -2.0 + 2.0 * eps);
}

inline double log_f_eps(double eps, const CPoint& w) { return (-2.0 + 2.0 * eps) * std::log(std::abs(w[0])); }

/// f_eps as a positive symbol with a log-magnitude, usable on rules whose
/// nodes reach |w1| ~ 1e-290.
inline OperatorSymbol f_eps_symbol(double eps) {
  check_eps(eps);
  OperatorSymbol s;
  s.value = [eps](const CPoint& w) { return cd(std::pow(std::abs(w[0]), -2.0 + 2.0 * eps), 0.0); };
  s.log_abs = [eps](const CPoint& w) { return log_f_eps(eps, w); };
  s.cls = SymbolClass::PIntegrable;
  s.p = 2.0;
  s.radial = true;
  s.name = "f_eps";
  return s;
}

/// ||f_eps||_2 = pi / sqrt(2 eps)
inline double f_eps_norm(double eps) {
  check_eps(eps);
  return kPi / std::sqrt(2.0 * eps);
}

/// ||(1 - |z1|^2)^2||_2 = pi / sqrt(30), from pi^2 int_0^1 (1-x)^4 x dx = pi^2 B(2,5).
inline constexpr double kBoundaryWeightNorm = 0.57357372095454764418366468072545315;

/// The lower bound sqrt(2) ||(1-|z1|^2)^2|| / (pi sqrt(eps)) = 1 / sqrt(15 eps)
/// for ||B f_eps|| / ||f_eps||.
inline double ratio_lower_bound(double eps) {
  check_eps(eps);
  return std::sqrt(2.0) * kBoundaryWeightNorm / (kPi * std::sqrt(eps));
}

struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  double tail = 0.0;  // bound on the omitted terms, absolute
};

/// B f_eps(z) = (1 - x)^2 sum_{k>=0} (k+1)^2 / (k+eps) x^k,  x = |z1|^2.
/// Independent of z2. With truncation <= 0 the number of terms is chosen
/// so that the tail bound is below 1e-10 of the value.
inline SeriesValue berezin_feps_closed(double eps, const CPoint& z, int truncation = 0) {
  check_eps(eps);
  require_inside(domain(), z, "z");
  const double r = std::abs(z[0]);
  if (r > 0.999) throw Error(Errc::TruncationInsufficient, "series evaluation refused for |z1| > 0.999");
  const double x = r * r;
  const double u = (1.0 - r) * (1.0 + r);
  auto term = [eps, x](int k) { return (k + 1.0) * (k + 1.0) / (k + eps) * std::pow(x, k); };
  // Beyond K the term ratio is at most x ((K+3)/(K+2))^2 (k+eps)/(k+1+eps) < rho.
  auto tail_after = [&](int K) {
    const double rho = x * std::pow((K + 3.0) / (K + 2.0), 2);
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    return u * u * term(K + 1) / (1.0 - rho);
  };
  CompensatedSum s;
  const int cap = truncation > 0 ? truncation : 1000000;
  int k = 0;
  for (; k <= cap; ++k) {
    s += term(k);
    if (truncation <= 0 && k >= 2 && tail_after(k) <= 1e-10 * u * u * s.value()) break;
  }
  if (k > cap) k = cap;
  SeriesValue out{u * u * s.value(), k + 1, tail_after(k)};
  if (out.tail > 1e-10 * out.value)
    throw Error(Errc::TruncationInsufficient,
                "closed-form series truncated at " + std::to_string(k) + " terms leaves relative tail " +
                    std::to_string(out.tail / out.value));
  return out;
}

namespace detail {

/// Li2(x) for 0 <= x < 1 with u = 1 - x; the reflection
/// Li2(x) = pi^2/6 - log(x) log(u) - Li2(u) keeps the series argument <= 1/2.
inline double dilog(double x, double u) {
  auto series = [](double y) {
    CompensatedSum s;
    double p = 1.0;
    for (int k = 1; k < 200; ++k) {
      p *= y;
      s += p / (static_cast<double>(k) * k);
      if (p < 1e-18) break;
    }
    return s.value();
  };
  if (x <= 0.5) return series(x);
  return kPi * kPi / 6.0 - std::log1p(-u) * std::log(u) - series(u);
}

/// S(x) = sum_{k>=1} x^k / (k (k + eps)) = Li2(x) - eps sum_{k>=1} x^k / (k^2 (k + eps)).
/// The remainder series has terms below 1/k^3; it is cut once its tail,
/// scaled by the eps^2 u^2 it is multiplied with in B f_eps, is below 1e-17.
inline double log_correction_series(double eps, double x, double u) {
  CompensatedSum t;
  double p = 1.0;
  for (int k = 1; k < 100000; ++k) {
    p *= x;
    const double term = p / (static_cast<double>(k) * k * (k + eps));
    t += term;
    const double tail = std::min(u > 0.0 ? term * x / u : 1.0, 0.5 / (static_cast<double>(k) * k));
    if (eps * eps * u * u * tail < 1e-17) break;
  }
  return dilog(x, u) - eps * t.value();
}

}  // namespace detail

/// B f_eps as a function of x = |z1|^2 with u = 1 - x, resummed through
///   (k+1)^2 = (k+eps)(k+2-eps) + (1-eps)^2,  1/(k+eps) = 1/k - eps/(k(k+eps)):
///   B f_eps = u^2/eps + 1 - u^2 + (1-eps) x u + (1-eps)^2 u^2 R,
///   R = -log(u) - eps sum_{k>=1} x^k / (k (k+eps)).
/// Valid up to the boundary |z1| -> 1, where the truncated series is not.
inline double berezin_feps_resummed(double eps, double x, double u) {
  check_eps(eps);
  const double R = -std::log(u) - eps * detail::log_correction_series(eps, x, u);
  const double e1 = 1.0 - eps;
  return u * u / eps + 1.0 - u * u + e1 * x * u + e1 * e1 * u * u * R;
}

inline double berezin_feps_resummed(double eps, const CPoint& z) {
  require_inside(domain(), z, "z");
  const double r = std::abs(z[0]);
  return berezin_feps_resummed(eps, r * r, (1.0 - r) * (1.0 + r));
}

/// ||B f_eps||_2 = pi (int_0^1 B f_eps(x)^2 x dx)^(1/2): the integrand
/// depends on |z1| only and the z2-fiber of H over z1 has area pi |z1|^2.
/// Panels are geometric toward x = 1, in the variable u = 1 - x.
inline double berezin_feps_norm(double eps, int panels_per_octave = 2) {
  check_eps(eps);
  auto g = [eps](double u) {
    const double x = 1.0 - u;
    const double b = berezin_feps_resummed(eps, x, u);
    return b * b * x;
  };
  // int_0^1 g(u) du; g is smooth at u = 1 and has a u^2 log u term at u = 0.
  CompensatedSum s;
  double hi = 1.0;
  for (int level = 0; level < 60; ++level) {
    const double lo = 0.5 * hi;
    s += integrate_panels(g, lo, hi, panels_per_octave, 20);
    hi = lo;
  }
  s += g(hi) * hi;
  return kPi * std::sqrt(s.value());
}

// ---------------------------------------------------------------------------
// Diagonal identity and weak pairing
// ---------------------------------------------------------------------------

struct IdentitySides {
  double lhs = 0.0;  // 1 / (pi^2 |z1|^2 K(z,z))
  double rhs = 0.0;  // (1 - |z2/z1|^2)^2 (1 - |z1|^2)^2
  bool holds() const { return std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)); }
};

inline IdentitySides diagonal_identity(const CPoint& z) {
  const double k = kernel_diagonal(domain(), z);
  const double r1 = std::abs(z[0]);
  const double t = std::abs(z[1]) / r1;
  const double a = (1.0 - t) * (1.0 + t);
  const double b = (1.0 - r1) * (1.0 + r1);
  return {1.0 / (kPi * kPi * r1 * r1 * k), a * a * b * b};
}

inline bool diagonal_identity_check(const CPoint& z) { return diagonal_identity(z).holds(); }

/// |<1/w1, k_z>| at z = (1/j, 0). 1/w1 is in A^2(H), so the pairing is
/// (1/z1) / sqrt(K(z,z)) by the reproducing property; it equals pi (1 - j^-2)
/// and tends to pi, so k_z does not tend to 0 weakly as z -> (0,0).
inline double weak_pairing(int j) {
  if (j < 2) throw Error(Errc::InvalidArgument, "weak pairing needs j >= 2");
  const CPoint z{1.0 / j, 0.0};
  return 1.0 / (std::abs(z[0]) * std::sqrt(kernel_diagonal(domain(), z)));
}

/// The same pairing as a quadrature of (1/w1) conj(k_z(w)).
inline double weak_pairing_quadrature(int j, const QuadratureRule& rule) {
  if (j < 2) throw Error(Errc::InvalidArgument, "weak pairing needs j >= 2");
  const CPoint z{1.0 / j, 0.0};
  const auto k = normalized_kernel(domain(), z);
  return std::abs(integrate(rule, [&](const CPoint& w) { return std::conj(k(w)) / w[0]; }));
}

/// sum over k = n+m+1 <= N and m <= N of a_nm (z1 conj w1)^n (z2 conj w2)^m.
inline cd kernel_series(const CPoint& z, const CPoint& w, int N) {
  require_inside(domain(), z, "z");
  require_inside(domain(), w, "w");
  const cd p = z[0] * std::conj(w[0]);
  const cd q = (z[1] / z[0]) * std::conj(w[1] / w[0]);  // (z2 conj w2) / p
  CompensatedComplexSum s;
  cd pk = 1.0 / p;  // p^(k-1)
  for (int k = 0; k <= N; ++k) {
    cd qm{1.0, 0.0};
    for (int m = 0; m <= N; ++m) {
      s += a_nm(k - m - 1, m) * pk * qm;
      qm *= q;
    }
    pk *= p;
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Blow-up table
// ---------------------------------------------------------------------------

struct BlowupRow {
  double eps = 0.0;
  double norm_f = 0.0;
  double lower_bound_Bf = 0.0;
  double ratio_lower = 0.0;
  double ratio_quadrature = 0.0;
};

struct BlowupTable {
  std::vector<BlowupRow> rows;
  /// Least-squares slope of log(ratio_quadrature) against log(eps).
  double slope = 0.0;
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// One row per eps: ||f_eps||, the lower bound ||(1-|z1|^2)^2|| / eps on
/// ||B f_eps|| (the k = 0 term of the series), its ratio to ||f_eps||, which is
/// sqrt(2) ||(1-|z1|^2)^2|| / (pi sqrt(eps)) = 1/sqrt(15 eps), and the computed
/// ratio ||B f_eps|| / ||f_eps||.
inline BlowupTable blowup_table(const std::vector<double>& eps_list, int panels_per_octave = 2) {
  BlowupTable t;
  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    check_eps(eps);
    if (eps >= 1.0) throw Error(Errc::EpsilonOutOfRange, "blow-up rows need eps < 1");
    BlowupRow r;
    r.eps = eps;
    r.norm_f = f_eps_norm(eps);
    r.lower_bound_Bf = kBoundaryWeightNorm / eps;
    r.ratio_lower = r.lower_bound_Bf / r.norm_f;
    r.ratio_quadrature = berezin_feps_norm(eps, panels_per_octave) / r.norm_f;
    t.rows.push_back(r);
    xs.push_back(eps);
    ys.push_back(r.ratio_quadrature);
  }
  t.slope = loglog_slope(xs, ys);
  return t;
}

inline void write_csv(std::ostream& os, const BlowupTable& t) {
  os << "eps,norm_f,lower_bound_Bf,ratio_lower,ratio_quadrature\n";
  char buf[256];
  for (const BlowupRow& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", r.eps, r.norm_f, r.lower_bound_Bf,
                  r.ratio_lower, r.ratio_quadrature);
    os << buf;
  }
}

}  // namespace bergman::hartogs
