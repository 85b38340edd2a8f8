#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/summation.hpp"

namespace bergman {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule compute_gauss_legendre(int n) {
  if (n < 1) throw Error(Errc::InvalidResolution, "Gauss-Legendre order must be positive");
  GaussRule g;
  g.x.resize(static_cast<std::size_t>(n));
  g.w.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.x[static_cast<std::size_t>(i)] = -x;
    g.x[static_cast<std::size_t>(n - 1 - i)] = x;
    g.w[static_cast<std::size_t>(i)] = w;
    g.w[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) g.x[static_cast<std::size_t>(n / 2)] = 0.0;
  return g;
}

inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

/// Composite Gauss-Legendre on [a, b] with equal panels.
inline double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                               int order = 20) {
  const GaussRule& g = gauss_legendre(order);
  CompensatedSum s;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += 0.5 * h * g.w[k] * f(mid + 0.5 * h * g.x[k]);
  }
  return s.value();
}

/// Integral of f over (0, b] where f(r) ~ C r^s as r -> 0 with s > -1.
/// Geometric panels toward 0, the remainder below the last panel is taken
/// from the power law.
inline double integrate_from_zero(const std::function<double(double)>& f, double b, double s, int levels = 90) {
  CompensatedSum sum;
  // Upper half resolved uniformly since integrands may peak at b.
  sum += integrate_panels(f, 0.5 * b, b, 16);
  double hi = 0.5 * b;
  for (int l = 0; l < levels; ++l) {
    const double lo = 0.5 * hi;
    sum += integrate_panels(f, lo, hi, 1);
    hi = lo;
  }
  const double fr = f(hi);
  if (std::isfinite(fr)) sum += fr * hi / (s + 1.0);
  return sum.value();
}

/// Integral of f over [a, inf) where f(r) ~ C r^s as r -> inf with s < -1.
inline double integrate_to_infinity(const std::function<double(double)>& f, double a, double s, int levels = 90) {
  CompensatedSum sum;
  double lo = a;
  for (int l = 0; l < levels; ++l) {
    const double hi = 2.0 * lo;
    sum += integrate_panels(f, lo, hi, 1);
    lo = hi;
  }
  const double fr = f(lo);
  if (std::isfinite(fr)) sum += -fr * lo / (s + 1.0);
  return sum.value();
}

}  // namespace bergman
