#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>

#include "bergman/core.hpp"
#include "bergman/gauss.hpp"
#include "bergman/reinhardt_profile.hpp"

namespace bergman {

enum class DomainKind {
  UnitDisc,
  UnitBall,
  Polydisc,
  UpperHalfPlane,
  PuncturedDisc,
  HartogsTriangle,
  Reinhardt,
};

struct DomainSpec {
  DomainKind kind = DomainKind::UnitDisc;
  int dim = 1;
  std::shared_ptr<const ReinhardtProfile> profile;

  static DomainSpec disc() { return {DomainKind::UnitDisc, 1, nullptr}; }
  static DomainSpec punctured_disc() { return {DomainKind::PuncturedDisc, 1, nullptr}; }
  static DomainSpec upper_half_plane() { return {DomainKind::UpperHalfPlane, 1, nullptr}; }
  static DomainSpec hartogs() { return {DomainKind::HartogsTriangle, 2, nullptr}; }

  static DomainSpec ball(int n) {
    if (n < 1 || n > CPoint::kMaxDim) throw Error(Errc::InvalidArgument, "ball dimension out of range");
    return {DomainKind::UnitBall, n, nullptr};
  }

  static DomainSpec polydisc(int n) {
    if (n < 1 || n > CPoint::kMaxDim) throw Error(Errc::InvalidArgument, "polydisc dimension out of range");
    return {DomainKind::Polydisc, n, nullptr};
  }

  static DomainSpec reinhardt(ReinhardtProfile p) {
    validate_profile(p);
    const int d = p.dim;
    return {DomainKind::Reinhardt, d, std::make_shared<const ReinhardtProfile>(std::move(p))};
  }

  std::string tag() const {
    switch (kind) {
      case DomainKind::UnitDisc: return "disc";
      case DomainKind::UnitBall: return "ball" + std::to_string(dim);
      case DomainKind::Polydisc: return dim == 2 ? "bidisc" : "polydisc" + std::to_string(dim);
      case DomainKind::UpperHalfPlane: return "halfplane";
      case DomainKind::PuncturedDisc: return "punctured-disc";
      case DomainKind::HartogsTriangle: return "hartogs";
      case DomainKind::Reinhardt: return "reinhardt:" + (profile ? profile->name : std::string("?"));
    }
    return "unknown";
  }
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Cayley preimage u = (z - i)/(z + i) of a half-plane point.
inline cd cayley_inverse(cd z) { return (z - cd{0.0, 1.0}) / (z + cd{0.0, 1.0}); }

inline double fiber_bound(const ReinhardtProfile& p, double r1) { return p.fiber ? p.fiber(r1) : 0.0; }

/// 1/c without the Annex G special-casing of operator/, which dominates
/// kernel evaluation cost; falls back to it outside the safe range.
inline cd recip(cd c) noexcept {
  const double n = std::norm(c);
  if (n > 1e-290 && n < 1e290) return {c.real() / n, -c.imag() / n};
  return 1.0 / c;
}

inline cd int_power(cd c, int n) noexcept {
  cd r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= c;
  return r;
}

}  // namespace detail

/// Strict membership. Boundary pieces at finite distance use the absolute
/// margin kBoundaryMargin. The punctures and the Hartogs edge |z2| = |z1|
/// are scale-invariant and use exact positivity and a relative margin.
inline bool contains(const DomainSpec& d, const CPoint& z) {
  if (z.dim() != d.dim || !z.all_finite()) return false;
  const double lim = 1.0 - kBoundaryMargin;
  switch (d.kind) {
    case DomainKind::UnitDisc: return std::abs(z[0]) < lim;
    case DomainKind::PuncturedDisc: {
      const double r = std::abs(z[0]);
      return r > 0.0 && r < lim;
    }
    case DomainKind::UnitBall: return std::sqrt(z.norm2()) < lim;
    case DomainKind::Polydisc:
      for (int i = 0; i < d.dim; ++i)
        if (!(std::abs(z[i]) < lim)) return false;
      return true;
    case DomainKind::UpperHalfPlane:
      return z[0].imag() > 0.0 && std::abs(detail::cayley_inverse(z[0])) < lim;
    case DomainKind::HartogsTriangle: {
      const double r1 = std::abs(z[0]);
      const double r2 = std::abs(z[1]);
      return r1 > 0.0 && r1 < lim && r2 < r1 * lim;
    }
    case DomainKind::Reinhardt: {
      const ReinhardtProfile& p = *d.profile;
      const double r1 = std::abs(z[0]);
      if (p.r1_min > 0.0 && !(r1 > p.r1_min + kBoundaryMargin)) return false;
      if (!p.unbounded() && !(r1 < p.r1_max - kBoundaryMargin)) return false;
      if (p.dim == 1) return true;
      return std::abs(z[1]) < detail::fiber_bound(p, r1) * lim;
    }
  }
  return false;
}

inline void require_inside(const DomainSpec& d, const CPoint& z, const char* what) {
  if (!contains(d, z)) throw Error(Errc::PointOutsideDomain, std::string(what) + " is not inside " + d.tag());
}

/// Lebesgue volume; infinite for unbounded domains.
inline double volume(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc: return kPi;
    case DomainKind::UnitBall: return std::pow(kPi, d.dim) / detail::factorial(d.dim);
    case DomainKind::Polydisc: return std::pow(kPi, d.dim);
    case DomainKind::UpperHalfPlane: return std::numeric_limits<double>::infinity();
    case DomainKind::HartogsTriangle: return kPi * kPi / 2.0;
    case DomainKind::Reinhardt: {
      const ReinhardtProfile& p = *d.profile;
      if (p.dim == 1) return kPi * (p.r1_max * p.r1_max - p.r1_min * p.r1_min);
      // 2 pi^2 * integral of r1 fiber(r1)^2 dr1
      auto f = [&p](double r) {
        const double h = p.fiber(r);
        return r * h * h;
      };
      if (p.unbounded()) {
        const double e = p.fiber_exponent_at_infinity.value_or(probe_fiber_exponent(p, 1e6));
        if (1.0 + 2.0 * e >= -1.0) return std::numeric_limits<double>::infinity();
        const double head = p.r1_min < 1.0 ? integrate_panels(f, p.r1_min, 1.0, 32) : 0.0;
        return 2.0 * kPi * kPi * (head + integrate_to_infinity(f, std::max(1.0, p.r1_min), 1.0 + 2.0 * e));
      }
      return 2.0 * kPi * kPi * integrate_panels(f, p.r1_min, p.r1_max, 64);
    }
  }
  return 0.0;
}

/// K(z, w) without membership checks; callers guarantee both points are inside.
inline cd kernel_unchecked(const DomainSpec& d, const CPoint& z, const CPoint& w) {
  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc: {
      const cd t = 1.0 - z[0] * std::conj(w[0]);
      return detail::recip(t * t) / kPi;
    }
    case DomainKind::UnitBall: {
      const int n = d.dim;
      const cd t = 1.0 - hermitian_dot(z, w);
      return detail::factorial(n) / std::pow(kPi, n) * detail::recip(detail::int_power(t, n + 1));
    }
    case DomainKind::Polydisc: {
      cd k{1.0, 0.0};
      for (int i = 0; i < d.dim; ++i) {
        const cd t = 1.0 - z[i] * std::conj(w[i]);
        k *= t * t;
      }
      return detail::recip(k) / std::pow(kPi, d.dim);
    }
    case DomainKind::UpperHalfPlane: {
      const cd t = z[0] - std::conj(w[0]);
      return -detail::recip(t * t) / kPi;
    }
    case DomainKind::HartogsTriangle: {
      // z1 conj(w1) / (pi^2 (z1 conj(w1) - z2 conj(w2))^2 (1 - z1 conj(w1))^2), with the
      // factor z1 conj(w1) pulled out of the middle square so that nothing
      // underflows for |z1|, |w1| near the origin.
      const cd p = z[0] * std::conj(w[0]);
      const cd q = (z[1] * detail::recip(z[0])) * std::conj(w[1] * detail::recip(w[0]));
      const cd a = 1.0 - q;
      const cd b = 1.0 - p;
      return detail::recip(p) * detail::recip(a * a * b * b) / (kPi * kPi);
    }
    case DomainKind::Reinhardt:
      throw Error(Errc::UnsupportedKind, "Reinhardt kernels come from the series engine (reinhardt_kernel)");
  }
  return {};
}

/// K(z, z), computed in a form that stays accurate near singular loci.
inline double kernel_diagonal_unchecked(const DomainSpec& d, const CPoint& z) {
  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc: {
      const double r = std::abs(z[0]);
      const double t = (1.0 - r) * (1.0 + r);
      return 1.0 / (kPi * t * t);
    }
    case DomainKind::UnitBall: {
      const double r = std::sqrt(z.norm2());
      const double t = (1.0 - r) * (1.0 + r);
      return detail::factorial(d.dim) / (std::pow(kPi, d.dim) * std::pow(t, d.dim + 1));
    }
    case DomainKind::Polydisc: {
      double k = 1.0;
      for (int i = 0; i < d.dim; ++i) {
        const double r = std::abs(z[i]);
        const double t = (1.0 - r) * (1.0 + r);
        k /= kPi * t * t;
      }
      return k;
    }
    case DomainKind::UpperHalfPlane: {
      const double y = z[0].imag();
      return 1.0 / (4.0 * kPi * y * y);
    }
    case DomainKind::HartogsTriangle: {
      const double r1 = std::abs(z[0]);
      const double r2 = std::abs(z[1]);
      const double edge = (r1 - r2) * (r1 + r2);
      const double outer = (1.0 - r1) * (1.0 + r1);
      return r1 * r1 / (kPi * kPi * edge * edge * outer * outer);
    }
    case DomainKind::Reinhardt:
      throw Error(Errc::UnsupportedKind, "Reinhardt kernels come from the series engine (reinhardt_kernel)");
  }
  return 0.0;
}

/// Bergman kernel K(z, w): holomorphic in z, antiholomorphic in w.
inline cd kernel(const DomainSpec& d, const CPoint& z, const CPoint& w) {
  require_inside(d, z, "z");
  require_inside(d, w, "w");
  return kernel_unchecked(d, z, w);
}

inline double kernel_diagonal(const DomainSpec& d, const CPoint& z) {
  require_inside(d, z, "z");
  const double k = kernel_diagonal_unchecked(d, z);
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(Errc::NonpositiveDiagonal, "K(z,z) is not a positive finite number on " + d.tag());
  return k;
}

/// |K(w, z)| / K(z, z).
inline double kernel_ratio(const DomainSpec& d, const CPoint& z, const CPoint& w) {
  const double kzz = kernel_diagonal(d, z);
  require_inside(d, w, "w");
  return std::abs(kernel_unchecked(d, w, z)) / kzz;
}

/// w -> K(w, z) / sqrt(K(z, z)).
inline std::function<cd(const CPoint&)> normalized_kernel(const DomainSpec& d, const CPoint& z) {
  const double scale = 1.0 / std::sqrt(kernel_diagonal(d, z));
  return [d, z, scale](const CPoint& w) { return kernel_unchecked(d, w, z) * scale; };
}

/// The standard weight 1 - |z|^2 (disc, ball) or prod (1 - |z_j|^2)
/// (polydisc); the Hartogs triangle uses 1 - |z1|^2.
inline double boundary_weight(const DomainSpec& d, const CPoint& z) {
  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc:
    case DomainKind::UnitBall: {
      const double r = std::sqrt(z.norm2());
      return (1.0 - r) * (1.0 + r);
    }
    case DomainKind::Polydisc: {
      double t = 1.0;
      for (int i = 0; i < d.dim; ++i) {
        const double r = std::abs(z[i]);
        t *= (1.0 - r) * (1.0 + r);
      }
      return t;
    }
    case DomainKind::HartogsTriangle: {
      const double r = std::abs(z[0]);
      return (1.0 - r) * (1.0 + r);
    }
    default: throw Error(Errc::UnsupportedKind, "no boundary weight for " + d.tag());
  }
}

// Torus averages. For a domain invariant under z_j -> e^{i t_j} z_j the
// operators below commute with the torus action, so they act on
// torus-invariant functions through these averaged kernels.

/// Mean of |K(z, w)| over the angles of w, for moduli |z_j| and |w_j|.
inline double torus_mean_abs_kernel(const DomainSpec& d, std::span<const Modulus> z, std::span<const Modulus> w) {
  if (d.kind != DomainKind::UnitDisc && d.kind != DomainKind::PuncturedDisc && d.kind != DomainKind::Polydisc)
    throw Error(Errc::UnsupportedKind, "torus-averaged kernels are available for the disc and polydisc");
  double v = 1.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    // (1/2pi) int dt / |1 - a e^{it}|^2 = 1 / (1 - a^2), a = |z_j||w_j|
    const double a = z[j].r * w[j].r;
    const double one_minus_a = z[j].comp + w[j].comp - z[j].comp * w[j].comp;
    v *= 1.0 / (kPi * one_minus_a * (1.0 + a));
  }
  return v;
}

/// Mean of |K(w, z)|^2 / K(z, z) over the angles of w.
inline double torus_mean_berezin_kernel(const DomainSpec& d, std::span<const Modulus> z,
                                        std::span<const Modulus> w) {
  if (d.kind != DomainKind::UnitDisc && d.kind != DomainKind::PuncturedDisc && d.kind != DomainKind::Polydisc)
    throw Error(Errc::UnsupportedKind, "torus-averaged kernels are available for the disc and polydisc");
  double v = 1.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    // (1/2pi) int dt / |1 - a e^{it}|^4 = (1 + a^2) / (1 - a^2)^3
    const double a = z[j].r * w[j].r;
    const double one_minus_a2 = (z[j].comp + w[j].comp - z[j].comp * w[j].comp) * (1.0 + a);
    const double t = z[j].one_minus_sq();
    v *= t * t / kPi * (1.0 + a * a) / (one_minus_a2 * one_minus_a2 * one_minus_a2);
  }
  return v;
}

}  // namespace bergman
