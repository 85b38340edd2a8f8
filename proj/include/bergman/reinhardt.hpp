#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/gauss.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reinhardt_profile.hpp"
#include "bergman/summation.hpp"

namespace bergman {

/// Squared L^2 norm of a monomial: either a finite value or divergence.
struct MonomialNorm {
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();

  static MonomialNorm Finite(double v) { return {true, v}; }
  static MonomialNorm Infinite() { return {}; }
};

namespace detail {

/// Fiber exponent at one end: the declared one, or a probe that two radii
/// agree on to 1%.
inline double fiber_exponent(const ReinhardtProfile& p, TailEnd end) {
  const auto& declared = end == TailEnd::AtZero ? p.fiber_exponent_at_zero : p.fiber_exponent_at_infinity;
  if (declared) return *declared;
  const double a = probe_fiber_exponent(p, end == TailEnd::AtZero ? 1e-3 : 1e3);
  const double b = probe_fiber_exponent(p, end == TailEnd::AtZero ? 1e-6 : 1e6);
  if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > 0.01 * std::max(1.0, std::abs(a)))
    throw Error(Errc::UndeclaredAsymptotics, "profile '" + p.name + "' has no declared fiber exponent and probes disagree");
  return b;
}

/// int_{r1_min}^{r1_max} f, with power-law tails at 0 and infinity.
inline double radial_integral(const std::function<double(double)>& f, const ReinhardtProfile& p, double s0,
                              double sinf) {
  if (p.unbounded()) {
    const double split = std::max(1.0, 2.0 * p.r1_min);
    const double head = p.r1_min == 0.0 ? integrate_from_zero(f, split, s0) : integrate_panels(f, p.r1_min, split, 64);
    return head + integrate_to_infinity(f, split, sinf);
  }
  if (p.r1_min == 0.0) return integrate_from_zero(f, p.r1_max, s0);
  return integrate_panels(f, p.r1_min, p.r1_max, 64);
}

inline std::shared_ptr<const ReinhardtProfile> profile_of(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc: return std::make_shared<const ReinhardtProfile>(ReinhardtProfile::disc());
    case DomainKind::HartogsTriangle: return std::make_shared<const ReinhardtProfile>(ReinhardtProfile::hartogs());
    case DomainKind::Polydisc:
      if (d.dim == 2) {
        ReinhardtProfile p;
        p.name = "bidisc";
        p.dim = 2;
        p.fiber = [](double) { return 1.0; };
        p.fiber_exponent_at_zero = 0.0;
        return std::make_shared<const ReinhardtProfile>(std::move(p));
      }
      break;
    case DomainKind::Reinhardt: return d.profile;
    default: break;
  }
  throw Error(Errc::UnsupportedKind, "no Reinhardt profile for " + d.tag());
}

}  // namespace detail

/// int |z^alpha|^2 dV. Convergence is decided from the tail exponents of the
/// radial integrand; the value then comes from 1-D quadrature of
///   2 pi int r^(2n+1) dr                                (one variable)
///   4 pi^2 int r1^(2n+1) h(r1)^(2m+2) / (2m+2) dr1     (two variables)
inline MonomialNorm monomial_l2_norm2(const ReinhardtProfile& p, std::span<const int> alpha) {
  if (static_cast<int>(alpha.size()) != p.dim)
    throw Error(Errc::InvalidArgument, "exponent tuple length must match the profile dimension");
  const int n = alpha[0];
  double s0 = 2.0 * n + 1.0;
  double sinf = s0;
  if (p.dim == 2) {
    const int m = alpha[1];
    // The inner integral int_0^h r^(2m+1) dr diverges for m <= -1.
    if (m < 0) return MonomialNorm::Infinite();
    if (p.r1_min == 0.0) s0 += (2.0 * m + 2.0) * detail::fiber_exponent(p, TailEnd::AtZero);
    if (p.unbounded()) sinf += (2.0 * m + 2.0) * detail::fiber_exponent(p, TailEnd::AtInfinity);
  }
  std::vector<TailExponent> ends;
  if (p.r1_min == 0.0) ends.push_back({TailEnd::AtZero, s0});
  if (p.unbounded()) ends.push_back({TailEnd::AtInfinity, sinf});
  if (tail_exponent_classify(ends) == Convergence::Diverges) return MonomialNorm::Infinite();

  if (p.dim == 1) {
    auto f = [n](double r) { return 2.0 * kPi * std::pow(r, 2 * n + 1); };
    return MonomialNorm::Finite(detail::radial_integral(f, p, s0, sinf));
  }
  const int m = alpha[1];
  auto f = [&p, n, m](double r) {
    const double h = p.fiber(r);
    return 4.0 * kPi * kPi * std::pow(r, 2 * n + 1) * std::pow(h, 2 * m + 2) / (2.0 * m + 2.0);
  };
  return MonomialNorm::Finite(detail::radial_integral(f, p, s0, sinf));
}

inline MonomialNorm monomial_l2_norm2(const DomainSpec& d, std::span<const int> alpha) {
  return monomial_l2_norm2(*detail::profile_of(d), alpha);
}

inline MonomialNorm monomial_l2_norm2(const ReinhardtProfile& p, std::initializer_list<int> alpha) {
  return monomial_l2_norm2(p, std::span<const int>(alpha.begin(), alpha.size()));
}

inline MonomialNorm monomial_l2_norm2(const DomainSpec& d, std::initializer_list<int> alpha) {
  return monomial_l2_norm2(d, std::span<const int>(alpha.begin(), alpha.size()));
}

// ---------------------------------------------------------------------------
// Series kernel
// ---------------------------------------------------------------------------

struct SeriesKernel {
  cd value;
  int shells = 0;       // shells summed
  double tail = 0.0;    // geometric tail estimate, absolute
  bool cap_hit = false; // stopped at the truncation cap rather than the tolerance
};

namespace detail {

/// Closed-form norms where the profile is one of the named ones; the
/// engine falls back to monomial_l2_norm2 otherwise.
inline std::optional<MonomialNorm> known_norm(const ReinhardtProfile& p, int n, int m) {
  if (p.name == "disc" && p.dim == 1 && p.r1_min == 0.0 && p.r1_max == 1.0)
    return n >= 0 ? MonomialNorm::Finite(kPi / (n + 1.0)) : MonomialNorm::Infinite();
  if (p.name == "hartogs" && p.dim == 2 && p.r1_min == 0.0 && p.r1_max == 1.0)
    return (m >= 0 && n + m >= -1) ? MonomialNorm::Finite(kPi * kPi / ((m + 1.0) * (n + m + 2.0)))
                                   : MonomialNorm::Infinite();
  return std::nullopt;
}

inline cd int_pow(cd base, int e) {
  if (e == 0) return {1.0, 0.0};
  if (e < 0) return 1.0 / int_pow(base, -e);
  cd r{1.0, 0.0};
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// K(z, w) = sum over admissible alpha of z^alpha conj(w^alpha) / ||z^alpha||^2.
///
/// Indices are grouped in shells max(|n|, m) = s (m >= 0), which are finite
/// even when negative powers of z1 are admissible, and summed shell by shell
/// in a fixed order. Summation stops once the geometric tail estimate from
/// the last shell ratio is below 1e-10 of the partial sum, or at `truncation`
/// shells.
inline SeriesKernel reinhardt_kernel(const ReinhardtProfile& profile, const CPoint& z, const CPoint& w,
                                     int truncation) {
  if (truncation < 1) throw Error(Errc::InvalidArgument, "truncation must be at least 1");
  const DomainSpec d = DomainSpec::reinhardt(profile);
  require_inside(d, z, "z");
  require_inside(d, w, "w");
  const int dim = profile.dim;
  const cd p1 = z[0] * std::conj(w[0]);
  const cd p2 = dim == 2 ? z[1] * std::conj(w[1]) : cd{0.0, 0.0};
  const bool negative_n = profile.r1_min > 0.0 || dim == 2;

  auto norm_of = [&](int n, int m) {
    if (auto k = detail::known_norm(profile, n, m)) return *k;
    if (dim == 1) return monomial_l2_norm2(profile, {n});
    return monomial_l2_norm2(profile, {n, m});
  };
  auto term = [&](int n, int m, CompensatedComplexSum& acc, CompensatedSum& mag) {
    const MonomialNorm nn = norm_of(n, m);
    if (!nn.finite) return;
    if (n < 0 && p1 == cd{0.0, 0.0}) return;  // cannot occur inside admissible domains
    cd t = detail::int_pow(p1, n) / nn.value;
    if (dim == 2) t *= detail::int_pow(p2, m);
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) throw Error(Errc::NonFiniteValue, "series term overflow");
    acc += t;
    mag += std::abs(t);
  };

  CompensatedComplexSum total;
  SeriesKernel out;
  std::vector<double> shell_mag;
  for (int s = 0; s <= truncation; ++s) {
    CompensatedComplexSum acc;
    CompensatedSum mag;
    if (dim == 1) {
      term(s, 0, acc, mag);
      if (s > 0 && negative_n) term(-s, 0, acc, mag);
    } else {
      // shell s: m = s with |n| <= s, then m < s with n = +-s
      for (int n = negative_n ? -s : 0; n <= s; ++n) term(n, s, acc, mag);
      for (int m = 0; m < s; ++m) {
        term(s, m, acc, mag);
        if (s > 0 && negative_n) term(-s, m, acc, mag);
      }
    }
    total += acc.value();
    shell_mag.push_back(mag.value());
    out.shells = s + 1;

    const std::size_t k = shell_mag.size();
    if (k < 4) continue;
    const double last = shell_mag[k - 1];
    const double prev = shell_mag[k - 2];
    const double scale = std::abs(total.value());
    if (last == 0.0 && prev == 0.0) {
      out.tail = 0.0;
      break;
    }
    const double rho = prev > 0.0 ? last / prev : 1.0;
    if (k >= 8 && last > prev && prev > shell_mag[k - 3] && shell_mag[k - 3] > shell_mag[k - 4])
      throw Error(Errc::SeriesDivergenceSuspected, "series shells are growing");
    out.tail = rho < 1.0 ? last * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
    if (out.tail <= 1e-10 * scale) break;
    if (s == truncation) out.cap_hit = true;
  }
  if (out.shells == truncation + 1 && out.tail > 1e-10 * std::abs(total.value())) out.cap_hit = true;
  if (out.cap_hit && !std::isfinite(out.tail))
    throw Error(Errc::SeriesDivergenceSuspected, "tail estimate is not decreasing at the truncation cap");
  out.value = total.value();
  return out;
}

}  // namespace bergman
