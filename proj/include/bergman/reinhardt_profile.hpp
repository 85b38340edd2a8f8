#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "bergman/core.hpp"

namespace bergman {

/// Modulus-space description of a Reinhardt domain in C or C^2.
///
/// In one variable the domain is the annulus r1_min < |z1| < r1_max. In two
/// variables it is fibered over the first modulus:
///
///   { (z1, z2) : r1_min < |z1| < r1_max, |z2| < fiber(|z1|) }.
///
/// The fiber's power-law behavior fiber(r) ~ c r^e as r -> 0 and r -> inf
/// drives the convergence classification of monomial norms. Exponents may be
/// left undeclared, in which case they are probed numerically.
struct ReinhardtProfile {
  std::string name;
  int dim = 1;
  double r1_min = 0.0;
  double r1_max = 1.0;
  std::function<double(double)> fiber;
  std::optional<double> fiber_exponent_at_zero;
  std::optional<double> fiber_exponent_at_infinity;

  bool unbounded() const noexcept { return std::isinf(r1_max); }

  /// The unit disc viewed as a one-variable Reinhardt domain.
  static ReinhardtProfile disc() {
    ReinhardtProfile p;
    p.name = "disc";
    p.dim = 1;
    return p;
  }

  /// { |z2| < |z1| < 1 }
  static ReinhardtProfile hartogs() {
    ReinhardtProfile p;
    p.name = "hartogs";
    p.dim = 2;
    p.fiber = [](double r) { return r; };
    p.fiber_exponent_at_zero = 1.0;
    return p;
  }

  /// Boas's unbounded domain { |z2| < 1 / (1 + |z1|) }.
  static ReinhardtProfile boas() {
    ReinhardtProfile p;
    p.name = "boas";
    p.dim = 2;
    p.r1_max = std::numeric_limits<double>::infinity();
    p.fiber = [](double r) { return 1.0 / (1.0 + r); };
    p.fiber_exponent_at_zero = 0.0;
    p.fiber_exponent_at_infinity = -1.0;
    return p;
  }
};

/// Local log-log slope of the fiber at r, by a centered difference.
inline double probe_fiber_exponent(const ReinhardtProfile& p, double r) {
  const double h = 1e-3;
  const double up = std::log(p.fiber(r * std::exp(h)));
  const double down = std::log(p.fiber(r * std::exp(-h)));
  return (up - down) / (2.0 * h);
}

/// Checks that the modulus region is nonempty and that declared exponents
/// match probes at 1e-3 and 1e3 to within 1%.
inline void validate_profile(const ReinhardtProfile& p) {
  if (p.dim != 1 && p.dim != 2) throw Error(Errc::InvalidArgument, "Reinhardt profile must have dim 1 or 2");
  if (!(p.r1_min >= 0.0) || !(p.r1_max > p.r1_min))
    throw Error(Errc::InvalidArgument, "Reinhardt profile has an empty |z1| range");
  if (p.dim == 1) return;
  if (!p.fiber) throw Error(Errc::InvalidArgument, "two-variable Reinhardt profile needs a fiber bound");
  const double mid = p.unbounded() ? p.r1_min + 1.0 : 0.5 * (p.r1_min + p.r1_max);
  if (!(p.fiber(mid) > 0.0)) throw Error(Errc::InvalidArgument, "Reinhardt profile fiber is empty");
  auto check = [&](const std::optional<double>& declared, double r) {
    if (!declared) return;
    const double probed = probe_fiber_exponent(p, r);
    if (std::abs(probed - *declared) > 0.01 * std::max(1.0, std::abs(*declared)))
      throw Error(Errc::InvalidArgument, "declared fiber exponent of profile '" + p.name +
                                             "' disagrees with probe at r=" + std::to_string(r));
  };
  if (p.r1_min == 0.0) check(p.fiber_exponent_at_zero, 1e-3);
  if (p.unbounded()) check(p.fiber_exponent_at_infinity, 1e3);
}

}  // namespace bergman
