#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace bergman {

using cd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Points closer than this to a boundary are treated as outside.
inline constexpr double kBoundaryMargin = 1e-12;

enum class Errc {
  PointOutsideDomain,
  UnsupportedKind,
  NonpositiveDiagonal,
  UndeclaredAsymptotics,
  SeriesDivergenceSuspected,
  InvalidResolution,
  NonFiniteValue,
  BorderlineExponent,
  NonFiniteSymbol,
  TruncationInsufficient,
  NoConvergence,
  EmptyFamily,
  InadmissibleIndex,
  EpsilonOutOfRange,
  InvalidArgument,
  IoError,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::PointOutsideDomain: return "PointOutsideDomain";
    case Errc::UnsupportedKind: return "UnsupportedKind";
    case Errc::NonpositiveDiagonal: return "NonpositiveDiagonal";
    case Errc::UndeclaredAsymptotics: return "UndeclaredAsymptotics";
    case Errc::SeriesDivergenceSuspected: return "SeriesDivergenceSuspected";
    case Errc::InvalidResolution: return "InvalidResolution";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::BorderlineExponent: return "BorderlineExponent";
    case Errc::NonFiniteSymbol: return "NonFiniteSymbol";
    case Errc::TruncationInsufficient: return "TruncationInsufficient";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::InadmissibleIndex: return "InadmissibleIndex";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A point in C^n with n <= kMaxDim, stored inline so that quadrature loops
/// never allocate.
class CPoint {
 public:
  static constexpr int kMaxDim = 4;

  CPoint() = default;

  explicit CPoint(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw Error(Errc::InvalidArgument, "CPoint dimension out of range");
  }

  CPoint(std::initializer_list<cd> coords) : CPoint(static_cast<int>(coords.size())) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  explicit CPoint(std::span<const cd> coords) : CPoint(static_cast<int>(coords.size())) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  int dim() const noexcept { return dim_; }

  cd& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
  const cd& operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }

  std::span<const cd> coords() const noexcept { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  double norm2() const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::norm(c_[static_cast<std::size_t>(i)]);
    return s;
  }

  bool all_finite() const noexcept {
    for (int i = 0; i < dim_; ++i) {
      const cd& v = c_[static_cast<std::size_t>(i)];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
  }

  friend bool operator==(const CPoint& a, const CPoint& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  std::array<cd, kMaxDim> c_{};
  int dim_ = 1;
};

/// Hermitian inner product sum z_i conj(w_i).
inline cd hermitian_dot(const CPoint& z, const CPoint& w) noexcept {
  cd s{0.0, 0.0};
  for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

/// A radius together with its complement 1 - r, kept separately so that
/// quantities like 1 - r^2 stay accurate for r within 1e-12 of 1.
struct Modulus {
  double r = 0.0;
  double comp = 1.0;

  static Modulus from_radius(double r) { return {r, 1.0 - r}; }
  static Modulus from_complement(double d) { return {1.0 - d, d}; }

  /// 1 - r^2
  double one_minus_sq() const noexcept { return comp * (1.0 + r); }
};

/// log|v| that does not overflow for |v| up to DBL_MAX.
inline double log_abs(cd v) noexcept {
  const double n = std::norm(v);
  if (n > 1e-300 && n < 1e300) return 0.5 * std::log(n);
  return std::log(std::abs(v));
}

}  // namespace bergman
