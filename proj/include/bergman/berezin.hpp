#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/summation.hpp"

namespace bergman {

enum class SymbolClass { Bounded, PIntegrable };

/// A function on the domain, used as a symbol or as an L^p function.
struct OperatorSymbol {
  std::function<cd(const CPoint&)> value;
  /// log|value| for positive symbols too large or too small for a double
  /// at some nodes. When present, the symbol is taken to be positive.
  std::function<double(const CPoint&)> log_abs;
  SymbolClass cls = SymbolClass::Bounded;
  double p = std::numeric_limits<double>::infinity();  // for PIntegrable
  /// Invariant under z_j -> e^{it} z_j; Toeplitz matrices are then diagonal.
  bool radial = false;
  std::string name = "symbol";

  cd operator()(const CPoint& w) const { return value(w); }

  static OperatorSymbol constant(cd c) {
    OperatorSymbol s;
    s.value = [c](const CPoint&) { return c; };
    s.radial = true;
    s.name = "constant";
    return s;
  }

  static OperatorSymbol bounded(std::function<cd(const CPoint&)> f, std::string name = "symbol", bool radial = false) {
    OperatorSymbol s;
    s.value = std::move(f);
    s.radial = radial;
    s.name = std::move(name);
    return s;
  }
};

namespace detail {

inline cd symbol_at(const OperatorSymbol& s, const CPoint& w) {
  const cd v = s.value(w);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(Errc::NonFiniteSymbol, "symbol '" + s.name + "' is not finite at a node");
  return v;
}

inline void check_rule(const DomainSpec& d, const QuadratureRule& rule) {
  if (rule.domain().kind != d.kind || rule.domain().dim != d.dim)
    throw Error(Errc::InvalidArgument, "rule is for " + rule.domain().tag() + ", not " + d.tag());
}

/// weight * symbol * factor, where the factor is passed both directly and
/// as a log. The direct product is used when every piece is a normal
/// double; otherwise the term is assembled in the log domain.
template <class LogFactor>
cd weighted_term(const Node& n, const OperatorSymbol& s, double factor, LogFactor&& log_factor) {
  if (s.log_abs) {
    const double la = s.log_abs(n.point);
    if (std::isnan(la) || la == std::numeric_limits<double>::infinity())
      throw Error(Errc::NonFiniteSymbol, "symbol '" + s.name + "' has a non-finite log-magnitude");
    return std::exp(n.log_weight + la + log_factor());
  }
  const cd v = symbol_at(s, n.point);
  if (v == cd{0.0, 0.0}) return {0.0, 0.0};
  const double direct = n.weight * factor;
  if (std::isnormal(direct) && std::isnormal(n.weight)) return v * direct;
  return v * std::exp(n.log_weight + log_factor());
}

}  // namespace detail

/// B phi(z) = int phi(w) |K(w,z)|^2 / K(z,z) dV(w).
inline cd berezin(const DomainSpec& d, const OperatorSymbol& phi, const CPoint& z, const QuadratureRule& rule) {
  detail::check_rule(d, rule);
  const double kzz = kernel_diagonal(d, z);
  const double log_kzz = std::log(kzz);
  CompensatedComplexSum s;
  rule.for_each([&](const Node& n) {
    const cd k = kernel_unchecked(d, n.point, z);
    s += detail::weighted_term(n, phi, std::norm(k) / kzz, [&] { return 2.0 * log_abs(k) - log_kzz; });
  });
  return s.value();
}

/// B* psi(z) = int |K(w,z)|^2 psi(w) / K(w,w) dV(w), the L^2 adjoint of B.
inline cd berezin_adjoint(const DomainSpec& d, const OperatorSymbol& psi, const CPoint& z,
                          const QuadratureRule& rule) {
  detail::check_rule(d, rule);
  kernel_diagonal(d, z);
  CompensatedComplexSum s;
  rule.for_each([&](const Node& n) {
    const double kww = kernel_diagonal_unchecked(d, n.point);
    if (!(kww > 0.0)) throw Error(Errc::NonpositiveDiagonal, "K(w,w) is not positive at a node");
    const cd k = kernel_unchecked(d, n.point, z);
    s += detail::weighted_term(n, psi, std::norm(k) / kww, [&] { return 2.0 * log_abs(k) - std::log(kww); });
  });
  return s.value();
}

/// P+ f(z) = int |K(z,w)| |f(w)| dV(w).
inline double absolute_projection(const DomainSpec& d, const OperatorSymbol& f, const CPoint& z,
                                  const QuadratureRule& rule) {
  detail::check_rule(d, rule);
  require_inside(d, z, "z");
  CompensatedSum s;
  rule.for_each([&](const Node& n) {
    const double k = std::abs(kernel_unchecked(d, z, n.point));
    s += std::abs(detail::weighted_term(n, f, k, [&] { return std::log(k); }));
  });
  return s.value();
}

/// P f(z) = int K(z,w) f(w) dV(w).
inline cd bergman_project(const DomainSpec& d, const OperatorSymbol& f, const CPoint& z, const QuadratureRule& rule) {
  detail::check_rule(d, rule);
  require_inside(d, z, "z");
  CompensatedComplexSum s;
  rule.for_each([&](const Node& n) {
    const cd k = kernel_unchecked(d, z, n.point);
    const double a = std::abs(k);
    s += detail::weighted_term(n, f, a, [&] { return std::log(a); }) * (k / a);
  });
  return s.value();
}

/// Domination check |B phi(z)| <= C P+|phi|(z), with slack 1e-8 + 1e-6 relative.
inline bool pointwise_domination(const DomainSpec& d, const OperatorSymbol& phi, const CPoint& z, double C,
                                 const QuadratureRule& rule) {
  const double lhs = std::abs(berezin(d, phi, z, rule));
  const double rhs = C * absolute_projection(d, phi, z, rule);
  return lhs <= rhs + 1e-8 + 1e-6 * std::max(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Operators on A^2 in an orthonormal monomial basis
// ---------------------------------------------------------------------------

enum class BasisKind { DiscMonomials, HartogsMonomials };

/// Orthonormal monomial basis of A^2, truncated at N.
///   disc:    e_n = sqrt((n+1)/pi) z^n,                     n = 0..N
///   Hartogs: e_(n,m) = sqrt(a_nm) z1^n z2^m, a_nm = (m+1)(k+1)/pi^2,
///            k = n+m+1 = 0..N, m = 0..N, ordered by k then m.
struct MonomialBasis {
  BasisKind kind = BasisKind::DiscMonomials;
  int truncation = 0;

  MonomialBasis(BasisKind k, int n) : kind(k), truncation(n) {
    if (n < 0) throw Error(Errc::InvalidArgument, "basis truncation must be nonnegative");
  }

  DomainSpec domain() const { return kind == BasisKind::DiscMonomials ? DomainSpec::disc() : DomainSpec::hartogs(); }

  std::size_t size() const {
    const auto n = static_cast<std::size_t>(truncation) + 1;
    return kind == BasisKind::DiscMonomials ? n : n * n;
  }

  /// (n, m) exponents of the i-th element; m = 0 on the disc.
  std::pair<int, int> exponents(std::size_t i) const {
    if (kind == BasisKind::DiscMonomials) return {static_cast<int>(i), 0};
    const int k = static_cast<int>(i / (static_cast<std::size_t>(truncation) + 1));
    const int m = static_cast<int>(i % (static_cast<std::size_t>(truncation) + 1));
    return {k - m - 1, m};
  }

  double norm_factor(std::size_t i) const {
    const auto [n, m] = exponents(i);
    if (kind == BasisKind::DiscMonomials) return std::sqrt((n + 1.0) / kPi);
    return std::sqrt((m + 1.0) * (n + m + 2.0)) / kPi;
  }

  /// Mass of the normalized kernel k_z outside the truncated basis,
  /// 1 - sum |e_i(z)|^2 / K(z,z), from closed-form tails so that it does
  /// not suffer cancellation. With x = |z|^2 the disc tail is
  ///   (1-x)^2 sum_{n>N} (n+1) x^n = x^(N+1) ((N+2) - (N+1) x);
  /// the Hartogs weights factor into disc-type weights in |z1|^2 and |z2/z1|^2.
  double missing_mass(const CPoint& z) const {
    const int N = truncation;
    auto disc_tail = [N](double x) { return std::pow(x, N + 1) * ((N + 2.0) - (N + 1.0) * x); };
    if (kind == BasisKind::DiscMonomials) return disc_tail(std::norm(z[0]));
    const double a = disc_tail(std::norm(z[0]));
    const double b = disc_tail(std::norm(z[1]) / std::norm(z[0]));
    return a + b - a * b;
  }

  /// All e_i(z), computed by running products.
  std::vector<cd> evaluate(const CPoint& z) const {
    std::vector<cd> out(size());
    if (kind == BasisKind::DiscMonomials) {
      cd p{1.0, 0.0};
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = norm_factor(i) * p;
        p *= z[0];
      }
      return out;
    }
    // z1^(k-m-1) z2^m = z1^(k-1) t^m with t = z2/z1
    const cd t = z[1] / z[0];
    cd pk = 1.0 / z[0];
    const std::size_t w = static_cast<std::size_t>(truncation) + 1;
    for (std::size_t k = 0; k < w; ++k) {
      cd pm = pk;
      for (std::size_t m = 0; m < w; ++m) {
        out[k * w + m] = norm_factor(k * w + m) * pm;
        pm *= t;
      }
      pk *= z[0];
    }
    return out;
  }
};

/// A (truncated) bounded operator on A^2: T(i, j) = <T e_j, e_i>.
struct BasisOperator {
  MonomialBasis basis;
  Eigen::SparseMatrix<cd> matrix;

  static BasisOperator identity(const MonomialBasis& b) {
    BasisOperator op{b, Eigen::SparseMatrix<cd>(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()))};
    op.matrix.setIdentity();
    return op;
  }

  static BasisOperator diagonal(const MonomialBasis& b, const std::function<cd(std::size_t)>& entry) {
    const auto n = static_cast<Eigen::Index>(b.size());
    BasisOperator op{b, Eigen::SparseMatrix<cd>(n, n)};
    std::vector<Eigen::Triplet<cd>> t;
    for (Eigen::Index i = 0; i < n; ++i) t.emplace_back(i, i, entry(static_cast<std::size_t>(i)));
    op.matrix.setFromTriplets(t.begin(), t.end());
    return op;
  }
};

/// Toeplitz operator T_phi in the monomial basis: <phi e_j, e_i>, by quadrature.
/// Radial symbols only couple equal exponents, so only the diagonal is computed.
inline BasisOperator toeplitz_matrix(const MonomialBasis& basis, const OperatorSymbol& phi,
                                     const QuadratureRule& rule) {
  const DomainSpec d = basis.domain();
  detail::check_rule(d, rule);
  const std::size_t n = basis.size();
  std::vector<Node> nodes = rule.materialize();
  std::vector<cd> weighted(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) weighted[q] = nodes[q].weight * detail::symbol_at(phi, nodes[q].point);
  std::vector<std::vector<cd>> values(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) values[q] = basis.evaluate(nodes[q].point);

  std::vector<Eigen::Triplet<cd>> trip;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = phi.radial ? i : 0; j < (phi.radial ? i + 1 : n); ++j) {
      CompensatedComplexSum s;
      for (std::size_t q = 0; q < nodes.size(); ++q) s += weighted[q] * values[q][j] * std::conj(values[q][i]);
      const cd v = s.value();
      if (v != cd{0.0, 0.0}) trip.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v);
    }
  }
  BasisOperator op{basis, Eigen::SparseMatrix<cd>(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return op;
}

struct OperatorBerezin {
  cd value;
  /// Bound on the truncation error for an operator of norm one:
  /// 2 sqrt(mu) + mu, where mu is the mass of k_z outside the truncated basis.
  double tail = 0.0;
};

/// <T k_z, k_z> = sum_{i,j} T(i,j) u_j(z) conj(u_i(z)), u_j = conj(e_j(z)) / sqrt(K(z,z)).
inline OperatorBerezin berezin_of_operator(const BasisOperator& T, const CPoint& z) {
  const DomainSpec d = T.basis.domain();
  const double kzz = kernel_diagonal(d, z);
  const std::vector<cd> e = T.basis.evaluate(z);
  const double scale = 1.0 / std::sqrt(kzz);
  Eigen::VectorXcd u(static_cast<Eigen::Index>(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) u[static_cast<Eigen::Index>(i)] = std::conj(e[i]) * scale;
  const double mu = T.basis.missing_mass(z);
  const double tail = 2.0 * std::sqrt(mu) + mu;
  if (tail > 1e-8)
    throw Error(Errc::TruncationInsufficient,
                "basis truncation " + std::to_string(T.basis.truncation) + " leaves tail " + std::to_string(tail));
  // sum_i conj(u_i) (T u)_i, accumulated in index order
  const Eigen::VectorXcd Tu = T.matrix * u;
  CompensatedComplexSum s;
  for (Eigen::Index i = 0; i < u.size(); ++i) s += std::conj(u[i]) * Tu[i];
  return {s.value(), tail};
}

}  // namespace bergman
