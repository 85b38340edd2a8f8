#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/hartogs.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

inline constexpr double kInfP = std::numeric_limits<double>::infinity();

enum class OperatorKind { Berezin, AbsoluteProjection };

inline const char* to_string(OperatorKind k) {
  return k == OperatorKind::Berezin ? "berezin" : "absolute-projection";
}

/// How a discretization was built; carried into every report.
struct Resolution {
  std::string domain;
  std::string scheme;
  int radial_n = 0;
  int angular_n = 0;
  double grading = 0.0;
  double depth = 0.0;
  int order = 0;
  int level = 0;
};

inline Resolution resolution_of(const QuadratureRule& rule) {
  const RuleMeta& m = rule.meta();
  Resolution r;
  r.domain = m.domain_tag;
  r.scheme = to_string(m.scheme);
  r.radial_n = m.radial_n;
  r.angular_n = m.angular_n;
  r.grading = m.grading;
  return r;
}

/// Radial mesh for torus-quotient operators: `cells` cells uniform in
/// log10(1 - r) down to 10^-depth, `order` Gauss points per cell.
struct RadialMesh {
  int cells = 24;
  double depth = 12.0;
  int order = 6;
};

/// A positive integral operator sampled on nodes:
///   (T f)(row_i) ~ sum_j A(i, j) col_w[j] f(col_j).
/// Quotient matrices act on torus-invariant functions; their nodes are
/// moduli and col_w includes the angular measure (2 pi r per variable).
struct OperatorMatrix {
  OperatorKind kind = OperatorKind::Berezin;
  DomainSpec domain;
  bool quotient = false;
  Eigen::MatrixXd A;
  std::vector<CPoint> rows, cols;
  std::vector<std::vector<Modulus>> row_moduli, col_moduli;
  Eigen::VectorXd row_w, col_w;
  Resolution resolution;

  /// Rows and columns are the same node set, so the matrix acts on L^p of
  /// one discrete measure.
  bool square() const { return rows_are_cols; }

  template <class Vec>
  Vec apply(const Vec& f) const {
    if (f.size() != A.cols()) throw Error(Errc::InvalidArgument, "grid function size does not match the columns");
    return A * (col_w.cast<typename Vec::Scalar>().cwiseProduct(f));
  }

  /// sum_j A(i, j) col_w[j]; equals (T 1)(row_i).
  Eigen::VectorXd row_sums() const { return A * col_w; }

  bool rows_are_cols = false;
};

namespace detail {

inline std::vector<Modulus> moduli_of(const CPoint& z) {
  std::vector<Modulus> m;
  for (int i = 0; i < z.dim(); ++i) m.push_back(Modulus::from_radius(std::abs(z[i])));
  return m;
}

inline double entry(OperatorKind k, const DomainSpec& d, const CPoint& z, const CPoint& w, double kzz) {
  const cd K = kernel_unchecked(d, w, z);
  const double v = k == OperatorKind::Berezin ? std::norm(K) / kzz : std::abs(K);
  if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "kernel entry overflows at a quadrature node");
  return v;
}

inline OperatorMatrix discretize(OperatorKind kind, const DomainSpec& d, const QuadratureRule& rule,
                                 std::span<const CPoint> row_points, bool square) {
  check_rule(d, rule);
  OperatorMatrix M;
  M.kind = kind;
  M.domain = d;
  M.resolution = resolution_of(rule);
  const std::size_t n = rule.size();
  M.cols.reserve(n);
  M.col_w.resize(static_cast<Eigen::Index>(n));
  {
    std::size_t j = 0;
    rule.for_each([&](const Node& nd) {
      M.cols.push_back(nd.point);
      M.col_w[static_cast<Eigen::Index>(j++)] = nd.weight;
    });
  }
  if (square) {
    M.rows = M.cols;
    M.row_w = M.col_w;
    M.rows_are_cols = true;
  } else {
    for (const CPoint& z : row_points) {
      require_inside(d, z, "row point");
      M.rows.push_back(z);
    }
    M.row_w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(M.rows.size()));
  }
  for (const CPoint& z : M.rows) M.row_moduli.push_back(moduli_of(z));
  for (const CPoint& w : M.cols) M.col_moduli.push_back(moduli_of(w));

  M.A.resize(static_cast<Eigen::Index>(M.rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < M.rows.size(); ++i) {
    const double kzz = kernel_diagonal_unchecked(d, M.rows[i]);
    for (std::size_t j = 0; j < n; ++j)
      M.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(kind, d, M.rows[i], M.cols[j], kzz);
  }
  return M;
}

inline void require_torus_domain(const DomainSpec& d) {
  const bool ok = d.kind == DomainKind::UnitDisc || (d.kind == DomainKind::Polydisc && d.dim <= 2);
  if (!ok) throw Error(Errc::UnsupportedKind, "torus-quotient operators are available for the disc and bidisc");
}

/// All tuples of mesh moduli (dim 1 or 2), first coordinate slowest.
inline std::vector<std::vector<Modulus>> tensor_moduli(const RadialRule& r, int dim, std::vector<double>* weights) {
  std::vector<std::vector<Modulus>> out;
  const std::size_t n = r.size();
  auto w1 = [&](std::size_t i) { return 2.0 * kPi * r.r[i] * r.w[i]; };
  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({r.modulus(i)});
      if (weights) weights->push_back(w1(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        out.push_back({r.modulus(i), r.modulus(j)});
        if (weights) weights->push_back(w1(i) * w1(j));
      }
  }
  return out;
}

inline CPoint point_of(const std::vector<Modulus>& m) {
  CPoint z(static_cast<int>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) z[static_cast<int>(i)] = m[i].r;
  return z;
}

inline OperatorMatrix discretize_quotient(OperatorKind kind, const DomainSpec& d, const RadialMesh& mesh,
                                          const std::vector<std::vector<Modulus>>* row_moduli) {
  require_torus_domain(d);
  const RadialRule radial = radial_log_boundary(mesh.cells, mesh.depth, mesh.order);
  OperatorMatrix M;
  M.kind = kind;
  M.domain = d;
  M.quotient = true;
  M.resolution.domain = d.tag();
  M.resolution.scheme = "torus-quotient";
  M.resolution.radial_n = mesh.cells;
  M.resolution.depth = mesh.depth;
  M.resolution.order = mesh.order;
  std::vector<double> w;
  M.col_moduli = tensor_moduli(radial, d.dim, &w);
  M.col_w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  if (row_moduli) {
    M.row_moduli = *row_moduli;
    M.row_w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(M.row_moduli.size()));
  } else {
    M.row_moduli = M.col_moduli;
    M.row_w = M.col_w;
    M.rows_are_cols = true;
  }
  for (const auto& m : M.row_moduli) {
    if (static_cast<int>(m.size()) != d.dim) throw Error(Errc::InvalidArgument, "row moduli have the wrong dimension");
    M.rows.push_back(point_of(m));
  }
  for (const auto& m : M.col_moduli) M.cols.push_back(point_of(m));

  M.A.resize(static_cast<Eigen::Index>(M.rows.size()), static_cast<Eigen::Index>(M.cols.size()));
  for (std::size_t i = 0; i < M.rows.size(); ++i)
    for (std::size_t j = 0; j < M.cols.size(); ++j) {
      const std::span<const Modulus> z(M.row_moduli[i]), v(M.col_moduli[j]);
      M.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          kind == OperatorKind::Berezin ? torus_mean_berezin_kernel(d, z, v) : torus_mean_abs_kernel(d, z, v);
    }
  return M;
}

}  // namespace detail

/// Point-to-point discretization: rows and columns are the rule's nodes,
/// A(i, j) = |K(w_j, z_i)|^2 / K(z_i, z_i).
inline OperatorMatrix discretize_berezin(const DomainSpec& d, const QuadratureRule& rule) {
  return detail::discretize(OperatorKind::Berezin, d, rule, {}, true);
}

/// Rows at the given points, columns at the rule's nodes.
inline OperatorMatrix discretize_berezin(const DomainSpec& d, const QuadratureRule& rule,
                                         std::span<const CPoint> rows) {
  return detail::discretize(OperatorKind::Berezin, d, rule, rows, false);
}

/// A(i, j) = |K(z_i, w_j)|.
inline OperatorMatrix discretize_absolute(const DomainSpec& d, const QuadratureRule& rule) {
  return detail::discretize(OperatorKind::AbsoluteProjection, d, rule, {}, true);
}

inline OperatorMatrix discretize_absolute(const DomainSpec& d, const QuadratureRule& rule,
                                          std::span<const CPoint> rows) {
  return detail::discretize(OperatorKind::AbsoluteProjection, d, rule, rows, false);
}

// Torus quotients. Both operators have nonnegative kernels and commute with
// rotations of each variable; by Minkowski in the angles and Young's
// inequality on the torus their L^p norms equal those of the quotient
// operators on torus-invariant functions, which these matrices discretize.

inline OperatorMatrix discretize_berezin_quotient(const DomainSpec& d, const RadialMesh& mesh = {}) {
  return detail::discretize_quotient(OperatorKind::Berezin, d, mesh, nullptr);
}

inline OperatorMatrix discretize_absolute_quotient(const DomainSpec& d, const RadialMesh& mesh = {}) {
  return detail::discretize_quotient(OperatorKind::AbsoluteProjection, d, mesh, nullptr);
}

inline OperatorMatrix discretize_quotient(OperatorKind kind, const DomainSpec& d, const RadialMesh& mesh,
                                          const std::vector<std::vector<Modulus>>& rows) {
  return detail::discretize_quotient(kind, d, mesh, &rows);
}

// ---------------------------------------------------------------------------
// Norm estimates
// ---------------------------------------------------------------------------

enum class BoundKind { Lower, Upper, Approximate };

inline const char* to_string(BoundKind b) {
  switch (b) {
    case BoundKind::Lower: return "lower";
    case BoundKind::Upper: return "upper";
    case BoundKind::Approximate: return "approximate";
  }
  return "?";
}

struct NormEstimate {
  double value = 0.0;
  double p = 2.0;
  std::string method;
  BoundKind bound_kind = BoundKind::Approximate;
  Resolution resolution;
  /// False when an iteration stalled; value is then the best lower bound seen.
  bool converged = true;
  int iterations = 0;
};

struct PowerOptions {
  int max_iterations = 5000;
  double tolerance = 1e-11;
  /// p = 2 uses a dense eigen/SVD solve up to this many nodes, power iteration beyond.
  Eigen::Index dense_limit = 2500;
};

namespace detail {

inline void require_p(double p) {
  if (!(p >= 1.0)) throw Error(Errc::InvalidArgument, "p must be >= 1");
}

/// M(i, j) = w_i^(1/p) A(i, j) w_j^(1 - 1/p): the operator on L^p(w) as a
/// matrix on unweighted l^p.
inline Eigen::MatrixXd weighted(const OperatorMatrix& T, double p) {
  const Eigen::VectorXd a = T.row_w.array().pow(1.0 / p);
  const Eigen::VectorXd b = T.col_w.array().pow(1.0 - 1.0 / p);
  return a.asDiagonal() * T.A * b.asDiagonal();
}

inline double lp_norm(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

/// Boyd's power method for the l^p -> l^p norm of a nonnegative matrix:
/// x <- (M^T (M x)^(p-1))^(q-1), normalized. ||M x||_p increases monotonically.
inline NormEstimate boyd(const Eigen::MatrixXd& M, double p, const Eigen::VectorXd& start, const PowerOptions& opt) {
  const double q = p / (p - 1.0);
  Eigen::VectorXd x = start;
  x /= lp_norm(x, p);
  NormEstimate e;
  e.p = p;
  e.method = "boyd-power";
  e.bound_kind = BoundKind::Lower;
  e.converged = false;
  double prev = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::VectorXd y = M * x;
    const double val = lp_norm(y, p);
    e.value = std::max(e.value, val);
    e.iterations = it;
    if (it > 2 && std::abs(val - prev) <= opt.tolerance * val) {
      e.converged = true;
      break;
    }
    prev = val;
    const Eigen::VectorXd z = M.transpose() * (y / val).cwiseAbs().array().pow(p - 1.0).matrix();
    x = z.array().pow(q - 1.0).matrix();
    const double nx = lp_norm(x, p);
    if (!(nx > 0.0) || !std::isfinite(nx)) break;
    x /= nx;
  }
  return e;
}

inline NormEstimate spectral(const Eigen::MatrixXd& M, const Eigen::VectorXd& start, const PowerOptions& opt) {
  NormEstimate e;
  e.p = 2.0;
  e.bound_kind = BoundKind::Approximate;
  const double scale = M.cwiseAbs().maxCoeff();
  const bool symmetric = M.rows() == M.cols() && (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale;
  if (M.rows() <= opt.dense_limit) {
    if (symmetric) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
      e.value = es.eigenvalues().cwiseAbs().maxCoeff();
      e.method = "symmetric-eigen";
    } else {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
      e.value = svd.singularValues()(0);
      e.method = "svd";
    }
    return e;
  }
  // power iteration on M^T M
  e.method = "power";
  e.converged = false;
  Eigen::VectorXd x = start.normalized();
  double prev = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::VectorXd y = M * x;
    const double val = y.norm();
    e.value = std::max(e.value, val);
    e.iterations = it;
    if (it > 2 && std::abs(val - prev) <= opt.tolerance * val) {
      e.converged = true;
      break;
    }
    prev = val;
    x = (M.transpose() * y).normalized();
  }
  if (!e.converged) e.bound_kind = BoundKind::Lower;
  return e;
}

}  // namespace detail

/// ||T||_{L^p -> L^p} of the discrete operator on the nodes' weighted measure.
///  p = inf: max weighted row sum. p = 1: max weighted column sum.
///  p = 2: largest singular value. Otherwise Boyd's power method, a lower bound.
inline NormEstimate estimate_norm(const OperatorMatrix& T, double p, const PowerOptions& opt = {}) {
  detail::require_p(p);
  if (!T.square()) throw Error(Errc::InvalidArgument, "norm estimates need a square operator matrix");
  NormEstimate e;
  if (std::isinf(p)) {
    e.value = T.row_sums().maxCoeff();
    e.method = "row-sum";
  } else if (p == 1.0) {
    e.value = (T.row_w.transpose() * T.A).maxCoeff();
    e.method = "column-sum";
  } else if (p == 2.0) {
    e = detail::spectral(detail::weighted(T, 2.0), T.col_w.cwiseSqrt(), opt);
  } else {
    // start from f = 1, i.e. the weights to the power 1/p
    e = detail::boyd(detail::weighted(T, p), p, T.col_w.array().pow(1.0 / p).matrix(), opt);
  }
  e.p = p;
  e.resolution = T.resolution;
  return e;
}

// ---------------------------------------------------------------------------
// Witness lower bounds
// ---------------------------------------------------------------------------

/// Test functions |z1|^a rho(z)^b over the (a, b) grid, rho the boundary
/// weight; for the Hartogs triangle the family is f_eps over `eps`.
struct WitnessFamily {
  std::vector<double> a{0.0};
  std::vector<double> b{0.0};
  std::vector<double> eps;
};

namespace detail {

/// |z1|^a rho^b is in L^p near z1 = 0 iff a p + 2 > 0 (the disc measure
/// carries r dr), and near the boundary iff b p > -1.
inline bool witness_in_lp(double a, double b, double p) {
  if (std::isinf(p)) return a >= 0.0 && b >= 0.0;
  try {
    const TailExponent ends[] = {{TailEnd::AtZero, a * p + 1.0}, {TailEnd::AtZero, b * p}};
    return tail_exponent_classify(std::span<const TailExponent>(ends)) == Convergence::Converges;
  } catch (const Error&) {
    return false;
  }
}

inline double weighted_lp(const Eigen::VectorXd& f, const Eigen::VectorXd& w, double p) {
  if (std::isinf(p)) return f.cwiseAbs().maxCoeff();
  const double m = f.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  return m * std::pow((w.array() * (f.cwiseAbs() / m).array().pow(p)).sum(), 1.0 / p);
}

inline double rho_of(const std::vector<Modulus>& m) {
  double t = 1.0;
  for (const Modulus& x : m) t *= x.one_minus_sq();
  return t;
}

}  // namespace detail

/// max over the family of ||T f||_p / ||f||_p on the matrix's nodes. Each
/// candidate is first checked to lie in L^p of the domain.
inline NormEstimate witness_lower_bound(const OperatorMatrix& T, double p, const WitnessFamily& family) {
  detail::require_p(p);
  if (!T.square()) throw Error(Errc::InvalidArgument, "witness bounds need a square operator matrix");
  NormEstimate e;
  e.p = p;
  e.method = "witness";
  e.bound_kind = BoundKind::Lower;
  e.resolution = T.resolution;
  bool any = false;
  const Eigen::Index n = T.A.cols();
  Eigen::VectorXd f(n);
  for (double a : family.a)
    for (double b : family.b) {
      if (!detail::witness_in_lp(a, b, p)) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& m = T.col_moduli[static_cast<std::size_t>(j)];
        // quotient nodes: rho from the moduli; point nodes: the domain's weight
        const double rho = T.quotient ? detail::rho_of(m) : boundary_weight(T.domain, T.cols[static_cast<std::size_t>(j)]);
        f[j] = std::pow(m[0].r, a) * std::pow(rho, b);
      }
      const double nf = detail::weighted_lp(f, T.col_w, p);
      if (!(nf > 0.0) || !std::isfinite(nf)) continue;
      const double ratio = detail::weighted_lp(T.apply(f), T.row_w, p) / nf;
      if (std::isfinite(ratio)) {
        any = true;
        e.value = std::max(e.value, ratio);
      }
    }
  if (!any) throw Error(Errc::EmptyFamily, "no witness in the family lies in L^p");
  return e;
}

/// Witness bound for the Berezin transform of a domain: the disc and bidisc
/// use the torus-quotient matrix; the Hartogs triangle uses f_eps and the
/// radial reduction of B f_eps (p = 2 only).
inline NormEstimate witness_lower_bound(const DomainSpec& d, double p, const WitnessFamily& family,
                                        const RadialMesh& mesh = {}) {
  if (d.kind == DomainKind::HartogsTriangle) {
    if (p != 2.0) throw Error(Errc::UnsupportedKind, "Hartogs witnesses are implemented for p = 2");
    if (family.eps.empty()) throw Error(Errc::EmptyFamily, "Hartogs witness family needs eps values");
    NormEstimate e;
    e.p = 2.0;
    e.method = "witness-f_eps";
    e.bound_kind = BoundKind::Lower;
    e.resolution.domain = d.tag();
    e.resolution.scheme = "radial-closed-form";
    for (double eps : family.eps)
      e.value = std::max(e.value, hartogs::berezin_feps_norm(eps) / hartogs::f_eps_norm(eps));
    return e;
  }
  return witness_lower_bound(discretize_berezin_quotient(d, mesh), p, family);
}

// ---------------------------------------------------------------------------
// Boundedness-ratio scan
// ---------------------------------------------------------------------------

struct BRScanReport {
  double supremum = 0.0;
  double infimum = std::numeric_limits<double>::infinity();
  CPoint argmax_z, argmax_w;
  bool divergent = false;
  /// supremum at the refined level over the supremum at the base level
  double growth = 1.0;
  std::size_t pairs = 0;
  Resolution resolution;
};

/// sup and inf of |K(w, z)| / K(z, z) over all grid pairs.
inline BRScanReport br_scan(const DomainSpec& d, std::span<const CPoint> z_grid, std::span<const CPoint> w_grid) {
  if (z_grid.empty() || w_grid.empty()) throw Error(Errc::InvalidArgument, "scan grids are empty");
  for (const CPoint& z : z_grid) require_inside(d, z, "z grid point");
  for (const CPoint& w : w_grid) require_inside(d, w, "w grid point");
  BRScanReport r;
  r.resolution.domain = d.tag();
  r.resolution.scheme = "explicit-grid";
  r.resolution.radial_n = static_cast<int>(z_grid.size());
  r.resolution.angular_n = static_cast<int>(w_grid.size());
  for (const CPoint& z : z_grid) {
    const double kzz = kernel_diagonal_unchecked(d, z);
    for (const CPoint& w : w_grid) {
      const double v = std::abs(kernel_unchecked(d, w, z)) / kzz;
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "kernel ratio overflow on the scan grid");
      if (v > r.supremum) {
        r.supremum = v;
        r.argmax_z = z;
        r.argmax_w = w;
      }
      r.infimum = std::min(r.infimum, v);
      ++r.pairs;
    }
  }
  return r;
}

/// Log-graded scan grid. Level l has depth 6 * 2^l decades toward the
/// boundary (and toward z1 = 0 where that is a boundary point) and twice the
/// points of level l - 1.
inline std::vector<CPoint> scan_grid(const DomainSpec& d, int level) {
  if (level < 0 || level > 3) throw Error(Errc::InvalidResolution, "scan level must be in [0, 3]");
  const int s = 1 << level;
  const double depth = 6.0 * s;
  auto graded = [](int count, double depth_) {
    std::vector<double> t;
    for (int i = 0; i < count; ++i) t.push_back(depth_ * (i + 1.0) / count);
    return t;
  };
  std::vector<CPoint> g;
  auto add = [&](const CPoint& z) {
    if (contains(d, z)) g.push_back(z);
  };
  const int na = 4 * s;
  auto angle = [na](int k) { return std::polar(1.0, 2.0 * kPi * k / na); };
  std::vector<double> radii{0.0, 0.25, 0.5};
  for (double t : graded(8 * s, depth)) radii.push_back(1.0 - std::pow(10.0, -t));

  switch (d.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc: {
      std::vector<double> rs = radii;
      if (d.kind == DomainKind::PuncturedDisc)
        for (double t : graded(4 * s, depth)) rs.push_back(std::pow(10.0, -t));
      for (double r : rs)
        for (int k = 0; k < (r == 0.0 ? 1 : na); ++k) add(CPoint{r * angle(k)});
      break;
    }
    case DomainKind::Polydisc: {
      std::vector<cd> f;
      for (std::size_t i = 0; i < radii.size(); i += (d.dim > 2 ? 2 : 1))
        for (int k = 0; k < (radii[i] == 0.0 ? 1 : std::min(na, 4)); ++k) f.push_back(radii[i] * angle(k));
      std::vector<std::size_t> idx(static_cast<std::size_t>(d.dim), 0);
      while (true) {
        CPoint z(d.dim);
        for (int i = 0; i < d.dim; ++i) z[i] = f[idx[static_cast<std::size_t>(i)]];
        add(z);
        int a = d.dim - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == f.size()) idx[static_cast<std::size_t>(a--)] = 0;
        if (a < 0) break;
      }
      break;
    }
    case DomainKind::UnitBall: {
      std::vector<CPoint> dirs;
      const double h = 1.0 / std::sqrt(2.0);
      for (int i = 0; i < d.dim; ++i) {
        CPoint u(d.dim);
        u[i] = 1.0;
        dirs.push_back(u);
      }
      CPoint u1(d.dim), u2(d.dim);
      u1[0] = h;
      u1[1] = h;
      u2[0] = h;
      u2[1] = cd(0.0, h);
      dirs.push_back(u1);
      dirs.push_back(u2);
      for (double r : radii)
        for (const CPoint& u : dirs)
          for (int k = 0; k < (r == 0.0 ? 1 : na); ++k) {
            CPoint z(d.dim);
            for (int i = 0; i < d.dim; ++i) z[i] = r * angle(k) * u[i];
            add(z);
          }
      break;
    }
    case DomainKind::UpperHalfPlane: {
      std::vector<double> xs{0.0};
      for (int k = -2 * s; k <= 2 * s; ++k)
        if (k != 0) xs.push_back(std::copysign(std::pow(10.0, std::abs(k) * 3.0 / s), k));
      for (double t : graded(8 * s, depth)) {
        for (double x : xs) {
          add(CPoint{cd(x, std::pow(10.0, -t))});
          add(CPoint{cd(x, std::pow(10.0, t))});
        }
      }
      for (double x : xs) add(CPoint{cd(x, 1.0)});
      break;
    }
    case DomainKind::HartogsTriangle: {
      std::vector<double> r1{0.5};
      for (double t : graded(8 * s, depth)) {
        r1.push_back(std::pow(10.0, -t));
        r1.push_back(1.0 - std::pow(10.0, -t));
      }
      std::vector<double> ts{0.0, 0.5};
      for (double t : graded(2 * s, depth)) ts.push_back(1.0 - std::pow(10.0, -t));
      for (double a : r1)
        for (double t : ts)
          for (int k = 0; k < (t == 0.0 ? 1 : std::min(na, 4)); ++k) add(CPoint{a, a * t * angle(k)});
      break;
    }
    default: throw Error(Errc::UnsupportedKind, "no scan grid for " + d.tag());
  }
  return g;
}

/// Scans the base level and the next one. The ratio is flagged divergent
/// when refining multiplies the sampled supremum by 10 or more.
inline BRScanReport br_scan(const DomainSpec& d, int base_level = 0) {
  const auto g0 = scan_grid(d, base_level);
  const auto g1 = scan_grid(d, base_level + 1);
  const BRScanReport r0 = br_scan(d, g0, g0);
  BRScanReport r1 = br_scan(d, g1, g1);
  r1.growth = r1.supremum / r0.supremum;
  r1.divergent = r1.growth >= 10.0;
  r1.resolution.scheme = "log-graded";
  r1.resolution.radial_n = static_cast<int>(g1.size());
  r1.resolution.angular_n = 0;
  r1.resolution.depth = 6.0 * (1 << (base_level + 1));
  r1.resolution.level = base_level + 1;
  return r1;
}

// ---------------------------------------------------------------------------
// Product structure and Schur test
// ---------------------------------------------------------------------------

struct ProductCheck {
  NormEstimate bidisc;
  NormEstimate disc;
  double disc_squared = 0.0;
  double relative_gap() const { return std::abs(bidisc.value - disc_squared) / disc_squared; }
};

/// ||P+||_p on the bidisc against ||P+||_p^2 on the disc, both from the
/// torus quotient on the same radial mesh; the bidisc matrix is assembled
/// from its own kernel on the product mesh.
inline ProductCheck product_norm_check(double p, const RadialMesh& mesh = {6, 12.0, 6}) {
  ProductCheck c;
  c.disc = estimate_norm(discretize_absolute_quotient(DomainSpec::disc(), mesh), p);
  c.bidisc = estimate_norm(discretize_absolute_quotient(DomainSpec::polydisc(2), mesh), p);
  c.disc_squared = c.disc.value * c.disc.value;
  return c;
}

struct SchurProbe {
  double max_ratio = 0.0;  // max over rows of P+ h / h
  double at_comp = 1.0;  // 1 - |z| at the maximizing row
  std::size_t rows = 0;
};

/// P+ h / h on the disc for h = (1 - |z|^2)^(-s). Level l puts 24 * 2^l rows
/// at 1 - |z| = 10^-t, t up to 6 * 2^l, and integrates on a log-boundary mesh
/// reaching 8 decades past the last row, where the mass beyond the cut-off is
/// below 1e-8 of the row value.
inline SchurProbe schur_probe(double s, int level = 0) {
  if (!(s > 0.0 && s < 1.0)) throw Error(Errc::InvalidArgument, "Schur exponent must lie in (0, 1)");
  if (level < 0 || level > 2) throw Error(Errc::InvalidResolution, "Schur probe level must be in [0, 2]");
  const DomainSpec d = DomainSpec::disc();
  const int k = 1 << level;
  const double row_depth = 6.0 * k;
  std::vector<std::vector<Modulus>> rows;
  for (int i = 0; i < 24 * k; ++i)
    rows.push_back({Modulus::from_complement(std::pow(10.0, -row_depth * (i + 1.0) / (24 * k)))});
  const double depth = row_depth + 8.0;
  const OperatorMatrix M =
      discretize_quotient(OperatorKind::AbsoluteProjection, d, {static_cast<int>(2 * depth), depth, 6}, rows);
  Eigen::VectorXd h(M.A.cols());
  for (Eigen::Index j = 0; j < h.size(); ++j)
    h[j] = std::pow(M.col_moduli[static_cast<std::size_t>(j)][0].one_minus_sq(), -s);
  const Eigen::VectorXd Ph = M.apply(h);
  SchurProbe out;
  out.rows = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double ratio = Ph[static_cast<Eigen::Index>(i)] / std::pow(rows[i][0].one_minus_sq(), -s);
    if (!std::isfinite(ratio)) throw Error(Errc::NonFiniteValue, "Schur ratio is not finite");
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.at_comp = rows[i][0].comp;
    }
  }
  return out;
}

}  // namespace bergman
