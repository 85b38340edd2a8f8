#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/gauss.hpp"
#include "bergman/summation.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// One-dimensional radial rules on (0, 1)
// ---------------------------------------------------------------------------

enum class RadialScheme {
  /// Gauss-Legendre in s, with the two-sided polynomial grading
  /// r = s^g / (s^g + (1-s)^g). g = 1 is plain Gauss-Legendre.
  Gauss,
  /// tanh-sinh nodes from r = 1e-290 up to 1 - r = 1e-11. Absorbs
  /// integrable power singularities at r = 0 that no fixed grading can.
  DoubleExponential,
  /// Composite Gauss on cells uniform in log10(1 - r), reaching
  /// 1 - r = 10^-depth. Resolves kernels whose width scales like 1 - r.
  LogBoundary,
};

inline const char* to_string(RadialScheme s) {
  switch (s) {
    case RadialScheme::Gauss: return "gauss";
    case RadialScheme::DoubleExponential: return "double-exponential";
    case RadialScheme::LogBoundary: return "log-boundary";
  }
  return "?";
}

/// Nodes r in (0,1) with complements 1 - r, logs, and weights for dr.
struct RadialRule {
  std::vector<double> r;
  std::vector<double> comp;
  std::vector<double> log_r;
  std::vector<double> w;
  std::vector<double> log_w;

  std::size_t size() const noexcept { return r.size(); }

  Modulus modulus(std::size_t i) const noexcept { return {r[i], comp[i]}; }

  void push(double ri, double ci, double log_ri, double wi, double log_wi) {
    r.push_back(ri);
    comp.push_back(ci);
    log_r.push_back(log_ri);
    w.push_back(wi);
    log_w.push_back(log_wi);
  }
};

inline RadialRule radial_gauss(int n, double grading) {
  if (n < 1) throw Error(Errc::InvalidResolution, "radial rule needs at least one node");
  if (!(grading >= 1.0)) throw Error(Errc::InvalidResolution, "grading must be >= 1");
  const GaussRule& g = gauss_legendre(n);
  RadialRule rule;
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double s = 0.5 * (1.0 + g.x[k]);
    const double c = 0.5 * (1.0 - g.x[k]);
    const double a = std::pow(s, grading);
    const double b = std::pow(c, grading);
    const double den = a + b;
    const double r = a / den;
    const double comp = b / den;
    const double jac = grading * std::pow(s, grading - 1.0) * std::pow(c, grading - 1.0) / (den * den);
    const double w = 0.5 * g.w[k] * jac;
    rule.push(r, comp, std::log(r), w, std::log(w));
  }
  return rule;
}

inline RadialRule radial_double_exponential(int n, double r_floor = 1e-290, double comp_floor = 1e-11) {
  if (n < 2) throw Error(Errc::InvalidResolution, "double-exponential rule needs at least two nodes");
  // r = 1/(1 + exp(-pi sinh u)); pick the u-range from the floors.
  const double u_lo = std::asinh(-std::log(r_floor) / kPi);
  const double u_hi = std::asinh(-std::log(comp_floor) / kPi);
  const double h = (u_lo + u_hi) / (n - 1);
  auto softplus = [](double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); };
  RadialRule rule;
  for (int k = 0; k < n; ++k) {
    const double u = -u_lo + k * h;
    const double v = kPi * std::sinh(u);
    const double log_r = -softplus(-v);
    const double log_c = -softplus(v);
    const double r = std::exp(log_r);
    const double c = std::exp(log_c);
    const double log_w = std::log(h) + std::log(kPi * std::cosh(u)) + log_r + log_c;
    rule.push(r, c, log_r, std::exp(log_w), log_w);
  }
  return rule;
}

inline RadialRule radial_log_boundary(int cells, double depth, int order = 6) {
  if (cells < 1 || order < 1) throw Error(Errc::InvalidResolution, "log-boundary rule needs cells and order");
  // Past 16 decades r rounds to 1; the complement still carries the node.
  if (!(depth > 0.0 && depth <= 40.0)) throw Error(Errc::InvalidResolution, "log-boundary depth must be in (0, 40]");
  const GaussRule& g = gauss_legendre(order);
  const double ln10 = std::log(10.0);
  const double width = depth / cells;
  RadialRule rule;
  for (int c = 0; c < cells; ++c) {
    const double mid = (c + 0.5) * width;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double t = mid + 0.5 * width * g.x[k];
      const double d = std::pow(10.0, -t);
      const double r = 1.0 - d;
      const double w = 0.5 * width * g.w[k] * d * ln10;
      rule.push(r, d, std::log1p(-d), w, std::log(w));
    }
  }
  return rule;
}

/// Trapezoidal rule in angle: nodes 2 pi k / n, weights 2 pi / n.
struct AngularRule {
  std::vector<cd> unit;
  double w = 0.0;
  double log_w = 0.0;

  static AngularRule uniform(int n) {
    if (n < 1) throw Error(Errc::InvalidResolution, "angular rule needs at least one node");
    AngularRule a;
    a.w = 2.0 * kPi / n;
    a.log_w = std::log(a.w);
    a.unit.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) a.unit.push_back(std::polar(1.0, 2.0 * kPi * k / n));
    return a;
  }

  std::size_t size() const noexcept { return unit.size(); }
};

// ---------------------------------------------------------------------------
// Tensor rules over the model domains
// ---------------------------------------------------------------------------

struct Node {
  CPoint point;
  double weight = 0.0;
  /// log(weight), finite even where weight underflows.
  double log_weight = 0.0;
};

struct RuleMeta {
  std::string domain_tag;
  int radial_n = 0;
  int angular_n = 0;
  double grading = 1.0;
  RadialScheme scheme = RadialScheme::Gauss;
};

/// Extra knobs for build_rule. Defaults follow the domain.
struct RuleOptions {
  std::optional<RadialScheme> scheme;
  double boundary_depth = 12.0;  // decades, LogBoundary only
  int cell_order = 6;            // Gauss points per cell, LogBoundary only
};

class QuadratureRule {
 public:
  enum class Chart { Explicit, Disc, Polydisc, Ball2, HalfPlane, Hartogs };

  const DomainSpec& domain() const noexcept { return domain_; }
  const RuleMeta& meta() const noexcept { return meta_; }
  Chart chart() const noexcept { return chart_; }

  std::size_t size() const noexcept {
    if (chart_ == Chart::Explicit) return explicit_.size();
    std::size_t n = 1;
    for (const auto& a : extents_) n *= a;
    return n;
  }

  Node node(std::size_t i) const {
    if (chart_ == Chart::Explicit) return explicit_.at(i);
    std::array<std::size_t, 8> idx{};
    for (std::size_t a = extents_.size(); a-- > 0;) {
      idx[a] = i % extents_[a];
      i /= extents_[a];
    }
    return make_node(idx);
  }

  /// Calls f(const Node&) for every node, in index order.
  template <class F>
  void for_each(F&& f) const {
    if (chart_ == Chart::Explicit) {
      for (const Node& n : explicit_) f(n);
      return;
    }
    const std::size_t naxes = extents_.size();
    std::array<std::size_t, 8> idx{};
    const std::size_t total = size();
    for (std::size_t count = 0; count < total; ++count) {
      f(make_node(idx));
      for (std::size_t a = naxes; a-- > 0;) {
        if (++idx[a] < extents_[a]) break;
        idx[a] = 0;
      }
    }
  }

  std::vector<Node> materialize() const {
    std::vector<Node> out;
    out.reserve(size());
    for_each([&](const Node& n) { out.push_back(n); });
    return out;
  }

  static QuadratureRule from_nodes(DomainSpec domain, RuleMeta meta, std::vector<Node> nodes) {
    QuadratureRule q;
    q.domain_ = std::move(domain);
    q.meta_ = std::move(meta);
    q.chart_ = Chart::Explicit;
    q.explicit_ = std::move(nodes);
    return q;
  }

 private:
  friend QuadratureRule build_rule(const DomainSpec&, int, int, double, const RuleOptions&);

  Node make_node(const std::array<std::size_t, 8>& idx) const {
    Node n;
    switch (chart_) {
      case Chart::Disc: {
        const RadialRule& R = radial_[0];
        const std::size_t i = idx[0];
        n.point = CPoint{R.r[i] * angular_[0].unit[idx[1]]};
        n.weight = R.w[i] * R.r[i] * angular_[0].w;
        n.log_weight = R.log_w[i] + R.log_r[i] + angular_[0].log_w;
        break;
      }
      case Chart::Polydisc: {
        const int dim = domain_.dim;
        n.point = CPoint(dim);
        n.weight = 1.0;
        n.log_weight = 0.0;
        for (int j = 0; j < dim; ++j) {
          const RadialRule& R = radial_[0];
          const std::size_t i = idx[static_cast<std::size_t>(2 * j)];
          n.point[j] = R.r[i] * angular_[0].unit[idx[static_cast<std::size_t>(2 * j + 1)]];
          n.weight *= R.w[i] * R.r[i] * angular_[0].w;
          n.log_weight += R.log_w[i] + R.log_r[i] + angular_[0].log_w;
        }
        break;
      }
      case Chart::Ball2: {
        const RadialRule& R = radial_[0];
        const RadialRule& P = radial_[1];  // r = cos(phi), comp = sin(phi), w includes cos sin
        const std::size_t i = idx[0];
        const std::size_t k = idx[1];
        const double c = P.r[k];
        const double s = P.comp[k];
        const double rr = R.r[i];
        n.point = CPoint{rr * c * angular_[0].unit[idx[2]], rr * s * angular_[0].unit[idx[3]]};
        const double aw = angular_[0].w;
        n.weight = R.w[i] * rr * rr * rr * P.w[k] * aw * aw;
        n.log_weight = R.log_w[i] + 3.0 * R.log_r[i] + P.log_w[k] + 2.0 * angular_[0].log_w;
        break;
      }
      case Chart::HalfPlane: {
        const RadialRule& R = radial_[0];
        const std::size_t i = idx[0];
        const cd u = R.r[i] * angular_[0].unit[idx[1]];
        const cd one_minus_u = 1.0 - u;
        n.point = CPoint{cd{0.0, 1.0} * (1.0 + u) / one_minus_u};
        const double j = 4.0 / (std::norm(one_minus_u) * std::norm(one_minus_u));
        n.weight = R.w[i] * R.r[i] * angular_[0].w * j;
        n.log_weight = R.log_w[i] + R.log_r[i] + angular_[0].log_w + std::log(j);
        break;
      }
      case Chart::Hartogs: {
        // z2 = z1 t with |t| < 1; dV = |z1|^2 dA(z1) dA(t).
        const RadialRule& R1 = radial_[0];
        const RadialRule& S = radial_[1];
        const std::size_t i = idx[0];
        const std::size_t k = idx[2];
        const cd z1 = R1.r[i] * angular_[0].unit[idx[1]];
        const cd t = S.r[k] * angular_[1].unit[idx[3]];
        n.point = CPoint{z1, z1 * t};
        const double r1 = R1.r[i];
        n.weight = R1.w[i] * r1 * r1 * r1 * angular_[0].w * S.w[k] * S.r[k] * angular_[1].w;
        n.log_weight = R1.log_w[i] + 3.0 * R1.log_r[i] + angular_[0].log_w + S.log_w[k] + S.log_r[k] +
                       angular_[1].log_w;
        break;
      }
      case Chart::Explicit: break;
    }
    return n;
  }

  DomainSpec domain_;
  RuleMeta meta_;
  Chart chart_ = Chart::Explicit;
  std::vector<RadialRule> radial_;
  std::vector<AngularRule> angular_;
  std::vector<std::size_t> extents_;
  std::vector<Node> explicit_;
};

inline RadialScheme default_scheme(const DomainSpec&) { return RadialScheme::Gauss; }

inline RadialRule make_radial(RadialScheme scheme, int n, double grading, const RuleOptions& opt) {
  switch (scheme) {
    case RadialScheme::Gauss: return radial_gauss(n, grading);
    case RadialScheme::DoubleExponential: return radial_double_exponential(n);
    case RadialScheme::LogBoundary:
      // nodes of a point rule must stay inside the membership margin
      if (!(opt.boundary_depth <= 12.0))
        throw Error(Errc::InvalidResolution, "point rules support log-boundary depth up to 12");
      return radial_log_boundary(n, opt.boundary_depth, opt.cell_order);
  }
  return {};
}

/// Tensor rule in polar (or toroidal) coordinates: graded radial nodes,
/// uniform angles. The Hartogs triangle is parametrized by (z1, t) with
/// z2 = z1 t, which flattens the edge |z2| = |z1| to |t| = 1.
inline QuadratureRule build_rule(const DomainSpec& domain, int radial_n, int angular_n, double grading,
                                 const RuleOptions& opt = {}) {
  if (radial_n < 4 || angular_n < 4)
    throw Error(Errc::InvalidResolution, "radial_n and angular_n must be at least 4");
  if (!(grading >= 1.0)) throw Error(Errc::InvalidResolution, "grading must be >= 1");
  const RadialScheme scheme = opt.scheme.value_or(default_scheme(domain));

  QuadratureRule q;
  q.domain_ = domain;
  q.meta_ = {domain.tag(), radial_n, angular_n, grading, scheme};
  const auto rn = static_cast<std::size_t>(radial_n);
  const auto an = static_cast<std::size_t>(angular_n);

  auto main_radial = [&] { return make_radial(scheme, radial_n, grading, opt); };

  switch (domain.kind) {
    case DomainKind::UnitDisc:
    case DomainKind::PuncturedDisc:
      q.chart_ = QuadratureRule::Chart::Disc;
      q.radial_ = {main_radial()};
      q.angular_ = {AngularRule::uniform(angular_n)};
      q.extents_ = {q.radial_[0].size(), an};
      break;
    case DomainKind::Polydisc:
      q.chart_ = QuadratureRule::Chart::Polydisc;
      q.radial_ = {main_radial()};
      q.angular_ = {AngularRule::uniform(angular_n)};
      for (int j = 0; j < domain.dim; ++j) {
        q.extents_.push_back(q.radial_[0].size());
        q.extents_.push_back(an);
      }
      break;
    case DomainKind::UnitBall:
      if (domain.dim == 1) {
        q.chart_ = QuadratureRule::Chart::Disc;
        q.radial_ = {main_radial()};
        q.angular_ = {AngularRule::uniform(angular_n)};
        q.extents_ = {q.radial_[0].size(), an};
        break;
      }
      if (domain.dim != 2) throw Error(Errc::UnsupportedKind, "quadrature on balls is available for n <= 2");
      {
        q.chart_ = QuadratureRule::Chart::Ball2;
        RadialRule polar;
        const GaussRule& g = gauss_legendre(radial_n);
        for (std::size_t k = 0; k < g.x.size(); ++k) {
          // |z1| = R cos(phi), |z2| = R sin(phi), dV = R^3 cos(phi) sin(phi) dR dphi dt1 dt2
          const double phi = 0.25 * kPi * (1.0 + g.x[k]);
          const double c = std::cos(phi);
          const double sn = std::sin(phi);
          const double w = 0.25 * kPi * g.w[k] * c * sn;
          polar.push(c, sn, std::log(c), w, std::log(w));
        }
        q.radial_ = {main_radial(), polar};
        q.angular_ = {AngularRule::uniform(angular_n)};
        q.extents_ = {q.radial_[0].size(), rn, an, an};
      }
      break;
    case DomainKind::UpperHalfPlane:
      q.chart_ = QuadratureRule::Chart::HalfPlane;
      q.radial_ = {main_radial()};
      q.angular_ = {AngularRule::uniform(angular_n)};
      q.extents_ = {q.radial_[0].size(), an};
      break;
    case DomainKind::HartogsTriangle:
      q.chart_ = QuadratureRule::Chart::Hartogs;
      q.radial_ = {main_radial(), radial_gauss(radial_n, grading)};
      q.angular_ = {AngularRule::uniform(angular_n), AngularRule::uniform(angular_n)};
      q.extents_ = {q.radial_[0].size(), an, rn, an};
      break;
    case DomainKind::Reinhardt:
      throw Error(Errc::UnsupportedKind, "no tensor rule for general Reinhardt profiles");
  }
  return q;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// Sampled function aligned with the nodes of a rule. The rule must outlive it.
class GridFunction {
 public:
  template <class F>
  static GridFunction sample(const QuadratureRule& rule, F&& f) {
    GridFunction g;
    g.rule_ = &rule;
    g.values_.reserve(rule.size());
    rule.for_each([&](const Node& n) {
      const cd v = f(n.point);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::NonFiniteValue, "grid function is not finite at a node");
      g.values_.push_back(v);
    });
    return g;
  }

  GridFunction(const QuadratureRule& rule, std::vector<cd> values) : rule_(&rule), values_(std::move(values)) {
    if (values_.size() != rule.size()) throw Error(Errc::InvalidArgument, "grid function length mismatch");
    for (const cd& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::NonFiniteValue, "grid function has a non-finite entry");
  }

  const QuadratureRule& rule() const noexcept { return *rule_; }
  std::span<const cd> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const cd& operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  GridFunction() = default;
  const QuadratureRule* rule_ = nullptr;
  std::vector<cd> values_;
};

inline void require_finite(cd v, Errc code, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error(code, what);
}

/// sum_j w_j f(node_j), compensated, in node order.
template <class F>
cd integrate(const QuadratureRule& rule, F&& f) {
  CompensatedComplexSum s;
  rule.for_each([&](const Node& n) {
    const cd v = cd(f(n.point));
    require_finite(v, Errc::NonFiniteValue, "integrand is not finite at a quadrature node");
    s += n.weight * v;
  });
  return s.value();
}

inline cd integrate(const QuadratureRule& rule, const GridFunction& g) {
  if (&g.rule() != &rule && g.size() != rule.size())
    throw Error(Errc::InvalidArgument, "grid function belongs to a different rule");
  CompensatedComplexSum s;
  std::size_t i = 0;
  rule.for_each([&](const Node& n) { s += n.weight * g[i++]; });
  return s.value();
}

/// An integrand value represented as exp(log_abs) * phase, for integrands
/// whose magnitude overflows a double at nodes where the weight underflows.
struct ScaledValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  cd phase{1.0, 0.0};
};

template <class F>
cd integrate_scaled(const QuadratureRule& rule, F&& f) {
  CompensatedComplexSum s;
  rule.for_each([&](const Node& n) {
    const ScaledValue v = f(n.point);
    if (std::isnan(v.log_abs) || v.log_abs == std::numeric_limits<double>::infinity())
      throw Error(Errc::NonFiniteValue, "scaled integrand is not finite at a quadrature node");
    s += std::exp(n.log_weight + v.log_abs) * v.phase;
  });
  return s.value();
}

inline double sum_of_weights(const QuadratureRule& rule) {
  CompensatedSum s;
  rule.for_each([&](const Node& n) { s += n.weight; });
  return s.value();
}

// ---------------------------------------------------------------------------
// Power-law convergence classification
// ---------------------------------------------------------------------------

enum class Convergence { Converges, Diverges };

enum class TailEnd { AtZero, AtInfinity };

struct TailExponent {
  TailEnd end = TailEnd::AtZero;
  /// Integrand behaves like r^exponent (with respect to dr) at this end.
  double exponent = 0.0;
};

/// int_0 r^a dr converges iff a > -1; int^inf r^a dr converges iff a < -1.
/// The whole integral converges iff every declared end does. An exponent
/// of exactly -1 is the logarithmic case and diverges; one that is merely
/// within 1e-9 of -1 cannot be told apart from it and is refused.
inline Convergence tail_exponent_classify(std::span<const TailExponent> ends) {
  Convergence verdict = Convergence::Converges;
  for (const TailExponent& e : ends) {
    if (!std::isfinite(e.exponent)) throw Error(Errc::InvalidArgument, "tail exponent must be finite");
    if (e.exponent == -1.0) {
      verdict = Convergence::Diverges;
      continue;
    }
    if (std::abs(e.exponent + 1.0) <= 1e-9)
      throw Error(Errc::BorderlineExponent, "tail exponent " + std::to_string(e.exponent) + " is within 1e-9 of -1");
    const bool ok = e.end == TailEnd::AtZero ? e.exponent > -1.0 : e.exponent < -1.0;
    if (!ok) verdict = Convergence::Diverges;
  }
  return verdict;
}

inline Convergence tail_exponent_classify(TailExponent e) { return tail_exponent_classify(std::span(&e, 1)); }

// ---------------------------------------------------------------------------
// Binary rule files
// ---------------------------------------------------------------------------
//
// Layout, all integers and floats little-endian:
//   char[8]  "BQRULE01"
//   u32      tag length, then the tag bytes (domain tag, e.g. "hartogs")
//   u32      dim
//   u32      radial_n
//   u32      angular_n
//   f64      grading
//   u32      radial scheme (0 gauss, 1 double-exponential, 2 log-boundary)
//   u64      node count
//   records  node count x (2*dim + 1) f64: re z_1, im z_1, ..., weight

namespace detail {

template <class T>
void write_le(std::ostream& os, T v) {
  std::array<char, sizeof(T)> b{};
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(b.data(), static_cast<std::streamsize>(b.size()));
}

template <class T>
T read_le(std::istream& is) {
  std::array<char, sizeof(T)> b{};
  is.read(b.data(), static_cast<std::streamsize>(b.size()));
  if (!is) throw Error(Errc::IoError, "truncated rule file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

inline constexpr char kRuleMagic[8] = {'B', 'Q', 'R', 'U', 'L', 'E', '0', '1'};

}  // namespace detail

DomainSpec domain_from_tag(const std::string& tag);

inline void write_rule(std::ostream& os, const QuadratureRule& rule) {
  os.write(detail::kRuleMagic, 8);
  const std::string& tag = rule.meta().domain_tag;
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(tag.size()));
  os.write(tag.data(), static_cast<std::streamsize>(tag.size()));
  const int dim = rule.domain().dim;
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(dim));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(rule.meta().radial_n));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(rule.meta().angular_n));
  detail::write_le<double>(os, rule.meta().grading);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(rule.meta().scheme));
  detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(rule.size()));
  rule.for_each([&](const Node& n) {
    for (int j = 0; j < dim; ++j) {
      detail::write_le<double>(os, n.point[j].real());
      detail::write_le<double>(os, n.point[j].imag());
    }
    detail::write_le<double>(os, n.weight);
  });
  if (!os) throw Error(Errc::IoError, "failed writing rule");
}

inline QuadratureRule read_rule(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, detail::kRuleMagic, 8) != 0) throw Error(Errc::IoError, "not a rule file");
  const auto tag_len = detail::read_le<std::uint32_t>(is);
  if (tag_len > 256) throw Error(Errc::IoError, "implausible tag length");
  std::string tag(tag_len, '\0');
  is.read(tag.data(), tag_len);
  RuleMeta meta;
  meta.domain_tag = tag;
  const auto dim = static_cast<int>(detail::read_le<std::uint32_t>(is));
  meta.radial_n = static_cast<int>(detail::read_le<std::uint32_t>(is));
  meta.angular_n = static_cast<int>(detail::read_le<std::uint32_t>(is));
  meta.grading = detail::read_le<double>(is);
  meta.scheme = static_cast<RadialScheme>(detail::read_le<std::uint32_t>(is));
  const auto count = detail::read_le<std::uint64_t>(is);
  DomainSpec domain = domain_from_tag(tag);
  if (domain.dim != dim) throw Error(Errc::IoError, "rule dimension does not match its domain tag");
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    Node n;
    n.point = CPoint(dim);
    for (int j = 0; j < dim; ++j) {
      const double re = detail::read_le<double>(is);
      const double im = detail::read_le<double>(is);
      n.point[j] = {re, im};
    }
    n.weight = detail::read_le<double>(is);
    n.log_weight = std::log(n.weight);
    nodes.push_back(n);
  }
  return QuadratureRule::from_nodes(std::move(domain), std::move(meta), std::move(nodes));
}

inline DomainSpec domain_from_tag(const std::string& tag) {
  if (tag == "disc") return DomainSpec::disc();
  if (tag == "punctured-disc") return DomainSpec::punctured_disc();
  if (tag == "halfplane") return DomainSpec::upper_half_plane();
  if (tag == "hartogs") return DomainSpec::hartogs();
  if (tag == "bidisc") return DomainSpec::polydisc(2);
  if (tag.rfind("polydisc", 0) == 0 && tag.size() > 8) return DomainSpec::polydisc(std::stoi(tag.substr(8)));
  if (tag.rfind("ball", 0) == 0 && tag.size() > 4) return DomainSpec::ball(std::stoi(tag.substr(4)));
  if (tag == "boas") return DomainSpec::reinhardt(ReinhardtProfile::boas());
  if (tag == "reinhardt:boas") return DomainSpec::reinhardt(ReinhardtProfile::boas());
  if (tag == "reinhardt:hartogs") return DomainSpec::reinhardt(ReinhardtProfile::hartogs());
  if (tag == "reinhardt:disc") return DomainSpec::reinhardt(ReinhardtProfile::disc());
  throw Error(Errc::InvalidArgument, "unknown domain tag '" + tag + "'");
}

}  // namespace bergman
