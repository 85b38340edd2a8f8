// bergman: point evaluations, norm estimates, BR scans, the blow-up table and
// the acceptance suite from the command line.
//
// Exit status: 2 on a configuration error, 1 when `reproduce` has a failing
// check, 0 otherwise.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/acceptance.hpp"
#include "bergman/bergman.hpp"

using namespace bergman;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string domain = "disc";
  std::string p = "2";
  std::string z;
  std::string w;
  std::string symbol = "one";
  std::vector<double> eps;
  std::optional<int> radial_n;
  std::optional<int> angular_n;
  std::optional<double> grading;
  std::string out;
  std::string format;
};

double parse_real(const std::string& s, const std::string& what) {
  if (s.empty()) throw ConfigError("empty number in " + what);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw ConfigError("cannot read '" + s + "' in " + what);
  return v;
}

// a, bi, a+bi, a-bi, i, -i
cd parse_complex(std::string s, const std::string& what) {
  std::erase(s, ' ');
  if (s.empty()) throw ConfigError("empty coordinate in " + what);
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, what), 0.0};
  s.pop_back();
  std::size_t cut = 0;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  const std::string re = s.substr(0, cut);
  std::string im = s.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, what), parse_real(im, what)};
}

CPoint parse_point(const std::string& s, int dim, const std::string& what) {
  std::vector<cd> c;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) c.push_back(parse_complex(part, what));
  if (static_cast<int>(c.size()) != dim)
    throw ConfigError(what + " needs " + std::to_string(dim) + " comma-separated coordinate(s)");
  CPoint z(dim);
  for (int i = 0; i < dim; ++i) z[i] = c[static_cast<std::size_t>(i)];
  return z;
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInfP;
  const double p = parse_real(s, "--p");
  if (p < 1.0) throw ConfigError("--p must be at least 1 or 'inf'");
  return p;
}

std::string point_text(const CPoint& z) {
  std::string s;
  for (int i = 0; i < z.dim(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.12g%+.12gi", i ? "," : "", z[i].real(), z[i].imag());
    s += buf;
  }
  return s;
}

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DomainSpec domain_of(const RunConfig& c) {
  try {
    return domain_from_tag(c.domain);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

QuadratureRule rule_for(const DomainSpec& d, const RunConfig& c) {
  RuleOptions o;
  int radial = 64, angular = 64;
  if (d.kind == DomainKind::HartogsTriangle) {
    o.scheme = RadialScheme::DoubleExponential;
    radial = 48;
    angular = 32;
  } else if (d.dim > 1) {
    radial = 24;
    angular = 32;
  }
  return build_rule(d, c.radial_n.value_or(radial), c.angular_n.value_or(angular), c.grading.value_or(1.0), o);
}

OperatorSymbol symbol_of(const DomainSpec& d, const RunConfig& c) {
  if (c.symbol == "one") return OperatorSymbol::constant(1.0);
  if (c.symbol == "abs2" || c.symbol == "|w|^2")
    return OperatorSymbol::bounded([](const CPoint& w) { return cd(w.norm2(), 0.0); }, "abs2", true);
  if (c.symbol == "re") return OperatorSymbol::bounded([](const CPoint& w) { return cd(w[0].real(), 0.0); }, "re");
  if (c.symbol == "f_eps") {
    if (d.kind != DomainKind::HartogsTriangle) throw ConfigError("symbol f_eps lives on --domain hartogs");
    if (c.eps.size() != 1) throw ConfigError("symbol f_eps needs exactly one --eps value");
    return hartogs::f_eps_symbol(c.eps.front());
  }
  throw ConfigError("unknown symbol '" + c.symbol + "' (one, abs2, re, f_eps)");
}

std::string value_payload(const std::string& format, const std::vector<std::pair<std::string, std::string>>& keys,
                          cd v) {
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, s] : keys) j[k] = s;
    std::string out = j.dump();
    out.pop_back();
    return out + ",\"value\":[" + g17(v.real()) + "," + g17(v.imag()) + "]}\n";
  }
  std::string head, row;
  for (const auto& [k, s] : keys) {
    head += k + ",";
    row += "\"" + s + "\",";
  }
  return head + "re,im\n" + row + g12(v.real()) + "," + g12(v.imag()) + "\n";
}

std::string cmd_kernel(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  if (c.z.empty()) throw ConfigError("kernel needs --z");
  const CPoint z = parse_point(c.z, d.dim, "--z");
  const CPoint w = c.w.empty() ? z : parse_point(c.w, d.dim, "--w");
  require_inside(d, z, "z");
  require_inside(d, w, "w");
  return value_payload(c.format, {{"domain", d.tag()}, {"z", point_text(z)}, {"w", point_text(w)}}, kernel(d, z, w));
}

std::string cmd_berezin(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  if (c.z.empty()) throw ConfigError("berezin needs --z");
  const CPoint z = parse_point(c.z, d.dim, "--z");
  require_inside(d, z, "z");
  const OperatorSymbol phi = symbol_of(d, c);
  const QuadratureRule rule = rule_for(d, c);
  return value_payload(c.format, {{"domain", d.tag()}, {"z", point_text(z)}, {"symbol", c.symbol}},
                       berezin(d, phi, z, rule));
}

std::string cmd_norm(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  const double p = parse_p(c.p);
  NormEstimate e;
  if (d.kind == DomainKind::HartogsTriangle) {
    WitnessFamily f;
    f.eps = c.eps.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4} : c.eps;
    e = witness_lower_bound(d, p, f);
  } else if (d.kind == DomainKind::UnitDisc || (d.kind == DomainKind::Polydisc && d.dim <= 2)) {
    RadialMesh m;
    if (c.radial_n) m.cells = *c.radial_n;
    e = estimate_norm(discretize_berezin_quotient(d, m), p);
  } else {
    e = estimate_norm(discretize_berezin(d, rule_for(d, c)), p);
  }
  return to_json(e) + "\n";
}

std::string cmd_br_scan(const RunConfig& c) {
  const DomainSpec d = domain_of(c);
  return to_json(br_scan(d)) + "\n";
}

std::string cmd_blowup(const RunConfig& c) {
  const auto eps = c.eps.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4} : c.eps;
  const auto t = hartogs::blowup_table(eps, c.radial_n.value_or(2));
  std::ostringstream os;
  if (c.format == "json") {
    os << "{\"rows\":[";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      os << (i ? "," : "") << "{\"eps\":" << g17(r.eps) << ",\"norm_f\":" << g17(r.norm_f)
         << ",\"lower_bound_Bf\":" << g17(r.lower_bound_Bf) << ",\"ratio_lower\":" << g17(r.ratio_lower)
         << ",\"ratio_quadrature\":" << g17(r.ratio_quadrature) << "}";
    }
    os << "],\"slope\":" << g17(t.slope) << "}\n";
  } else {
    hartogs::write_csv(os, t);
  }
  return os.str();
}

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string cmd_reproduce(const RunConfig& c, bool& failed) {
  const auto results = acceptance::run([](const acceptance::CheckResult& r) {
    std::fprintf(stderr, "%s\n", acceptance::format_line(r).c_str());
  });
  std::ostringstream os;
  if (c.format == "json") {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : results)
      a.push_back({{"id", r.id},
                   {"name", r.name},
                   {"status", r.passed ? "PASS" : "FAIL"},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"grid", r.grid},
                   {"seconds", r.seconds}});
    os << a.dump(1) << "\n";
  } else {
    os << "id,name,status,measured,tolerance,grid,seconds\n";
    for (const auto& r : results)
      os << r.id << "," << csv_field(r.name) << "," << (r.passed ? "PASS" : "FAIL") << "," << csv_field(r.measured)
         << "," << csv_field(r.tolerance) << "," << csv_field(r.grid) << "," << g12(r.seconds) << "\n";
  }
  for (const auto& r : results) failed |= !r.passed;
  return os.str();
}

void emit(const RunConfig& c, const std::string& payload) {
  if (c.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!(f << payload)) throw ConfigError("cannot write " + c.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman kernels, Berezin transforms and operator norms"};
  app.require_subcommand(1, 1);
  RunConfig c;

  const auto add_common = [&](CLI::App* s) {
    s->add_option("--domain", c.domain, "disc, punctured-disc, halfplane, hartogs, bidisc, ball2, ...");
    s->add_option("--radial-n", c.radial_n, "radial nodes (cells for quotient meshes, panels per octave for blowup)")
        ->check(CLI::Range(1, 100000));
    s->add_option("--angular-n", c.angular_n, "angular nodes")->check(CLI::Range(4, 100000));
    s->add_option("--grading", c.grading, "radial grading exponent")->check(CLI::Range(1.0, 16.0));
    s->add_option("--eps", c.eps, "comma-separated eps values in (0,1]")->delimiter(',');
    s->add_option("--out", c.out, "write the report here instead of stdout");
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* kernel_cmd = app.add_subcommand("kernel", "K(z, w)");
  auto* berezin_cmd = app.add_subcommand("berezin", "Berezin transform of a symbol at z");
  auto* norm_cmd = app.add_subcommand("norm", "L^p norm estimate of the Berezin transform (JSON)");
  auto* scan_cmd = app.add_subcommand("br-scan", "boundedness-ratio scan (JSON)");
  auto* blowup_cmd = app.add_subcommand("blowup", "Hartogs blow-up table");
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run the acceptance suite");
  for (auto* s : {kernel_cmd, berezin_cmd, norm_cmd, scan_cmd, blowup_cmd, reproduce_cmd}) add_common(s);
  for (auto* s : {kernel_cmd, berezin_cmd}) s->add_option("--z", c.z, "point, coordinates like 0.3+0.1i separated by ','");
  kernel_cmd->add_option("--w", c.w, "second point (default z)");
  berezin_cmd->add_option("--symbol", c.symbol, "one, abs2, re, f_eps");
  norm_cmd->add_option("--p", c.p, "exponent >= 1 or inf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "bergman: %s\n", e.what());
    return 2;
  }

  try {
    for (double e : c.eps)
      if (!(e > 0.0 && e <= 1.0)) throw ConfigError("--eps values must lie in (0,1]");
    const bool json_only = norm_cmd->parsed() || scan_cmd->parsed();
    if (c.format.empty()) c.format = json_only ? "json" : "csv";
    if (json_only && c.format != "json") throw ConfigError("this subcommand emits JSON only");
    bool failed = false;
    std::string payload;
    if (kernel_cmd->parsed()) payload = cmd_kernel(c);
    else if (berezin_cmd->parsed()) payload = cmd_berezin(c);
    else if (norm_cmd->parsed()) payload = cmd_norm(c);
    else if (scan_cmd->parsed()) payload = cmd_br_scan(c);
    else if (blowup_cmd->parsed()) payload = cmd_blowup(c);
    else payload = cmd_reproduce(c, failed);
    emit(c, payload);
    return failed ? 1 : 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "bergman: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "bergman: %s\n", e.what());
    return 2;
  }
}
