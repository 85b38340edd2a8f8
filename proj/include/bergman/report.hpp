#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bergman/core.hpp"
#include "bergman/opnorm.hpp"

// JSON for NormEstimate and BRScanReport. Numbers are written with 17
// significant digits; p = infinity is the string "inf". Parsing goes through
// nlohmann::json.

namespace bergman {

namespace detail {

inline std::string json_number(double v) {
  if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "JSON cannot carry a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline std::string json_p(double p) { return std::isinf(p) ? "\"inf\"" : json_number(p); }

inline std::string json_resolution(const Resolution& r) {
  std::ostringstream os;
  os << "{\"domain\":" << json_string(r.domain) << ",\"scheme\":" << json_string(r.scheme)
     << ",\"radial_n\":" << r.radial_n << ",\"angular_n\":" << r.angular_n << ",\"grading\":" << json_number(r.grading)
     << ",\"depth\":" << json_number(r.depth) << ",\"order\":" << r.order << ",\"level\":" << r.level << "}";
  return os.str();
}

inline std::string json_point(const CPoint& z) {
  std::string s = "[";
  for (int i = 0; i < z.dim(); ++i) {
    if (i) s += ",";
    s += "[" + json_number(z[i].real()) + "," + json_number(z[i].imag()) + "]";
  }
  return s + "]";
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::IoError, std::string("JSON report lacks field '") + key + "'");
  return j.at(key);
}

inline Resolution parse_resolution(const nlohmann::json& j) {
  Resolution r;
  r.domain = field(j, "domain").get<std::string>();
  r.scheme = field(j, "scheme").get<std::string>();
  r.radial_n = field(j, "radial_n").get<int>();
  r.angular_n = field(j, "angular_n").get<int>();
  r.grading = field(j, "grading").get<double>();
  r.depth = field(j, "depth").get<double>();
  r.order = field(j, "order").get<int>();
  r.level = field(j, "level").get<int>();
  return r;
}

inline CPoint parse_point(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::IoError, "point must be a non-empty array of [re, im]");
  CPoint z(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) z[static_cast<int>(i)] = cd(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  return z;
}

inline nlohmann::json parse(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IoError, std::string("malformed JSON: ") + e.what());
  }
}

inline BoundKind parse_bound_kind(const std::string& s) {
  if (s == "lower") return BoundKind::Lower;
  if (s == "upper") return BoundKind::Upper;
  if (s == "approximate") return BoundKind::Approximate;
  throw Error(Errc::IoError, "unknown bound_kind '" + s + "'");
}

inline constexpr const char* kStalled = "+stalled";

}  // namespace detail

/// A stalled iteration is marked by the suffix "+stalled" on the method.
inline std::string to_json(const NormEstimate& e) {
  const std::string method = e.converged ? e.method : e.method + detail::kStalled;
  return "{\"value\":" + detail::json_number(e.value) + ",\"p\":" + detail::json_p(e.p) +
         ",\"method\":" + detail::json_string(method) + ",\"bound_kind\":" + detail::json_string(to_string(e.bound_kind)) +
         ",\"resolution\":" + detail::json_resolution(e.resolution) + "}";
}

inline std::string to_json(const BRScanReport& r) {
  const CPoint z = r.argmax_z.dim() ? r.argmax_z : CPoint{0.0};
  const CPoint w = r.argmax_w.dim() ? r.argmax_w : CPoint{0.0};
  return "{\"supremum\":" + detail::json_number(r.supremum) + ",\"method\":\"br-scan\",\"resolution\":" +
         detail::json_resolution(r.resolution) + ",\"argmax\":[" + detail::json_point(z) + "," + detail::json_point(w) +
         "],\"divergent\":" + (r.divergent ? "true" : "false") + "}";
}

inline NormEstimate norm_estimate_from_json(const std::string& text) {
  const nlohmann::json j = detail::parse(text);
  NormEstimate e;
  try {
    e.value = detail::field(j, "value").get<double>();
    const auto& p = detail::field(j, "p");
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") throw Error(Errc::IoError, "p must be a number or \"inf\"");
      e.p = kInfP;
    } else {
      e.p = p.get<double>();
    }
    e.method = detail::field(j, "method").get<std::string>();
    const std::string suffix = detail::kStalled;
    if (e.method.size() > suffix.size() && e.method.ends_with(suffix)) {
      e.method.resize(e.method.size() - suffix.size());
      e.converged = false;
    }
    e.bound_kind = detail::parse_bound_kind(detail::field(j, "bound_kind").get<std::string>());
    e.resolution = detail::parse_resolution(detail::field(j, "resolution"));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::IoError, std::string("bad NormEstimate JSON: ") + ex.what());
  }
  return e;
}

inline BRScanReport br_scan_report_from_json(const std::string& text) {
  const nlohmann::json j = detail::parse(text);
  BRScanReport r;
  try {
    r.supremum = detail::field(j, "supremum").get<double>();
    r.resolution = detail::parse_resolution(detail::field(j, "resolution"));
    const auto& a = detail::field(j, "argmax");
    if (!a.is_array() || a.size() != 2) throw Error(Errc::IoError, "argmax must be [z, w]");
    r.argmax_z = detail::parse_point(a[0]);
    r.argmax_w = detail::parse_point(a[1]);
    r.divergent = detail::field(j, "divergent").get<bool>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::IoError, std::string("bad BRScanReport JSON: ") + ex.what());
  }
  return r;
}

}  // namespace bergman
