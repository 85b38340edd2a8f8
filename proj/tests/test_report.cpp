#include <gtest/gtest.h>

#include <json.hpp>
#include <set>

#include "bergman/report.hpp"

using namespace bergman;

namespace {

std::set<std::string> keys(const std::string& text) {
  std::set<std::string> k;
  for (const auto& [key, value] : nlohmann::json::parse(text).items()) k.insert(key);
  return k;
}

NormEstimate sample_estimate() {
  NormEstimate e;
  e.value = 0.1;
  e.p = 3.0;
  e.method = "boyd-power";
  e.bound_kind = BoundKind::Lower;
  e.resolution.domain = "disc";
  e.resolution.scheme = "torus-quotient";
  e.resolution.radial_n = 24;
  e.resolution.depth = 12.0;
  e.resolution.order = 6;
  return e;
}

}  // namespace

TEST(Json, NormEstimateFields) {
  const std::string s = to_json(sample_estimate());
  EXPECT_EQ(keys(s), (std::set<std::string>{"value", "p", "method", "bound_kind", "resolution"}));
  EXPECT_NE(s.find("\"value\":0.10000000000000001,"), std::string::npos);
}

TEST(Json, NormEstimateRoundTrip) {
  const NormEstimate e = sample_estimate();
  const NormEstimate r = norm_estimate_from_json(to_json(e));
  EXPECT_EQ(r.value, e.value);
  EXPECT_EQ(r.p, e.p);
  EXPECT_EQ(r.method, e.method);
  EXPECT_EQ(r.bound_kind, e.bound_kind);
  EXPECT_EQ(r.resolution.domain, "disc");
  EXPECT_EQ(r.resolution.radial_n, 24);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(to_json(r), to_json(e));
}

TEST(Json, InfiniteExponentAndStall) {
  NormEstimate e = sample_estimate();
  e.p = kInfP;
  e.converged = false;
  const std::string s = to_json(e);
  EXPECT_NE(s.find("\"p\":\"inf\""), std::string::npos);
  const NormEstimate r = norm_estimate_from_json(s);
  EXPECT_TRUE(std::isinf(r.p));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.method, "boyd-power");
}

TEST(Json, ComputedEstimateRoundTrip) {
  const auto M = discretize_berezin_quotient(DomainSpec::disc(), {8, 6.0, 4});
  for (double p : {2.0, 3.0, kInfP}) {
    const NormEstimate e = estimate_norm(M, p);
    const NormEstimate r = norm_estimate_from_json(to_json(e));
    EXPECT_EQ(r.value, e.value);
    EXPECT_EQ(to_json(r), to_json(e));
  }
}

TEST(Json, ScanReport) {
  const auto d = DomainSpec::hartogs();
  const auto g = scan_grid(d, 0);
  BRScanReport rep = br_scan(d, g, g);
  rep.divergent = true;
  const std::string s = to_json(rep);
  EXPECT_EQ(keys(s), (std::set<std::string>{"supremum", "method", "resolution", "argmax", "divergent"}));
  const BRScanReport r = br_scan_report_from_json(s);
  EXPECT_EQ(r.supremum, rep.supremum);
  EXPECT_EQ(r.argmax_z, rep.argmax_z);
  EXPECT_EQ(r.argmax_w, rep.argmax_w);
  EXPECT_TRUE(r.divergent);
  EXPECT_EQ(to_json(r), s);
}

TEST(Json, RejectsMalformed) {
  for (const char* bad : {"{", "[]", "{\"value\":1}", "{\"value\":1,\"p\":\"two\",\"method\":\"m\",\"bound_kind\":\"lower\",\"resolution\":{}}"}) {
    try {
      norm_estimate_from_json(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::IoError);
    }
  }
  EXPECT_THROW(br_scan_report_from_json("{\"supremum\":1}"), Error);
}
