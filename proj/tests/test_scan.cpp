#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support.hpp"

using namespace semiscat;

namespace {

ScanConfig delta_scan(double v1, double v2, std::size_t steps = 1000) {
  ScanConfig c;
  c.model.kind = ModelKind::DeltaStep;
  c.model.v1 = v1;
  c.model.v2 = v2;
  c.e_min = 3.2;
  c.e_max = 6.0;
  c.steps = steps;
  return c;
}

std::size_t column(const ScanConfig& c, const std::string& name) {
  const auto cols = scan_columns(c);
  const auto it = std::find(cols.begin(), cols.end(), name);
  if (it == cols.end()) throw std::runtime_error("missing column " + name);
  return static_cast<std::size_t>(it - cols.begin());
}

std::vector<double> column_values(const ScanConfig& c, const ScanResult& r, const std::string& name) {
  const std::size_t j = column(c, name);
  std::vector<double> out;
  for (const auto& row : r.rows) out.push_back(scan_values(c, row)[j]);
  return out;
}

std::size_t nearest_index(const ScanConfig& c, double e) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.steps; ++i)
    if (std::abs(c.energy(i) - e) < std::abs(c.energy(best) - e)) best = i;
  return best;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::string csv(const ScanConfig& c) {
  std::ostringstream os;
  write_csv(os, c, run_scan(c));
  return os.str();
}

}  // namespace

TEST(ScanGrid, InclusiveUniform) {
  const ScanConfig c = delta_scan(3.0, 3.0, 5);
  EXPECT_EQ(c.energy(0), 3.2);
  EXPECT_EQ(c.energy(4), 6.0);
  EXPECT_DOUBLE_EQ(c.energy(2), 4.6);
}

TEST(ScanSignature, DeltaSingularity) {
  const ScanConfig c = delta_scan(3.0, 3.0);
  const ScanResult r = run_scan(c);
  ASSERT_EQ(r.rows.size(), 1000u);
  const std::size_t at4 = nearest_index(c, 4.0);
  for (const char* name : {"T", "R_L", "R_R"}) EXPECT_EQ(argmax(column_values(c, r, name)), at4) << name;
  EXPECT_EQ(argmin(column_values(c, r, "abs_det_S_rev")), at4);
}

TEST(ScanSignature, EckartSingularity) {
  ScanConfig c = delta_scan(3.0, 0.0, 300);
  c.model.kind = ModelKind::Eckart;
  c.model.a = 1.0;
  c.model.q = 3.0;
  c.model.n = 1;
  const ScanResult r = run_scan(c);
  const std::size_t at4 = nearest_index(c, 4.0);
  for (const char* name : {"T", "R_L", "R_R"}) EXPECT_EQ(argmax(column_values(c, r, name)), at4) << name;
  EXPECT_EQ(argmin(column_values(c, r, "abs_det_S_rev")), at4);
}

TEST(ScanSignature, DeltaReflectionlessTouchesZero) {
  ScanConfig c = delta_scan(3.0, 1.0, 15);  // grid contains E = 4 exactly
  const ScanResult r = run_scan(c);
  const std::size_t at4 = nearest_index(c, 4.0);
  ASSERT_EQ(c.energy(at4), 4.0);
  const auto rr = column_values(c, r, "R_R");
  EXPECT_LE(rr[at4], 1e-16);
  const auto t = column_values(c, r, "T");
  EXPECT_TRUE(std::all_of(t.begin(), t.end(), [](double v) { return std::isfinite(v) && v < 10.0; }));
}

TEST(ScanContract, DeterministicOutput) {
  ScanConfig c = delta_scan(3.0, 3.0, 200);
  c.engine = Engine::Both;
  const std::string first = csv(c);
  c.threads = 1;
  EXPECT_EQ(first, csv(c));
  c.threads = 4;
  EXPECT_EQ(first, csv(c));
}

TEST(ScanContract, ColumnOrderAndOmission) {
  ScanConfig c = delta_scan(3.0, 3.0, 3);
  c.outputs = OutputSet::parse({"T", "abs_det_S_rev"});
  const std::vector<std::string> expected{"E", "k_L_re", "k_L_im", "k_R_re", "k_R_im", "T", "abs_det_S_rev",
                                          "pole_flag"};
  EXPECT_EQ(scan_columns(c), expected);
  const std::string out = csv(c);
  std::istringstream is(out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "E,k_L_re,k_L_im,k_R_re,k_R_im,T,abs_det_S_rev,pole_flag");
  while (std::getline(is, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    EXPECT_EQ(line.find(",,"), std::string::npos);
  }

  c.engine = Engine::Both;
  const auto cols = scan_columns(c);
  EXPECT_EQ(cols[cols.size() - 3], "T_num");
  EXPECT_EQ(cols[cols.size() - 2], "abs_det_S_rev_num");
  EXPECT_THROW(OutputSet::parse({"bogus"}), ConfigError);
}

TEST(ScanContract, FullAmplitudeBlock) {
  const ScanConfig c = delta_scan(3.0, 3.0, 3);
  const auto cols = scan_columns(c);
  const std::vector<std::string> head{"E",       "k_L_re",  "k_L_im",  "k_R_re",  "k_R_im",  "t_L_re", "t_L_im",
                                      "r_L_re",  "r_L_im",  "r_R_re",  "r_R_im",  "t_R_re",  "t_R_im", "T",
                                      "R_L",     "R_R",     "abs_det_S_fwd", "abs_det_S_rev", "pole_flag"};
  EXPECT_EQ(cols, head);
}

TEST(ScanContract, CapIsRespectedAndFlagged) {
  ScanConfig c = delta_scan(3.0, 3.0, 2801);  // hits E = 4 exactly
  c.cap = 1e6;
  const ScanResult r = run_scan(c);
  bool any_flag = false;
  for (const auto& row : r.rows) {
    const auto vals = scan_values(c, row);
    bool over = false;
    for (std::size_t j = 0; j + 1 < vals.size(); ++j) {
      if (std::isnan(vals[j])) continue;
      EXPECT_LE(std::abs(vals[j]), c.cap);
      over = over || std::abs(vals[j]) == c.cap;
    }
    if (over) {
      EXPECT_TRUE(row.pole_flag()) << "E=" << row.energy;
    }
    if (!row.pole_flag()) {
      EXPECT_FALSE(over) << "E=" << row.energy;
    }
    any_flag = any_flag || row.pole_flag();
  }
  EXPECT_TRUE(any_flag);
  EXPECT_GT(r.summary.flagged_rows, 0u);
}

TEST(ScanContract, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(ScanContract, BelowThresholdProbabilitiesAreNaN) {
  ScanConfig c = delta_scan(3.0, 1.0, 5);
  c.e_min = 1.0;
  c.e_max = 2.5;
  const ScanResult r = run_scan(c);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(std::isnan(row.primary.transmission));
    EXPECT_TRUE(std::isnan(row.primary.reflection_right));
  }
  std::ostringstream os;
  write_json(os, c, r);
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_TRUE(doc["rows"][0]["T"].is_null());
}

TEST(ScanJson, Layout) {
  ScanConfig c = delta_scan(3.0, 3.0, 11);
  c.engine = Engine::Both;
  const ScanResult r = run_scan(c);
  std::ostringstream os;
  write_json(os, c, r);
  const auto doc = nlohmann::json::parse(os.str());
  ASSERT_TRUE(doc.contains("metadata"));
  EXPECT_EQ(doc["metadata"]["build"], kBuildId);
  EXPECT_EQ(doc["metadata"]["config"]["model"], "delta-step");
  EXPECT_EQ(doc["metadata"]["columns"].size(), scan_columns(c).size());
  EXPECT_TRUE(doc["metadata"]["summary"].contains("max_rel_discrepancy"));
  EXPECT_LT(doc["metadata"]["summary"]["max_rel_discrepancy"].get<double>(), 1e-6);
  ASSERT_EQ(doc["rows"].size(), 11u);
  EXPECT_DOUBLE_EQ(doc["rows"][10]["E"].get<double>(), 6.0);
  EXPECT_TRUE(doc["rows"][0]["pole_flag"].is_boolean());
}

TEST(ScanConfigTest, Validation) {
  ScanConfig c = delta_scan(3.0, 3.0, 10);
  c.e_min = 0.0;
  EXPECT_THROW(run_scan(c), ConfigError);
  c = delta_scan(3.0, 3.0, 1);
  EXPECT_THROW(run_scan(c), ConfigError);
  c = delta_scan(3.0, 3.0, 10);
  c.e_max = 3.0;
  EXPECT_THROW(run_scan(c), ConfigError);
  c = delta_scan(3.0, -1.0, 10);
  EXPECT_THROW(run_scan(c), ConfigError);
  c = delta_scan(3.0, 3.0, 10);
  c.model.kind = ModelKind::ErfGauss;
  EXPECT_THROW(run_scan(c), ConfigError);
  c.engine = Engine::Numeric;
  EXPECT_NO_THROW(run_scan(c));
  c = delta_scan(3.0, 3.0, 10);
  c.model.q = 1.0;
  c.model.n = 0;
  EXPECT_THROW(run_scan(c), ConfigError);
}

TEST(ScanConfigTest, EckartFamilyDerivesV2) {
  ModelSpec m;
  m.kind = ModelKind::Eckart;
  m.v1 = 3.0;
  m.a = 1.0;
  m.q = 3.0;
  m.n = 1;
  m.resolve();
  EXPECT_LE(std::abs(m.v2 - cplx(9.0, -7.0) / 4.0), 1e-15);
  m.q.reset();
  EXPECT_THROW(m.resolve(), ConfigError);
}

TEST(Compare, Examples) {
  ModelSpec eck;
  eck.kind = ModelKind::Eckart;
  eck.v1 = 3.0;
  eck.v2 = 2.0;
  const CompareReport a = compare_engines(eck, 3.5, 10.0, 50);
  EXPECT_TRUE(a.passed());
  EXPECT_LT(a.max_rel_error, 1e-6);
  EXPECT_EQ(a.samples_used, 50u);

  ModelSpec del;
  del.v1 = 3.0;
  del.v2 = 1.0;
  const CompareReport b = compare_engines(del, 3.5, 10.0, 50);
  EXPECT_TRUE(b.passed());
  EXPECT_LT(b.max_rel_error, 1e-8);

  const CompareReport c = compare_engines(eck, 3.5, 10.0, 50, 1e-3);
  EXPECT_FALSE(c.passed());
}

TEST(Compare, SkipsPoleNeighbourhood) {
  ModelSpec del;
  del.v1 = 3.0;
  del.v2 = 3.0;
  const CompareReport r = compare_engines(del, 3.5, 4.5, 11);  // includes E = 4
  EXPECT_GE(r.samples_skipped, 1u);
  EXPECT_TRUE(r.passed());
  ModelSpec erf;
  erf.kind = ModelKind::ErfGauss;
  EXPECT_THROW(compare_engines(erf, 3.5, 4.5, 11), ConfigError);
}

TEST(CriticalReportTest, Texts) {
  ModelSpec ss;
  ss.v1 = 3.0;
  ss.v2 = 3.0;
  const auto a = critical_report(ss, false);
  ASSERT_TRUE(a.energy);
  EXPECT_DOUBLE_EQ(*a.energy, 4.0);
  EXPECT_EQ(a.regime, Regime::SpectralSingularity);
  const bool has_ss_line = std::any_of(a.lines.begin(), a.lines.end(), [](const std::string& l) {
    return l.rfind("SS at E=4; CPA verified", 0) == 0 && l.find("<1e-10") != std::string::npos;
  });
  EXPECT_TRUE(has_ss_line);

  ModelSpec rl;
  rl.kind = ModelKind::Eckart;
  rl.v1 = 3.0;
  rl.q = 1.0;
  rl.n = 0;
  const auto b = critical_report(rl, true);
  const bool has_rl_line = std::any_of(b.lines.begin(), b.lines.end(), [](const std::string& l) {
    return l.rfind("right-reflectionless E_i=4, ", 0) == 0 && l.find("t_R=1+0i") != std::string::npos &&
           l.find("T_R=2") != std::string::npos;
  });
  EXPECT_TRUE(has_rl_line);

  ModelSpec bd;
  bd.v1 = 4.0;
  bd.v2 = 2.0;
  const auto c = critical_report(bd, false);
  EXPECT_EQ(c.regime, Regime::Boundary);
  EXPECT_NE(std::find(c.lines.begin(), c.lines.end(), "Boundary U^2=V1: no SS, no reflectionless energy"),
            c.lines.end());
  EXPECT_FALSE(c.energy);

  ModelSpec deep;
  deep.v1 = -2.0;
  deep.v2 = 1.0;
  EXPECT_FALSE(critical_report(deep, false).energy);
}
