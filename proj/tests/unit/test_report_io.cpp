#include <gtest/gtest.h>

#include <charconv>
#include <random>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/report_io.hpp"
#include "random_models.hpp"

using namespace jostkit;

TEST(ReportIo, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const std::string s = format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(NAN), "nan");
}

TEST(ReportIo, CsvLayout) {
  SRow ok;
  ok.k = 0.5;
  ok.S = -identity(2);
  ok.unitarity_defect = 0.0;
  SRow bad;
  bad.k = 1e-9;
  bad.error = "OutOfDomain";
  const std::string csv = s_grid_csv({ok, bad}, 2);
  const std::string header = "k,re_11,im_11,re_12,im_12,re_21,im_21,re_22,im_22,unitarity_defect\n";
  EXPECT_EQ(csv.substr(0, header.size()), header);
  EXPECT_NE(csv.find("0.5,-1,-0,-0,-0,-0,-0,-1,-0,0\n"), std::string::npos);
  EXPECT_NE(csv.find("1e-09,nan,nan,nan,nan,nan,nan,nan,nan,nan\n"), std::string::npos);
}

TEST(ReportIo, ReportJsonIsDeterministicAndComplete) {
  const KirchhoffExample ex(KirchhoffExample::exceptional_gamma());
  ConfigEcho cfg;
  cfg.potential = "example";
  const std::string a = smallk_report_json(analyze(ex.potential(), ex.boundary()), cfg);
  const std::string b = smallk_report_json(analyze(ex.potential(), ex.boundary()), cfg);
  EXPECT_EQ(a, b);
  for (const char* key : {"\"config\"", "\"case\": \"exceptional\"", "\"mu\": 1", "\"intermediates\"", "\"F2\"",
                          "\"D0\"", "\"Jinv_pole\"", "\"tol_source\""}) {
    EXPECT_NE(a.find(key), std::string::npos) << key;
  }
}

TEST(ReportIo, ChecksTable) {
  const std::string t = checks_table({{"alpha", 1e-12, 1e-8, true, ""}, {"b", 2.0, 1.0, false, "why"}});
  EXPECT_NE(t.find("alpha  1e-12  1e-08  PASS"), std::string::npos);
  EXPECT_NE(t.find("FAIL  (why)"), std::string::npos);
}
