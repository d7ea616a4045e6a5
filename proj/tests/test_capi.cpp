#include "conerisk/conerisk.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

std::string take(conerisk_text* t) {
  std::string s(conerisk_text_data(t), conerisk_text_size(t));
  conerisk_text_free(t);
  return s;
}

}  // namespace

TEST(CApi, ParseDimAndFamily) {
  conerisk_set* set = nullptr;
  ASSERT_EQ(conerisk_set_parse("blockmonotone:sizes=2,3,2", &set), CONERISK_OK);
  size_t n = 0;
  EXPECT_EQ(conerisk_set_dim(set, &n), CONERISK_OK);
  EXPECT_EQ(n, 7u);
  conerisk_text* fam = nullptr;
  ASSERT_EQ(conerisk_set_family(set, &fam), CONERISK_OK);
  EXPECT_EQ(take(fam), "blockmonotone");
  conerisk_set_free(set);
  EXPECT_STREQ(conerisk_last_error(), "");
}

TEST(CApi, ErrorsCarryCodesAndMessages) {
  conerisk_set* set = nullptr;
  EXPECT_EQ(conerisk_set_parse("simplex:n=3", &set), CONERISK_INVALID_INPUT);
  EXPECT_EQ(set, nullptr);
  EXPECT_NE(std::string(conerisk_last_error()).find("simplex"), std::string::npos);
  EXPECT_EQ(conerisk_set_parse(nullptr, &set), CONERISK_INVALID_INPUT);
  EXPECT_EQ(conerisk_set_dim(nullptr, nullptr), CONERISK_INVALID_INPUT);

  ASSERT_EQ(conerisk_set_parse("orthant:n=3", &set), CONERISK_OK);
  const double x[2] = {1, 2};
  double out[2];
  EXPECT_EQ(conerisk_project(set, x, 2, out, nullptr), CONERISK_INVALID_INPUT);
  conerisk_mc_options opts{50, 1, 1, nullptr};
  double value = 0;
  EXPECT_EQ(conerisk_statdim(set, nullptr, 0, &opts, &value, nullptr), CONERISK_INVALID_INPUT);
  conerisk_set_free(set);

  conerisk_text* t = nullptr;
  EXPECT_EQ(conerisk_sweep("/nonexistent/scenario.txt", 1, &t), CONERISK_INVALID_INPUT);
  EXPECT_EQ(t, nullptr);
  EXPECT_EQ(conerisk_verify_criterion(11, 1, 1, 1.0, nullptr, &t), CONERISK_INVALID_INPUT);
}

TEST(CApi, ProjectAndStatdim) {
  conerisk_set* set = nullptr;
  ASSERT_EQ(conerisk_set_parse("monotone:n=4", &set), CONERISK_OK);
  const double x[4] = {3, 1, 0, 2};
  double out[4];
  int converged = 0;
  ASSERT_EQ(conerisk_project(set, x, 4, out, &converged), CONERISK_OK);
  EXPECT_EQ(converged, 1);
  const double expected[4] = {4.0 / 3, 4.0 / 3, 4.0 / 3, 2};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out[i], expected[i]);

  conerisk_mc_options opts{20000, 3, 2, "gaussian"};
  double value = 0, se = 0;
  ASSERT_EQ(conerisk_statdim(set, nullptr, 0, &opts, &value, &se), CONERISK_OK);
  EXPECT_LE(std::abs(value - 25.0 / 12.0), 3 * se);

  // Alternating-sign normal: S^4 intersected with v-perp is the block cone S_{2,2}.
  const double v[4] = {1, -1, 1, -1};
  ASSERT_EQ(conerisk_statdim(set, v, 4, &opts, &value, &se), CONERISK_OK);
  EXPECT_LE(std::abs(value - 1.5), 3 * se);
  conerisk_set_free(set);
}

TEST(CApi, ReportsAreText) {
  conerisk_set* set = nullptr;
  ASSERT_EQ(conerisk_set_parse("monotone:n=6", &set), CONERISK_OK);
  const double theta[6] = {0, -2, 1, -3, 2, 2};
  conerisk_mc_options opts{1000, 1, 1, nullptr};
  conerisk_text* t = nullptr;
  ASSERT_EQ(conerisk_limits_report(set, theta, 6, &opts, &t), CONERISK_OK);
  const auto report = take(t);
  EXPECT_NE(report.find("low_sigma = 3\n"), std::string::npos);
  EXPECT_NE(report.find("partition = [(0,-2),(1,-3)],[(2),(2)]\n"), std::string::npos);
  conerisk_set_free(set);

  ASSERT_EQ(conerisk_table1(0, 1, 1, &t), CONERISK_OK);
  const auto table = take(t);
  for (const char* limit : {"49/20", "11/6", "limit = 1\n", "43/12", "limit = 3\n", "limit = 2\n"}) {
    EXPECT_NE(table.find(limit), std::string::npos) << limit;
  }
  EXPECT_EQ(conerisk_table1(50, 1, 1, &t), CONERISK_INVALID_INPUT);

  ASSERT_EQ(conerisk_spiking(6, 500, 1, 1, &t), CONERISK_OK);
  EXPECT_NE(take(t).find("decreasing sigma = 0.001"), std::string::npos);
}

TEST(CApi, VerifyCriterionAndNegativeControl) {
  int passed = 0;
  conerisk_text* t = nullptr;
  EXPECT_EQ(conerisk_verify_criterion(1, 1, 1, 1.0, &passed, &t), CONERISK_OK);
  EXPECT_EQ(passed, 1);
  EXPECT_NE(take(t).find("criterion 1 PASS"), std::string::npos);
  EXPECT_EQ(conerisk_verify_criterion(3, 1, 1, 0.0, &passed, &t), CONERISK_VERIFICATION_FAILED);
  EXPECT_EQ(passed, 0);
  EXPECT_NE(take(t).find("criterion 3 FAIL"), std::string::npos);
  EXPECT_EQ(conerisk_verify_criterion(1, 1, 1, -1.0, &passed, nullptr), CONERISK_INVALID_INPUT);
}

TEST(CApi, CsvVectorAndSweep) {
  const auto dir = std::filesystem::temp_directory_path() / "conerisk_capi_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "theta.csv") << "1,1\n-1\n";
  double* data = nullptr;
  size_t n = 0;
  ASSERT_EQ(conerisk_load_csv_vector((dir / "theta.csv").c_str(), &data, &n), CONERISK_OK);
  ASSERT_EQ(n, 3u);
  EXPECT_EQ(data[2], -1.0);
  conerisk_vector_free(data);

  std::ofstream(dir / "s.txt") << "set = orthant:n=3\ntheta = theta.csv\nnoise = gaussian\nsigma_min = 0.01\n"
                                  "sigma_max = 100\nsigma_points = 3\nsamples = 300\nseed = 5\n";
  conerisk_text* a = nullptr;
  conerisk_text* b = nullptr;
  ASSERT_EQ(conerisk_sweep((dir / "s.txt").c_str(), 1, &a), CONERISK_OK);
  ASSERT_EQ(conerisk_sweep((dir / "s.txt").c_str(), 3, &b), CONERISK_OK);
  const auto csv = take(a);
  EXPECT_EQ(csv, take(b));
  EXPECT_EQ(csv.rfind("sigma,m_norm,m_se,e_norm,e_se,samples,seed\n0.01,", 0), 0u);
}
