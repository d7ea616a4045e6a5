#include "conerisk/errors.hpp"
#include "conerisk/risklab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace conerisk;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

Scenario scenario(ConstraintSet set, Vector theta, std::vector<double> sigmas, std::size_t samples = 20000,
                  std::uint64_t seed = 3) {
  return Scenario{std::move(set), std::move(theta), NoiseModel::gaussian(), std::move(sigmas), samples, seed, 0};
}

void expect_close(double estimate, double se, double target, double extra = 0.01) {
  EXPECT_LE(std::abs(estimate - target), 3.0 * se + extra) << "estimate " << estimate << " se " << se;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "conerisk_risklab_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(SigmaGrid, DefaultIsLogSpaced) {
  const auto grid = log_sigma_grid();
  ASSERT_EQ(grid.size(), 41u);
  EXPECT_EQ(grid.front(), 1e-3);
  EXPECT_EQ(grid.back(), 1e3);
  EXPECT_NEAR(grid[20], 1.0, 1e-12);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_NEAR(grid[i] / grid[i - 1], std::pow(10.0, 0.15), 1e-12);
  EXPECT_THROW(log_sigma_grid(0.0, 1.0, 3), InvalidInput);
  EXPECT_THROW(log_sigma_grid(2.0, 1.0, 3), InvalidInput);
}

TEST(Scenario, Validation) {
  auto s = scenario(ConstraintSet::orthant(3), vec({1, 1, -1}), {1e-3, 1.0});
  EXPECT_NO_THROW(s.validate());
  s.sigmas = {1.0, 1.0};
  EXPECT_THROW(s.validate(), InvalidInput);
  s.sigmas = {-1.0};
  EXPECT_THROW(s.validate(), InvalidInput);
  s.sigmas = {1.0};
  s.samples = 99;
  EXPECT_THROW(s.validate(), InvalidInput);
  s.samples = 100;
  s.theta = vec({1, 1});
  EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(SimulateRisks, OrthantEndpoints) {
  const auto curve = simulate_risks(scenario(ConstraintSet::orthant(3), vec({1, 1, -1}), {1e-3, 1e3}, 100000, 11));
  expect_close(curve[0].m_norm, curve[0].m_se, 2.0);
  expect_close(curve[0].e_norm, curve[0].e_se, 2.0);
  expect_close(curve[1].m_norm, curve[1].m_se, 1.5);
  expect_close(curve[1].e_norm, curve[1].e_se, 1.5);
}

TEST(SimulateRisks, BallSeparation) {
  const auto curve = simulate_risks(scenario(ConstraintSet::ball(3), vec({2, 0, 0}), {1e-3}, 50000, 5));
  expect_close(curve[0].m_norm, curve[0].m_se, 0.5);
  expect_close(curve[0].e_norm, curve[0].e_se, 1.0);
  const double combined = std::hypot(curve[0].m_se, curve[0].e_se);
  EXPECT_GT(curve[0].e_norm - curve[0].m_norm, 3.0 * combined);
}

TEST(SimulateRisks, CurveInvariants) {
  const auto grid = log_sigma_grid(1e-2, 1e2, 9);
  for (const auto& set : {ConstraintSet::orthant(3), ConstraintSet::ball(3), ConstraintSet::monotone(3)}) {
    const auto curve = simulate_risks(scenario(set, vec({0.5, 2, -1}), grid, 2000));
    for (const auto& p : curve) {
      EXPECT_GE(p.m_norm, 0.0);
      EXPECT_LE(p.m_norm, p.e_norm + 1e-8);
      // mean |Z|^2 is 3 in expectation; the per-sample chain bounds e_norm by the sample mean.
      EXPECT_LE(p.e_norm, 3.0 + 4.0 * std::sqrt(6.0 / 2000.0));
    }
  }
}

TEST(SimulateRisks, CommonRandomNumbersAndDeterminism) {
  auto s = scenario(ConstraintSet::monotone(4), vec({1, 0, 2, -1}), {0.1, 1.0}, 3000);
  s.workers = 1;
  const auto a = simulate_risks(s);
  s.workers = 4;
  const auto b = simulate_risks(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].m_norm, b[i].m_norm);
    EXPECT_EQ(a[i].e_se, b[i].e_se);
  }
  // A single-sigma run reproduces the matching grid point exactly.
  s.sigmas = {1.0};
  EXPECT_EQ(simulate_risks(s)[0].m_norm, a[1].m_norm);
}

TEST(SimulateRisks, PolyhedralRisksCoincideAtLowSigma) {
  const auto curve = simulate_risks(scenario(ConstraintSet::monotone(6), vec({0, -2, 1, -3, 2, 2}), {1e-3}, 20000));
  EXPECT_LE(std::abs(curve[0].m_norm - curve[0].e_norm), 3.0 * std::hypot(curve[0].m_se, curve[0].e_se) + 1e-6);
  expect_close(curve[0].m_norm, curve[0].m_se, 3.0);
}

TEST(SimulateRisks, ExcessStaysBelowTangentConeBound) {
  const auto grid = log_sigma_grid(1e-3, 1e3, 13);
  const std::vector<std::pair<ConstraintSet, Vector>> fixtures{
      {ConstraintSet::orthant(3), vec({1, 1, -1})},
      {ConstraintSet::monotone(6), vec({0, -2, 1, -3, 2, 2})},
      {ConstraintSet::ball(3), vec({2, 0, 0})},
  };
  McOptions opts;
  opts.samples = 20000;
  for (const auto& [set, theta] : fixtures) {
    const auto bound = bellec_bound(set, theta, opts);
    for (const auto& p : simulate_risks(scenario(set, theta, grid, 5000))) {
      EXPECT_LE(p.e_norm, bound.value + 3.0 * std::hypot(p.e_se, bound.std_error)) << set.family() << " " << p.sigma;
    }
  }
}

TEST(ChainCheck, ZeroViolations) {
  EXPECT_EQ(per_sample_chain_check(scenario(ConstraintSet::monotone(6), vec({0, 0, -2, -2, 3, 1}), {1.0}, 2000)), 0u);
  EXPECT_EQ(per_sample_chain_check(scenario(ConstraintSet::ball(3), vec({2, 0, 0}), {10.0}, 2000)), 0u);
  EXPECT_EQ(per_sample_chain_check(scenario(ConstraintSet::orthant(3), vec({1, 2, 3}), {1e-6}, 2000)), 0u);
  EXPECT_EQ(per_sample_chain_check(
                scenario(ConstraintSet::parabola_epigraph(), vec({1, 0}), log_sigma_grid(1e-3, 1e3, 7), 500)),
            0u);
}

TEST(SweepCsv, HeaderAndRows) {
  const auto s = scenario(ConstraintSet::orthant(2), vec({1, -1}), {0.5, 2.0}, 200, 9);
  const auto csv = sweep_csv(s, simulate_risks(s));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sigma,m_norm,m_se,e_norm,e_se,samples,seed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\n0.5,"), std::string::npos);
  EXPECT_NE(csv.find(",200,9\n"), std::string::npos);
}

TEST(ScenarioFile, ParsesInlineAndFileTheta) {
  const auto dir = temp_dir();
  {
    std::ofstream(dir / "theta.csv") << "1\n1\n-0.5\n";
    std::ofstream(dir / "s.txt") << "# orthant\nset = orthant:n=3\ntheta = theta.csv\nnoise = gaussian\n"
                                    "sigma_min = 0.001\nsigma_max = 1000\nsigma_points = 7\nsamples = 500\nseed = 4\n";
    std::ofstream(dir / "inline.txt") << "set = ball:n=3\ntheta = 2,0,0\nnoise = uniform\nsigma_min = 1\n"
                                         "sigma_max = 1\nsigma_points = 1\nsamples = 100\nseed = 0\n";
  }
  const auto s = load_scenario(dir / "s.txt");
  EXPECT_EQ(s.set.family(), "orthant");
  EXPECT_EQ(s.theta, vec({1, 1, -0.5}));
  EXPECT_EQ(s.sigmas.size(), 7u);
  EXPECT_EQ(s.samples, 500u);
  EXPECT_EQ(s.seed, 4u);
  const auto t = load_scenario(dir / "inline.txt");
  EXPECT_EQ(t.theta, vec({2, 0, 0}));
  EXPECT_EQ(t.sigmas, std::vector<double>{1.0});
  EXPECT_EQ(t.noise.tag(), "uniform");
}

TEST(ScenarioFile, Rejections) {
  const auto dir = temp_dir();
  const std::string good =
      "set = orthant:n=2\ntheta = 1,1\nnoise = gaussian\nsigma_min = 1\nsigma_max = 10\nsigma_points = 3\n"
      "samples = 100\nseed = 1\n";
  std::ofstream(dir / "missing.txt") << "set = orthant:n=2\ntheta = 1,1\n";
  std::ofstream(dir / "unknown.txt") << good << "colour = blue\n";
  std::ofstream(dir / "dup.txt") << good << "seed = 2\n";
  std::ofstream(dir / "few.txt") << "set = orthant:n=2\ntheta = 1,1\nnoise = gaussian\nsigma_min = 1\n"
                                    "sigma_max = 10\nsigma_points = 3\nsamples = 50\nseed = 1\n";
  for (const char* name : {"missing.txt", "unknown.txt", "dup.txt", "few.txt", "absent.txt"}) {
    EXPECT_THROW(load_scenario(dir / name), InvalidInput) << name;
  }
}

TEST(IsotonicReferenceRows, AnalyticColumnIsExact) {
  const auto rows = table1_rows(0, 1);
  ASSERT_EQ(rows.size(), 6u);
  const Rational expected[] = {Rational(49, 20), Rational(11, 6), Rational(1), Rational(43, 12), Rational(3),
                               Rational(2)};
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].limit, expected[i]);
  EXPECT_EQ(rows[5].partition, "[(0,0,-2,-2)],[(3,1)]");
  const auto text = table1_text(rows, false);
  EXPECT_NE(text.find("limit = 43/12"), std::string::npos);
  EXPECT_EQ(text.find("m_norm"), std::string::npos);
}

TEST(IsotonicReferenceRows, SimulatedColumnMatches) {
  const auto rows = table1_rows(20000, 8);
  for (const auto& row : rows) expect_close(row.simulated.m_norm, row.simulated.m_se, row.limit.to_double());
}

TEST(Spiking, DecreasingRampCollapsesToMean) {
  const auto r = spiking_demo(6, 5000, 2);
  EXPECT_EQ(r.theta, vec({5, 3, 1, -1, -3, -5}));
  EXPECT_GT(r.decreasing[0].constant_fraction, 0.99);
  EXPECT_LE(r.decreasing[0].max_mean_deviation, 1e-10);
  EXPECT_LE(r.decreasing[1].max_mean_deviation, 1e-10);
  EXPECT_EQ(r.increasing[0].constant_fraction, 0.0);
  expect_close(r.well_specified.m_norm, r.well_specified.m_se, r.harmonic);
  EXPECT_THROW(spiking_demo(2, 1000, 1), InvalidInput);
}
