#pragma once

#include "conerisk/limits.hpp"
#include "conerisk/sets.hpp"
#include "conerisk/statdim.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace conerisk {

struct Scenario {
  ConstraintSet set;
  Vector theta;
  NoiseModel noise = NoiseModel::gaussian();
  std::vector<double> sigmas;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 0;

  /// Throws InvalidInput unless sigmas are positive and strictly ascending,
  /// samples >= 100 and theta matches the set dimension.
  void validate() const;
};

/// Reads a "key = value" scenario file. Keys: set, theta (inline list or CSV
/// path), noise, sigma_min, sigma_max, sigma_points, samples, seed. Lines
/// starting with '#' are comments. Relative paths resolve against the file's
/// directory.
Scenario load_scenario(const std::filesystem::path& path);

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_sigma_grid(double lo = 1e-3, double hi = 1e3, int points = 41);

struct RiskCurvePoint {
  double sigma = 0.0;
  double m_norm = 0.0;
  double m_se = 0.0;
  double e_norm = 0.0;
  double e_se = 0.0;
};

/// Monte Carlo estimates of M/sigma^2 and E/sigma^2 at each sigma, reusing
/// the same noise draws across the grid.
std::vector<RiskCurvePoint> simulate_risks(const Scenario& s);

/// Number of (replicate, sigma) pairs violating
/// 0 <= |P - p0|^2 <= |P - theta|^2 - |p0 - theta|^2 <= sigma^2 |Z|^2
/// beyond a slack of 1e-8 sigma^2 max(1, |Z|^2).
std::size_t per_sample_chain_check(const Scenario& s);

/// CSV with header "sigma,m_norm,m_se,e_norm,e_se,samples,seed".
std::string sweep_csv(const Scenario& s, const std::vector<RiskCurvePoint>& curve);

struct Table1Row {
  Vector theta;
  Vector projection;
  std::string partition;
  Rational limit;
  RiskCurvePoint simulated;  // only filled when samples > 0
};

/// The six isotonic examples with exact limits and, when samples > 0, the
/// simulated normalized risk at sigma = 1e-3.
std::vector<Table1Row> table1_rows(std::size_t samples, std::uint64_t seed, int workers = 0);
std::string table1_text(const std::vector<Table1Row>& rows, bool simulated);

struct SpikingLine {
  double sigma;
  double constant_fraction;
  double max_mean_deviation;  // over constant fits: max |fit - mean(Y)|
};

struct SpikingReport {
  Vector theta;
  std::vector<SpikingLine> decreasing;
  std::vector<SpikingLine> increasing;
  RiskCurvePoint well_specified;  // theta = 0 at sigma = 1
  double harmonic = 0.0;

  std::string render() const;
};

/// Isotonic fits of a strictly decreasing ramp collapse to the constant
/// mean(Y) as sigma shrinks; a strictly increasing ramp does not.
SpikingReport spiking_demo(Eigen::Index n, std::size_t samples, std::uint64_t seed, int workers = 0);

}  // namespace conerisk
