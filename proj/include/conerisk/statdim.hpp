#pragma once

#include "conerisk/numerics.hpp"
#include "conerisk/random.hpp"
#include "conerisk/rational.hpp"
#include "conerisk/sets.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace conerisk {

/// Zero-mean, unit-variance-per-coordinate noise (Gaussian or uniform), or a
/// user-supplied discrete distribution over vectors.
class NoiseModel {
 public:
  static NoiseModel gaussian();
  /// i.i.d. uniform on [-sqrt 3, sqrt 3].
  static NoiseModel scaled_uniform();
  /// Row k of `points` is drawn with probability weights(k). Weights must be
  /// nonnegative and sum to 1, and the weighted mean must vanish.
  static NoiseModel table(Vector weights, Matrix points);
  /// "gaussian", "uniform", or "table:<csv>" where each CSV row is
  /// "weight,z_1,...,z_n".
  static NoiseModel parse(const std::string& text);

  const std::string& tag() const { return tag_; }
  /// Dimension fixed by a table, 0 otherwise.
  Eigen::Index fixed_dim() const { return points_.cols(); }
  Vector draw(RandomStream& stream, Eigen::Index n) const;

 private:
  enum class Kind { Gaussian, Uniform, Table };
  NoiseModel(Kind kind, std::string tag) : kind_(kind), tag_(std::move(tag)) {}

  Kind kind_;
  std::string tag_;
  Vector cumulative_;
  Matrix points_;
};

struct McOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: CONERISK_WORKERS, then hardware concurrency
  NoiseModel noise = NoiseModel::gaussian();
};

struct StatDimEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string noise_tag;
};

using Projector = std::function<Vector(const Vector&)>;

/// Monte Carlo mean of ||proj(Z)||^2 over n-dimensional noise. Replicate r
/// uses RandomStream(seed, r), so the result does not depend on the number of
/// workers. A projection failure is rethrown as NumericalError naming the
/// replicate.
StatDimEstimate mc_squared_norm(Eigen::Index n, const Projector& proj, const McOptions& options);

/// Statistical dimension of a cone variant.
StatDimEstimate mc_statdim(const ConstraintSet& cone, const McOptions& options);

/// Statistical dimension of the cone intersected with the hyperplane v-perp.
/// Requires a polyhedral cone variant.
StatDimEstimate mc_statdim(const ConstraintSet& cone, const Vector& v, const McOptions& options);

/// Statistical dimension of {u : a u <= 0, eq u = 0}.
StatDimEstimate mc_statdim_face(const Matrix& a, const Matrix& eq, const McOptions& options);

/// H_m as a double.
double statdim_monotone_closed(int m);

/// Statistical dimension of a product cone.
double statdim_product(const std::vector<double>& parts);

}  // namespace conerisk
