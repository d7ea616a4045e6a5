#pragma once

#include "conerisk/numerics.hpp"
#include "conerisk/rational.hpp"
#include "conerisk/sets.hpp"
#include "conerisk/statdim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conerisk {

/// Half-open, zero-based index range [begin, end).
struct IndexRange {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
  Eigen::Index size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Level sets J_k of the isotonic projection, each with its level mu_k and
/// the finest split into contiguous sub-blocks on which theta has mean mu_k.
struct BlockPartition {
  struct Level {
    IndexRange range;
    double mu = 0.0;
    std::optional<Rational> exact_mu;
    std::vector<IndexRange> sub_blocks;
  };
  std::vector<Level> levels;

  /// Renders theta grouped by the partition, e.g. "[(0,-2),(1,-3)],[(2),(2)]".
  std::string render(const Vector& theta) const;
};

/// Floating-point construction. Sub-block means are compared against mu_k
/// with tolerance 1e-9 max(1, |mu_k|, max|theta_i|) times the running length.
BlockPartition isotonic_partition(const Vector& theta);

/// Exact construction in rational arithmetic; theta must hold integers.
BlockPartition isotonic_partition_exact(const Vector& theta);

enum class LimitKind { ClosedForm, MonteCarlo, Asymptotic, Unknown };
const char* to_string(LimitKind kind);

struct LimitValue {
  double value = 0.0;
  double std_error = 0.0;
  LimitKind kind = LimitKind::ClosedForm;
  std::optional<Rational> exact;
  /// False when the value is a candidate whose sufficient condition is not
  /// established (high-noise limit of general cones).
  bool condition_verified = true;
  std::string note;

  static LimitValue closed(double v);
  static LimitValue closed(const Rational& r);
  static LimitValue estimate(const StatDimEstimate& e);
};

/// Low-noise limit for polyhedral sets: statistical dimension of
/// T_C(proj(theta)) intersected with (theta - proj(theta))-perp, by Monte Carlo.
StatDimEstimate low_sigma_limit_polyhedral(const ConstraintSet& set, const Vector& theta, const McOptions& options);

/// n_0/2 + n_+ with n_+ = #{theta_i > 0}, n_0 = #{theta_i = 0}.
double low_sigma_limit_orthant(const Vector& theta);

/// Sum over level blocks of the block monotone statistical dimension of the
/// sub-block sizes: H_m for equal sizes, 3/2 for two blocks, Monte Carlo on
/// the embedding otherwise. Integer theta uses exact arithmetic.
LimitValue low_sigma_limit_isotonic(const Vector& theta, const McOptions& options);

struct BallLimits {
  double misspecified;
  double excess;
};

/// ((n-1)/|theta|^2, (n-1)/|theta|). Throws InvalidInput for |theta| <= 1.
BallLimits ball_limits(const Vector& theta);

/// Statistical dimension of the tangent cone at proj(theta).
LimitValue bellec_bound(const ConstraintSet& set, const Vector& theta, const McOptions& options);

/// High-noise limit: n/2 for the orthant, 0 for bounded sets, the core cone
/// statistical dimension flagged as unverified for other cones, unknown for
/// the parabola epigraph (with 1/2 reported as the reference value).
LimitValue high_sigma_limit(const ConstraintSet& set, const McOptions& options);

struct LimitReport {
  Vector theta;
  Vector projection;
  bool well_specified = false;
  LimitValue low_sigma;
  std::optional<LimitValue> low_sigma_excess;  // differs from low_sigma only for the ball
  LimitValue bellec;
  LimitValue high_sigma;
  std::optional<BlockPartition> partition;

  /// Deterministic "key = value" text.
  std::string render() const;
};

LimitReport limit_report(const ConstraintSet& set, const Vector& theta, const McOptions& options);

}  // namespace conerisk
