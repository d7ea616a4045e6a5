#include "conerisk/limits.hpp"

#include "conerisk/errors.hpp"
#include "conerisk/geometry.hpp"
#include "pava.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conerisk {

namespace {

// Builds level sets from PAVA blocks (merging neighbours with equal levels)
// and splits each level set greedily into sub-blocks whose mean is the level.
template <class T, class SameLevel, class Closes, class ToDouble>
BlockPartition build_partition(const std::vector<T>& values, SameLevel same_level, Closes closes,
                               ToDouble to_double) {
  const std::vector<T> ones(values.size(), T(1));
  const auto blocks = detail::pava(values, ones);

  struct Run {
    std::size_t start, length;
    T sum, count;
  };
  std::vector<Run> runs;
  for (const auto& b : blocks) {
    if (!runs.empty() && same_level(runs.back().sum / runs.back().count, b.value)) {
      runs.back().length += b.length;
      runs.back().sum = runs.back().sum + b.weighted_sum;
      runs.back().count = runs.back().count + b.weight;
    } else {
      runs.push_back({b.start, b.length, b.weighted_sum, b.weight});
    }
  }

  BlockPartition partition;
  for (const auto& run : runs) {
    BlockPartition::Level level;
    level.range = {static_cast<Eigen::Index>(run.start), static_cast<Eigen::Index>(run.start + run.length)};
    const T mu = run.sum / run.count;
    level.mu = to_double(mu);
    if constexpr (std::is_same_v<T, Rational>) level.exact_mu = mu;

    std::size_t sub_start = run.start;
    T sum = T(0);
    for (std::size_t i = run.start; i < run.start + run.length; ++i) {
      sum = sum + values[i];
      const std::size_t length = i + 1 - sub_start;
      if (closes(sum, length, mu, run)) {
        level.sub_blocks.push_back({static_cast<Eigen::Index>(sub_start), static_cast<Eigen::Index>(i + 1)});
        sub_start = i + 1;
        sum = T(0);
      }
    }
    if (sub_start != run.start + run.length) {
      throw NumericalError("isotonic_partition: final sub-block does not close within tolerance");
    }
    partition.levels.push_back(std::move(level));
  }
  return partition;
}

bool is_integral(const Vector& theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta(i)) || theta(i) != std::floor(theta(i)) || std::abs(theta(i)) > 1e12) return false;
  }
  return true;
}

// Accumulates exact and Monte Carlo parts of a sum of statistical dimensions.
struct DimensionSum {
  Rational exact;
  double mc_value = 0.0;
  double mc_var = 0.0;
  bool any_mc = false;

  LimitValue finish() const {
    LimitValue v;
    v.value = exact.to_double() + mc_value;
    v.std_error = std::sqrt(mc_var);
    v.kind = any_mc ? LimitKind::MonteCarlo : LimitKind::ClosedForm;
    if (!any_mc) v.exact = exact;
    return v;
  }
};

// delta of the block monotone cone with these sizes: H_m for equal sizes,
// 3/2 for two blocks of any sizes, otherwise Monte Carlo on the embedding.
void add_block_cone(DimensionSum& acc, const std::vector<Eigen::Index>& sizes, const McOptions& options,
                    std::uint64_t salt) {
  const bool equal = std::all_of(sizes.begin(), sizes.end(), [&](Eigen::Index s) { return s == sizes.front(); });
  if (equal) {
    acc.exact += harmonic_number(static_cast<int>(sizes.size()));
  } else if (sizes.size() == 2) {
    acc.exact += Rational(3, 2);
  } else {
    McOptions sub = options;
    sub.seed = derive_seed(options.seed, salt);
    const auto est = mc_statdim(block_monotone_embedding(sizes), sub);
    acc.mc_value += est.value;
    acc.mc_var += est.std_error * est.std_error;
    acc.any_mc = true;
  }
}

std::vector<Eigen::Index> sub_block_sizes(const BlockPartition::Level& level) {
  std::vector<Eigen::Index> sizes;
  for (const auto& r : level.sub_blocks) sizes.push_back(r.size());
  return sizes;
}

std::string render_limit(const std::string& key, const LimitValue& v) {
  std::ostringstream out;
  if (v.kind == LimitKind::Unknown) {
    out << key << " = unknown\n";
    if (std::isfinite(v.value)) out << key << "_reference = " << format_real(v.value) << "\n";
  } else {
    out << key << " = " << format_real(v.value) << "\n";
    if (v.exact) out << key << "_exact = " << v.exact->to_string() << "\n";
    out << key << "_std_error = " << format_real(v.std_error) << "\n";
  }
  out << key << "_kind = " << to_string(v.kind) << "\n";
  if (!v.condition_verified) out << key << "_condition = unverified\n";
  if (!v.note.empty()) out << key << "_note = " << v.note << "\n";
  return out.str();
}

constexpr std::uint64_t kLowSalt = 0x4c4f57;
constexpr std::uint64_t kBellecSalt = 0x42454c;
constexpr std::uint64_t kHighSalt = 0x484947;

}  // namespace

std::string BlockPartition::render(const Vector& theta) const {
  std::string out;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (k) out += ",";
    out += "[";
    for (std::size_t j = 0; j < levels[k].sub_blocks.size(); ++j) {
      if (j) out += ",";
      const auto& r = levels[k].sub_blocks[j];
      out += "(" + format_vector(theta.segment(r.begin, r.size())) + ")";
    }
    out += "]";
  }
  return out;
}

BlockPartition isotonic_partition(const Vector& theta) {
  if (theta.size() == 0 || !theta.allFinite()) throw InvalidInput("isotonic_partition: need a finite, nonempty vector");
  const std::vector<double> values(theta.data(), theta.data() + theta.size());
  const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
  auto same = [&](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), scale}); };
  auto closes = [&](double sum, std::size_t length, double mu, const auto&) {
    const auto len = static_cast<double>(length);
    return std::abs(sum - len * mu) <= 1e-9 * std::max({1.0, std::abs(mu), scale}) * len;
  };
  return build_partition<double>(values, same, closes, [](double x) { return x; });
}

BlockPartition isotonic_partition_exact(const Vector& theta) {
  if (theta.size() == 0) throw InvalidInput("isotonic_partition_exact: need a nonempty vector");
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(theta.size()));
  for (Eigen::Index i = 0; i < theta.size(); ++i) values.push_back(Rational::from_integral_double(theta(i)));
  auto same = [](const Rational& a, const Rational& b) { return a == b; };
  auto closes = [](const Rational& sum, std::size_t length, const Rational& mu, const auto&) {
    return sum == mu * Rational(static_cast<std::int64_t>(length));
  };
  return build_partition<Rational>(values, same, closes, [](const Rational& r) { return r.to_double(); });
}

const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::ClosedForm:
      return "closed-form";
    case LimitKind::MonteCarlo:
      return "monte-carlo";
    case LimitKind::Asymptotic:
      return "asymptotic";
    case LimitKind::Unknown:
      return "unknown";
  }
  return "unknown";
}

LimitValue LimitValue::closed(double v) {
  LimitValue out;
  out.value = v;
  return out;
}

LimitValue LimitValue::closed(const Rational& r) {
  LimitValue out;
  out.value = r.to_double();
  out.exact = r;
  return out;
}

LimitValue LimitValue::estimate(const StatDimEstimate& e) {
  LimitValue out;
  out.value = e.value;
  out.std_error = e.std_error;
  out.kind = LimitKind::MonteCarlo;
  return out;
}

StatDimEstimate low_sigma_limit_polyhedral(const ConstraintSet& set, const Vector& theta, const McOptions& options) {
  if (theta.size() != set.dim()) throw InvalidInput("low_sigma_limit_polyhedral: dimension mismatch");
  if (!h_representation(set)) {
    throw Unsupported("low_sigma_limit_polyhedral: set family '" + set.family() + "' is not polyhedral");
  }
  const auto p = project(set, theta);
  if (!p.converged) throw NumericalError("low_sigma_limit_polyhedral: projection of theta did not converge");
  const TangentConeRep tangent = tangent_cone(set, p.point);
  const Vector v = theta - p.point;
  Matrix eq = tangent.equalities;
  if (v.norm() > 1e-12 * std::max(1.0, theta.norm())) {
    eq.conservativeResize(eq.rows() + 1, theta.size());
    eq.row(eq.rows() - 1) = v.transpose();
  }
  return mc_statdim_face(tangent.a_active, eq, options);
}

double low_sigma_limit_orthant(const Vector& theta) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta(i) > 0.0) total += 1.0;
    if (theta(i) == 0.0) total += 0.5;
  }
  return total;
}

LimitValue low_sigma_limit_isotonic(const Vector& theta, const McOptions& options) {
  const BlockPartition partition = is_integral(theta) ? isotonic_partition_exact(theta) : isotonic_partition(theta);
  DimensionSum acc;
  for (std::size_t k = 0; k < partition.levels.size(); ++k) {
    add_block_cone(acc, sub_block_sizes(partition.levels[k]), options, kLowSalt + k);
  }
  return acc.finish();
}

BallLimits ball_limits(const Vector& theta) {
  const double r = theta.norm();
  if (!(r > 1.0)) throw InvalidInput("ball_limits: theta lies in the unit ball (well-specified)");
  const auto n1 = static_cast<double>(theta.size() - 1);
  return {n1 / (r * r), n1 / r};
}

LimitValue bellec_bound(const ConstraintSet& set, const Vector& theta, const McOptions& options) {
  if (theta.size() != set.dim()) throw InvalidInput("bellec_bound: dimension mismatch");
  const auto n = static_cast<std::int64_t>(theta.size());
  if (set.as<Orthant>()) {
    std::int64_t twice = 0;
    // Coordinates projecting to 0 contribute a half-line.
    for (Eigen::Index i = 0; i < theta.size(); ++i) twice += theta(i) > 0.0 ? 2 : 1;
    return LimitValue::closed(Rational(twice, 2));
  }
  if (set.as<Ball>()) {
    return LimitValue::closed(theta.norm() >= 1.0 ? Rational(2 * n - 1, 2) : Rational(n));
  }
  if (set.as<ParabolaEpigraph>()) {
    return LimitValue::closed(theta(1) > theta(0) * theta(0) ? Rational(2) : Rational(3, 2));
  }
  if (set.as<MonotoneCone>()) {
    const auto partition = is_integral(theta) ? isotonic_partition_exact(theta) : isotonic_partition(theta);
    Rational total;
    for (const auto& level : partition.levels) total += harmonic_number(static_cast<int>(level.range.size()));
    return LimitValue::closed(total);
  }
  if (const auto* block = set.as<BlockMonotoneCone>()) {
    // The tangent cone splits into block cones over runs of equal levels.
    const Vector point = project(set, theta).point;
    DimensionSum acc;
    std::vector<Eigen::Index> run;
    Eigen::Index offset = 0;
    double run_level = 0.0;
    const double scale = std::max(1.0, point.cwiseAbs().maxCoeff());
    std::uint64_t salt = kBellecSalt;
    for (const auto len : block->sizes) {
      const double level = point(offset);
      if (!run.empty() && std::abs(level - run_level) > 1e-9 * scale) {
        add_block_cone(acc, run, options, salt++);
        run.clear();
      }
      run.push_back(len);
      run_level = level;
      offset += len;
    }
    add_block_cone(acc, run, options, salt);
    return acc.finish();
  }
  const auto p = project(set, theta);
  if (!p.converged) throw NumericalError("bellec_bound: projection of theta did not converge");
  const TangentConeRep tangent = tangent_cone(set, p.point);
  McOptions sub = options;
  sub.seed = derive_seed(options.seed, kBellecSalt);
  return LimitValue::estimate(mc_statdim_face(tangent.a_active, tangent.equalities, sub));
}

LimitValue high_sigma_limit(const ConstraintSet& set, const McOptions& options) {
  if (set.as<Orthant>()) return LimitValue::closed(Rational(static_cast<std::int64_t>(set.dim()), 2));
  if (set.as<ParabolaEpigraph>()) {
    LimitValue v;
    v.value = 0.5;
    v.kind = LimitKind::Unknown;
    v.condition_verified = false;
    v.note = "boundedness condition fails; reference value is delta of the core cone {(0,t) : t >= 0}";
    return v;
  }
  std::optional<ConstraintSet> core;
  try {
    core = core_cone(set);
  } catch (const Unsupported& e) {
    LimitValue v;
    v.kind = LimitKind::Unknown;
    v.value = std::numeric_limits<double>::quiet_NaN();
    v.condition_verified = false;
    v.note = e.what();
    return v;
  }
  if (!core) return LimitValue::closed(Rational(0));  // bounded set

  LimitValue v;
  if (const auto* mono = core->as<MonotoneCone>()) {
    v = LimitValue::closed(harmonic_number(static_cast<int>(mono->n)));
  } else if (const auto* block = core->as<BlockMonotoneCone>()) {
    DimensionSum acc;
    add_block_cone(acc, block->sizes, options, kHighSalt);
    v = acc.finish();
  } else {
    McOptions sub = options;
    sub.seed = derive_seed(options.seed, kHighSalt);
    v = LimitValue::estimate(mc_statdim(*core, sub));
  }
  v.condition_verified = false;
  v.note = "statistical dimension of the core cone; boundedness condition not established";
  return v;
}

LimitReport limit_report(const ConstraintSet& set, const Vector& theta, const McOptions& options) {
  if (theta.size() != set.dim()) {
    throw InvalidInput("theta has dimension " + std::to_string(theta.size()) + ", set has dimension " +
                       std::to_string(set.dim()));
  }
  if (!theta.allFinite()) throw InvalidInput("theta must be finite");
  LimitReport report;
  report.theta = theta;
  const auto p = project(set, theta);
  if (!p.converged) throw NumericalError("projection of theta did not converge");
  report.projection = p.point;
  report.well_specified = membership(set, theta);
  report.bellec = bellec_bound(set, theta, options);
  report.high_sigma = high_sigma_limit(set, options);

  McOptions low = options;
  low.seed = derive_seed(options.seed, kLowSalt);
  if (set.as<Orthant>()) {
    report.low_sigma = LimitValue::closed(Rational::from_integral_double(2.0 * low_sigma_limit_orthant(theta)) /
                                          Rational(2));
  } else if (set.as<MonotoneCone>()) {
    report.low_sigma = low_sigma_limit_isotonic(theta, low);
    report.partition = is_integral(theta) ? isotonic_partition_exact(theta) : isotonic_partition(theta);
  } else if (set.as<Ball>()) {
    if (theta.norm() > 1.0) {
      const BallLimits b = ball_limits(theta);
      report.low_sigma = LimitValue::closed(b.misspecified);
      report.low_sigma_excess = LimitValue::closed(b.excess);
    } else {
      report.low_sigma = report.bellec;
      report.low_sigma_excess = report.bellec;
    }
  } else if (set.as<ParabolaEpigraph>()) {
    if (report.well_specified) {
      report.low_sigma = report.bellec;
    } else {
      report.low_sigma.kind = LimitKind::Unknown;
      report.low_sigma.value = std::numeric_limits<double>::quiet_NaN();
      report.low_sigma.note = "no low-noise formula for this set when theta lies outside";
    }
  } else {
    report.low_sigma = LimitValue::estimate(low_sigma_limit_polyhedral(set, theta, low));
  }
  return report;
}

std::string LimitReport::render() const {
  std::ostringstream out;
  out << "theta = " << format_vector(theta) << "\n";
  out << "projection = " << format_vector(projection) << "\n";
  out << "well_specified = " << (well_specified ? "true" : "false") << "\n";
  out << render_limit("low_sigma", low_sigma);
  if (low_sigma_excess) out << render_limit("low_sigma_excess", *low_sigma_excess);
  out << render_limit("bellec_bound", bellec);
  out << render_limit("high_sigma", high_sigma);
  if (partition) {
    out << "partition = " << partition->render(theta) << "\n";
    std::string levels;
    for (const auto& level : partition->levels) {
      if (!levels.empty()) levels += ",";
      levels += level.exact_mu ? level.exact_mu->to_string() : format_real(level.mu);
    }
    out << "partition_levels = " << levels << "\n";
  }
  return out.str();
}

}  // namespace conerisk
