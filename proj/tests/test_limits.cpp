#include "conerisk/errors.hpp"
#include "conerisk/limits.hpp"
#include "conerisk/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace conerisk;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

McOptions options(std::uint64_t seed, std::size_t samples = 100000) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

std::vector<IndexRange> ranges(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<IndexRange> out;
  for (const auto& [b, e] : pairs) out.push_back({b, e});
  return out;
}

void check_partition_invariants(const BlockPartition& part, const Vector& theta) {
  const Vector proj = project_monotone(theta).point;
  Eigen::Index expected_begin = 0;
  for (std::size_t k = 0; k < part.levels.size(); ++k) {
    const auto& level = part.levels[k];
    ASSERT_EQ(level.range.begin, expected_begin);
    ASSERT_GT(level.range.size(), 0);
    expected_begin = level.range.end;
    if (k) EXPECT_LT(part.levels[k - 1].mu, level.mu);
    for (Eigen::Index i = level.range.begin; i < level.range.end; ++i) EXPECT_NEAR(proj(i), level.mu, 1e-12);
    Eigen::Index sub_begin = level.range.begin;
    for (const auto& sub : level.sub_blocks) {
      ASSERT_EQ(sub.begin, sub_begin);
      ASSERT_GT(sub.size(), 0);
      sub_begin = sub.end;
      EXPECT_NEAR(theta.segment(sub.begin, sub.size()).mean(), level.mu, 1e-12);
      for (Eigen::Index len = 1; len < sub.size(); ++len) {
        EXPECT_GT(std::abs(theta.segment(sub.begin, len).mean() - level.mu), 1e-12);
      }
    }
    EXPECT_EQ(sub_begin, level.range.end);
  }
  EXPECT_EQ(expected_begin, theta.size());
}

struct ReferenceRow {
  Vector theta;
  Vector projection;
  std::string partition;
  Rational limit;
};

std::vector<ReferenceRow> reference_rows() {
  return {
      {vec({0, 0, 0, 0, 0, 0}), vec({0, 0, 0, 0, 0, 0}), "[(0),(0),(0),(0),(0),(0)]", Rational(49, 20)},
      {vec({1, -1, 1, -1, 1, -1}), vec({0, 0, 0, 0, 0, 0}), "[(1,-1),(1,-1),(1,-1)]", Rational(11, 6)},
      {vec({5, 3, 1, -1, -3, -5}), vec({0, 0, 0, 0, 0, 0}), "[(5,3,1,-1,-3,-5)]", Rational(1)},
      {vec({-1, -1, -1, -1, 2, 2}), vec({-1, -1, -1, -1, 2, 2}), "[(-1),(-1),(-1),(-1)],[(2),(2)]", Rational(43, 12)},
      {vec({0, -2, 1, -3, 2, 2}), vec({-1, -1, -1, -1, 2, 2}), "[(0,-2),(1,-3)],[(2),(2)]", Rational(3)},
      {vec({0, 0, -2, -2, 3, 1}), vec({-1, -1, -1, -1, 2, 2}), "[(0,0,-2,-2)],[(3,1)]", Rational(2)},
  };
}

}  // namespace

TEST(IsotonicPartition, Examples) {
  const auto alt = isotonic_partition(vec({1, -1, 1, -1, 1, -1}));
  ASSERT_EQ(alt.levels.size(), 1u);
  EXPECT_EQ(alt.levels[0].mu, 0.0);
  EXPECT_EQ(alt.levels[0].sub_blocks, ranges({{0, 2}, {2, 4}, {4, 6}}));

  const auto two = isotonic_partition(vec({0, -2, 1, -3, 2, 2}));
  ASSERT_EQ(two.levels.size(), 2u);
  EXPECT_EQ(two.levels[0].range, (IndexRange{0, 4}));
  EXPECT_EQ(two.levels[0].mu, -1.0);
  EXPECT_EQ(two.levels[0].sub_blocks, ranges({{0, 2}, {2, 4}}));
  EXPECT_EQ(two.levels[1].mu, 2.0);
  EXPECT_EQ(two.levels[1].sub_blocks, ranges({{4, 5}, {5, 6}}));

  const auto inc = isotonic_partition(vec({1, 2, 3}));
  ASSERT_EQ(inc.levels.size(), 3u);
  for (const auto& level : inc.levels) EXPECT_EQ(level.sub_blocks.size(), 1u);
}

TEST(IsotonicPartition, ReferenceRowsExactAndFloatAgree) {
  for (const auto& row : reference_rows()) {
    const auto exact = isotonic_partition_exact(row.theta);
    const auto approx = isotonic_partition(row.theta);
    EXPECT_EQ(exact.render(row.theta), row.partition);
    EXPECT_EQ(approx.render(row.theta), row.partition);
    EXPECT_LT((project_monotone(row.theta).point - row.projection).norm(), 1e-15);
  }
  EXPECT_THROW(isotonic_partition_exact(vec({0.5, 1})), InvalidInput);
}

TEST(IsotonicPartition, InvariantsOnRandomGridInputs) {
  RandomStream rs(31, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rs.next_u64() % 10);
    Vector theta(n);
    for (Eigen::Index i = 0; i < n; ++i) theta(i) = static_cast<double>(rs.next_u64() % 17) / 4.0 - 2.0;
    const auto part = isotonic_partition(theta);
    check_partition_invariants(part, theta);
    const Vector scaled = 4.0 * theta;
    const auto exact = isotonic_partition_exact(scaled);
    ASSERT_EQ(exact.levels.size(), part.levels.size());
    for (std::size_t k = 0; k < part.levels.size(); ++k) {
      EXPECT_EQ(exact.levels[k].sub_blocks, part.levels[k].sub_blocks);
    }
  }
}

TEST(LowSigmaIsotonic, ReferenceRowLimitsAreExact) {
  for (const auto& row : reference_rows()) {
    const auto v = low_sigma_limit_isotonic(row.theta, options(1));
    ASSERT_TRUE(v.exact.has_value());
    EXPECT_EQ(*v.exact, row.limit) << row.partition;
    EXPECT_EQ(v.kind, LimitKind::ClosedForm);
  }
}

TEST(LowSigmaIsotonic, MisspecifiedBelowWellSpecified) {
  for (const auto& row : reference_rows()) {
    const auto mis = low_sigma_limit_isotonic(row.theta, options(1));
    const auto well = low_sigma_limit_isotonic(row.projection, options(1));
    if (row.theta == row.projection) {
      EXPECT_EQ(*mis.exact, *well.exact);
    } else {
      EXPECT_LT(*mis.exact, *well.exact) << row.partition;
    }
  }
}

TEST(LowSigmaIsotonic, UnequalSubBlocksUseMonteCarlo) {
  const int n = 20;
  Vector theta = Vector::Zero(n);
  theta.segment(1, (n - 2) / 2).setOnes();
  theta.segment(1 + (n - 2) / 2, (n - 2) / 2).setConstant(-1.0);
  const auto v = low_sigma_limit_isotonic(theta, options(2));
  EXPECT_EQ(v.kind, LimitKind::MonteCarlo);
  EXPECT_NEAR(v.value, 2.0, 0.1);
  EXPECT_GT(v.std_error, 0.0);
  // Sub-blocks (1,-1),(0): two blocks of unequal size give a half-space.
  const auto half = low_sigma_limit_isotonic(vec({1, -1, 0}), options(3));
  ASSERT_TRUE(half.exact.has_value());
  EXPECT_EQ(*half.exact, Rational(3, 2));
}

TEST(LowSigmaPolyhedral, Examples) {
  const auto a = low_sigma_limit_polyhedral(ConstraintSet::orthant(2), vec({1, -1}), options(4));
  EXPECT_NEAR(a.value, 1.0, 3 * a.std_error + 1e-12);
  const auto b = low_sigma_limit_polyhedral(ConstraintSet::orthant(2), vec({-1, -1}), options(5));
  EXPECT_NEAR(b.value, 0.0, 1e-12);
  const auto c = low_sigma_limit_polyhedral(ConstraintSet::monotone(6), vec({5, 3, 1, -1, -3, -5}), options(6));
  EXPECT_NEAR(c.value, 1.0, 3 * c.std_error);
  EXPECT_THROW(low_sigma_limit_polyhedral(ConstraintSet::ball(2), vec({2, 0}), options(1)), Unsupported);
}

TEST(LowSigmaPolyhedral, AgreesWithIsotonicFormula) {
  for (const auto& row : reference_rows()) {
    const auto mc = low_sigma_limit_polyhedral(ConstraintSet::monotone(6), row.theta, options(7));
    EXPECT_NEAR(mc.value, row.limit.to_double(), 3 * mc.std_error) << row.partition;
  }
}

TEST(LowSigmaOrthant, Examples) {
  EXPECT_EQ(low_sigma_limit_orthant(vec({1, -1})), 1.0);
  EXPECT_EQ(low_sigma_limit_orthant(vec({0, -1})), 0.5);
  EXPECT_EQ(low_sigma_limit_orthant(vec({1, 2, 3})), 3.0);
}

TEST(BallLimits, Examples) {
  const auto b = ball_limits(vec({2, 0, 0}));
  EXPECT_DOUBLE_EQ(b.misspecified, 0.5);
  EXPECT_DOUBLE_EQ(b.excess, 1.0);
  const auto one = ball_limits(vec({5}));
  EXPECT_EQ(one.misspecified, 0.0);
  EXPECT_EQ(one.excess, 0.0);
  const auto edge = ball_limits(vec({1 + 1e-9, 0, 0}));
  EXPECT_NEAR(edge.misspecified, 2.0, 1e-8);
  EXPECT_NEAR(edge.excess, 2.0, 1e-8);
  EXPECT_THROW(ball_limits(vec({0.5, 0.5})), InvalidInput);
}

TEST(BellecBound, Examples) {
  EXPECT_EQ(*bellec_bound(ConstraintSet::ball(3), vec({2, 0, 0}), options(1)).exact, Rational(5, 2));
  EXPECT_EQ(*bellec_bound(ConstraintSet::monotone(6), Vector::Zero(6), options(1)).exact, Rational(49, 20));
  EXPECT_EQ(*bellec_bound(ConstraintSet::orthant(3), vec({1, 1, -1}), options(1)).exact, Rational(5, 2));
  EXPECT_EQ(*bellec_bound(ConstraintSet::parabola_epigraph(), vec({1, 0}), options(1)).exact, Rational(3, 2));
}

TEST(BellecBound, ClosedFormsMatchTangentConeMonteCarlo) {
  Matrix box(4, 2);
  box << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto poly = bellec_bound(ConstraintSet::polyhedron(box, vec({1, 0, 1, 0})), vec({2, -1}), options(8));
  EXPECT_NEAR(poly.value, 1.0, 3 * poly.std_error);
  const auto block = bellec_bound(ConstraintSet::block_monotone({1, 3, 2}), vec({3, 0, 1, -1, 5, 5}), options(9));
  // Levels: blocks 1 and 2 pool, block 3 separate -> S_{1,3} x S_{2}: 3/2 + 1.
  ASSERT_TRUE(block.exact.has_value());
  EXPECT_EQ(*block.exact, Rational(5, 2));
  Matrix d(2, 3);
  d << 1, -1, 0, 0, 1, -1;
  const auto cone = bellec_bound(ConstraintSet::polyhedral_cone(d), vec({0, 0, 0}), options(10));
  EXPECT_NEAR(cone.value, 11.0 / 6.0, 3 * cone.std_error);
}

TEST(HighSigmaLimit, Examples) {
  const auto orth = high_sigma_limit(ConstraintSet::orthant(3), options(1));
  EXPECT_EQ(orth.value, 1.5);
  EXPECT_TRUE(orth.condition_verified);
  const auto ball = high_sigma_limit(ConstraintSet::ball(4), options(1));
  EXPECT_EQ(ball.value, 0.0);
  EXPECT_TRUE(ball.condition_verified);
  const auto para = high_sigma_limit(ConstraintSet::parabola_epigraph(), options(1));
  EXPECT_EQ(para.kind, LimitKind::Unknown);
  EXPECT_EQ(para.value, 0.5);
  const auto mono = high_sigma_limit(ConstraintSet::monotone(6), options(1));
  EXPECT_FALSE(mono.condition_verified);
  EXPECT_EQ(*mono.exact, Rational(49, 20));
}

TEST(LimitProperties, JumpForOrthantFixtures) {
  const std::vector<Vector> fixtures{vec({1, 1, -1}), vec({1, -1, -1}), vec({-1, -1, -1}), vec({1, 1, -0.01}),
                                     vec({0.5, -2, 3})};
  std::uint64_t seed = 40;
  for (const auto& theta : fixtures) {
    const auto low = low_sigma_limit_polyhedral(ConstraintSet::orthant(3), theta, options(seed++));
    const auto bound = bellec_bound(ConstraintSet::orthant(3), theta, options(seed++));
    EXPECT_LT(low.value, bound.value - 3 * std::hypot(low.std_error, bound.std_error)) << theta.transpose();
    EXPECT_NEAR(low.value, low_sigma_limit_orthant(theta), 3 * low.std_error + 1e-12);
  }
}

TEST(LimitProperties, FaceBelowTangentCone) {
  RandomStream rs(55, 0);
  Matrix a(4, 3);
  for (Eigen::Index j = 0; j < 3; ++j) a.col(j) = gaussian_draw(rs, 4);
  const auto cone = ConstraintSet::polyhedral_cone(a);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector theta = 2.0 * gaussian_draw(rs, 3);
    const auto low = low_sigma_limit_polyhedral(cone, theta, options(60 + trial, 20000));
    const auto bound = bellec_bound(cone, theta, options(70 + trial, 20000));
    EXPECT_LE(low.value, bound.value + 3 * std::hypot(low.std_error, bound.std_error));
  }
}

TEST(LimitReport, MonotoneRendering) {
  const auto report = limit_report(ConstraintSet::monotone(6), vec({0, -2, 1, -3, 2, 2}), options(1));
  const std::string text = report.render();
  EXPECT_NE(text.find("low_sigma = 3\n"), std::string::npos) << text;
  EXPECT_NE(text.find("low_sigma_exact = 3\n"), std::string::npos);
  EXPECT_NE(text.find("partition = [(0,-2),(1,-3)],[(2),(2)]\n"), std::string::npos);
  EXPECT_NE(text.find("high_sigma_condition = unverified"), std::string::npos);
  EXPECT_FALSE(report.well_specified);
}

TEST(LimitReport, BallAndWellSpecified) {
  const auto ball = limit_report(ConstraintSet::ball(3), vec({2, 0, 0}), options(1));
  EXPECT_EQ(ball.low_sigma.value, 0.5);
  ASSERT_TRUE(ball.low_sigma_excess.has_value());
  EXPECT_EQ(ball.low_sigma_excess->value, 1.0);
  const auto well = limit_report(ConstraintSet::orthant(3), vec({1, 0, 2}), options(1));
  EXPECT_TRUE(well.well_specified);
  EXPECT_EQ(well.low_sigma.value, well.bellec.value);
  const auto para = limit_report(ConstraintSet::parabola_epigraph(), vec({1, 0}), options(1));
  EXPECT_NE(para.render().find("high_sigma = unknown\nhigh_sigma_reference = 0.5"), std::string::npos);
  EXPECT_THROW(limit_report(ConstraintSet::orthant(3), vec({1, 2}), options(1)), InvalidInput);
}
