#include "conerisk/verify.hpp"

#include "conerisk/errors.hpp"
#include "conerisk/geometry.hpp"
#include "conerisk/limits.hpp"
#include "conerisk/random.hpp"
#include "conerisk/risklab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace conerisk {

namespace {

class Checker {
 public:
  Checker(CriterionResult& out, double tol_scale) : out_(out), scale_(tol_scale) {}

  // |estimate - target| <= tol (scaled).
  void near(const std::string& label, double estimate, double target, double tol) {
    const double t = tol * scale_;
    record(label + ": value " + format_real(estimate) + " target " + format_real(target) + " tol " + format_real(t),
           std::abs(estimate - target) <= t);
  }

  // lhs - rhs > margin (scaled).
  void exceeds(const std::string& label, double lhs, double rhs, double margin) {
    const double m = margin / std::max(scale_, 1e-300);
    record(label + ": " + format_real(lhs) + " - " + format_real(rhs) + " > " + format_real(m), lhs - rhs > m);
  }

  // value <= bound + tol (scaled).
  void at_most(const std::string& label, double value, double bound, double tol) {
    const double t = tol * scale_;
    record(label + ": " + format_real(value) + " <= " + format_real(bound) + " + " + format_real(t), value <= bound + t);
  }

  void count_zero(const std::string& label, std::size_t violations, std::size_t checked) {
    record(label + ": " + std::to_string(violations) + " violations in " + std::to_string(checked) + " checks",
           violations == 0 && checked > 0);
  }

  void equal(const std::string& label, const std::string& value, const std::string& expected) {
    record(label + ": " + value + " expected " + expected, value == expected);
  }

  double scale() const { return scale_; }

 private:
  void record(const std::string& text, bool ok) {
    out_.lines.push_back((ok ? "ok   " : "FAIL ") + text);
    if (!ok) out_.passed = false;
  }

  CriterionResult& out_;
  double scale_;
};

McOptions mc(std::size_t samples, std::uint64_t seed, int workers) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  o.workers = workers;
  return o;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

Matrix difference_matrix(Eigen::Index n) {
  Matrix a = Matrix::Zero(n - 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i, i) = 1.0;
    a(i, i + 1) = -1.0;
  }
  return a;
}

Matrix random_matrix(RandomStream& rs, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = gaussian_draw(rs, rows);
  return m;
}

Matrix rows_of(const Matrix& a, const IndexList& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), a.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = a.row(idx[r]);
  return out;
}

Matrix unit_box_rows(Eigen::Index n) {
  Matrix a(2 * n, n);
  a << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  return a;
}

Vector unit_box_rhs(Eigen::Index n) {
  Vector b(2 * n);
  b << Vector::Ones(n), Vector::Zero(n);
  return b;
}

Vector integer_vector(RandomStream& rs, Eigen::Index n, int lo, int hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = lo + std::floor(rs.uniform() * (hi - lo + 1));
  }
  return v;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string row_label(const char* prefix, const Vector& theta) {
  return std::string(prefix) + " (" + format_vector(theta) + ")";
}

void criterion_table1_analytic(Checker& c) {
  const char* expected[] = {"49/20", "11/6", "1", "43/12", "3", "2"};
  const char* partitions[] = {"[(0),(0),(0),(0),(0),(0)]",       "[(1,-1),(1,-1),(1,-1)]",
                              "[(5,3,1,-1,-3,-5)]",              "[(-1),(-1),(-1),(-1)],[(2),(2)]",
                              "[(0,-2),(1,-3)],[(2),(2)]",       "[(0,0,-2,-2)],[(3,1)]"};
  const auto rows = table1_rows(0, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.equal(row_label("partition", rows[i].theta), rows[i].partition, partitions[i]);
    c.equal(row_label("limit", rows[i].theta), rows[i].limit.to_string(), expected[i]);
  }
}

void criterion_table1_simulated(Checker& c, std::uint64_t seed, int workers) {
  for (const auto& row : table1_rows(100000, seed, workers)) {
    c.near(row_label("m_norm(1e-3)", row.theta), row.simulated.m_norm, row.limit.to_double(),
           3.0 * row.simulated.m_se + 0.01);
  }
}

void criterion_orthant(Checker& c, std::uint64_t seed, int workers) {
  std::uint64_t k = 0;
  for (const double eps : {0.01, 0.1, 1.0}) {
    const Scenario s{ConstraintSet::orthant(3), vec({1, 1, -eps}), NoiseModel::gaussian(), {1e-3 * eps, 1e3},
                     100000, derive_seed(seed, k++), workers};
    const auto curve = simulate_risks(s);
    const std::string tag = "eps=" + short_real(eps);
    c.near(tag + " m_norm(1e-3 eps)", curve[0].m_norm, 2.0, 3.0 * curve[0].m_se + 0.01);
    c.near(tag + " m_norm(1e3)", curve[1].m_norm, 1.5, 3.0 * curve[1].m_se + 0.01);
  }
}

void criterion_ball(Checker& c, std::uint64_t seed, int workers) {
  std::uint64_t k = 0;
  for (const double eps : {0.01, 0.1, 1.0}) {
    const double r = 1.0 + eps;
    const Scenario s{ConstraintSet::ball(3), vec({r, 0, 0}), NoiseModel::gaussian(), {1e-4 * eps, 1e3},
                     100000, derive_seed(seed, k++), workers};
    const auto curve = simulate_risks(s);
    const auto& lo = curve[0];
    const auto& hi = curve[1];
    const std::string tag = "eps=" + short_real(eps);
    c.near(tag + " m_norm(1e-4 eps)", lo.m_norm, 2.0 / (r * r), 3.0 * lo.m_se + 0.01);
    c.near(tag + " e_norm(1e-4 eps)", lo.e_norm, 2.0 / r, 3.0 * lo.e_se + 0.01);
    c.near(tag + " m_norm(1e3)", hi.m_norm, 0.0, 3.0 * hi.m_se + 0.01);
    c.near(tag + " e_norm(1e3)", hi.e_norm, 0.0, 3.0 * hi.e_se + 0.01);
    if (eps == 1.0) c.exceeds(tag + " e_norm - m_norm", lo.e_norm, lo.m_norm, 3.0 * std::hypot(lo.m_se, lo.e_se));
  }
}

void criterion_statdim(Checker& c, std::uint64_t seed, int workers) {
  for (int m = 1; m <= 8; ++m) {
    const auto e = mc_statdim(ConstraintSet::monotone(m), mc(100000, derive_seed(seed, m), workers));
    c.near("delta(S^" + std::to_string(m) + ")", e.value, harmonic_number(m).to_double(), 3.0 * e.std_error);
  }
  Matrix half(1, 3);
  half << 0.3, -1.2, 0.5;
  const auto h = mc_statdim(ConstraintSet::polyhedral_cone(half), mc(100000, derive_seed(seed, 20), workers));
  c.near("delta(halfspace in R^3)", h.value, 2.5, 3.0 * h.std_error);

  const auto direct = mc_statdim(ConstraintSet::block_monotone({1, 18, 1}), mc(100000, derive_seed(seed, 21), workers));
  const auto embedded = mc_statdim(block_monotone_embedding({1, 18, 1}), mc(100000, derive_seed(seed, 22), workers));
  c.near("delta(S_{1,18,1}) vs embedding", direct.value, embedded.value,
         3.0 * std::hypot(direct.std_error, embedded.std_error));
  c.near("delta(S_{1,18,1})", direct.value, 2.0, 0.1);

  const auto wide = mc_statdim(block_monotone_embedding({398, 1, 1}), mc(100000, derive_seed(seed, 23), workers));
  c.near("delta(embedding S_{398,1,1})", wide.value, 1.75, 0.1);

  const auto two = mc_statdim(ConstraintSet::block_monotone({3, 5}), mc(100000, derive_seed(seed, 24), workers));
  c.near("delta(S_{3,5})", two.value, 1.5, 3.0 * two.std_error);
}

// argmin over u1 <= u2 <= u3 of sum w_j (u_j - y_j)^2: grid over (u1, u2),
// with u3 = max(u2, y3) exact for fixed u2.
Vector grid_weighted_isotonic(const Vector& y, const Vector& w, double step) {
  const double lo = y.minCoeff();
  const double hi = y.maxCoeff();
  const auto steps = static_cast<long>(std::ceil((hi - lo) / step));
  double best = std::numeric_limits<double>::infinity();
  Vector arg(3);
  for (long i = 0; i <= steps; ++i) {
    const double u1 = std::min(lo + static_cast<double>(i) * step, hi);
    const double f1 = w(0) * (u1 - y(0)) * (u1 - y(0));
    for (long j = i; j <= steps; ++j) {
      const double u2 = std::min(lo + static_cast<double>(j) * step, hi);
      const double u3 = std::max(u2, y(2));
      const double obj = f1 + w(1) * (u2 - y(1)) * (u2 - y(1)) + w(2) * (u3 - y(2)) * (u3 - y(2));
      if (obj < best) {
        best = obj;
        arg << u1, u2, u3;
      }
    }
  }
  return arg;
}

void criterion_projection_oracles(Checker& c, std::uint64_t seed) {
  RandomStream rs(seed, 0);
  double worst_polar = 0.0;
  double worst_dykstra = 0.0;
  std::size_t unconverged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Vector x = 2.0 * gaussian_draw(rs, n);
    const Matrix d = difference_matrix(n);
    const Vector pava = project_monotone(x).point;
    const auto dykstra = project_polyhedron(d, Vector::Zero(n - 1), x);
    if (!dykstra.converged) ++unconverged;
    worst_polar = std::max(worst_polar, (pava - project_polyhedral_cone(d, x).point).cwiseAbs().maxCoeff());
    worst_dykstra = std::max(worst_dykstra, (pava - dykstra.point).cwiseAbs().maxCoeff());
  }
  c.at_most("max |PAVA - polar NNLS| over 100 vectors", worst_polar, 0.0, 1e-6);
  c.at_most("max |PAVA - Dykstra| over 100 vectors", worst_dykstra, 0.0, 1e-6);
  c.count_zero("Dykstra non-convergence", unconverged, 100);

  double worst_weighted = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = 2.0 * Vector::NullaryExpr(3, [&](Eigen::Index) { return rs.uniform() - 0.5; });
    Vector w(3);
    for (Eigen::Index j = 0; j < 3; ++j) w(j) = 1.0 + std::floor(rs.uniform() * 5.0);
    const Vector pava = project_weighted_monotone(y, w);
    worst_weighted = std::max(worst_weighted, (pava - grid_weighted_isotonic(y, w, 2.5e-4)).cwiseAbs().maxCoeff());
  }
  c.at_most("max |weighted PAVA - grid QP| over 20 instances", worst_weighted, 0.0, 1e-3);
}

std::vector<ConstraintSet> property_sets(RandomStream& rs) {
  std::vector<ConstraintSet> sets{ConstraintSet::orthant(4), ConstraintSet::ball(3), ConstraintSet::monotone(5),
                                  ConstraintSet::block_monotone({2, 1, 2}),
                                  ConstraintSet::polyhedron(unit_box_rows(3), unit_box_rhs(3)),
                                  ConstraintSet::parabola_epigraph()};
  sets.push_back(ConstraintSet::polyhedral_cone(random_matrix(rs, 4, 3)));
  return sets;
}

void criterion_properties(Checker& c, std::uint64_t seed, int workers) {
  RandomStream rs(seed, 0);
  const double tol = 1e-8;

  {
    std::size_t bad = 0;
    std::size_t checked = 0;
    for (const auto& set : property_sets(rs)) {
      const Eigen::Index n = set.dim();
      for (int trial = 0; trial < 100; ++trial) {
        const Vector x = 2.0 * gaussian_draw(rs, n);
        const auto p = project(set, x);
        const double scale = std::max(1.0, x.squaredNorm());
        for (int k = 0; k < 5; ++k) {
          const Vector z = project(set, 3.0 * gaussian_draw(rs, n)).point;
          if ((z - p.point).dot(p.residual) > tol * c.scale() * scale) ++bad;
          ++checked;
        }
        if (set.is_cone()) {
          if (std::abs(p.point.dot(p.residual)) > tol * c.scale() * scale) ++bad;
          ++checked;
        }
      }
    }
    c.count_zero("optimality conditions", bad, checked);
  }

  {
    std::size_t bad = 0;
    std::size_t checked = 0;
    const auto grid = log_sigma_grid(1e-3, 1e3, 7);
    const std::vector<std::pair<ConstraintSet, Vector>> fixtures{
        {ConstraintSet::monotone(6), vec({0, -2, 1, -3, 2, 2})},
        {ConstraintSet::orthant(3), vec({1, 1, -1})},
        {ConstraintSet::ball(3), vec({2, 0, 0})},
        {ConstraintSet::polyhedron(unit_box_rows(3), unit_box_rhs(3)), vec({2, 0.5, -1})},
        {ConstraintSet::parabola_epigraph(), vec({1, 0})},
    };
    std::uint64_t k = 0;
    for (const auto& [set, theta] : fixtures) {
      Scenario s{set, theta, NoiseModel::gaussian(), grid, 200, derive_seed(seed, 100 + k++), workers};
      // Zero tolerance scale means the chain must hold with no slack at all.
      bad += per_sample_chain_check(s);
      checked += s.samples * grid.size();
    }
    if (c.scale() == 0.0) ++bad;
    c.count_zero("per-sample risk chain", bad, checked);
  }

  {
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 + trial % 5;
      const Matrix a = random_matrix(rs, 1 + trial % 6, n);
      const Vector x = gaussian_draw(rs, n);
      const auto p = project_polyhedral_cone(a, x);
      const double t = tol * c.scale() * std::max(1.0, x.squaredNorm());
      const Vector lambda = nnls(a.transpose(), p.residual);
      if (std::abs(x.squaredNorm() - p.point.squaredNorm() - p.residual.squaredNorm()) > t ||
          std::abs(p.point.dot(p.residual)) > t || (a * p.point).maxCoeff() > t ||
          (a.transpose() * lambda - p.residual).norm() > t) {
        ++bad;
      }
    }
    c.count_zero("Moreau decomposition", bad, 100);
  }

  {
    // Misspecified integer theta against the monotone cone and the unit cube;
    // projections of points within 1e-4 |theta| stay in the hyperplane.
    std::size_t bad = 0;
    std::size_t inputs = 0;
    const std::vector<ConstraintSet> sets{ConstraintSet::monotone(6),
                                          ConstraintSet::polyhedron(unit_box_rows(3), unit_box_rhs(3))};
    while (inputs < 100) {
      const auto& set = sets[inputs % 2];
      const Vector theta = integer_vector(rs, set.dim(), -3, 3);
      const Vector p0 = project(set, theta).point;
      const Vector v = theta - p0;
      if (v.norm() == 0.0) continue;
      ++inputs;
      const double r = 1e-4 * theta.norm();
      for (int k = 0; k < 20; ++k) {
        Vector dir = gaussian_draw(rs, set.dim());
        dir *= r * std::pow(rs.uniform(), 1.0 / static_cast<double>(set.dim())) / dir.norm();
        const Vector d = project(set, theta + dir).point - p0;
        if (std::abs(d.dot(v)) > 1e-10 * c.scale() * std::max(1.0, v.norm())) ++bad;
      }
    }
    c.count_zero("hyperplane property at radius 1e-4 |theta|", bad, inputs * 20);
  }

  {
    std::size_t bad = 0;
    const std::vector<Matrix> cones{-Matrix::Identity(3, 3), difference_matrix(5), random_matrix(rs, 4, 3),
                                    random_matrix(rs, 6, 3)};
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix& a = cones[static_cast<std::size_t>(trial) % cones.size()];
      const Eigen::Index n = a.cols();
      const Vector y = 2.0 * gaussian_draw(rs, n);
      const FaceRep face = residual_face(a, y);
      const Matrix a_eq = rows_of(a, face.equality_indices);
      const Matrix a_in = rows_of(a, face.inequality_indices);
      const double t = tol * c.scale();
      bool ok = (face.normal - project_polyhedral_cone(a, y).residual).norm() <= t &&
                rowspace_membership(face.normal, a_eq, std::max(t, 1e-300));
      for (std::size_t k = 0; ok && k < face.equality_indices.size(); ++k) {
        IndexList smaller = face.equality_indices;
        smaller.erase(smaller.begin() + static_cast<long>(k));
        if (rowspace_membership(face.normal, rows_of(a, smaller))) ok = false;
      }
      const Vector x = 2.0 * gaussian_draw(rs, n);
      const Vector u = project_cone_with_equalities(a_in, a_eq, x).point;
      const Vector w = project_cone_with_equality(a, face.normal, x).point;
      const double s = std::max(1.0, x.norm());
      ok = ok && (a * u).maxCoeff() <= t * s && std::abs(face.normal.dot(u)) <= t * s &&
           (a_eq.rows() == 0 || (a_eq * w).cwiseAbs().maxCoeff() <= t * s) &&
           // Both descriptions define the same cone, so the projections agree.
           (u - w).norm() <= 1e-6 * c.scale() * s;
      if (!ok) ++bad;
    }
    c.count_zero("face description and minimal index set", bad, 100);
  }

  for (Eigen::Index n = 1; n <= 10; ++n) {
    Matrix m = Matrix::Identity(n, n);
    for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = -1.0;
    const auto f = qr_positive_diag(m);
    c.near("r_nn for n=" + std::to_string(n), f.r(n - 1, n - 1), 1.0 / std::sqrt(static_cast<double>(n)), 1e-10);
  }

  {
    // |Proj_{C - theta0}(x)|^2 >= |Proj_K(x)|^2 with K the core cone.
    std::size_t bad = 0;
    std::size_t checked = 0;
    struct Case {
      ConstraintSet set;
      std::function<Vector(const Vector&)> core;
    };
    const std::vector<Case> cases{
        {ConstraintSet::orthant(3), [](const Vector& x) { return project_orthant(x).point; }},
        {ConstraintSet::monotone(4), [](const Vector& x) { return project_monotone(x).point; }},
        {ConstraintSet::ball(3), [](const Vector& x) { return Vector(Vector::Zero(x.size())); }},
        {ConstraintSet::polyhedron(unit_box_rows(2), unit_box_rhs(2)),
         [](const Vector& x) { return Vector(Vector::Zero(x.size())); }},
        {ConstraintSet::parabola_epigraph(), [](const Vector& x) { return vec({0.0, std::max(x(1), 0.0)}); }},
    };
    for (const auto& cs : cases) {
      const Eigen::Index n = cs.set.dim();
      for (int trial = 0; trial < 100; ++trial) {
        const Vector theta0 = project(cs.set, 2.0 * gaussian_draw(rs, n)).point;
        const Vector x = 3.0 * gaussian_draw(rs, n);
        const double gap = (project(cs.set, x + theta0).point - theta0).squaredNorm() - cs.core(x).squaredNorm();
        if (gap < -tol * c.scale() * std::max(1.0, x.squaredNorm())) ++bad;
        ++checked;
      }
    }
    c.count_zero("boundedness gap nonnegative", bad, checked);
  }
}

void criterion_jump(Checker& c, std::uint64_t seed, int workers) {
  std::uint64_t k = 0;
  for (const double eps : {0.01, 0.1, 1.0}) {
    const auto set = ConstraintSet::orthant(3);
    const Vector theta = vec({1, 1, -eps});
    const auto low = low_sigma_limit_polyhedral(set, theta, mc(100000, derive_seed(seed, k++), workers));
    const auto tangent = tangent_cone(set, project(set, theta).point);
    const auto bellec =
        mc_statdim(ConstraintSet::polyhedral_cone(tangent.a_active), mc(100000, derive_seed(seed, k++), workers));
    const std::string tag = "eps=" + short_real(eps);
    c.exceeds(tag + " bellec - low_sigma", bellec.value, low.value, 3.0 * std::hypot(low.std_error, bellec.std_error));
  }
}

void criterion_epigraph(Checker& c, std::uint64_t seed, int workers) {
  const Scenario s{ConstraintSet::parabola_epigraph(), vec({1, 0}), NoiseModel::gaussian(), {1e3}, 4000000, seed,
                   workers};
  const auto p = simulate_risks(s).front();
  c.exceeds("m_norm(1e3) - 0.5", p.m_norm, 0.5, 3.0 * p.m_se);
}

// Reduced workload whose text must not depend on the worker count.
std::string determinism_probe(std::uint64_t seed, int workers) {
  std::string out;
  const Scenario s{ConstraintSet::orthant(3), vec({1, 1, -0.1}), NoiseModel::gaussian(), log_sigma_grid(1e-3, 1e3, 5),
                   5000, seed, workers};
  out += sweep_csv(s, simulate_risks(s));
  out += table1_text(table1_rows(3000, derive_seed(seed, 1), workers), true);
  const auto e = mc_statdim(block_monotone_embedding({5, 2, 3}), mc(5000, derive_seed(seed, 2), workers));
  out += format_real(e.value) + "," + format_real(e.std_error) + "\n";
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << v;
  return s.str();
}

void criterion_determinism(Checker& c, std::uint64_t seed) {
  const std::string a = determinism_probe(seed, 8);
  const std::string b = determinism_probe(seed, 8);
  const std::string single = determinism_probe(seed, 1);
  c.equal("repeat run digest", hex(fnv1a(b)), hex(fnv1a(a)));
  c.equal("1 worker vs 8 workers digest", hex(fnv1a(single)), hex(fnv1a(a)));
}

const char* title(int id) {
  switch (id) {
    case 1: return "isotonic limits, analytic";
    case 2: return "isotonic limits, simulated at sigma=1e-3";
    case 3: return "orthant risk curve endpoints";
    case 4: return "ball limits and risk separation";
    case 5: return "statistical dimension oracles";
    case 6: return "projection oracle equivalence";
    case 7: return "property suites";
    case 8: return "jump below the tangent-cone bound";
    case 9: return "epigraph high-noise counterexample";
    case 10: return "determinism";
    default: throw InvalidInput("unknown criterion " + std::to_string(id));
  }
}

}  // namespace

CriterionResult verify_criterion(int id, const VerifyOptions& options) {
  CriterionResult result;
  result.id = id;
  result.title = title(id);
  Checker c(result, options.tol_scale);
  const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(id));
  const int w = options.workers;
  try {
    switch (id) {
      case 1: criterion_table1_analytic(c); break;
      case 2: criterion_table1_simulated(c, seed, w); break;
      case 3: criterion_orthant(c, seed, w); break;
      case 4: criterion_ball(c, seed, w); break;
      case 5: criterion_statdim(c, seed, w); break;
      case 6: criterion_projection_oracles(c, seed); break;
      case 7: criterion_properties(c, seed, w); break;
      case 8: criterion_jump(c, seed, w); break;
      case 9: criterion_epigraph(c, seed, w); break;
      case 10: criterion_determinism(c, seed); break;
    }
  } catch (const NumericalError& e) {
    result.passed = false;
    result.lines.push_back(std::string("FAIL error: ") + e.what());
  }
  return result;
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.seed = options.seed;
  for (int id = 1; id <= kCriterionCount; ++id) report.criteria.push_back(verify_criterion(id, options));
  return report;
}

bool VerifyReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& r) { return r.passed; });
}

std::string VerifyReport::render() const {
  std::ostringstream out;
  out << "seed = " << seed << "\n";
  int passed_count = 0;
  for (const auto& r : criteria) {
    out << "criterion " << r.id << " " << (r.passed ? "PASS" : "FAIL") << " " << r.title << "\n";
    for (const auto& line : r.lines) out << "  " << line << "\n";
    passed_count += r.passed ? 1 : 0;
  }
  out << "summary = " << passed_count << "/" << criteria.size() << " passed\n";
  return out.str();
}

}  // namespace conerisk
