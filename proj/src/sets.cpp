#include "conerisk/sets.hpp"

#include "conerisk/errors.hpp"
#include "pava.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace conerisk {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ProjectionResult make_result(const Vector& x, Vector point, int iterations = 0, bool converged = true) {
  ProjectionResult r;
  r.residual = x - point;
  r.point = std::move(point);
  r.iterations = iterations;
  r.converged = converged;
  return r;
}

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite input");
}

// Rejects zero rows and pairs of rows that are (positive or negative) scalar
// multiples of each other. Rows may carry an appended offset column.
void check_rows(const Matrix& rows, const char* what) {
  if (!rows.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
  const Vector norms = rows.rowwise().norm();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (norms(i) == 0.0) throw InvalidInput(std::string(what) + ": zero constraint row");
    for (Eigen::Index j = 0; j < i; ++j) {
      const double cosine = rows.row(i).dot(rows.row(j)) / (norms(i) * norms(j));
      if (std::abs(cosine) >= 1.0 - 1e-12) {
        throw InvalidInput(std::string(what) + ": rows " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                           " are scalar multiples of each other");
      }
    }
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

Eigen::Index parse_count(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || value < 1) {
    throw InvalidInput("invalid positive count '" + text + "' in set spec '" + spec + "'");
  }
  return static_cast<Eigen::Index>(value);
}

// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs.
template <class F, class DF>
double safeguarded_newton(F f, DF df, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double ft = f(t);
    if (ft == 0.0) return t;
    if ((ft < 0.0) == (flo < 0.0)) {
      lo = t;
      flo = ft;
    } else {
      hi = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) return t;
    const double slope = df(t);
    double next = slope != 0.0 ? t - ft / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) return t;
    t = next;
  }
  throw NumericalError("parabola projection: root finder did not converge");
}

}  // namespace

ConstraintSet ConstraintSet::orthant(Eigen::Index n) {
  if (n < 1) throw InvalidInput("orthant: dimension must be >= 1");
  return ConstraintSet(Orthant{n});
}

ConstraintSet ConstraintSet::ball(Eigen::Index n) {
  if (n < 1) throw InvalidInput("ball: dimension must be >= 1");
  return ConstraintSet(Ball{n});
}

ConstraintSet ConstraintSet::monotone(Eigen::Index n) {
  if (n < 1) throw InvalidInput("monotone: dimension must be >= 1");
  return ConstraintSet(MonotoneCone{n});
}

ConstraintSet ConstraintSet::block_monotone(std::vector<Eigen::Index> sizes) {
  if (sizes.empty()) throw InvalidInput("blockmonotone: at least one block required");
  for (const auto s : sizes) {
    if (s < 1) throw InvalidInput("blockmonotone: block sizes must be >= 1");
  }
  return ConstraintSet(BlockMonotoneCone{std::move(sizes)});
}

ConstraintSet ConstraintSet::polyhedral_cone(Matrix a) {
  if (a.cols() < 1) throw InvalidInput("cone: constraint matrix needs at least one column");
  check_rows(a, "cone");
  return ConstraintSet(PolyhedralCone{std::move(a)});
}

ConstraintSet ConstraintSet::whole_space(Eigen::Index n) {
  if (n < 1) throw InvalidInput("whole space: dimension must be >= 1");
  return ConstraintSet(PolyhedralCone{Matrix(0, n)});
}

ConstraintSet ConstraintSet::polyhedron(Matrix a, Vector b) {
  if (a.cols() < 1) throw InvalidInput("polyhedron: constraint matrix needs at least one column");
  if (a.rows() != b.size()) throw InvalidInput("polyhedron: A and b have different row counts");
  Matrix augmented(a.rows(), a.cols() + 1);
  augmented << a, b;
  check_rows(augmented, "polyhedron");
  return ConstraintSet(Polyhedron{std::move(a), std::move(b)});
}

ConstraintSet ConstraintSet::parabola_epigraph() { return ConstraintSet(ParabolaEpigraph{}); }

ConstraintSet ConstraintSet::parse(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  std::map<std::string, std::string> args;
  if (colon != std::string::npos) {
    std::string key;
    for (const auto& token : split(spec.substr(colon + 1), ',')) {
      const std::size_t eq = token.find('=');
      if (eq != std::string::npos) {
        key = token.substr(0, eq);
        if (args.count(key)) throw InvalidInput("duplicate key '" + key + "' in set spec '" + spec + "'");
        args[key] = token.substr(eq + 1);
      } else if (!key.empty()) {
        args[key] += "," + token;
      } else {
        throw InvalidInput("malformed set spec '" + spec + "'");
      }
    }
  }
  auto take = [&](const std::string& key) {
    const auto it = args.find(key);
    if (it == args.end()) throw InvalidInput("set spec '" + spec + "' is missing '" + key + "='");
    std::string value = it->second;
    args.erase(it);
    return value;
  };
  auto finish = [&](ConstraintSet set) {
    if (!args.empty()) throw InvalidInput("unknown key '" + args.begin()->first + "' in set spec '" + spec + "'");
    return set;
  };

  if (family == "orthant") return finish(orthant(parse_count(take("n"), spec)));
  if (family == "ball") return finish(ball(parse_count(take("n"), spec)));
  if (family == "monotone") return finish(monotone(parse_count(take("n"), spec)));
  if (family == "blockmonotone") {
    std::vector<Eigen::Index> sizes;
    for (const auto& s : split(take("sizes"), ',')) sizes.push_back(parse_count(s, spec));
    return finish(block_monotone(std::move(sizes)));
  }
  if (family == "cone") return finish(polyhedral_cone(read_csv_matrix(take("A"))));
  if (family == "polyhedron") {
    Matrix a = read_csv_matrix(take("A"));
    Vector b = read_csv_vector(take("b"));
    return finish(polyhedron(std::move(a), std::move(b)));
  }
  if (family == "parabola") return finish(parabola_epigraph());
  throw InvalidInput("unknown set family '" + family + "' in spec '" + spec + "'");
}

Eigen::Index ConstraintSet::dim() const {
  return std::visit(Overloaded{
                        [](const Orthant& s) { return s.n; },
                        [](const Ball& s) { return s.n; },
                        [](const MonotoneCone& s) { return s.n; },
                        [](const BlockMonotoneCone& s) {
                          Eigen::Index n = 0;
                          for (const auto k : s.sizes) n += k;
                          return n;
                        },
                        [](const PolyhedralCone& s) { return s.a.cols(); },
                        [](const Polyhedron& s) { return s.a.cols(); },
                        [](const ParabolaEpigraph&) { return Eigen::Index{2}; },
                    },
                    kind_);
}

bool ConstraintSet::is_cone() const {
  return std::holds_alternative<Orthant>(kind_) || std::holds_alternative<MonotoneCone>(kind_) ||
         std::holds_alternative<BlockMonotoneCone>(kind_) || std::holds_alternative<PolyhedralCone>(kind_);
}

std::string ConstraintSet::family() const {
  static const char* const names[] = {"orthant", "ball", "monotone", "blockmonotone", "cone", "polyhedron", "parabola"};
  return names[kind_.index()];
}

ProjectionResult project_orthant(const Vector& x) {
  require_finite(x, "project_orthant");
  return make_result(x, x.cwiseMax(0.0));
}

ProjectionResult project_ball(const Vector& x) {
  require_finite(x, "project_ball");
  const double norm = x.norm();
  return make_result(x, norm > 1.0 ? Vector(x / norm) : x);
}

Vector project_weighted_monotone(const Vector& y, const Vector& w) {
  if (y.size() != w.size()) throw InvalidInput("project_weighted_monotone: y and w differ in length");
  require_finite(y, "project_weighted_monotone");
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (!(w(j) > 0.0) || !std::isfinite(w(j))) {
      throw InvalidInput("project_weighted_monotone: weights must be positive");
    }
  }
  const std::vector<double> yv(y.data(), y.data() + y.size());
  const std::vector<double> wv(w.data(), w.data() + w.size());
  Vector out(y.size());
  for (const auto& block : detail::pava(yv, wv)) {
    out.segment(static_cast<Eigen::Index>(block.start), static_cast<Eigen::Index>(block.length))
        .setConstant(block.value);
  }
  return out;
}

ProjectionResult project_monotone(const Vector& x) {
  return make_result(x, project_weighted_monotone(x, Vector::Ones(x.size())));
}

ProjectionResult project_block_monotone(const Vector& x, const std::vector<Eigen::Index>& sizes) {
  require_finite(x, "project_block_monotone");
  Eigen::Index total = 0;
  for (const auto s : sizes) {
    if (s < 1) throw InvalidInput("project_block_monotone: block sizes must be >= 1");
    total += s;
  }
  if (total != x.size()) throw InvalidInput("project_block_monotone: block sizes do not sum to the dimension");
  const auto m = static_cast<Eigen::Index>(sizes.size());
  Vector means(m);
  Vector weights(m);
  Eigen::Index offset = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index len = sizes[static_cast<std::size_t>(j)];
    means(j) = x.segment(offset, len).mean();
    weights(j) = static_cast<double>(len);
    offset += len;
  }
  const Vector levels = project_weighted_monotone(means, weights);
  Vector point(x.size());
  offset = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Eigen::Index len = sizes[static_cast<std::size_t>(j)];
    point.segment(offset, len).setConstant(levels(j));
    offset += len;
  }
  return make_result(x, std::move(point));
}

ProjectionResult project_polyhedral_cone(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw InvalidInput("project_polyhedral_cone: dimension mismatch");
  require_finite(x, "project_polyhedral_cone");
  if (a.rows() == 0) return make_result(x, x);
  NnlsInfo info;
  const Vector lambda = nnls(a.transpose(), x, &info);
  Vector point = x - a.transpose() * lambda;
  return make_result(x, std::move(point), info.pivots, true);
}

ConeFaceProjector::ConeFaceProjector(const Matrix& a, const Matrix& e)
    : dim_(std::max(a.cols(), e.cols())), has_equalities_(e.rows() > 0) {
  if ((a.rows() > 0 && a.cols() != dim_) || (e.rows() > 0 && e.cols() != dim_)) {
    throw InvalidInput("cone face projection: dimension mismatch");
  }
  if (!a.allFinite() || !e.allFinite()) throw InvalidInput("cone face projection: non-finite constraint");
  if (!has_equalities_) {
    reduced_ = a.rows() > 0 ? a : Matrix(0, dim_);
    return;
  }
  // The face lies in L = ker E, and projecting onto a subset of L factors
  // through the projection onto L, so work in an orthonormal basis of L.
  Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > cutoff ? 1 : 0;
  basis_ = svd.matrixV().rightCols(dim_ - rank);
  reduced_ = a.rows() > 0 ? Matrix(a * basis_) : Matrix(0, basis_.cols());
}

ProjectionResult ConeFaceProjector::operator()(const Vector& x) const {
  if (x.size() != dim_) throw InvalidInput("cone face projection: dimension mismatch");
  require_finite(x, "cone face projection");
  if (!has_equalities_) return project_polyhedral_cone(reduced_, x);
  if (basis_.cols() == 0) return make_result(x, Vector::Zero(dim_));
  const Vector coords = basis_.transpose() * x;
  if (reduced_.rows() == 0) return make_result(x, basis_ * coords);
  NnlsInfo info;
  const Vector reduced_point = coords - reduced_.transpose() * nnls(reduced_.transpose(), coords, &info);
  return make_result(x, basis_ * reduced_point, info.pivots, true);
}

ProjectionResult project_cone_with_equalities(const Matrix& a, const Matrix& e, const Vector& x) {
  return ConeFaceProjector(a, e)(x);
}

ProjectionResult project_cone_with_equality(const Matrix& a, const Vector& v, const Vector& x) {
  if (v.size() != x.size()) throw InvalidInput("project_cone_with_equality: dimension mismatch");
  if (v.norm() == 0.0) return project_polyhedral_cone(a, x);
  return project_cone_with_equalities(a, v.transpose(), x);
}

ProjectionResult project_polyhedron(const Matrix& a, const Vector& b, const Vector& x) {
  if (a.cols() != x.size() || a.rows() != b.size()) throw InvalidInput("project_polyhedron: dimension mismatch");
  require_finite(x, "project_polyhedron");
  const Eigen::Index m = a.rows();
  if (m == 0) return make_result(x, x);
  const Vector row_sq = a.rowwise().squaredNorm();
  const double scale = std::max(1.0, x.norm());
  const double violation_tol = 1e-8 * scale;
  const double change_tol = 1e-10 * scale;
  constexpr int kMaxSweeps = 100000;

  auto max_violation = [&](const Vector& u) { return (a * u - b).maxCoeff(); };

  Vector u = x;
  Matrix increments = Matrix::Zero(x.size(), m);
  int sweeps = 0;
  bool converged = false;
  while (sweeps < kMaxSweeps) {
    ++sweeps;
    const Vector before = u;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector y = u + increments.col(i);
      const double excess = a.row(i).dot(y) - b(i);
      u = excess > 0.0 ? Vector(y - (excess / row_sq(i)) * a.row(i).transpose()) : y;
      increments.col(i) = y - u;
    }
    if (max_violation(u) < violation_tol && (u - before).norm() < change_tol) {
      converged = true;
      break;
    }
  }

  // Active-set correction: if the near-active rows admit nonnegative
  // multipliers with a feasible point, that point satisfies KKT exactly.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (a.row(i).dot(u) - b(i) >= -1e-7 * std::max({1.0, std::abs(b(i)), std::sqrt(row_sq(i)) * scale})) {
      active.push_back(i);
    }
  }
  if (!active.empty()) {
    const auto k = static_cast<Eigen::Index>(active.size());
    Matrix a_j(k, x.size());
    Vector b_j(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      a_j.row(r) = a.row(active[static_cast<std::size_t>(r)]);
      b_j(r) = b(active[static_cast<std::size_t>(r)]);
    }
    const Matrix gram = a_j * a_j.transpose();
    const Vector mu = gram.completeOrthogonalDecomposition().solve(a_j * x - b_j);
    const Vector candidate = x - a_j.transpose() * mu;
    const bool multipliers_ok = mu.minCoeff() >= -1e-12 * std::max(1.0, mu.cwiseAbs().maxCoeff());
    const bool feasible = max_violation(candidate) <= 1e-12 * scale;
    const bool consistent = (a_j * candidate - b_j).cwiseAbs().maxCoeff() <= 1e-9 * scale;
    if (multipliers_ok && feasible && consistent && (candidate - u).norm() <= 1e-4 * scale) {
      u = candidate;
      converged = true;
    }
  }
  return make_result(x, std::move(u), sweeps, converged);
}

ProjectionResult project_parabola_epigraph(const Vector& x) {
  if (x.size() != 2) throw InvalidInput("project_parabola_epigraph: input must be 2-dimensional");
  require_finite(x, "project_parabola_epigraph");
  const double x1 = x(0);
  const double x2 = x(1);
  if (x2 >= x1 * x1) return make_result(x, x);

  const double c1 = 1.0 - 2.0 * x2;
  auto f = [&](double t) { return 2.0 * t * t * t + c1 * t - x1; };
  auto df = [&](double t) { return 6.0 * t * t + c1; };
  const double bound = 1.0 + std::abs(x1) + std::sqrt(std::abs(x2));

  std::vector<double> knots{-bound};
  if (c1 < 0.0) {
    const double c = std::sqrt(-c1 / 6.0);
    knots.push_back(-c);
    knots.push_back(c);
  }
  knots.push_back(bound);

  double best_t = std::numeric_limits<double>::quiet_NaN();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double flo = f(lo);
    const double fhi = f(hi);
    if ((flo > 0.0 && fhi > 0.0) || (flo < 0.0 && fhi < 0.0)) continue;
    const double t = safeguarded_newton(f, df, lo, hi);
    const double dist = (t - x1) * (t - x1) + (t * t - x2) * (t * t - x2);
    if (dist < best_dist) {
      best_dist = dist;
      best_t = t;
    }
  }
  if (!std::isfinite(best_t)) throw NumericalError("parabola projection: no root bracketed");
  Vector point(2);
  point << best_t, best_t * best_t;
  return make_result(x, std::move(point));
}

ProjectionResult project(const ConstraintSet& set, const Vector& x) {
  if (x.size() != set.dim()) {
    throw InvalidInput("project: vector has dimension " + std::to_string(x.size()) + ", set has dimension " +
                       std::to_string(set.dim()));
  }
  return std::visit(Overloaded{
                        [&](const Orthant&) { return project_orthant(x); },
                        [&](const Ball&) { return project_ball(x); },
                        [&](const MonotoneCone&) { return project_monotone(x); },
                        [&](const BlockMonotoneCone& s) { return project_block_monotone(x, s.sizes); },
                        [&](const PolyhedralCone& s) { return project_polyhedral_cone(s.a, x); },
                        [&](const Polyhedron& s) { return project_polyhedron(s.a, s.b, x); },
                        [&](const ParabolaEpigraph&) { return project_parabola_epigraph(x); },
                    },
                    set.kind());
}

bool membership(const ConstraintSet& set, const Vector& x, double tol) {
  if (x.size() != set.dim()) throw InvalidInput("membership: dimension mismatch");
  if (!x.allFinite()) return false;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return std::visit(Overloaded{
                        [&](const Orthant&) { return x.minCoeff() >= -tol; },
                        [&](const Ball&) { return x.norm() <= 1.0 + tol; },
                        [&](const MonotoneCone&) {
                          for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
                            if (x(i) > x(i + 1) + tol * scale) return false;
                          }
                          return true;
                        },
                        [&](const BlockMonotoneCone& s) {
                          Eigen::Index offset = 0;
                          double previous = -std::numeric_limits<double>::infinity();
                          for (const auto len : s.sizes) {
                            const auto block = x.segment(offset, len);
                            if (block.maxCoeff() - block.minCoeff() > tol * scale) return false;
                            if (previous > block(0) + tol * scale) return false;
                            previous = block(0);
                            offset += len;
                          }
                          return true;
                        },
                        [&](const PolyhedralCone& s) {
                          for (Eigen::Index i = 0; i < s.a.rows(); ++i) {
                            if (s.a.row(i).dot(x) > tol * std::max(1.0, s.a.row(i).norm() * x.norm())) return false;
                          }
                          return true;
                        },
                        [&](const Polyhedron& s) {
                          for (Eigen::Index i = 0; i < s.a.rows(); ++i) {
                            const double slack = tol * std::max({1.0, std::abs(s.b(i)), s.a.row(i).norm() * x.norm()});
                            if (s.a.row(i).dot(x) - s.b(i) > slack) return false;
                          }
                          return true;
                        },
                        [&](const ParabolaEpigraph&) {
                          return x(1) - x(0) * x(0) >= -tol * std::max(1.0, x(0) * x(0));
                        },
                    },
                    set.kind());
}

}  // namespace conerisk
