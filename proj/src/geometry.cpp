#include "conerisk/geometry.hpp"

#include "conerisk/errors.hpp"

#include <cmath>

namespace conerisk {

namespace {

Matrix select_rows(const Matrix& a, const IndexList& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = a.row(rows[r]);
  return out;
}

Matrix difference_rows(Eigen::Index n) {
  Matrix a = Matrix::Zero(std::max<Eigen::Index>(n - 1, 0), n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i, i) = 1.0;
    a(i, i + 1) = -1.0;
  }
  return a;
}

}  // namespace

std::optional<HRep> h_representation(const ConstraintSet& set) {
  const Eigen::Index n = set.dim();
  if (set.as<Orthant>()) return HRep{-Matrix::Identity(n, n), Vector::Zero(n), Matrix(0, n)};
  if (set.as<MonotoneCone>()) return HRep{difference_rows(n), Vector::Zero(n - 1), Matrix(0, n)};
  if (const auto* s = set.as<BlockMonotoneCone>()) {
    const auto m = static_cast<Eigen::Index>(s->sizes.size());
    HRep h{Matrix::Zero(m - 1, n), Vector::Zero(m - 1), Matrix::Zero(n - m, n)};
    Eigen::Index offset = 0;
    Eigen::Index eq_row = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index len = s->sizes[static_cast<std::size_t>(j)];
      for (Eigen::Index i = offset; i + 1 < offset + len; ++i) {
        h.eq(eq_row, i) = 1.0;
        h.eq(eq_row, i + 1) = -1.0;
        ++eq_row;
      }
      if (j + 1 < m) {
        h.ineq(j, offset + len - 1) = 1.0;
        h.ineq(j, offset + len) = -1.0;
      }
      offset += len;
    }
    return h;
  }
  if (const auto* s = set.as<PolyhedralCone>()) return HRep{s->a, Vector::Zero(s->a.rows()), Matrix(0, n)};
  if (const auto* s = set.as<Polyhedron>()) return HRep{s->a, s->b, Matrix(0, n)};
  return std::nullopt;
}

TangentConeRep tangent_cone(const Matrix& a, const Vector& b, const Vector& theta0) {
  if (a.cols() != theta0.size() || a.rows() != b.size()) throw InvalidInput("tangent_cone: dimension mismatch");
  TangentConeRep rep;
  rep.base_point = theta0;
  rep.equalities = Matrix(0, theta0.size());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const double gap = a.row(j).dot(theta0) - b(j);
    const double tol = 1e-9 * std::max(1.0, std::abs(b(j)));
    if (gap > tol) throw InvalidInput("tangent_cone: base point violates constraint " + std::to_string(j + 1));
    if (std::abs(gap) <= tol) rep.active_indices.push_back(j);
  }
  rep.a_active = select_rows(a, rep.active_indices);
  return rep;
}

TangentConeRep tangent_cone(const ConstraintSet& set, const Vector& theta0) {
  if (theta0.size() != set.dim()) throw InvalidInput("tangent_cone: dimension mismatch");
  if (set.as<Ball>()) {
    const double norm = theta0.norm();
    if (norm > 1.0 + 1e-9) throw InvalidInput("tangent_cone: base point outside the ball");
    TangentConeRep rep{Matrix(0, theta0.size()), theta0, {}, Matrix(0, theta0.size())};
    if (norm >= 1.0 - 1e-9) {
      rep.a_active = theta0.transpose();
      rep.active_indices.push_back(0);
    }
    return rep;
  }
  const auto h = h_representation(set);
  if (!h) throw Unsupported("tangent_cone: no polyhedral description for set family '" + set.family() + "'");
  if (h->eq.rows() > 0 && (h->eq * theta0).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, theta0.norm())) {
    throw InvalidInput("tangent_cone: base point violates an equality constraint");
  }
  TangentConeRep rep = tangent_cone(h->ineq, h->rhs, theta0);
  rep.equalities = h->eq;
  return rep;
}

FaceRep residual_face(const Matrix& a, const Vector& y) {
  if (a.cols() != y.size()) throw InvalidInput("residual_face: dimension mismatch");
  FaceRep face;
  if (a.rows() == 0) {
    face.normal = Vector::Zero(y.size());
    return face;
  }
  const Vector lambda = nnls(a.transpose(), y);
  face.normal = a.transpose() * lambda;

  IndexList support;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    if (lambda(j) > 0.0) support.push_back(j);
  }
  // Drop indices from the back while v stays in the row space of the rest.
  const IndexList candidates(support.rbegin(), support.rend());
  for (const Eigen::Index j : candidates) {
    IndexList without;
    for (const Eigen::Index k : support) {
      if (k != j) without.push_back(k);
    }
    if (rowspace_membership(face.normal, select_rows(a, without))) support = std::move(without);
  }
  face.equality_indices = support;
  std::size_t s = 0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    if (s < support.size() && support[s] == j) {
      ++s;
    } else {
      face.inequality_indices.push_back(j);
    }
  }
  return face;
}

GeneratorSet generators_in_hyperplane(const GeneratorSet& g, const Vector& v) {
  GeneratorSet kept;
  for (const auto& x : g.generators) {
    if (x.size() != v.size()) throw InvalidInput("generators_in_hyperplane: dimension mismatch");
    const double tol = 1e-9 * std::max(1.0, x.norm() * v.norm());
    const double ip = x.dot(v);
    if (ip > tol) throw InvalidInput("generators_in_hyperplane: generator has positive inner product with v");
    if (std::abs(ip) <= tol) kept.generators.push_back(x);
  }
  return kept;
}

GeneratorSet monotone_generators(Eigen::Index n) {
  if (n < 1) throw InvalidInput("monotone_generators: n must be >= 1");
  GeneratorSet g;
  g.generators.push_back(-Vector::Ones(n));
  g.generators.push_back(Vector::Ones(n));
  for (Eigen::Index k = 1; k < n; ++k) {
    Vector suffix = Vector::Zero(n);
    suffix.tail(n - k).setOnes();
    g.generators.push_back(std::move(suffix));
  }
  return g;
}

ProjectionResult project_generated_cone(const GeneratorSet& g, const Vector& x) {
  ProjectionResult r;
  if (g.generators.empty()) {
    r.point = Vector::Zero(x.size());
  } else {
    Matrix cols(x.size(), static_cast<Eigen::Index>(g.generators.size()));
    for (std::size_t j = 0; j < g.generators.size(); ++j) {
      if (g.generators[j].size() != x.size()) throw InvalidInput("project_generated_cone: dimension mismatch");
      cols.col(static_cast<Eigen::Index>(j)) = g.generators[j];
    }
    r.point = cols * nnls(cols, x);
  }
  r.residual = x - r.point;
  return r;
}

ConstraintSet block_monotone_embedding(const std::vector<Eigen::Index>& sizes) {
  const auto m = static_cast<Eigen::Index>(sizes.size());
  if (m < 1) throw InvalidInput("block_monotone_embedding: at least one block required");
  Matrix a = Matrix::Zero(m - 1, m);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    const auto s0 = sizes[static_cast<std::size_t>(j)];
    const auto s1 = sizes[static_cast<std::size_t>(j + 1)];
    if (s0 < 1 || s1 < 1) throw InvalidInput("block_monotone_embedding: block sizes must be >= 1");
    a(j, j) = 1.0 / std::sqrt(static_cast<double>(s0));
    a(j, j + 1) = -1.0 / std::sqrt(static_cast<double>(s1));
  }
  if (m == 1 && sizes[0] < 1) throw InvalidInput("block_monotone_embedding: block sizes must be >= 1");
  return m == 1 ? ConstraintSet::whole_space(1) : ConstraintSet::polyhedral_cone(std::move(a));
}

bool recession_cone_is_trivial(const Matrix& a) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return false;
  const Matrix g = a.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const double sign : {1.0, -1.0}) {
      const Vector target = sign * Vector::Unit(n, i);
      if ((g * nnls(g, target) - target).norm() > 1e-9) return false;
    }
  }
  return true;
}

std::optional<ConstraintSet> core_cone(const ConstraintSet& set) {
  if (set.is_cone()) return set;
  if (set.as<Ball>()) return std::nullopt;
  if (const auto* p = set.as<Polyhedron>()) {
    if (recession_cone_is_trivial(p->a)) return std::nullopt;
  }
  throw Unsupported("core cone not computable for set family '" + set.family() + "'");
}

}  // namespace conerisk
