#pragma once

#include "conerisk/numerics.hpp"

#include <string>
#include <variant>
#include <vector>

namespace conerisk {

struct Orthant {
  Eigen::Index n;
};
struct Ball {
  Eigen::Index n;
};
struct MonotoneCone {
  Eigen::Index n;
};
struct BlockMonotoneCone {
  std::vector<Eigen::Index> sizes;
};
/// {u : A u <= 0}. Zero rows means the whole space R^{A.cols()}.
struct PolyhedralCone {
  Matrix a;
};
/// {u : A u <= b}.
struct Polyhedron {
  Matrix a;
  Vector b;
};
/// {u in R^2 : u2 >= u1^2}.
struct ParabolaEpigraph {};

/// Immutable, validated description of a closed convex set.
class ConstraintSet {
 public:
  using Variant = std::variant<Orthant, Ball, MonotoneCone, BlockMonotoneCone, PolyhedralCone, Polyhedron,
                               ParabolaEpigraph>;

  // All factories throw InvalidInput on malformed payloads, including
  // proportional constraint rows.
  static ConstraintSet orthant(Eigen::Index n);
  static ConstraintSet ball(Eigen::Index n);
  static ConstraintSet monotone(Eigen::Index n);
  static ConstraintSet block_monotone(std::vector<Eigen::Index> sizes);
  static ConstraintSet polyhedral_cone(Matrix a);
  static ConstraintSet whole_space(Eigen::Index n);
  static ConstraintSet polyhedron(Matrix a, Vector b);
  static ConstraintSet parabola_epigraph();

  /// Parses the text form used on the command line, e.g. "orthant:n=3",
  /// "blockmonotone:sizes=2,3,2", "cone:A=a.csv", "polyhedron:A=a.csv,b=b.csv",
  /// "parabola".
  static ConstraintSet parse(const std::string& spec);

  const Variant& kind() const { return kind_; }
  Eigen::Index dim() const;
  /// True for variants that are cones (the origin is a fixed point of scaling).
  bool is_cone() const;
  /// Short family name: orthant, ball, monotone, blockmonotone, cone, polyhedron, parabola.
  std::string family() const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

 private:
  explicit ConstraintSet(Variant kind) : kind_(std::move(kind)) {}
  Variant kind_;
};

struct ProjectionResult {
  Vector point;
  Vector residual;
  int iterations = 0;
  bool converged = true;
};

ProjectionResult project_orthant(const Vector& x);
ProjectionResult project_ball(const Vector& x);
ProjectionResult project_monotone(const Vector& x);
/// Weighted isotonic regression: argmin over nondecreasing u of sum w_j (u_j - y_j)^2.
Vector project_weighted_monotone(const Vector& y, const Vector& w);
ProjectionResult project_block_monotone(const Vector& x, const std::vector<Eigen::Index>& sizes);
/// Projection onto {u : A u <= 0} as x minus its projection onto the polar cone.
ProjectionResult project_polyhedral_cone(const Matrix& a, const Vector& x);
/// Dykstra's algorithm over the halfspaces of {u : A u <= b}, followed by an
/// exact active-set correction when it certifies optimality.
ProjectionResult project_polyhedron(const Matrix& a, const Vector& b, const Vector& x);
/// Projection onto {u : A u <= 0, <v, u> = 0}.
ProjectionResult project_cone_with_equality(const Matrix& a, const Vector& v, const Vector& x);
/// Projection onto {u : A u <= 0, E u = 0}.
ProjectionResult project_cone_with_equalities(const Matrix& a, const Matrix& e, const Vector& x);

/// Reusable projector onto {u : A u <= 0, E u = 0}: the null-space basis of E
/// is computed once, which matters inside Monte Carlo loops.
class ConeFaceProjector {
 public:
  ConeFaceProjector(const Matrix& a, const Matrix& e);
  ProjectionResult operator()(const Vector& x) const;
  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_;
  bool has_equalities_;
  Matrix basis_;    // orthonormal columns spanning ker E
  Matrix reduced_;  // A expressed in that basis
};
ProjectionResult project_parabola_epigraph(const Vector& x);

ProjectionResult project(const ConstraintSet& set, const Vector& x);

/// True iff every defining constraint holds within tol * max(1, scale).
bool membership(const ConstraintSet& set, const Vector& x, double tol = 1e-9);

}  // namespace conerisk
