#pragma once

#include "conerisk/numerics.hpp"
#include "conerisk/sets.hpp"

#include <optional>
#include <vector>

namespace conerisk {

using IndexList = std::vector<Eigen::Index>;

/// {u : ineq u <= rhs, eq u = 0}.
struct HRep {
  Matrix ineq;
  Vector rhs;
  Matrix eq;
};

/// Halfspace description of the polyhedral variants; nullopt for the ball
/// and the parabola epigraph.
std::optional<HRep> h_representation(const ConstraintSet& set);

/// T = {u : a_active u <= 0, equalities u = 0}. `equalities` is empty unless
/// the set itself carries equality constraints (block monotone cones).
struct TangentConeRep {
  Matrix a_active;
  Vector base_point;
  IndexList active_indices;
  Matrix equalities;
};

/// Tangent cone of {u : A u <= b} at theta0. Active rows satisfy
/// |<a_j, theta0> - b_j| <= 1e-9 max(1, |b_j|). Throws InvalidInput when
/// theta0 is infeasible.
TangentConeRep tangent_cone(const Matrix& a, const Vector& b, const Vector& theta0);

/// Same for any set with an H-representation; for the ball the tangent cone
/// at a boundary point p is the halfspace {u : <p, u> <= 0}.
TangentConeRep tangent_cone(const ConstraintSet& set, const Vector& theta0);

/// Largest face of K = {u : A u <= 0} lying in the hyperplane normal to
/// v = y - proj_K(y): face = {u : A_eq u = 0, A_ineq u <= 0} = K intersect v-perp.
struct FaceRep {
  IndexList equality_indices;
  IndexList inequality_indices;
  Vector normal;
};

FaceRep residual_face(const Matrix& a, const Vector& y);

struct GeneratorSet {
  std::vector<Vector> generators;
};

/// Generators orthogonal to v. Throws InvalidInput if some generator has
/// <v, g> above tolerance, since the result would then not generate the
/// intersection with the hyperplane.
GeneratorSet generators_in_hyperplane(const GeneratorSet& g, const Vector& v);

/// The n+1 conic generators of the monotone cone: -1, +1 and the suffix
/// indicators e_k + ... + e_n for k = 2..n.
GeneratorSet monotone_generators(Eigen::Index n);

/// Projection onto cone{g_1, ..., g_p}; the empty set generates {0}.
ProjectionResult project_generated_cone(const GeneratorSet& g, const Vector& x);

/// Cone in R^m isometric to the block monotone cone with these block sizes:
/// {v : v_1/sqrt|I_1| <= ... <= v_m/sqrt|I_m|}.
ConstraintSet block_monotone_embedding(const std::vector<Eigen::Index>& sizes);

/// True iff {u : A u <= 0} = {0}, i.e. every nonempty {A u <= b} is bounded.
bool recession_cone_is_trivial(const Matrix& a);

/// Intersection of all tangent cones. Cones map to themselves, the ball and
/// bounded polyhedra to {0} (returned as nullopt). Other sets throw
/// Unsupported.
std::optional<ConstraintSet> core_cone(const ConstraintSet& set);

}  // namespace conerisk
