#include "conerisk/statdim.hpp"

#include "conerisk/errors.hpp"
#include "conerisk/geometry.hpp"
#include "conerisk/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace conerisk {

NoiseModel NoiseModel::gaussian() { return NoiseModel(Kind::Gaussian, "gaussian"); }

NoiseModel NoiseModel::scaled_uniform() { return NoiseModel(Kind::Uniform, "uniform"); }

NoiseModel NoiseModel::table(Vector weights, Matrix points) {
  if (weights.size() == 0 || weights.size() != points.rows() || points.cols() == 0) {
    throw InvalidInput("noise table: need at least one row with a weight and a point");
  }
  if (!weights.allFinite() || !points.allFinite() || weights.minCoeff() < 0.0) {
    throw InvalidInput("noise table: weights must be finite and nonnegative");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-9) throw InvalidInput("noise table: weights must sum to 1");
  const Vector mean = points.transpose() * weights;
  if (mean.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, points.cwiseAbs().maxCoeff())) {
    throw InvalidInput("noise table: distribution must have zero mean");
  }
  NoiseModel model(Kind::Table, "table");
  model.cumulative_.resize(weights.size());
  double running = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    running += weights(k);
    model.cumulative_(k) = running;
  }
  model.points_ = std::move(points);
  return model;
}

NoiseModel NoiseModel::parse(const std::string& text) {
  if (text == "gaussian") return gaussian();
  if (text == "uniform") return scaled_uniform();
  if (text.rfind("table:", 0) == 0) {
    const Matrix rows = read_csv_matrix(text.substr(6));
    if (rows.cols() < 2) throw InvalidInput("noise table rows need a weight and at least one coordinate");
    return table(rows.col(0), rows.rightCols(rows.cols() - 1));
  }
  throw InvalidInput("unknown noise model '" + text + "' (expected gaussian, uniform or table:<csv>)");
}

Vector NoiseModel::draw(RandomStream& stream, Eigen::Index n) const {
  switch (kind_) {
    case Kind::Gaussian:
      return gaussian_draw(stream, n);
    case Kind::Uniform: {
      Vector z(n);
      const double half_width = std::sqrt(3.0);
      for (Eigen::Index i = 0; i < n; ++i) z(i) = half_width * (2.0 * stream.uniform() - 1.0);
      return z;
    }
    case Kind::Table: {
      if (n != points_.cols()) throw InvalidInput("noise table dimension does not match the problem dimension");
      const double u = stream.uniform() * cumulative_(cumulative_.size() - 1);
      const auto* begin = cumulative_.data();
      const auto* end = begin + cumulative_.size();
      const auto k = std::min<Eigen::Index>(std::upper_bound(begin, end, u) - begin, cumulative_.size() - 1);
      return points_.row(k).transpose();
    }
  }
  throw InvalidInput("noise model: unknown kind");
}

StatDimEstimate mc_squared_norm(Eigen::Index n, const Projector& proj, const McOptions& options) {
  if (options.samples < 100) throw InvalidInput("Monte Carlo needs at least 100 samples");
  if (n < 1) throw InvalidInput("Monte Carlo: dimension must be >= 1");
  std::vector<RunningStats> parts(chunk_count(options.samples));
  for_each_chunk(options.samples, resolve_workers(options.workers),
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   for (std::size_t r = begin; r < end; ++r) {
                     RandomStream stream(options.seed, r);
                     const Vector z = options.noise.draw(stream, n);
                     try {
                       parts[chunk].add(proj(z).squaredNorm());
                     } catch (const std::exception& e) {
                       throw NumericalError("projection failed in replicate " + std::to_string(r) + ": " + e.what());
                     }
                   }
                 });
  const RunningStats total = merge_in_order(parts);
  return {total.mean, total.std_error(), options.samples, options.seed, options.noise.tag()};
}

StatDimEstimate mc_statdim(const ConstraintSet& cone, const McOptions& options) {
  if (!cone.is_cone()) throw InvalidInput("mc_statdim: set family '" + cone.family() + "' is not a cone");
  return mc_squared_norm(cone.dim(), [&](const Vector& z) { return project(cone, z).point; }, options);
}

StatDimEstimate mc_statdim(const ConstraintSet& cone, const Vector& v, const McOptions& options) {
  if (!cone.is_cone()) throw InvalidInput("mc_statdim: set family '" + cone.family() + "' is not a cone");
  if (v.size() != cone.dim()) throw InvalidInput("mc_statdim: hyperplane normal has the wrong dimension");
  const auto h = h_representation(cone);
  Matrix eq(h->eq.rows() + 1, cone.dim());
  eq << h->eq, v.transpose();
  if (v.norm() == 0.0) eq = h->eq;
  return mc_statdim_face(h->ineq, eq, options);
}

StatDimEstimate mc_statdim_face(const Matrix& a, const Matrix& eq, const McOptions& options) {
  const ConeFaceProjector face(a, eq);
  return mc_squared_norm(face.dim(), [&](const Vector& z) { return face(z).point; }, options);
}

double statdim_monotone_closed(int m) { return harmonic_number(m).to_double(); }

double statdim_product(const std::vector<double>& parts) {
  double total = 0.0;
  for (const double p : parts) {
    if (!(p >= 0.0)) throw InvalidInput("statdim_product: parts must be nonnegative");
    total += p;
  }
  return total;
}

}  // namespace conerisk
