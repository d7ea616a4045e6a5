#pragma once

#include "conerisk/numerics.hpp"

#include <cstdint>

namespace conerisk {

/// Per-replicate random stream.
///
/// The stream for replicate r of a run seeded with s depends only on (s, r),
/// so a replicate draws the same numbers no matter which worker executes it
/// or how many workers exist. The generator is SplitMix64 keyed by a hash of
/// (s, r); normals come from the Box-Muller transform.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t replicate_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t replicate_index() const { return replicate_index_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  double normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t replicate_index_;
  std::uint64_t state_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// n independent standard normal variates from `stream`.
Vector gaussian_draw(RandomStream& stream, Eigen::Index n);

/// Derives an independent sub-seed, e.g. for the k-th Monte Carlo sub-call of
/// a larger computation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace conerisk
