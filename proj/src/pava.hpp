#pragma once

#include <cstddef>
#include <vector>

namespace conerisk::detail {

template <class T>
struct PoolBlock {
  std::size_t start;
  std::size_t length;
  T weight;
  T weighted_sum;
  T value;
};

// Pool-adjacent-violators on (values, weights). Adjacent blocks are merged
// only on a strict violation, so equal neighbouring levels stay separate.
// T may be double or Rational.
template <class T>
std::vector<PoolBlock<T>> pava(const std::vector<T>& y, const std::vector<T>& w) {
  std::vector<PoolBlock<T>> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({i, 1, w[i], w[i] * y[i], y[i]});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].value > blocks.back().value) {
      const PoolBlock<T> top = blocks.back();
      blocks.pop_back();
      PoolBlock<T>& prev = blocks.back();
      prev.weight = prev.weight + top.weight;
      prev.weighted_sum = prev.weighted_sum + top.weighted_sum;
      prev.value = prev.weighted_sum / prev.weight;
      prev.length += top.length;
    }
  }
  return blocks;
}

}  // namespace conerisk::detail
