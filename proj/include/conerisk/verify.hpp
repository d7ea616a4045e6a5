#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conerisk {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int workers = 0;
  /// Multiplies every tolerance; 0 turns the suite into a negative control.
  double tol_scale = 1.0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = true;
  std::vector<std::string> lines;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// Deterministic text: identical for identical seed and tol_scale, whatever
  /// the worker count.
  std::string render() const;
};

inline constexpr int kCriterionCount = 10;

CriterionResult verify_criterion(int id, const VerifyOptions& options);
VerifyReport run_verification(const VerifyOptions& options);

}  // namespace conerisk
