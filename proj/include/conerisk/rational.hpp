#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace conerisk {

/// Exact fraction with 64-bit numerator/denominator, always normalized
/// (gcd 1, positive denominator). Arithmetic overflow throws NumericalError.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "49/20", or "3" for integers.
  std::string to_string() const;

  /// Exact conversion of a double holding an integer value; throws
  /// InvalidInput otherwise.
  static Rational from_integral_double(double value);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// H_m = 1 + 1/2 + ... + 1/m.
Rational harmonic_number(int m);

}  // namespace conerisk
