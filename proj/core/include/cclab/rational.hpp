#pragma once

#include <cstdint>
#include <string>

namespace cclab {

// Exact rational over int64 with 128-bit intermediates. Used for every
// ratio that reaches a report so rendered values are platform-identical.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  static Rational integer(std::int64_t n) { return Rational(n, 1); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  std::int64_t num_;
  std::int64_t den_;  // > 0
};

// Renders num/den with exactly three fractional digits, round-half-even,
// in pure integer arithmetic (no floating point involved).
std::string render3(std::int64_t num, std::int64_t den);
inline std::string render3(const Rational& r) { return render3(r.num(), r.den()); }

// Renders a double with three fractional digits via llrint(x * 1000.0)
// under the default to-nearest-even rounding mode.
std::string render3(double x);

}  // namespace cclab
