#include "cclab/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cclab {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v, const char* what) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN)) {
    throw std::overflow_error(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Norm {
  std::int64_t num;
  std::int64_t den;
};

Norm normalized(Wide num, Wide den, const char* what) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {narrow(num, what), narrow(den, what)};
}

Rational make(Wide num, Wide den, const char* what) {
  const Norm r = normalized(num, den, what);
  return Rational(r.num, r.den);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  const Norm r = normalized(num, den, "construction");
  num_ = r.num;
  den_ = r.den;
}

Rational Rational::operator+(const Rational& o) const {
  return make(Wide(num_) * o.den_ + Wide(o.num_) * den_, Wide(den_) * o.den_, "+");
}

Rational Rational::operator-(const Rational& o) const {
  return make(Wide(num_) * o.den_ - Wide(o.num_) * den_, Wide(den_) * o.den_, "-");
}

Rational Rational::operator*(const Rational& o) const {
  return make(Wide(num_) * o.num_, Wide(den_) * o.den_, "*");
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return make(Wide(num_) * o.den_, Wide(den_) * o.num_, "/");
}

bool Rational::operator<(const Rational& o) const {
  return Wide(num_) * o.den_ < Wide(o.num_) * den_;
}

namespace {

std::string format_milli(Wide milli) {
  std::string sign = milli < 0 ? "-" : "";
  if (milli < 0) milli = -milli;
  auto whole = static_cast<std::int64_t>(milli / 1000);
  auto frac = static_cast<int>(milli % 1000);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%lld.%03d", sign.c_str(),
                static_cast<long long>(whole), frac);
  return buf;
}

}  // namespace

std::string render3(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("render3 with zero denominator");
  Wide n = num;
  Wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  bool neg = n < 0;
  if (neg) n = -n;
  Wide q = n * 1000 / d;
  Wide r = n * 1000 % d;
  if (2 * r > d || (2 * r == d && q % 2 == 1)) q += 1;
  return format_milli(neg ? -q : q);
}

std::string render3(double x) {
  return format_milli(std::llrint(x * 1000.0));
}

}  // namespace cclab
