#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace phi4 {

// Exact rational on int64 with 128-bit intermediates; used for closed-form gate counts.
class Rational {
 public:
  Rational(std::int64_t n = 0, std::int64_t d = 1) {
    if (d == 1) {
      n_ = n;
      return;
    }
    set(n, d);
  }

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }
  double value() const { return static_cast<double>(n_) / static_cast<double>(d_); }
  std::int64_t ceil() const {
    if (n_ >= 0) return (n_ + d_ - 1) / d_;
    return -((-n_) / d_);
  }
  bool is_integer() const { return d_ == 1; }
  std::string str() const { return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                   static_cast<__int128>(a.d_) * b.d_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.n_, b.d_); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.n_ == 0) throw std::domain_error("division by zero rational");
    return from128(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  }

 private:
  std::int64_t n_ = 0, d_ = 1;

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static Rational from128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || -n > lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.n_ = static_cast<std::int64_t>(n);
    r.d_ = static_cast<std::int64_t>(d);
    return r;
  }
  void set(std::int64_t n, std::int64_t d) { *this = from128(n, d); }
};

}  // namespace phi4
