#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace medianwalls {

/// Exact rational with 64-bit numerator and denominator.
///
/// Always normalized: den > 0 and gcd(|num|, den) == 1. Intermediate
/// products are formed in 128 bits; a result that does not fit back into
/// 64 bits throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() noexcept = default;
  constexpr Rational(std::int64_t n) noexcept : num_(n), den_(1) {}  // NOLINT: implicit from integers
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }

  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  [[nodiscard]] std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational& operator+=(const Rational& o) {
    if (den_ == o.den_) {
      num_ = checked(static_cast<__int128>(num_) + o.num_);
      if (den_ != 1) normalize();
      return *this;
    }
    const __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    reduce128(n, d);
    return *this;
  }

  Rational& operator-=(const Rational& o) { return *this += -o; }

  Rational& operator*=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
      num_ = checked(static_cast<__int128>(num_) * o.num_);
      return *this;
    }
    reduce128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
    return *this;
  }

  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    reduce128(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
    return *this;
  }

  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = checked(-static_cast<__int128>(a.num_));
    r.den_ = a.den_;
    return r;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  /// Parses "n", "-n" or "n/d".
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const auto n = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return Rational(n);
      }
      const auto n = std::stoll(s.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(s);
      const auto tail = s.substr(slash + 1);
      const auto d = std::stoll(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(s);
      return Rational(n, d);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    }
  }

 private:
  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    reduce128(n, d);
  }

  void reduce128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = checked(n);
    den_ = checked(d);
  }

  void normalize() { reduce128(num_, den_); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Comparison policy for the scalar types the library is instantiated with.
/// Exact scalars compare exactly; floating scalars use an absolute tolerance.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return Rational(0); }
  static double to_double(const Rational& v) { return v.to_double(); }
  static Rational from_int(std::int64_t v) { return Rational(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-9; }
  static double to_double(double v) { return v; }
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
[[nodiscard]] bool approx_le(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a <= b;
  } else {
    return a <= b + ScalarTraits<T>::tolerance();
  }
}

/// Strict comparison that is robust to rounding: a < b by more than the tolerance.
template <Scalar T>
[[nodiscard]] bool approx_lt(const T& a, const T& b) {
  return !approx_le(b, a);
}

template <Scalar T>
[[nodiscard]] bool approx_eq(const T& a, const T& b) {
  return approx_le(a, b) && approx_le(b, a);
}

template <Scalar T>
[[nodiscard]] bool approx_zero(const T& a) {
  return approx_eq(a, T{});
}

template <Scalar T>
[[nodiscard]] double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

}  // namespace medianwalls
