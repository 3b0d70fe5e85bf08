#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

namespace eightv {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

enum class Backend { Float, Rational };

// Float or exact value, as returned by the backend-dispatching entry points.
using Scalar = std::variant<double, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// Accepts "3", "-0.25", "1/3", "2.5e-3". Decimal text is converted exactly.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

// Rationals print as "num/den"; doubles use the shortest round-trip form.
std::string to_string(const Rational& q);
std::string to_string(double x);
std::string to_string(const Scalar& s);

template <class T>
T from_big(const BigInt& n) {
  if constexpr (is_exact_v<T>) {
    return Rational(n);
  } else {
    return n.template convert_to<double>();
  }
}

template <class T>
T from_rational(const Rational& q) {
  if constexpr (is_exact_v<T>) {
    return q;
  } else {
    return to_double(q);
  }
}

// Integer power with 0^0 = 1; negative exponents divide.
template <class T>
T ipow(const T& base, long e) {
  if (e < 0) return T(1) / ipow(base, -e);
  T result(1);
  T b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return result;
}

template <class T>
T abs_of(const T& x) {
  if constexpr (is_exact_v<T>) {
    return x < 0 ? T(-x) : x;
  } else {
    return std::fabs(x);
  }
}

// Exact equality for rationals, absolute tolerance for doubles.
template <class T>
bool same_value(const T& a, const T& b, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return a == b;
  } else {
    return std::fabs(a - b) <= tol;
  }
}

template <class T>
bool is_zero(const T& x, double tol) {
  return same_value(x, T(0), tol);
}

}  // namespace eightv
