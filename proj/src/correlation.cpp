#include "eightv/correlation.hpp"

#include <cstdlib>

namespace eightv {

namespace {

long neg_one_pow(long n) { return (n % 2 == 0) ? 1 : -1; }

template <class T>
T signed_term(long sign_exp, const BigInt& coef, const T& delta, long de, const T& pee, long pe) {
  if (coef == 0) return T(0);
  T term = from_big<T>(neg_one_pow(sign_exp) > 0 ? BigInt(coef) : BigInt(-coef));
  return term * ipow(delta, de) * ipow(pee, pe);
}

// Shared sum of the two i+t even, i != 0 branches, k = 0 .. upper-1.
template <class T>
T even_sum(long i, long t, long upper, const KernelParams<T>& kp) {
  T s(0);
  for (long k = 0; k < upper; ++k) {
    BigInt coef = binomial(t - 1 - k, (t - i) / 2 - k) * binomial((t + i) / 2, k);
    s += signed_term<T>(t + k, coef, kp.delta, t - 2 * k, kp.pee, k);
  }
  return s;
}

}  // namespace

bool outside_cone(long i, long t) { return (i >= 0 && t <= i - 1) || (i <= -1 && t <= -i); }

template <class T>
T c8(long i, long t, const KernelParams<T>& kp) {
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  if (outside_cone(i, t)) return T(0);
  const T& delta = kp.delta;
  const T& pee = kp.pee;

  if ((i + t) % 2 != 0) {
    T s(0);
    long upper = (t - 1 - std::labs(i)) / 2;
    for (long k = 0; k <= upper; ++k) {
      BigInt coef = multinomial(t - 1 - k, {k, (t - 1 + i) / 2 - k, (t - 1 - i) / 2 - k});
      s += signed_term<T>(k, coef, delta, t - 1 - 2 * k, pee, k);
    }
    T out = kp.dee * s;
    return neg_one_pow(t + 1) > 0 ? out : T(-out);
  }

  if (i == 0) {
    T s(0);
    for (long k = 0; k <= t / 2; ++k) {
      BigInt coef = binomial(t - 1 - k, t / 2 - k) * binomial(t / 2, k);
      s += signed_term<T>(k, coef, delta, t - 2 * k, pee, k);
    }
    return s;
  }

  if (i < 0) {
    T s = even_sum<T>(i, t, (t + i) / 2, kp);
    BigInt coef = binomial((t - i) / 2 - 1, (t + i) / 2 - 1);
    return s + signed_term<T>((t - i) / 2, coef, delta, -i, pee, (t + i) / 2);
  }

  T s = even_sum<T>(i, t, (t - i) / 2, kp);
  BigInt coef = binomial((t + i) / 2, (t - i) / 2);
  return s + signed_term<T>((t + i) / 2, coef, delta, i, pee, (t - i) / 2);
}

template <class T>
std::optional<T> c8_special(long i, long t, const KernelParams<T>& kp) {
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  if (outside_cone(i, t)) return T(0);
  const T half = T(1) / T(2);
  const double tol = kSpecialTolerance;

  if (same_value<T>(kp.p + kp.r, T(1), tol)) {
    if (i != 0) return T(0);
    return ipow<T>(T(1) - T(2) * kp.p, t);
  }
  if (same_value<T>(kp.p, kp.r, tol)) {
    if (i != t) return T(0);
    return ipow<T>(T(2) * kp.p - T(1), t);
  }
  bool even = (i + t) % 2 == 0;
  BigInt coef = even ? binomial(t - 1, (t - i) / 2) : binomial(t - 1, (t - 1 - i) / 2);
  T lead = ipow<T>(T(-1) / T(2), t) * from_big<T>(coef);
  if (same_value<T>(kp.p, half, tol)) {
    return lead * ipow<T>(T(1) - T(2) * kp.r, t);
  }
  if (same_value<T>(kp.r, half, tol)) {
    T v = lead * ipow<T>(T(1) - T(2) * kp.p, t);
    return even ? v : T(-v);
  }
  return std::nullopt;
}

template <class T>
T kdn_c(long i, long two_t) {
  if (two_t < 0 || two_t % 2 != 0) throw Error(ErrorKind::Domain, "two_t must be even and nonnegative");
  long d = (std::labs(i) % 2 == 1) ? 1 : 2;
  if (two_t < i + d) return T(0);
  BigInt coef = binomial(two_t - 1, (two_t - i - d) / 2);
  return from_big<T>(coef) / ipow<T>(T(2), two_t);
}

template <class T>
T boundary_bound(long t, const KernelParams<T>& kp) {
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  if (t == 0) return T(2);
  const T& l = kp.lambda;
  long h = t / 2;
  return T(2) * (ipow<T>(l, t - 1 - h) + ipow<T>(l, h) - ipow<T>(l, t - 1));
}

Scalar c8(const CorrelationQuery& q) {
  if (q.backend == Backend::Rational) return c8<Rational>(q.i, q.t, q.params);
  return c8<double>(q.i, q.t, to_double(q.params));
}

std::optional<Scalar> c8_special(const CorrelationQuery& q) {
  if (q.backend == Backend::Rational) {
    auto v = c8_special<Rational>(q.i, q.t, q.params);
    if (!v) return std::nullopt;
    return Scalar(*v);
  }
  auto v = c8_special<double>(q.i, q.t, to_double(q.params));
  if (!v) return std::nullopt;
  return Scalar(*v);
}

template double c8(long, long, const KernelParams<double>&);
template Rational c8(long, long, const KernelParams<Rational>&);
template std::optional<double> c8_special(long, long, const KernelParams<double>&);
template std::optional<Rational> c8_special(long, long, const KernelParams<Rational>&);
template double kdn_c<double>(long, long);
template Rational kdn_c<Rational>(long, long);
template double boundary_bound(long, const KernelParams<double>&);
template Rational boundary_bound(long, const KernelParams<Rational>&);

}  // namespace eightv
