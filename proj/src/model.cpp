#include "eightv/model.hpp"

#include <algorithm>
#include <cmath>

namespace eightv {

template <class T>
KernelParams<T> params_from_pr(const T& p, const T& r) {
  if (p < T(0) || p > T(1) || r < T(0) || r > T(1))
    throw Error(ErrorKind::Domain, "p and r must lie in [0,1]");
  KernelParams<T> kp;
  kp.p = p;
  kp.r = r;
  kp.delta = T(1) - (p + r);
  kp.dee = r - p;
  kp.pee = (T(2) * p - T(1)) * (T(2) * r - T(1));
  kp.lambda = std::max(abs_of<T>(T(1) - T(2) * p), abs_of<T>(T(1) - T(2) * r));
  return kp;
}

template <class T>
KernelParams<T> derive_params(const Weights<T>& w) {
  if (w.a < T(0) || w.b < T(0) || w.c < T(0) || w.d < T(0))
    throw Error(ErrorKind::Domain, "weights must be nonnegative");
  T ac = w.a + w.c;
  T bd = w.b + w.d;
  if (ac == T(0)) throw Error(ErrorKind::Degenerate, "a+c = 0");
  if constexpr (is_exact_v<T>) {
    if (ac != bd) throw Error(ErrorKind::ConstraintViolated, "weights must satisfy a+c = b+d");
  } else {
    if (std::fabs(ac - bd) / ac > kWeightTolerance)
      throw Error(ErrorKind::ConstraintViolated, "weights must satisfy a+c = b+d");
  }
  return params_from_pr<T>(w.a / ac, w.b / bd);
}

KernelParams<double> to_double(const KernelParams<Rational>& kp) {
  return params_from_pr<double>(to_double(kp.p), to_double(kp.r));
}

BigInt binomial(long n, long k) {
  if (k < 0) return 0;
  if (n < 0) return (n == -1 && k == 0) ? 1 : 0;
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

BigInt multinomial(long n, const std::vector<long>& parts) {
  long sum = 0;
  for (long part : parts) {
    if (part < 0) return 0;
    sum += part;
  }
  if (sum != n) return 0;
  BigInt out = 1;
  long remaining = n;
  for (long part : parts) {
    out *= binomial(remaining, part);
    remaining -= part;
  }
  return out;
}

template KernelParams<double> params_from_pr(const double&, const double&);
template KernelParams<Rational> params_from_pr(const Rational&, const Rational&);
template KernelParams<double> derive_params(const Weights<double>&);
template KernelParams<Rational> derive_params(const Weights<Rational>&);

}  // namespace eightv
