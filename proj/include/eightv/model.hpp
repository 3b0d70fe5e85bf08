#pragma once

#include <compare>
#include <vector>

#include "eightv/errors.hpp"
#include "eightv/scalar.hpp"

namespace eightv {

template <class T>
struct Weights {
  T a, b, c, d;
};

// p = a/(a+c), r = b/(b+d) and the combinations every formula is written in.
template <class T>
struct KernelParams {
  T p, r;
  T delta;   // 1-(p+r)
  T dee;     // r-p
  T pee;     // (2p-1)(2r-1)
  T lambda;  // max(|1-2p|, |1-2r|)

  // Regime used by the walk and particle kernels. p+r = 1 goes to the first one.
  bool low_regime() const { return p + r <= T(1); }
};

inline constexpr double kWeightTolerance = 1e-12;

template <class T>
KernelParams<T> params_from_pr(const T& p, const T& r);

template <class T>
KernelParams<T> derive_params(const Weights<T>& w);

template <class T>
Weights<T> weights_from_pr(const T& p, const T& r) {
  return {p, r, T(1) - p, T(1) - r};
}

KernelParams<double> to_double(const KernelParams<Rational>& kp);

BigInt binomial(long n, long k);

// n!/prod(parts!) when every part is nonnegative and they sum to n, else 0.
BigInt multinomial(long n, const std::vector<long>& parts);

// Edge e(i,t); state 1 means up-oriented.
struct EdgeAddress {
  long i = 0;
  long t = 0;
  auto operator<=>(const EdgeAddress&) const = default;
};

}  // namespace eightv
