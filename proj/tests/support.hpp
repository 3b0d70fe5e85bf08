#pragma once

#include <doctest.h>

#include "eightv/model.hpp"

namespace testing {

using eightv::KernelParams;
using eightv::Rational;

inline Rational Q(long num, long den = 1) { return Rational(num, den); }

inline KernelParams<Rational> pr(long pn, long pd, long rn, long rd) {
  return eightv::params_from_pr(Q(pn, pd), Q(rn, rd));
}

// Rational points used across the exact tests.
inline std::vector<KernelParams<Rational>> exact_grid() {
  std::vector<KernelParams<Rational>> out;
  for (auto [pn, pd] : {std::pair{1L, 10L}, {1L, 4L}, {1L, 2L}, {2L, 3L}, {9L, 10L}})
    for (auto [rn, rd] : {std::pair{1L, 5L}, {1L, 3L}, {1L, 2L}, {3L, 4L}, {9L, 10L}})
      out.push_back(pr(pn, pd, rn, rd));
  return out;
}

}  // namespace testing
