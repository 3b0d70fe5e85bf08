#pragma once

#include <map>
#include <utility>
#include <vector>

#include "eightv/model.hpp"

namespace eightv {

// Law of the walk X_t = (position, spin), stored sparsely.
template <class T>
struct WalkDist {
  long t = 0;
  std::map<std::pair<long, int>, T> probs;

  T at(long i, int k) const {
    auto it = probs.find({i, k});
    return it == probs.end() ? T(0) : it->second;
  }
};

// X_0 = (0,1).
template <class T>
WalkDist<T> walk_start();

// Partner of position i at time t: i + (-1)^{i+t}.
long walk_partner(long i, long t);

template <class T>
WalkDist<T> walk_step(const WalkDist<T>& dist, const KernelParams<T>& kp);

// P(X_t = (i,1)) - P(X_t = (i,0)).
template <class T>
T c8_via_walk(long i, long t, const KernelParams<T>& kp);

// coeff[t][j] is the coefficient of l^t x^j of
// (1 + l(delta + x D)) / (1 + delta(1+x^2) l + P x^2 l^2), for 0 <= j <= 2t.
template <class T>
struct CoeffTable {
  long t_max = 0;
  std::vector<std::vector<T>> coeff;
};

template <class T>
CoeffTable<T> series_coeffs(long t_max, const KernelParams<T>& kp);

// Closed forms of the generating functions F_{k1,k2}(C,K,R,L).
template <class T>
T closed_form_F(int k1, int k2, const T& C, const T& K, const T& R, const T& L);

// F01 - F00 + F11 - F10 as the reduced fraction (C-R-K-1)/((C-K)^2-(1+R)(1+L)).
template <class T>
T closed_form_combination(const T& C, const T& K, const T& R, const T& L);

inline constexpr long kMaxPathLength = 12;

// Signed weight of all coloured paths of length t ending at position i.
// Only the p+r <= 1 regime is enumerated.
template <class T>
T brute_force_paths(long i, long t, const KernelParams<T>& kp);

// Same enumeration, all end positions at once.
template <class T>
std::map<long, T> brute_force_row(long t, const KernelParams<T>& kp);

}  // namespace eightv
