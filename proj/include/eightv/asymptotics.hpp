#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "eightv/model.hpp"
#include "eightv/parallel.hpp"

namespace eightv {

// (1-2p)(1-2r)/(1-(p+r))^2.
template <class T>
T h_of(const KernelParams<T>& kp);

// 1/(1+sqrt(1-K)) for K <= 1.
double m_of(double k);

// kind 0: sum_k (-1)^k C(2n-1-k, n-k) C(n,k) X^k
// kind 1: sum_k (-1)^k (2n-k)!/(k!(n-k)!^2) X^k
template <class T>
T m_poly(int kind, long n, const T& x);

struct EmpiricalLaw {
  std::uint64_t samples = 0;
  std::map<long, std::uint64_t> counts;

  double probability(long i) const;
  double mean() const;
  // Standard error of the mean.
  double mean_error() const;
};

double tv_distance(const EmpiricalLaw& a, const EmpiricalLaw& b);

// Y_{t+1} - Y_t is -1, 0, 1 w.p. p(1-p), p^2, p(1-p) and 2(-1)^{Y_t} w.p. (1-p)^2.
EmpiricalLaw y_walk_sim(double p, long t, std::uint64_t samples, std::uint64_t seed, Exec exec = Exec::Parallel);

// S_N + 2R with N ~ Bin(t, 2p(1-p)), S a simple walk, the gaps L_j uniform over
// weak compositions of t-N into N+1 parts and G_j ~ Bin(L_j, (1-p)^2/(p^2+(1-p)^2)).
EmpiricalLaw y_decomposition_sim(double p, long t, std::uint64_t samples, std::uint64_t seed,
                                 Exec exec = Exec::Parallel);

struct RateReport {
  double p = 0;
  double r = 0;
  long i = 0;
  long t_max = 0;
  double fitted_rate = 0;
  double lambda = 0;
  double envelope_constant = 0;
  // |c8(i,t)| sqrt(t) / lambda^t for t = 0..t_max (all zero when lambda = 0).
  std::vector<double> envelope;
};

// fitted_rate = max over t in [t_max/2, t_max] of |c8(i,t)|^{1/t}, from exact values.
RateReport fit_rate(const KernelParams<Rational>& kp, long t_max, long i = 0);

}  // namespace eightv
