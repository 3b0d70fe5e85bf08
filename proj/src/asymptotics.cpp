#include "eightv/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gmp.h>

#include "eightv/correlation.hpp"
#include "eightv/rng.hpp"

namespace eightv {

template <class T>
T h_of(const KernelParams<T>& kp) {
  if (is_zero(kp.delta, 1e-12)) throw Error(ErrorKind::Singular, "H is undefined at p+r = 1");
  return (T(1) - T(2) * kp.p) * (T(1) - T(2) * kp.r) / (kp.delta * kp.delta);
}

double m_of(double k) {
  if (k > 1) throw Error(ErrorKind::Domain, "m(K) needs K <= 1");
  return 1.0 / (1.0 + std::sqrt(1.0 - k));
}

template <class T>
T m_poly(int kind, long n, const T& x) {
  if (n < 0) throw Error(ErrorKind::Domain, "n must be nonnegative");
  if (kind != 0 && kind != 1) throw Error(ErrorKind::Domain, "kind must be 0 or 1");
  T s(0);
  for (long k = 0; k <= n; ++k) {
    BigInt coef = kind == 0 ? BigInt(binomial(2 * n - 1 - k, n - k) * binomial(n, k))
                            : multinomial(2 * n - k, {k, n - k, n - k});
    if (k % 2 != 0) coef = -coef;
    s += from_big<T>(coef) * ipow(x, k);
  }
  return s;
}

double EmpiricalLaw::probability(long i) const {
  auto it = counts.find(i);
  return it == counts.end() || samples == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples);
}

double EmpiricalLaw::mean() const {
  double s = 0;
  for (const auto& [i, c] : counts) s += static_cast<double>(i) * static_cast<double>(c);
  return s / static_cast<double>(samples);
}

double EmpiricalLaw::mean_error() const {
  if (samples < 2) return 0;
  double m = mean(), ss = 0;
  for (const auto& [i, c] : counts) ss += (i - m) * (i - m) * static_cast<double>(c);
  return std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
}

double tv_distance(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  std::map<long, double> diff;
  for (const auto& [i, c] : a.counts) diff[i] += static_cast<double>(c) / static_cast<double>(a.samples);
  for (const auto& [i, c] : b.counts) diff[i] -= static_cast<double>(c) / static_cast<double>(b.samples);
  double s = 0;
  for (const auto& kv : diff) s += std::fabs(kv.second);
  return s / 2;
}

namespace {

using Counts = std::map<long, std::uint64_t>;

void check_p(double p) {
  if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::Domain, "p must lie in [0,1]");
}

EmpiricalLaw merge(std::uint64_t samples, const std::vector<Counts>& batches) {
  EmpiricalLaw law;
  law.samples = samples;
  for (const auto& b : batches)
    for (const auto& [i, c] : b) law.counts[i] += c;
  return law;
}

}  // namespace

EmpiricalLaw y_walk_sim(double p, long t, std::uint64_t samples, std::uint64_t seed, Exec exec) {
  check_p(p);
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  const double q = 1 - p;
  const double c0 = p * q, c1 = c0 + p * p, c2 = c1 + p * q;
  auto batches = run_batches(samples, kDefaultBatches, exec, Counts{}, [&](Counts& acc, std::uint64_t c) {
    ChainRng rng(seed, c);
    long y = 0;
    for (long s = 0; s < t; ++s) {
      double u = rng.uniform();
      if (u < c0) {
        y -= 1;
      } else if (u < c1) {
      } else if (u < c2) {
        y += 1;
      } else {
        y += (y % 2 == 0) ? 2 : -2;
      }
    }
    ++acc[y];
  });
  return merge(samples, batches);
}

EmpiricalLaw y_decomposition_sim(double p, long t, std::uint64_t samples, std::uint64_t seed, Exec exec) {
  check_p(p);
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  const double q = 1 - p;
  const double switch_rate = 2 * p * q;
  const double jump = q * q + p * p > 0 ? q * q / (q * q + p * p) : 0.0;
  auto batches = run_batches(samples, kDefaultBatches, exec, Counts{}, [&](Counts& acc, std::uint64_t c) {
    ChainRng rng(seed, c);
    long n = std::binomial_distribution<long>(t, switch_rate)(rng);
    long s = 0;
    for (long k = 0; k < n; ++k) s += rng.bernoulli(0.5) ? 1 : -1;
    // Stars and bars: n switch times among 1..t, gaps L_0..L_n.
    std::vector<long> times(static_cast<std::size_t>(t));
    for (long k = 0; k < t; ++k) times[k] = k + 1;
    for (long k = 0; k < n; ++k) {
      long j = k + static_cast<long>(rng.uniform() * static_cast<double>(t - k));
      std::swap(times[k], times[j]);
    }
    std::sort(times.begin(), times.begin() + n);
    long r = 0, prev = 0;
    for (long j = 0; j <= n; ++j) {
      long next = j < n ? times[j] : t + 1;
      long len = next - 1 - prev;
      long g = std::binomial_distribution<long>(len, jump)(rng);
      r += (j % 2 == 0) ? g : -g;
      prev = next;
    }
    ++acc[s + 2 * r];
  });
  return merge(samples, batches);
}

namespace {

// log|q| for a nonzero rational without leaving double range.
double log_abs(const Rational& q) {
  auto log_z = [](const mpz_t z) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, z);
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
  };
  return log_z(mpq_numref(q.backend().data())) - log_z(mpq_denref(q.backend().data()));
}

}  // namespace

RateReport fit_rate(const KernelParams<Rational>& kp, long t_max, long i) {
  // p = r = 1/2 has lambda = 0 and every correlation vanishes, so it is fitted directly.
  if (kp.delta == 0 && kp.lambda != 0)
    throw Error(ErrorKind::Singular, "p+r = 1 is covered by the special-case closed form");
  if (t_max < 50) throw Error(ErrorKind::Domain, "t_max must be at least 50");
  RateReport rep;
  rep.p = to_double(kp.p);
  rep.r = to_double(kp.r);
  rep.i = i;
  rep.t_max = t_max;
  rep.lambda = to_double(kp.lambda);
  rep.envelope.assign(static_cast<std::size_t>(t_max + 1), 0.0);
  const double log_lambda = kp.lambda == 0 ? 0.0 : log_abs(kp.lambda);
  for (long t = 0; t <= t_max; ++t) {
    Rational v = c8<Rational>(i, t, kp);
    if (v == 0) continue;
    double lv = log_abs(v);
    if (t >= t_max / 2 && t > 0) rep.fitted_rate = std::max(rep.fitted_rate, std::exp(lv / static_cast<double>(t)));
    if (kp.lambda != 0 && t > 0) {
      double e = std::exp(lv + 0.5 * std::log(static_cast<double>(t)) - static_cast<double>(t) * log_lambda);
      rep.envelope[t] = e;
      rep.envelope_constant = std::max(rep.envelope_constant, e);
    }
  }
  rep.fitted_rate = std::min(rep.fitted_rate, 1.0);
  return rep;
}

template double h_of<double>(const KernelParams<double>&);
template Rational h_of<Rational>(const KernelParams<Rational>&);
template double m_poly<double>(int, long, const double&);
template Rational m_poly<Rational>(int, long, const Rational&);

}  // namespace eightv
