#include "eightv/oracles.hpp"

#include <cmath>

namespace eightv {

long walk_partner(long i, long t) { return ((i + t) % 2 == 0) ? i + 1 : i - 1; }

template <class T>
WalkDist<T> walk_start() {
  WalkDist<T> d;
  d.probs[{0, 1}] = T(1);
  return d;
}

template <class T>
WalkDist<T> walk_step(const WalkDist<T>& dist, const KernelParams<T>& kp) {
  WalkDist<T> next;
  next.t = dist.t + 1;
  auto add = [&](long i, int k, const T& w) {
    if (w == T(0)) return;
    next.probs[{i, k}] += w;
  };
  const bool low = kp.low_regime();
  for (const auto& [state, w] : dist.probs) {
    auto [i, k] = state;
    long j = walk_partner(i, dist.t);
    if (low) {
      add(i, k, w * kp.r);
      add(j, 1 - k, w * (T(1) - kp.p - kp.r));
      add(i, 1 - k, w * kp.p);
    } else {
      add(i, k, w * (T(1) - kp.p));
      add(j, k, w * (kp.r + kp.p - T(1)));
      add(i, 1 - k, w * (T(1) - kp.r));
    }
  }
  return next;
}

template <class T>
T c8_via_walk(long i, long t, const KernelParams<T>& kp) {
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  WalkDist<T> d = walk_start<T>();
  for (long s = 0; s < t; ++s) d = walk_step(d, kp);
  return d.at(i, 1) - d.at(i, 0);
}

template <class T>
CoeffTable<T> series_coeffs(long t_max, const KernelParams<T>& kp) {
  if (t_max < 0) throw Error(ErrorKind::Domain, "t_max must be nonnegative");
  CoeffTable<T> table;
  table.t_max = t_max;
  table.coeff.push_back({T(1)});
  if (t_max >= 1) table.coeff.push_back({T(0), kp.dee, T(-kp.delta)});
  for (long t = 2; t <= t_max; ++t) {
    const auto& a = table.coeff[t - 1];
    const auto& b = table.coeff[t - 2];
    std::vector<T> row(2 * t + 1, T(0));
    // -delta (1 + x^2) row_{t-1}
    for (std::size_t j = 0; j < a.size(); ++j) {
      row[j] -= kp.delta * a[j];
      row[j + 2] -= kp.delta * a[j];
    }
    // -P x^2 row_{t-2}
    for (std::size_t j = 0; j < b.size(); ++j) row[j + 2] -= kp.pee * b[j];
    table.coeff.push_back(std::move(row));
  }
  return table;
}

template <class T>
T closed_form_F(int k1, int k2, const T& C, const T& K, const T& R, const T& L) {
  T h = ((C + K) * (C + K) - (T(1) - R) * (T(1) - L)) * ((C - K) * (C - K) - (T(1) + R) * (T(1) + L));
  if constexpr (is_exact_v<T>) {
    if (h == 0) throw Error(ErrorKind::SingularDenominator, "H vanishes");
  } else {
    if (std::fabs(h) < 1e-14) throw Error(ErrorKind::SingularDenominator, "|H| below 1e-14");
  }
  T num;
  if (k1 == 0 && k2 == 1) {
    num = T(1) - T(2) * C * R * K - C * C - R * R - K * K;
  } else if (k1 == 0 && k2 == 0) {
    num = C * C * R - L * R * R + R * K * K + T(2) * C * K + L;
  } else if (k1 == 1 && k2 == 1) {
    num = -K * K * K + C * (R + L) + K * (C * C + R * L + T(1));
  } else if (k1 == 1 && k2 == 0) {
    num = -C * C * C + K * (R + L) + C * (K * K + R * L + T(1));
  } else {
    throw Error(ErrorKind::Domain, "k1, k2 must be 0 or 1");
  }
  return num / h;
}

template <class T>
T closed_form_combination(const T& C, const T& K, const T& R, const T& L) {
  T den = (C - K) * (C - K) - (T(1) + R) * (T(1) + L);
  if constexpr (is_exact_v<T>) {
    if (den == 0) throw Error(ErrorKind::SingularDenominator, "denominator vanishes");
  } else {
    if (std::fabs(den) < 1e-14) throw Error(ErrorKind::SingularDenominator, "denominator below 1e-14");
  }
  return (C - R - K - T(1)) / den;
}

namespace {

template <class T>
struct PathEnumerator {
  long length;
  T keep, change, diag;
  std::map<long, T> out;

  void walk(long i, int color, long t, const T& w) {
    if (t == length) {
      out[i] += color == 1 ? w : T(-w);
      return;
    }
    if (keep != T(0)) walk(i, color, t + 1, w * keep);
    if (change != T(0)) walk(i, 1 - color, t + 1, w * change);
    if (diag != T(0)) walk(walk_partner(i, t), 1 - color, t + 1, w * diag);
  }
};

}  // namespace

template <class T>
std::map<long, T> brute_force_row(long t, const KernelParams<T>& kp) {
  if (!kp.low_regime()) throw Error(ErrorKind::RegimeUnsupported, "path enumeration needs p+r <= 1");
  if (t < 0) throw Error(ErrorKind::Domain, "t must be nonnegative");
  if (t > kMaxPathLength) throw Error(ErrorKind::SizeExceeded, "path enumeration limited to t <= 12");
  PathEnumerator<T> e{t, kp.r, kp.p, T(1) - kp.p - kp.r, {}};
  e.walk(0, 1, 0, T(1));
  return e.out;
}

template <class T>
T brute_force_paths(long i, long t, const KernelParams<T>& kp) {
  auto row = brute_force_row(t, kp);
  auto it = row.find(i);
  return it == row.end() ? T(0) : it->second;
}

template WalkDist<double> walk_start<double>();
template WalkDist<Rational> walk_start<Rational>();
template WalkDist<double> walk_step(const WalkDist<double>&, const KernelParams<double>&);
template WalkDist<Rational> walk_step(const WalkDist<Rational>&, const KernelParams<Rational>&);
template double c8_via_walk(long, long, const KernelParams<double>&);
template Rational c8_via_walk(long, long, const KernelParams<Rational>&);
template CoeffTable<double> series_coeffs(long, const KernelParams<double>&);
template CoeffTable<Rational> series_coeffs(long, const KernelParams<Rational>&);
template double closed_form_F(int, int, const double&, const double&, const double&, const double&);
template Rational closed_form_F(int, int, const Rational&, const Rational&, const Rational&, const Rational&);
template double closed_form_combination(const double&, const double&, const double&, const double&);
template Rational closed_form_combination(const Rational&, const Rational&, const Rational&, const Rational&);
template double brute_force_paths(long, long, const KernelParams<double>&);
template Rational brute_force_paths(long, long, const KernelParams<Rational>&);
template std::map<long, double> brute_force_row(long, const KernelParams<double>&);
template std::map<long, Rational> brute_force_row(long, const KernelParams<Rational>&);

}  // namespace eightv
