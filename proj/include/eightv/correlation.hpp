#pragma once

#include <optional>

#include "eightv/model.hpp"

namespace eightv {

// Tolerance for recognising a special (p,r) in float mode.
inline constexpr double kSpecialTolerance = 1e-12;

// True when (i,t) lies outside the influence cone of (0,0).
bool outside_cone(long i, long t);

// Stationary correlation C8(i,t) between e(0,0) and e(i,t).
template <class T>
T c8(long i, long t, const KernelParams<T>& kp);

// Simplified closed form for cone points and for p+r=1, p=r, p=1/2, r=1/2.
// Empty when no special structure applies.
template <class T>
std::optional<T> c8_special(long i, long t, const KernelParams<T>& kp);

// Six-vertex (r=1) formula of Kandel-Domany-Nienhuis at time 2t.
// Deliberately not identified with c8 at r=1: the two disagree already at (0,2).
template <class T>
T kdn_c(long i, long two_t);

// 2(l^{t-1-floor(t/2)} + l^{floor(t/2)} - l^{t-1}) with l = lambda; 2 at t = 0.
template <class T>
T boundary_bound(long t, const KernelParams<T>& kp);

struct CorrelationQuery {
  long i = 0;
  long t = 0;
  KernelParams<Rational> params;
  Backend backend = Backend::Float;
};

Scalar c8(const CorrelationQuery& q);
std::optional<Scalar> c8_special(const CorrelationQuery& q);

}  // namespace eightv
