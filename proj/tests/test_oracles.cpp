#include <cmath>

#include "eightv/correlation.hpp"
#include "eightv/oracles.hpp"
#include "support.hpp"

using namespace eightv;
using testing::pr;
using testing::Q;

TEST_CASE("walk_step examples") {
  auto kp = pr(1, 5, 3, 10);
  auto d = walk_step(walk_start<Rational>(), kp);
  CHECK(d.probs.size() == 3);
  CHECK(d.at(0, 1) == Q(3, 10));
  CHECK(d.at(0, 0) == Q(1, 5));
  CHECK(d.at(1, 0) == Q(1, 2));

  auto k1 = params_from_pr(Q(1, 5), Q(1));
  auto e = walk_step(walk_start<Rational>(), k1);
  CHECK(e.at(0, 1) == Q(4, 5));
  CHECK(e.at(1, 1) == Q(1, 5));
  CHECK(e.at(0, 0) == 0);

  auto kf = params_from_pr(Q(1), Q(0));
  auto f = walk_step(walk_step(walk_start<Rational>(), kf), kf);
  CHECK(f.at(0, 1) == 1);
}

TEST_CASE("walk mass and support") {
  for (const auto& kp : testing::exact_grid()) {
    auto d = walk_start<Rational>();
    for (long t = 1; t <= 15; ++t) {
      d = walk_step(d, kp);
      Rational mass = 0;
      for (const auto& [key, prob] : d.probs) {
        mass += prob;
        CHECK(std::labs(key.first) <= t);
        CHECK(prob >= 0);
      }
      CHECK(mass == 1);
    }
  }
}

TEST_CASE("c8_via_walk examples") {
  auto kp = pr(1, 5, 3, 10);
  CHECK(c8_via_walk<Rational>(0, 0, kp) == 1);
  CHECK(c8_via_walk<Rational>(0, 1, kp) == Q(1, 10));
  CHECK(c8_via_walk<Rational>(1, 1, kp) == Q(-1, 2));
}

TEST_CASE("series coefficients") {
  auto kp = pr(1, 5, 3, 10);
  auto ct = series_coeffs<Rational>(6, kp);
  CHECK(ct.coeff[0][0] == 1);
  REQUIRE(ct.coeff[1].size() == 3);
  CHECK(ct.coeff[1][0] == 0);
  CHECK(ct.coeff[1][1] == kp.dee);
  CHECK(ct.coeff[1][2] == -kp.delta);
  CHECK(ct.coeff[2][2] == kp.delta * kp.delta - kp.pee);
  for (long t = 0; t <= 6; ++t) {
    CHECK(static_cast<long>(ct.coeff[t].size()) <= 2 * t + 1);
    Rational alt = 0;
    for (std::size_t j = 0; j < ct.coeff[t].size(); ++j) alt += (j % 2 ? -1 : 1) * ct.coeff[t][j];
    CHECK(abs_of(alt) <= 1);
  }
}

TEST_CASE("c8, walk, series and paths agree exactly") {
  for (const auto& kp : testing::exact_grid()) {
    const long tmax = 10;
    auto ct = series_coeffs<Rational>(tmax, kp);
    for (long t = 0; t <= tmax; ++t) {
      auto row = kp.low_regime() && t <= 8 ? brute_force_row<Rational>(t, kp) : std::map<long, Rational>{};
      for (long i = -t; i <= t; ++i) {
        Rational v = c8<Rational>(i, t, kp);
        CHECK(c8_via_walk<Rational>(i, t, kp) == v);
        std::size_t j = static_cast<std::size_t>(i + t);
        CHECK((j < ct.coeff[t].size() ? ct.coeff[t][j] : Rational(0)) == v);
        if (!row.empty()) CHECK((row.count(i) ? row[i] : Rational(0)) == v);
      }
    }
  }
}

TEST_CASE("brute_force_paths limits") {
  auto kp = pr(1, 5, 3, 10);
  CHECK(brute_force_paths<Rational>(0, 0, kp) == 1);
  CHECK(brute_force_paths<Rational>(2, 2, kp) == Q(1, 4));
  CHECK_THROWS_AS(brute_force_paths<Rational>(0, 13, kp), Error);
  CHECK_THROWS_AS(brute_force_paths<Rational>(0, 2, pr(3, 5, 3, 5)), Error);
}

TEST_CASE("closed form F at the origin and symmetry") {
  using R = Rational;
  CHECK(closed_form_F<R>(0, 1, 0, 0, 0, 0) == 1);
  CHECK(closed_form_F<R>(0, 0, 0, 0, 0, 0) == 0);
  CHECK(closed_form_F<R>(1, 1, 0, 0, 0, 0) == 0);
  CHECK(closed_form_F<R>(1, 0, 0, 0, 0, 0) == 0);
  R C = Q(1, 5), K = Q(1, 7), Rr = Q(1, 3), L = Q(1, 9);
  CHECK(closed_form_F<R>(0, 1, C, K, Rr, L) == closed_form_F<R>(0, 1, K, C, Rr, L));
  CHECK(closed_form_F<R>(0, 1, C, K, Rr, L) == Q(221370975, 192047776));
  CHECK(closed_form_combination<R>(C, K, Rr, L) == Q(21105, 24446));
}

TEST_CASE("closed forms satisfy the path system with R and L exchanged") {
  using R = Rational;
  R C = Q(1, 5), K = Q(1, 7), Rr = Q(1, 3), L = Q(1, 9);
  auto F = [&](int a, int b) { return closed_form_F<R>(a, b, C, K, Rr, L); };
  // The system read with L in the role of R and vice versa.
  CHECK(F(0, 1) == 1 + L * F(0, 0) + K * F(1, 1) + C * F(1, 0));
  CHECK(F(0, 0) == L * F(0, 1) + K * F(1, 0) + C * F(1, 1));
  CHECK(F(1, 1) == Rr * F(1, 0) + K * F(0, 1) + C * F(0, 0));
  CHECK(F(1, 0) == Rr * F(1, 1) + K * F(0, 0) + C * F(0, 1));
  // As printed it fails, which is why the exchange is recorded.
  CHECK(F(0, 1) != 1 + Rr * F(0, 0) + K * F(1, 1) + C * F(1, 0));
}

TEST_CASE("combination matches the generating fraction") {
  double p = 0.2, r = 0.3, l = 0.1, x = 0.7;
  auto kp = params_from_pr(p, r);
  double C = p * l * x, K = r * l * x, R = kp.delta * l, L = kp.delta * l * x * x;
  double comb = closed_form_combination<double>(C, K, R, L);
  auto ct = series_coeffs<double>(40, kp);
  double s = 0;
  for (long t = 0; t <= 40; ++t)
    for (std::size_t j = 0; j < ct.coeff[t].size(); ++j) s += ct.coeff[t][j] * std::pow(l, t) * std::pow(x, j);
  CHECK(comb == doctest::Approx(s).epsilon(1e-9));
  double frac = (1 + l * (kp.delta + x * kp.dee)) / (1 + kp.delta * (1 + x * x) * l + kp.pee * x * x * l * l);
  CHECK(comb == doctest::Approx(frac).epsilon(1e-12));
  CHECK_THROWS_AS(closed_form_F<double>(0, 0, 1, 0, 0, 0), Error);
}
