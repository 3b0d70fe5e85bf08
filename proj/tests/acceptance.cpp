// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "eightv/asymptotics.hpp"
#include "eightv/correlation.hpp"
#include "eightv/dynamics.hpp"
#include "eightv/lattice.hpp"
#include "eightv/oracles.hpp"
#include "eightv/pca.hpp"

using namespace eightv;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

KernelParams<Rational> pr(const Rational& p, const Rational& r) { return params_from_pr(p, r); }

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string str(const Rational& q) { return to_string(q); }

// 1. closed form = walk = series for t <= 30; paths for t <= 12 when p+r <= 1.
Outcome oracle_equivalence() {
  const std::vector<Rational> vals = {Q(1, 10), Q(1, 4), Q(1, 2), Q(3, 4), Q(9, 10)};
  std::vector<std::pair<Rational, Rational>> grid;
  for (const auto& p : vals)
    for (const auto& r : vals) grid.emplace_back(p, r);
  const long t_max = 30;
  std::vector<std::string> failures(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto kp = pr(grid[g].first, grid[g].second);
    auto ct = series_coeffs<Rational>(t_max, kp);
    WalkDist<Rational> walk = walk_start<Rational>();
    for (long t = 0; t <= t_max && failures[g].empty(); ++t) {
      if (t > 0) walk = walk_step(walk, kp);
      std::map<long, Rational> paths;
      bool use_paths = kp.low_regime() && t <= 12;
      if (use_paths) paths = brute_force_row<Rational>(t, kp);
      for (long i = -t; i <= t; ++i) {
        Rational v = c8<Rational>(i, t, kp);
        Rational w = walk.at(i, 1) - walk.at(i, 0);
        std::size_t j = static_cast<std::size_t>(i + t);
        Rational s = j < ct.coeff[t].size() ? ct.coeff[t][j] : Rational(0);
        bool ok = v == w && v == s;
        if (use_paths) ok = ok && v == (paths.count(i) ? paths[i] : Rational(0));
        if (!ok) {
          failures[g] = "mismatch at p=" + str(kp.p) + " r=" + str(kp.r) + " (i,t)=(" + std::to_string(i) + "," +
                        std::to_string(t) + ")";
          break;
        }
      }
    }
  }
  Outcome out;
  for (const auto& f : failures)
    if (!f.empty()) out.fail(f);
  if (out.ok) out.detail = "25 points, t <= 30";
  return out;
}

// 2. Special-case branches against the general closed form.
Outcome special_cases() {
  Outcome out;
  const std::vector<std::pair<Rational, Rational>> pts = {
      {Q(1, 3), Q(2, 3)}, {Q(1, 10), Q(9, 10)}, {Q(1, 3), Q(1, 3)}, {Q(4, 5), Q(4, 5)}, {Q(1, 2), Q(1, 5)},
      {Q(1, 2), Q(7, 8)}, {Q(1, 5), Q(1, 2)},   {Q(3, 4), Q(1, 2)}, {Q(1, 5), Q(3, 10)}};
  long compared = 0;
  for (const auto& [p, r] : pts) {
    auto kp = pr(p, r);
    bool structured = kp.delta == 0 || kp.dee == 0 || p == Q(1, 2) || r == Q(1, 2);
    for (long t = 0; t <= 30; ++t)
      for (long i = -t - 2; i <= t + 2; ++i) {
        auto s = c8_special<Rational>(i, t, kp);
        bool expect = structured || outside_cone(i, t);
        if (s.has_value() != expect) {
          out.fail("branch presence wrong at p=" + str(p) + " r=" + str(r));
          continue;
        }
        if (s) {
          ++compared;
          if (*s != c8<Rational>(i, t, kp)) out.fail("value mismatch at p=" + str(p) + " r=" + str(r));
        }
      }
    if (c8<Rational>(0, 1, kp) != r - p) out.fail("c8(0,1) != r-p");
    if (c8<Rational>(1, 1, kp) != p + r - 1) out.fail("c8(1,1) != p+r-1");
  }
  if (out.ok) out.detail = std::to_string(compared) + " special values";
  return out;
}

// 3. Partition functions.
Outcome partition_functions() {
  Outcome out;
  const std::vector<Weights<Rational>> ws = {
      {Q(1), Q(1), Q(1), Q(1)}, {Q(1, 3), Q(1, 2), Q(2, 3), Q(1, 2)}, {Q(2), Q(5), Q(7), Q(4)}};
  for (const auto& w : ws) {
    Rational s = w.a + w.c;
    if (partition_function(make_kbar(1), Free{}, w) != 4 * s) out.fail("Z(Kbar_1)");
    if (partition_function(make_kbar(2), Free{}, w) != 16 * s * s * s) out.fail("Z(Kbar_2)");
    if (partition_function(make_k(1), Free{}, w) != 4 * s) out.fail("Z(K_1)");
    if (partition_function(make_k(2), Free{}, w) != 16 * s * s * s * s) out.fail("Z(K_2)");
    for (int n = 1; n <= 2; ++n) {
      auto lat = make_kbar(n);
      const std::size_t m = lat.designated.size();
      for (std::uint32_t code = 0; code < (1u << m); ++code) {
        std::vector<std::uint8_t> bits(m);
        for (std::size_t k = 0; k < m; ++k) bits[k] = (code >> k) & 1u;
        if (partition_function(lat, Fixed{bits}, w) != ipow<Rational>(s, n * (n + 1) / 2))
          out.fail("fixed boundary on Kbar_" + std::to_string(n));
      }
    }
  }
  if (out.ok) out.detail = "3 weight vectors";
  return out;
}

// 4. Free and half-product boundaries give the same Gibbs measure.
Outcome boundary_equivalence() {
  Outcome out;
  for (const auto& [p, r] : {std::pair{Q(1, 3), Q(1, 2)}, {Q(1, 4), Q(3, 4)}, {Q(2, 3), Q(1, 5)}}) {
    auto w = weights_from_pr(p, r);
    for (int n = 1; n <= 2; ++n)
      if (gibbs_distribution(make_kbar(n), Free{}, w) != gibbs_distribution(make_kbar(n), HalfProduct{Q(1, 2)}, w))
        out.fail("differs at N=" + std::to_string(n));
  }
  if (out.ok) out.detail = "N <= 2, 3 weight vectors";
  return out;
}

// 5. Restriction laws.
Outcome restriction_laws() {
  Outcome out;
  for (const auto& kp : {pr(Q(1, 3), Q(1, 2)), pr(Q(1, 4), Q(3, 4))})
    for (int n = 1; n <= 2; ++n)
      if (!check_restriction_law(n, kp)) out.fail("n=" + std::to_string(n) + " p=" + str(kp.p));
  if (out.ok) out.detail = "n <= 2, 2 points";
  return out;
}

// 6. Exact invariance of PM(1/2), and of PM(q) at r = 1.
Outcome invariance() {
  Outcome out;
  const std::vector<std::pair<Rational, Rational>> pts = {
      {Q(1, 3), Q(1, 2)}, {Q(1, 10), Q(9, 10)}, {Q(2, 3), Q(1, 4)}, {Q(4, 5), Q(3, 5)}, {Q(1, 5), Q(1, 5)}};
  for (const auto& [p, r] : pts)
    for (int width = 2; width <= 8; width += 2) {
      auto laws = exact_row_laws(width, 2, ProductMeasure{Q(1, 2)}, pr(p, r));
      for (int t = 1; t <= 2; ++t)
        for (const auto& [bits, prob] : laws[t])
          if (prob != ipow<Rational>(Q(1, 2), width)) out.fail("PM(1/2) moved at width " + std::to_string(width));
      if (laws[1].size() != (1u << width)) out.fail("row support shrank");
    }
  for (const auto& q : {Q(1, 5), Q(1, 2), Q(9, 10)})
    for (const auto& p : {Q(1, 3), Q(7, 10)}) {
      auto laws = exact_row_laws(8, 2, ProductMeasure{q}, pr(p, Q(1)));
      if (laws[1] != laws[0] || laws[2] != laws[0]) out.fail("PM(" + str(q) + ") moved at r=1");
    }
  if (out.ok) out.detail = "widths 2..8";
  return out;
}

// 7. Monte Carlo against the closed form, cone edges included.
Outcome monte_carlo() {
  Outcome out;
  long checked = 0, cone = 0;
  double worst = 0;
  for (double p : {0.2, 0.5, 0.7})
    for (double r : {0.2, 0.5, 0.7}) {
      auto kd = params_from_pr(p, r);
      std::vector<EdgeAddress> targets;
      for (long t = 1; t <= 8; ++t)
        for (long i = -t - 1; i <= t + 1; ++i) targets.push_back({i, t});
      SamplerConfig cfg;
      cfg.samples = 100000;
      cfg.seed = 1000 + static_cast<std::uint64_t>(100 * p + 10 * r);
      auto est = estimate_correlations({0, 0}, targets, ProductMeasure{Q(1, 2)}, kd, cfg);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        double exact = c8<double>(targets[k].i, targets[k].t, kd);
        double z = std::fabs(est[k].estimate - exact) / std::max(est[k].std_error, 1e-12);
        if (outside_cone(targets[k].i, targets[k].t)) ++cone;
        ++checked;
        worst = std::max(worst, z);
        if (std::fabs(est[k].estimate - exact) > 5 * est[k].std_error + 1e-9)
          out.fail("p=" + std::to_string(p) + " r=" + std::to_string(r) + " (i,t)=(" + std::to_string(targets[k].i) +
                   "," + std::to_string(targets[k].t) + ")");
      }
    }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld edges (%ld outside the cone), max |z| = %.2f", checked, cone, worst);
  if (out.ok) out.detail = buf;
  return out;
}

// 8. Boundary influence from the all-ones line (origin left free so Var e(0,0) > 0).
Outcome boundary_influence() {
  Outcome out;
  double worst_margin = -1e9;
  for (auto [p, r] : {std::pair{0.3, 0.4}, {0.7, 0.6}}) {
    auto kd = params_from_pr(p, r);
    for (long t : {2L, 4L, 6L, 8L})
      for (long i : {0L, t / 2, -t / 2}) {
        auto b = check_boundary_bound(ones_with_free_origin(), i, t, kd, 100000, 77 + static_cast<std::uint64_t>(t));
        worst_margin = std::max(worst_margin, std::fabs(b.lhs) - b.rhs - 5 * b.std_error);
        if (!b.holds) out.fail("p=" + std::to_string(p) + " t=" + std::to_string(t));
      }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "largest |lhs| - rhs - 5SE = %.3f", worst_margin);
  if (out.ok) out.detail = buf;
  return out;
}

// 9. PCA.
Outcome pca() {
  Outcome out;
  Eigen::MatrixXd uni = Eigen::MatrixXd::Constant(2, 2, 0.5);
  for (auto [p, r] : {std::pair{0.3, 0.6}, {0.2, 0.2}, {0.5, 0.8}, {0.7, 0.1}, {0.9, 0.4}}) {
    auto T = a8_kernel(p, r);
    auto h = solve_hzmc_binary(T);
    if (!h) {
      out.fail("no HZMC for A8(" + std::to_string(p) + "," + std::to_string(r) + ")");
      continue;
    }
    if ((h->D - uni).cwiseAbs().maxCoeff() > 1e-10 || (h->U - uni).cwiseAbs().maxCoeff() > 1e-10)
      out.fail("A8 HZMC not uniform");
    if (hzmc_invariance_residual(T, *h) > 1e-10) out.fail("A8 residual");
  }
  for (double q : {0.2, 0.5, 0.8})
    for (double p : {0.25, 0.5, 0.75}) {
      Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
      for (int i = 0; i < 3; ++i) {
        D(i, (i + 1) % 3) = q;
        D(i, (i + 2) % 3) = 1 - q;
      }
      if (hzmc_invariance_residual(a6_kernel(p), make_hzmc(D, D)) > 1e-12) out.fail("A6 residual");
    }
  for (const auto& kp : {pr(Q(1, 3), Q(1, 2)), pr(Q(1, 4), Q(2, 3))})
    for (int steps = 1; steps <= 2; ++steps)
      if (!theta8_consistency(4, steps, kp)) out.fail("theta8 pushforward, steps=" + std::to_string(steps));

  double worst = 0;
  const std::vector<std::vector<int>> rows = {{0, 0, 0, 0, 0, 0}, {0, 1, 0, 1, 0, 1}, {1, 1, 0, 1, 0, 0}};
  for (double p : {0.2, 0.5, 0.8})
    for (double r : {0.2, 0.5, 0.8}) {
      if (std::fabs(p + r - 1) < 1e-12) continue;
      for (const auto& row : rows) {
        auto m = a8_marginals(FaceRows{row, row, 0}, p, r, 40, 100000, 5);
        for (const auto& e : m) {
          worst = std::max(worst, std::fabs(e.estimate - 0.5));
          if (std::fabs(e.estimate - 0.5) > 0.01) out.fail("A8 marginal off at p=" + std::to_string(p));
        }
      }
    }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |marginal - 1/2| at step 40 = %.4f", worst);
  if (out.ok) out.detail = buf;
  return out;
}

// 10. Decay rate, envelope and the Y decomposition.
Outcome asymptotics() {
  Outcome out;
  std::string detail;
  for (const auto& [p, r] :
       {std::pair{Q(1, 5), Q(2, 5)}, {Q(1, 10), Q(3, 10)}, {Q(7, 10), Q(3, 5)}, {Q(7, 20), Q(9, 10)}}) {
    auto rep = fit_rate(pr(p, r), 200);
    if (std::fabs(rep.fitted_rate - rep.lambda) > 0.02) out.fail("rate at p=" + str(p) + " r=" + str(r));
    double early = 0, late = 0;
    for (long t = 1; t <= 100; ++t) early = std::max(early, rep.envelope[t]);
    for (long t = 101; t <= 200; ++t) late = std::max(late, rep.envelope[t]);
    if (!(std::isfinite(late) && late <= 1.5 * early)) out.fail("envelope grows at p=" + str(p));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.3f/%.1f", detail.empty() ? "" : " ", rep.fitted_rate, rep.lambda);
    detail += buf;
  }
  for (double p : {0.2, 0.5, 0.8}) {
    auto walk = y_walk_sim(p, 20, 100000, 31);
    auto dec = y_decomposition_sim(p, 20, 100000, 37);
    double tv = tv_distance(walk, dec);
    if (tv > 0.02) out.fail("TV " + std::to_string(tv) + " at p=" + std::to_string(p));
  }
  if (out.ok) out.detail = "rate/lambda " + detail;
  return out;
}

// 11. KDN self-checks.
Outcome kdn() {
  Outcome out;
  for (long t = 1; t <= 30; ++t) {
    Rational all = 0, right = 0;
    for (long i = -2 * t - 4; i <= 2 * t + 4; ++i) {
      Rational v = kdn_c<Rational>(i, 2 * t);
      long d = (std::labs(i) % 2 == 1) ? 1 : 2;
      if (2 * t < i + d && v != 0) out.fail("nonzero outside support at t=" + std::to_string(t));
      all += v;
      if (i >= 0) right += v;
    }
    if (all != 1 || right != Q(1, 2)) out.fail("binomial mass at 2t=" + std::to_string(2 * t));
  }
  for (const auto& p : {Q(1, 5), Q(1, 3), Q(4, 5)}) {
    auto kp = pr(p, Q(1));
    if (c8<Rational>(0, 2, kp) == kdn_c<Rational>(0, 2)) out.fail("c8 and KDN agree at p=" + str(p));
  }
  if (c8<Rational>(0, 2, pr(Q(1, 2), Q(1))) != kdn_c<Rational>(0, 2)) out.fail("p=1/2 should coincide");
  if (out.ok) out.detail = "support, mass, known divergence at (0,2)";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"special cases", special_cases},
      {"partition functions", partition_functions},
      {"boundary-condition equivalence", boundary_equivalence},
      {"restriction laws", restriction_laws},
      {"invariance", invariance},
      {"monte carlo consistency", monte_carlo},
      {"boundary-influence bound", boundary_influence},
      {"pca", pca},
      {"asymptotics", asymptotics},
      {"kdn self-checks", kdn},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s %2zu %-32s %6.1fs  %s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
