#include "eightv/pca.hpp"

#include <cmath>
#include <functional>

namespace eightv {

bool TpcaKernel::positive_rate() const {
  for (double v : entries)
    if (!(v > 0)) return false;
  return true;
}

double TpcaKernel::stochasticity_defect() const {
  double worst = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int yp = 0; yp < size; ++yp) {
        double s = 0;
        for (int z = 0; z < size; ++z) s += (*this)(y, x, yp, z);
        if (s != 0) worst = std::max(worst, std::fabs(s - 1));
      }
  return worst;
}

TpcaKernel make_kernel(int size) {
  if (size < 2) throw Error(ErrorKind::Domain, "alphabet needs at least two letters");
  TpcaKernel k;
  k.size = size;
  k.entries.assign(static_cast<std::size_t>(size * size * size * size), 0.0);
  return k;
}

template <class T>
T a8_entry(int y, int x, int yp, int z, const T& p, const T& r) {
  if (y == yp) {
    bool keep = (x == y) ? (z == y) : (z == x);
    return keep ? r : T(T(1) - r);
  }
  // y != y': the new cell copies y with probability p when x = y', copies y' with
  // probability p when x = y.
  bool hit = (x == yp) ? (z == y) : (z == yp);
  return hit ? p : T(T(1) - p);
}

TpcaKernel a8_kernel(double p, double r) {
  if (p < 0 || p > 1 || r < 0 || r > 1) throw Error(ErrorKind::Domain, "p and r must lie in [0,1]");
  TpcaKernel k = make_kernel(2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x)
      for (int yp = 0; yp < 2; ++yp)
        for (int z = 0; z < 2; ++z) k.at(y, x, yp, z) = a8_entry<double>(y, x, yp, z, p, r);
  return k;
}

TpcaKernel a6_kernel(double p) {
  if (p < 0 || p > 1) throw Error(ErrorKind::Domain, "p must lie in [0,1]");
  TpcaKernel k = make_kernel(3);
  auto m = [](int v) { return ((v % 3) + 3) % 3; };
  for (int i = 0; i < 3; ++i) {
    for (int s : {1, -1}) {
      // s = 1: the stated rules; s = -1: their colour reflection.
      k.at(i, m(i + s), m(i + 2 * s), m(i + s)) = 1.0;
      k.at(i, m(i + s), i, m(i + 2 * s)) = p;
      k.at(i, m(i + s), i, m(i + s)) = 1.0 - p;
    }
  }
  return k;
}

std::pair<Eigen::VectorXd, double> left_perron(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::VectorXd w = M.transpose() * v;
    double lam = w.sum();
    if (!(lam > 0)) throw Error(ErrorKind::EigenFailure, "power iteration lost positivity");
    w /= lam;
    if ((w - v).cwiseAbs().maxCoeff() <= 1e-13) return {w, lam};
    v = w;
  }
  throw Error(ErrorKind::EigenFailure, "power iteration did not converge in 1e4 steps");
}

Hzmc make_hzmc(const Eigen::MatrixXd& D, const Eigen::MatrixXd& U) {
  Hzmc h{D, U, {}};
  h.rho = left_perron(D * U).first;
  return h;
}

double hzmc_invariance_residual(const TpcaKernel& T, const Hzmc& h) {
  const int n = T.size;
  if (h.D.rows() != n || h.U.rows() != n) throw Error(ErrorKind::Domain, "dimension mismatch");
  double worst = 0;
  for (int y = 0; y < n; ++y)
    for (int yp = 0; yp < n; ++yp)
      for (int z = 0; z < n; ++z) {
        double rhs = 0;
        for (int x = 0; x < n; ++x) rhs += h.U(y, x) * h.D(x, yp) * T(y, x, yp, z);
        worst = std::max(worst, std::fabs(h.D(y, z) * h.U(z, yp) - rhs));
      }
  return worst;
}

double cm15_condition1_residual(const PairKernel& K) {
  const int n = static_cast<int>(K.size());
  double worst = 0;
  for (int x = 0; x < n; ++x)
    for (int xp = 0; xp < n; ++xp)
      for (int y = 0; y < n; ++y) {
        double lhs = K[x][xp][y] * K[x][0][0] * K[0][xp][0] * K[0][0][y];
        double rhs = K[0][0][0] * K[x][xp][0] * K[0][xp][y] * K[x][0][y];
        worst = std::max(worst, std::fabs(lhs - rhs));
      }
  return worst;
}

double belyaev_residual(const PairKernel& K) {
  return std::fabs(K[0][0][0] * K[0][0][1] * K[1][0][0] * K[0][1][0] -
                   K[1][1][1] * K[1][1][0] * K[0][1][1] * K[1][0][1]);
}

Cm15Candidate cm15_candidate(const PairKernel& K) {
  const int n = static_cast<int>(K.size());
  Cm15Candidate c;
  Eigen::MatrixXd N(n, n), G(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) N(x, y) = K[x][x][y];
  c.nu = left_perron(N).first;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) G(x, y) = c.nu(y) * K[y][y][0] / K[y][x][0];
  c.gamma = left_perron(G).first;
  c.D.resize(n, n);
  c.U.resize(n, n);
  for (int x = 0; x < n; ++x) {
    double den = 0;
    for (int xpp = 0; xpp < n; ++xpp) den += c.gamma(xpp) / K[x][xpp][0];
    for (int y = 0; y < n; ++y) {
      double num = 0;
      for (int xp = 0; xp < n; ++xp) num += c.gamma(xp) * K[x][xp][y] / K[x][xp][0];
      c.D(x, y) = num / den;
    }
  }
  for (int y = 0; y < n; ++y) {
    double den = 0;
    for (int xpp = 0; xpp < n; ++xpp) den += c.gamma(xpp) * K[0][xpp][y] / K[0][xpp][0];
    for (int xp = 0; xp < n; ++xp) c.U(y, xp) = c.gamma(xp) * K[0][xp][y] / K[0][xp][0] / den;
  }
  return c;
}

namespace {

PairKernel pair_kernel(const TpcaKernel& T, const std::function<double(int, int, int, int)>& entry) {
  const int n = T.size;
  PairKernel K(n, std::vector<std::vector<double>>(n, std::vector<double>(n)));
  for (int y = 0; y < n; ++y)
    for (int yp = 0; yp < n; ++yp) {
      Eigen::MatrixXd M(n, n);
      for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) M(x, z) = entry(y, yp, x, z);
      Eigen::VectorXd v = left_perron(M).first;
      for (int x = 0; x < n; ++x) K[y][yp][x] = v(x);
    }
  return K;
}

bool kernel_positive(const PairKernel& K) {
  for (const auto& a : K)
    for (const auto& b : a)
      for (double v : b)
        if (!(v > 0)) return false;
  return true;
}

void require_positive(const TpcaKernel& T) {
  if (!T.positive_rate()) throw Error(ErrorKind::Domain, "solver needs a positive-rate kernel");
}

}  // namespace

PairKernel binary_pair_kernel(const TpcaKernel& T) {
  return pair_kernel(T, [&](int y, int yp, int x, int z) {
    double s = 0;
    for (int u = 0; u < T.size; ++u) s += T(yp, x, y, u) * T(y, u, yp, z);
    return s;
  });
}

PairKernel equal_du_pair_kernel(const TpcaKernel& T) {
  return pair_kernel(T, [&](int y, int yp, int x, int z) { return T(y, x, yp, z); });
}

std::optional<Hzmc> solve_hzmc_binary(const TpcaKernel& T) {
  if (T.size != 2) throw Error(ErrorKind::Domain, "binary solver needs a two-letter alphabet");
  require_positive(T);
  PairKernel K = binary_pair_kernel(T);
  if (!kernel_positive(K) || cm15_condition1_residual(K) > kSolverTolerance) return std::nullopt;
  Cm15Candidate c = cm15_candidate(K);
  Hzmc h = make_hzmc(c.D, c.U);
  if (hzmc_invariance_residual(T, h) > kSolverTolerance) return std::nullopt;
  return h;
}

std::optional<Hzmc> solve_hzmc_equal_du(const TpcaKernel& T) {
  require_positive(T);
  PairKernel K = equal_du_pair_kernel(T);
  if (!kernel_positive(K) || cm15_condition1_residual(K) > kSolverTolerance) return std::nullopt;
  Cm15Candidate c = cm15_candidate(K);
  if ((c.D - c.U).cwiseAbs().maxCoeff() > kSolverTolerance) return std::nullopt;
  if ((c.D * c.U - c.U * c.D).cwiseAbs().maxCoeff() > kSolverTolerance) return std::nullopt;
  Hzmc h = make_hzmc(c.D, c.D);
  if (hzmc_invariance_residual(T, h) > kSolverTolerance) return std::nullopt;
  return h;
}

namespace {

void check_rows(const FaceRows& rows) {
  if (rows.upper.empty() || rows.upper.size() != rows.lower.size())
    throw Error(ErrorKind::Domain, "face rows must be nonempty and of equal length");
}

}  // namespace

FaceRows tpca_step(const FaceRows& rows, const TpcaKernel& T, ChainRng& rng) {
  check_rows(rows);
  const int n = rows.cells();
  std::vector<int> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int y = rows.lower[i], x = rows.upper[(i + 1) % n], yp = rows.lower[(i + 1) % n];
    double total = 0;
    for (int c = 0; c < T.size; ++c) total += T(y, x, yp, c);
    if (!(total > 0)) throw Error(ErrorKind::UnsupportedState, "kernel row is identically zero");
    double u = rng.uniform() * total;
    int pick = T.size - 1;
    double acc = 0;
    for (int c = 0; c < T.size; ++c) {
      acc += T(y, x, yp, c);
      if (u < acc) {
        pick = c;
        break;
      }
    }
    while (T(y, x, yp, pick) == 0) --pick;
    z[i] = pick;
  }
  return FaceRows{rows.lower, std::move(z), rows.t + 1};
}

namespace {

template <class Rule>
EdgeWindow theta_map(const FaceRows& rows, Rule rule) {
  check_rows(rows);
  const int n = rows.cells();
  const long w = 2L * n;
  EdgeWindow e{Row(static_cast<std::size_t>(w), 0), rows.t};
  for (int i = 0; i < n; ++i) {
    int x = rows.upper[(i + 1) % n];
    auto [left, right] = rule(rows.lower[i], x, rows.lower[(i + 1) % n]);
    e.states[static_cast<std::size_t>(wrap_index(2L * i + rows.t, static_cast<int>(w)))] = left;
    e.states[static_cast<std::size_t>(wrap_index(2L * i + rows.t + 1, static_cast<int>(w)))] = right;
  }
  return e;
}

}  // namespace

EdgeWindow theta8(const FaceRows& rows) {
  return theta_map(rows, [](int y, int x, int yp) {
    return std::pair<std::uint8_t, std::uint8_t>(x == y, x == yp);
  });
}

EdgeWindow theta6(const FaceRows& rows) {
  return theta_map(rows, [](int y, int x, int yp) {
    for (int v : {y, x, yp})
      if (v < 0 || v > 2) throw Error(ErrorKind::ImproperColoring, "colours must be 0, 1 or 2");
    if (x == y || x == yp) throw Error(ErrorKind::ImproperColoring, "adjacent faces share a colour");
    return std::pair<std::uint8_t, std::uint8_t>(x == (y + 1) % 3, yp == (x + 1) % 3);
  });
}

bool theta8_consistency(int width, int steps, const KernelParams<Rational>& kp) {
  if (width < 2 || width % 2 != 0) throw Error(ErrorKind::Domain, "width must be even and positive");
  if (width > kMaxExactWidth || steps < 0 || steps > 3)
    throw Error(ErrorKind::SizeExceeded, "consistency check limited to width <= 8 and steps <= 3");
  const int n = width / 2;
  const Rational third(1, 3), two_thirds(2, 3);

  auto edges_bits = [&](const FaceRows& rows) {
    EdgeWindow e = theta8(rows);
    Trajectory bits = 0;
    for (int i = 0; i < width; ++i) bits |= static_cast<Trajectory>(e.states[i]) << i;
    return bits;
  };
  auto unpack = [&](std::uint32_t code) {
    std::vector<int> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) row[i] = (code >> i) & 1u;
    return row;
  };

  // Symmetrised biased product law on the two initial face rows.
  std::map<Trajectory, Rational> pca_law;
  std::map<Trajectory, Rational> init_edges;
  std::function<void(const FaceRows&, Trajectory, const Rational&)> rec = [&](const FaceRows& rows, Trajectory traj,
                                                                              const Rational& prob) {
    if (rows.t == steps) {
      pca_law[traj] += prob;
      return;
    }
    for (std::uint32_t code = 0; code < (1u << n); ++code) {
      std::vector<int> z = unpack(code);
      Rational q(1);
      for (int i = 0; i < n && q != 0; ++i)
        q *= a8_entry<Rational>(rows.lower[i], rows.upper[(i + 1) % n], rows.lower[(i + 1) % n], z[i], kp.p, kp.r);
      if (q == 0) continue;
      FaceRows next{rows.lower, z, rows.t + 1};
      rec(next, traj | (edges_bits(next) << (next.t * width)), prob * q);
    }
  };
  for (std::uint32_t cu = 0; cu < (1u << n); ++cu)
    for (std::uint32_t cl = 0; cl < (1u << n); ++cl) {
      int ones = __builtin_popcount(cu) + __builtin_popcount(cl);
      Rational prob = (ipow(third, ones) * ipow(two_thirds, 2 * n - ones) +
                       ipow(third, 2 * n - ones) * ipow(two_thirds, ones)) /
                      2;
      FaceRows rows{unpack(cu), unpack(cl), 0};
      Trajectory bits = edges_bits(rows);
      init_edges[bits] += prob;
      rec(rows, bits, prob);
    }

  Explicit init;
  for (const auto& [bits, prob] : init_edges) {
    Row row(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) row[i] = (bits >> i) & 1u;
    init.atoms.emplace_back(std::move(row), prob);
  }
  auto line_law = exact_window_distribution(width, steps, init, kp);
  std::erase_if(pca_law, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(line_law, [](const auto& kv) { return kv.second == 0; });
  return pca_law == line_law;
}

std::vector<Estimate> a8_marginals(const FaceRows& init, double p, double r, int steps, std::uint64_t samples,
                                   std::uint64_t seed, Exec exec) {
  check_rows(init);
  if (samples < 2) throw Error(ErrorKind::Domain, "need at least two samples");
  TpcaKernel T = a8_kernel(p, r);
  const int n = init.cells();
  auto batches = run_batches(samples, kDefaultBatches, exec, std::vector<std::uint64_t>(n, 0),
                             [&](std::vector<std::uint64_t>& acc, std::uint64_t c) {
                               ChainRng rng(seed, c);
                               FaceRows rows = init;
                               for (int s = 0; s < steps; ++s) rows = tpca_step(rows, T, rng);
                               for (int i = 0; i < n; ++i) acc[i] += static_cast<std::uint64_t>(rows.lower[i]);
                             });
  std::vector<Estimate> out(static_cast<std::size_t>(n));
  double m = static_cast<double>(samples);
  for (int i = 0; i < n; ++i) {
    std::uint64_t ones = 0;
    for (const auto& b : batches) ones += b[i];
    double mean = ones / m;
    out[i].estimate = mean;
    out[i].std_error = std::sqrt(mean * (1 - mean) / (m - 1));
  }
  return out;
}

template double a8_entry<double>(int, int, int, int, const double&, const double&);
template Rational a8_entry<Rational>(int, int, int, int, const Rational&, const Rational&);

}  // namespace eightv
