#include "eightv/dynamics.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "eightv/correlation.hpp"

namespace eightv {

long wrap_index(long i, int width) {
  long r = i % width;
  return r < 0 ? r + width : r;
}

std::uint8_t EdgeWindow::at(long i) const { return states[static_cast<std::size_t>(wrap_index(i, width()))]; }

namespace {

void require_even_width(int width) {
  if (width <= 0 || width % 2 != 0) throw Error(ErrorKind::Domain, "window width must be even and positive");
}

}  // namespace

EdgeWindow make_window(Row states, long t) {
  require_even_width(static_cast<int>(states.size()));
  return EdgeWindow{std::move(states), t};
}

void line_step(EdgeWindow& w, const KernelParams<double>& kp, ChainRng& rng) {
  const int n = w.width();
  for (int a = static_cast<int>(w.t % 2); a < n; a += 2) {
    std::uint8_t& x = w.states[a];
    std::uint8_t& y = w.states[(a + 1) % n];
    double u = rng.uniform();
    if (x == y) {
      if (u >= kp.r) {
        x ^= 1;
        y ^= 1;
      }
    } else if (u < kp.p) {
      std::swap(x, y);
    }
  }
  ++w.t;
}

ParticleWindow make_particles(Row states, long t) {
  require_even_width(static_cast<int>(states.size()));
  ParticleWindow w;
  w.names.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) w.names[i] = static_cast<int>(i);
  w.states = std::move(states);
  w.t = t;
  return w;
}

void particle_step(ParticleWindow& w, const KernelParams<double>& kp, ChainRng& rng) {
  const int n = w.width();
  const bool low = kp.low_regime();
  for (int a = static_cast<int>(w.t % 2); a < n; a += 2) {
    int b = (a + 1) % n;
    double u = rng.uniform();
    if (low) {
      if (u < kp.r) continue;
      if (u < 1.0 - kp.p) {
        std::swap(w.names[a], w.names[b]);
        std::swap(w.states[a], w.states[b]);
      }
      w.states[a] ^= 1;
      w.states[b] ^= 1;
    } else {
      if (u < 1.0 - kp.p) continue;
      if (u < kp.r) {
        std::swap(w.names[a], w.names[b]);
        std::swap(w.states[a], w.states[b]);
      } else {
        w.states[a] ^= 1;
        w.states[b] ^= 1;
      }
    }
  }
  ++w.t;
}

EdgeWindow edge_view(const ParticleWindow& w) { return EdgeWindow{w.states, w.t}; }

InitialLaw ones_with_free_origin() {
  return Custom{[](Row& row, ChainRng& rng) {
    std::fill(row.begin(), row.end(), std::uint8_t{1});
    row[0] = rng.bernoulli(0.5) ? 1 : 0;
  }};
}

Row sample_initial(const InitialLaw& law, int width, ChainRng& rng) {
  Row row(static_cast<std::size_t>(width), 0);
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ProductMeasure>) {
          double q = to_double(l.q);
          for (auto& s : row) s = rng.bernoulli(q) ? 1 : 0;
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          if (l.pattern.empty()) throw Error(ErrorKind::Domain, "empty pattern");
          for (int i = 0; i < width; ++i) row[i] = l.pattern[static_cast<std::size_t>(i) % l.pattern.size()];
        } else if constexpr (std::is_same_v<L, Explicit>) {
          double u = rng.uniform();
          double acc = 0;
          for (const auto& [atom, prob] : l.atoms) {
            acc += to_double(prob);
            row = atom;
            if (u < acc) break;
          }
          if (static_cast<int>(row.size()) != width) throw Error(ErrorKind::Domain, "atom width mismatch");
        } else {
          l.sampler(row, rng);
        }
      },
      law);
  return row;
}

std::vector<std::pair<Row, Rational>> initial_atoms(const InitialLaw& law, int width) {
  std::vector<std::pair<Row, Rational>> out;
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ProductMeasure>) {
          if (width > 16) throw Error(ErrorKind::SizeExceeded, "product measure expansion limited to width 16");
          for (std::uint32_t bits = 0; bits < (1u << width); ++bits) {
            Row row(static_cast<std::size_t>(width));
            int ones = 0;
            for (int i = 0; i < width; ++i) {
              row[i] = (bits >> i) & 1u;
              ones += row[i];
            }
            Rational prob = ipow<Rational>(l.q, ones) * ipow<Rational>(Rational(1) - l.q, width - ones);
            if (prob != 0) out.emplace_back(std::move(row), prob);
          }
        } else if constexpr (std::is_same_v<L, Deterministic>) {
          if (l.pattern.empty()) throw Error(ErrorKind::Domain, "empty pattern");
          Row row(static_cast<std::size_t>(width));
          for (int i = 0; i < width; ++i) row[i] = l.pattern[static_cast<std::size_t>(i) % l.pattern.size()];
          out.emplace_back(std::move(row), Rational(1));
        } else if constexpr (std::is_same_v<L, Explicit>) {
          for (const auto& atom : l.atoms) {
            if (static_cast<int>(atom.first.size()) != width)
              throw Error(ErrorKind::Domain, "atom width mismatch");
            if (atom.second != 0) out.push_back(atom);
          }
        } else {
          throw Error(ErrorKind::Domain, "custom initial law has no finite support description");
        }
      },
      law);
  return out;
}

int required_width(const std::vector<EdgeAddress>& edges) {
  long max_t = 0, max_i = 0;
  for (const auto& e : edges) {
    max_t = std::max(max_t, e.t);
    max_i = std::max(max_i, std::labs(e.i));
  }
  return static_cast<int>(2 * (max_t + max_i) + 4);
}

namespace {

struct PairCounts {
  std::uint64_t n = 0, sx = 0, sy = 0, sxy = 0;

  PairCounts& operator+=(const PairCounts& o) {
    n += o.n;
    sx += o.sx;
    sy += o.sy;
    sxy += o.sxy;
    return *this;
  }
  PairCounts operator-(const PairCounts& o) const { return {n - o.n, sx - o.sx, sy - o.sy, sxy - o.sxy}; }
};

double pearson(const PairCounts& c) {
  double n = static_cast<double>(c.n);
  double mx = c.sx / n, my = c.sy / n;
  double vx = mx * (1 - mx), vy = my * (1 - my);
  if (vx <= 0 || vy <= 0) return std::numeric_limits<double>::quiet_NaN();
  return (c.sxy / n - mx * my) / std::sqrt(vx * vy);
}

double regression(const PairCounts& c) {
  double n = static_cast<double>(c.n);
  double mx = c.sx / n, my = c.sy / n;
  double vx = mx * (1 - mx);
  if (vx <= 0) return std::numeric_limits<double>::quiet_NaN();
  return (c.sxy / n - mx * my) / vx;
}

// Delete-one-batch jackknife around the full-sample statistic.
template <class Stat>
Estimate jackknife(const std::vector<PairCounts>& batches, Stat stat) {
  PairCounts total;
  for (const auto& b : batches) total += b;
  Estimate e;
  e.estimate = stat(total);
  std::vector<double> loo;
  for (const auto& b : batches) {
    if (b.n == 0) continue;
    double v = stat(total - b);
    loo.push_back(std::isnan(v) ? e.estimate : v);
  }
  std::size_t m = loo.size();
  if (m < 2) return e;
  double mean = 0;
  for (double v : loo) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  e.std_error = std::sqrt(ss * static_cast<double>(m - 1) / static_cast<double>(m));
  return e;
}

// Runs one chain and reads off the requested edges at their times.
class ChainRunner {
 public:
  ChainRunner(const InitialLaw& init, const KernelParams<double>& kp, int width, Engine engine)
      : init_(init), kp_(kp), width_(width), engine_(engine) {}

  template <class Visit>
  void run(std::uint64_t seed, std::uint64_t chain, long steps, Visit visit) const {
    ChainRng rng(seed, chain);
    Row row = sample_initial(init_, width_, rng);
    if (engine_ == Engine::Line) {
      EdgeWindow w{std::move(row), 0};
      for (long t = 0;; ++t) {
        visit(t, w.states);
        if (t == steps) break;
        line_step(w, kp_, rng);
      }
    } else {
      ParticleWindow w = make_particles(std::move(row));
      for (long t = 0;; ++t) {
        visit(t, w.states);
        if (t == steps) break;
        particle_step(w, kp_, rng);
      }
    }
  }

 private:
  const InitialLaw& init_;
  const KernelParams<double>& kp_;
  int width_;
  Engine engine_;
};

int resolve_width(int requested, const std::vector<EdgeAddress>& edges) {
  int need = required_width(edges);
  if (requested == 0) return need;
  require_even_width(requested);
  if (requested < need)
    throw Error(ErrorKind::Domain, "window width " + std::to_string(requested) + " below the cone bound " +
                                       std::to_string(need));
  return requested;
}

std::vector<std::vector<PairCounts>> collect_pairs(EdgeAddress e1, const std::vector<EdgeAddress>& targets,
                                                   const InitialLaw& init, const KernelParams<double>& kp,
                                                   const SamplerConfig& cfg, int width) {
  long steps = e1.t;
  for (const auto& e : targets) steps = std::max(steps, e.t);
  ChainRunner runner(init, kp, width, cfg.engine);
  const std::size_t m = targets.size();
  std::vector<PairCounts> zero(m);
  auto batches = run_batches(cfg.samples, cfg.batches, cfg.exec, zero, [&](std::vector<PairCounts>& acc, std::uint64_t c) {
    std::uint8_t x = 0;
    std::vector<std::uint8_t> y(m, 0);
    runner.run(cfg.seed, c, steps, [&](long t, const Row& states) {
      if (t == e1.t) x = states[static_cast<std::size_t>(wrap_index(e1.i, width))];
      for (std::size_t j = 0; j < m; ++j)
        if (targets[j].t == t) y[j] = states[static_cast<std::size_t>(wrap_index(targets[j].i, width))];
    });
    for (std::size_t j = 0; j < m; ++j) {
      acc[j].n += 1;
      acc[j].sx += x;
      acc[j].sy += y[j];
      acc[j].sxy += x & y[j];
    }
  });
  std::vector<std::vector<PairCounts>> per_target(m, std::vector<PairCounts>(batches.size()));
  for (std::size_t b = 0; b < batches.size(); ++b)
    for (std::size_t j = 0; j < m; ++j) per_target[j][b] = batches[b][j];
  return per_target;
}

}  // namespace

std::vector<Estimate> estimate_correlations(EdgeAddress e1, const std::vector<EdgeAddress>& targets,
                                            const InitialLaw& init, const KernelParams<double>& kp,
                                            const SamplerConfig& cfg) {
  if (cfg.samples < 2) throw Error(ErrorKind::Domain, "need at least two samples");
  std::vector<EdgeAddress> all = targets;
  all.push_back(e1);
  int width = resolve_width(cfg.width, all);
  auto per_target = collect_pairs(e1, targets, init, kp, cfg, width);
  std::vector<Estimate> out;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    PairCounts total;
    for (const auto& b : per_target[j]) total += b;
    if (std::isnan(pearson(total)))
      throw Error(ErrorKind::DegenerateVariance, "an edge is almost surely constant under the initial law");
    out.push_back(jackknife(per_target[j], pearson));
  }
  return out;
}

Estimate estimate_pair_correlation(EdgeAddress e1, EdgeAddress e2, const InitialLaw& init,
                                   const KernelParams<double>& kp, std::uint64_t samples, int width,
                                   std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.samples = samples;
  cfg.width = width;
  cfg.seed = seed;
  return estimate_correlations(e1, {e2}, init, kp, cfg).front();
}

std::uint8_t trajectory_state(Trajectory traj, int width, int t, int i) {
  return static_cast<std::uint8_t>((traj >> (t * width + i)) & 1u);
}

namespace {

std::uint32_t pack(const Row& row) {
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < row.size(); ++i) bits |= static_cast<std::uint32_t>(row[i] & 1u) << i;
  return bits;
}

// Calls f(next_row, probability) for every outcome of one line step.
template <class F>
void for_each_line_transition(std::uint32_t row, int width, long t, const KernelParams<Rational>& kp, F&& f) {
  const int pairs = width / 2;
  const int a0 = static_cast<int>(t % 2);
  const Rational one(1);
  std::function<void(int, std::uint32_t, const Rational&)> rec = [&](int k, std::uint32_t cur, const Rational& prob) {
    if (k == pairs) {
      f(cur, prob);
      return;
    }
    int a = a0 + 2 * k;
    int b = (a + 1) % width;
    std::uint32_t x = (row >> a) & 1u, y = (row >> b) & 1u;
    auto with = [&](std::uint32_t nx, std::uint32_t ny) {
      std::uint32_t out = cur & ~((1u << a) | (1u << b));
      return out | (nx << a) | (ny << b);
    };
    if (x == y) {
      if (kp.r != 0) rec(k + 1, with(x, y), prob * kp.r);
      if (kp.r != one) rec(k + 1, with(1 - x, 1 - y), prob * (one - kp.r));
    } else {
      if (kp.p != 0) rec(k + 1, with(y, x), prob * kp.p);
      if (kp.p != one) rec(k + 1, with(x, y), prob * (one - kp.p));
    }
  };
  rec(0, row, one);
}

// Same for the particle system, expanding its three branches separately.
template <class F>
void for_each_particle_transition(std::uint32_t row, int width, long t, const KernelParams<Rational>& kp, F&& f) {
  const int pairs = width / 2;
  const int a0 = static_cast<int>(t % 2);
  const Rational one(1);
  const bool low = kp.low_regime();
  Rational keep = low ? Rational(kp.r) : Rational(one - kp.p);
  Rational swap = low ? Rational(one - kp.p - kp.r) : Rational(kp.r + kp.p - one);
  Rational flip = low ? kp.p : one - kp.r;
  std::function<void(int, std::uint32_t, const Rational&)> rec = [&](int k, std::uint32_t cur, const Rational& prob) {
    if (k == pairs) {
      f(cur, prob);
      return;
    }
    int a = a0 + 2 * k;
    int b = (a + 1) % width;
    std::uint32_t x = (row >> a) & 1u, y = (row >> b) & 1u;
    auto with = [&](std::uint32_t nx, std::uint32_t ny) {
      std::uint32_t out = cur & ~((1u << a) | (1u << b));
      return out | (nx << a) | (ny << b);
    };
    if (keep != 0) rec(k + 1, with(x, y), prob * keep);
    if (swap != 0) rec(k + 1, low ? with(1 - y, 1 - x) : with(y, x), prob * swap);
    if (flip != 0) rec(k + 1, with(1 - x, 1 - y), prob * flip);
  };
  rec(0, row, one);
}

void check_exact_bounds(int width, int steps) {
  require_even_width(width);
  if (width > kMaxExactWidth || steps < 0 || steps > kMaxExactSteps)
    throw Error(ErrorKind::SizeExceeded, "exact expansion limited to width <= 8 and steps <= 4");
}

template <class Expand>
std::map<Trajectory, Rational> expand_trajectories(int width, int steps, const InitialLaw& init,
                                                   const KernelParams<Rational>& kp, Expand expand) {
  check_exact_bounds(width, steps);
  std::map<Trajectory, Rational> out;
  std::function<void(Trajectory, std::uint32_t, int, const Rational&)> rec =
      [&](Trajectory traj, std::uint32_t row, int t, const Rational& prob) {
        if (t == steps) {
          out[traj] += prob;
          return;
        }
        expand(row, width, t, kp, [&](std::uint32_t next, const Rational& q) {
          rec(traj | (static_cast<Trajectory>(next) << ((t + 1) * width)), next, t + 1, prob * q);
        });
      };
  for (const auto& [row, prob] : initial_atoms(init, width)) {
    std::uint32_t bits = pack(row);
    rec(static_cast<Trajectory>(bits), bits, 0, prob);
  }
  return out;
}

}  // namespace

std::map<Trajectory, Rational> exact_window_distribution(int width, int steps, const InitialLaw& init,
                                                         const KernelParams<Rational>& kp) {
  return expand_trajectories(width, steps, init, kp, [](auto&&... args) { for_each_line_transition(args...); });
}

std::map<Trajectory, Rational> exact_particle_distribution(int width, int steps, const InitialLaw& init,
                                                           const KernelParams<Rational>& kp) {
  return expand_trajectories(width, steps, init, kp, [](auto&&... args) { for_each_particle_transition(args...); });
}

std::vector<std::map<std::uint32_t, Rational>> exact_row_laws(int width, int steps, const InitialLaw& init,
                                                              const KernelParams<Rational>& kp) {
  require_even_width(width);
  if (width > 16) throw Error(ErrorKind::SizeExceeded, "row laws limited to width <= 16");
  std::vector<std::map<std::uint32_t, Rational>> laws(1);
  for (const auto& [row, prob] : initial_atoms(init, width)) laws[0][pack(row)] += prob;
  for (int t = 0; t < steps; ++t) {
    std::map<std::uint32_t, Rational> next;
    for (const auto& [row, prob] : laws.back())
      for_each_line_transition(row, width, t, kp, [&](std::uint32_t n, const Rational& q) { next[n] += prob * q; });
    laws.push_back(std::move(next));
  }
  return laws;
}

void validate_zigzag_profile(const std::vector<long>& profile) {
  if (profile.empty() || profile.size() > 6)
    throw Error(ErrorKind::InvalidProfile, "profile must cover between 1 and 6 edges");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] < 0) throw Error(ErrorKind::InvalidProfile, "negative time in profile");
    if (i + 1 == profile.size()) break;
    long step = profile[i + 1] - profile[i];
    long allowed = ((static_cast<long>(i) + 1 + profile[i]) % 2 == 0) ? 1 : -1;
    if (step != 0 && step != allowed)
      throw Error(ErrorKind::InvalidProfile, "t_" + std::to_string(i + 1) + " - t_" + std::to_string(i) +
                                                 " must be 0 or " + std::to_string(allowed));
  }
}

ChiSquare check_zigzag_independence(const std::vector<long>& profile, int width, std::uint64_t samples,
                                    std::uint64_t seed, const KernelParams<double>& kp, Exec exec) {
  validate_zigzag_profile(profile);
  const std::size_t k = profile.size();
  std::vector<EdgeAddress> edges;
  long steps = 0;
  for (std::size_t i = 0; i < k; ++i) {
    edges.push_back({static_cast<long>(i), profile[i]});
    steps = std::max(steps, profile[i]);
  }
  width = resolve_width(width, edges);
  InitialLaw init = ProductMeasure{Rational(1, 2)};
  ChainRunner runner(init, kp, width, Engine::Line);
  const std::size_t cells = std::size_t{1} << k;
  auto batches = run_batches(samples, kDefaultBatches, exec, std::vector<std::uint64_t>(cells, 0),
                             [&](std::vector<std::uint64_t>& acc, std::uint64_t c) {
                               std::size_t code = 0;
                               runner.run(seed, c, steps, [&](long t, const Row& states) {
                                 for (std::size_t i = 0; i < k; ++i)
                                   if (profile[i] == t) code |= static_cast<std::size_t>(states[i]) << i;
                               });
                               ++acc[code];
                             });
  std::vector<std::uint64_t> counts(cells, 0);
  for (const auto& b : batches)
    for (std::size_t j = 0; j < cells; ++j) counts[j] += b[j];
  double expected = static_cast<double>(samples) / static_cast<double>(cells);
  ChiSquare out;
  for (auto n : counts) out.statistic += (n - expected) * (n - expected) / expected;
  out.dof = static_cast<int>(cells) - 1;
  boost::math::chi_squared_distribution<double> dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

BoundaryCheck check_boundary_bound(const InitialLaw& init, long i, long t, const KernelParams<double>& kp,
                                   std::uint64_t samples, std::uint64_t seed, Exec exec) {
  SamplerConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.exec = exec;
  EdgeAddress origin{0, 0}, target{i, t};
  int width = resolve_width(0, {origin, target});
  auto per_target = collect_pairs(origin, {target}, init, kp, cfg, width);
  PairCounts total;
  for (const auto& b : per_target[0]) total += b;
  if (std::isnan(regression(total)))
    throw Error(ErrorKind::DegenerateVariance, "e(0,0) is almost surely constant under the initial law");
  Estimate est = jackknife(per_target[0], regression);
  BoundaryCheck out;
  out.lhs = est.estimate - c8<double>(i, t, kp);
  out.std_error = est.std_error;
  out.rhs = boundary_bound<double>(t, kp);
  out.holds = std::fabs(out.lhs) <= out.rhs + 5 * out.std_error;
  return out;
}

std::vector<Estimate> site_marginals(const InitialLaw& init, const KernelParams<double>& kp, int steps, int width,
                                     std::uint64_t samples, std::uint64_t seed, Exec exec) {
  require_even_width(width);
  if (samples < 2) throw Error(ErrorKind::Domain, "need at least two samples");
  ChainRunner runner(init, kp, width, Engine::Line);
  struct Sums {
    std::vector<std::uint64_t> s1, s2;
  };
  Sums zero{std::vector<std::uint64_t>(steps + 1, 0), std::vector<std::uint64_t>(steps + 1, 0)};
  auto batches = run_batches(samples, kDefaultBatches, exec, zero, [&](Sums& acc, std::uint64_t c) {
    runner.run(seed, c, steps, [&](long t, const Row& states) {
      std::uint64_t ones = 0;
      for (auto s : states) ones += s;
      acc.s1[t] += ones;
      acc.s2[t] += ones * ones;
    });
  });
  std::vector<Estimate> out(steps + 1);
  double n = static_cast<double>(samples);
  for (int t = 0; t <= steps; ++t) {
    std::uint64_t s1 = 0, s2 = 0;
    for (const auto& b : batches) {
      s1 += b.s1[t];
      s2 += b.s2[t];
    }
    double mean = s1 / n, var = std::max(0.0, s2 / n - mean * mean);
    out[t].estimate = mean / width;
    out[t].std_error = std::sqrt(var / (n - 1)) / width;
  }
  return out;
}

void dump_trajectories(std::ostream& out, const InitialLaw& init, const KernelParams<double>& kp, int width,
                       int steps, std::uint64_t chains, std::uint64_t seed, Engine engine) {
  require_even_width(width);
  ChainRunner runner(init, kp, width, engine);
  out << "t,i,state\n";
  for (std::uint64_t c = 0; c < chains; ++c) {
    runner.run(seed, c, steps, [&](long t, const Row& states) {
      for (int i = 0; i < width; ++i) out << t << ',' << i << ',' << int(states[i]) << '\n';
    });
  }
}

}  // namespace eightv
