#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <utility>
#include <variant>
#include <vector>

#include "eightv/model.hpp"
#include "eightv/parallel.hpp"
#include "eightv/rng.hpp"

namespace eightv {

using Row = std::vector<std::uint8_t>;

// Cyclic line of edge states. At time t the pairs are (a, a+1) with a = t mod 2.
struct EdgeWindow {
  Row states;
  long t = 0;

  int width() const { return static_cast<int>(states.size()); }
  std::uint8_t at(long i) const;
};

long wrap_index(long i, int width);
EdgeWindow make_window(Row states, long t = 0);

// One T0 (t even) or T1 (t odd) step, in place.
void line_step(EdgeWindow& w, const KernelParams<double>& kp, ChainRng& rng);

// Named particles sitting on the edges of the line.
struct ParticleWindow {
  std::vector<int> names;
  Row states;
  long t = 0;

  int width() const { return static_cast<int>(states.size()); }
};

ParticleWindow make_particles(Row states, long t = 0);

// Pair update, p+r <= 1: keep w.p. r, swap and flip both w.p. 1-p-r, flip both in
// place w.p. p. p+r > 1: keep w.p. 1-p, swap w.p. r+p-1, flip both in place w.p. 1-r.
void particle_step(ParticleWindow& w, const KernelParams<double>& kp, ChainRng& rng);

EdgeWindow edge_view(const ParticleWindow& w);

struct ProductMeasure {
  Rational q;
};
// Pattern repeated cyclically across the window.
struct Deterministic {
  Row pattern;
};
// Finite list of rows with their probabilities.
struct Explicit {
  std::vector<std::pair<Row, Rational>> atoms;
};
struct Custom {
  std::function<void(Row&, ChainRng&)> sampler;
};
using InitialLaw = std::variant<ProductMeasure, Deterministic, Explicit, Custom>;

// All ones except e(0,0), which is a fair coin.
InitialLaw ones_with_free_origin();

Row sample_initial(const InitialLaw& law, int width, ChainRng& rng);

// Support of a finite-support law on a window of the given width.
std::vector<std::pair<Row, Rational>> initial_atoms(const InitialLaw& law, int width);

enum class Engine { Line, Particle };

struct Estimate {
  double estimate = 0;
  double std_error = 0;
};

struct SamplerConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int width = 0;  // 0: smallest admissible width
  Engine engine = Engine::Line;
  Exec exec = Exec::Parallel;
  int batches = kDefaultBatches;
};

// Smallest even width with 2(max t + max |i|) + 4 <= width.
int required_width(const std::vector<EdgeAddress>& edges);

// Pearson correlation of e1 with every target over independent chains; the
// standard error is a delete-one-batch jackknife.
std::vector<Estimate> estimate_correlations(EdgeAddress e1, const std::vector<EdgeAddress>& targets,
                                            const InitialLaw& init, const KernelParams<double>& kp,
                                            const SamplerConfig& cfg);

Estimate estimate_pair_correlation(EdgeAddress e1, EdgeAddress e2, const InitialLaw& init,
                                   const KernelParams<double>& kp, std::uint64_t samples, int width,
                                   std::uint64_t seed);

// Bit t*width + i holds e(i,t).
using Trajectory = std::uint64_t;

inline constexpr int kMaxExactWidth = 8;
inline constexpr int kMaxExactSteps = 4;

std::uint8_t trajectory_state(Trajectory traj, int width, int t, int i);

std::map<Trajectory, Rational> exact_window_distribution(int width, int steps, const InitialLaw& init,
                                                         const KernelParams<Rational>& kp);

// Edge trajectories of the particle system, for the same window and horizon.
std::map<Trajectory, Rational> exact_particle_distribution(int width, int steps, const InitialLaw& init,
                                                           const KernelParams<Rational>& kp);

// Law of each row e(., t), t = 0..steps, keyed by the row bits (width <= 16).
std::vector<std::map<std::uint32_t, Rational>> exact_row_laws(int width, int steps, const InitialLaw& init,
                                                              const KernelParams<Rational>& kp);

// Throws invalid-profile unless t_{i+1} - t_i is 0 or (-1)^{i+1+t_i} and t_i >= 0.
void validate_zigzag_profile(const std::vector<long>& profile);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

// Joint law of (e(i, t_i)), i = 0..k-1, under PM(1/2) against the uniform law.
ChiSquare check_zigzag_independence(const std::vector<long>& profile, int width, std::uint64_t samples,
                                    std::uint64_t seed, const KernelParams<double>& kp,
                                    Exec exec = Exec::Parallel);

struct BoundaryCheck {
  double lhs = 0;
  double std_error = 0;
  double rhs = 0;
  bool holds = false;
};

// lhs = Cov(e(0,0), e(i,t)) / Var e(0,0) - C8(i,t); holds when |lhs| <= rhs + 5 SE.
BoundaryCheck check_boundary_bound(const InitialLaw& init, long i, long t, const KernelParams<double>& kp,
                                   std::uint64_t samples, std::uint64_t seed, Exec exec = Exec::Parallel);

// Mean density of ones in each row t = 0..steps.
std::vector<Estimate> site_marginals(const InitialLaw& init, const KernelParams<double>& kp, int steps,
                                     int width, std::uint64_t samples, std::uint64_t seed,
                                     Exec exec = Exec::Parallel);

// CSV "t,i,state", one block per chain.
void dump_trajectories(std::ostream& out, const InitialLaw& init, const KernelParams<double>& kp, int width,
                       int steps, std::uint64_t chains, std::uint64_t seed, Engine engine = Engine::Line);

}  // namespace eightv
