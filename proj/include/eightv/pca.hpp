#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "eightv/dynamics.hpp"
#include "eightv/model.hpp"

namespace eightv {

// T(y, x, y'; z): law of the new cell z below x, between y (left) and y' (right).
struct TpcaKernel {
  int size = 2;
  std::vector<double> entries;

  double operator()(int y, int x, int yp, int z) const { return entries[index(y, x, yp, z)]; }
  double& at(int y, int x, int yp, int z) { return entries[index(y, x, yp, z)]; }
  bool positive_rate() const;
  // Largest |sum_z T(y,x,y';z) - 1| over rows that are not identically zero.
  double stochasticity_defect() const;

 private:
  std::size_t index(int y, int x, int yp, int z) const {
    return static_cast<std::size_t>(((y * size + x) * size + yp) * size + z);
  }
};

TpcaKernel make_kernel(int size);

// Binary colouring kernel whose image under theta8 is the line dynamics.
template <class T>
T a8_entry(int y, int x, int yp, int z, const T& p, const T& r);

TpcaKernel a8_kernel(double p, double r);

// Proper 3-colourings. The rules for x = y+1 are completed by the colour
// reflection c -> -c, which covers the triples with x = y-1.
TpcaKernel a6_kernel(double p);

// (D,U) horizontal zigzag Markov chain with its DU-stationary anchor rho.
struct Hzmc {
  Eigen::MatrixXd D, U;
  Eigen::VectorXd rho;
};

Hzmc make_hzmc(const Eigen::MatrixXd& D, const Eigen::MatrixXd& U);

// max over (y,y',z) of |D(y;z)U(z;y') - sum_x U(y;x)D(x;y')T(y,x,y';z)|.
double hzmc_invariance_residual(const TpcaKernel& T, const Hzmc& h);

// Two-line kernel Ttilde(y,y';x), stored as [y][y'][x].
using PairKernel = std::vector<std::vector<std::vector<double>>>;

// Residual of T(x,x';y)T(x,0;0)T(0,x';0)T(0,0;y) = T(0,0;0)T(x,x';0)T(0,x';y)T(x,0;y).
double cm15_condition1_residual(const PairKernel& K);

// Ttilde(0,0;0)Ttilde(0,0;1)Ttilde(1,0;0)Ttilde(0,1;0) - Ttilde(1,1;1)Ttilde(1,1;0)Ttilde(0,1;1)Ttilde(1,0;1).
double belyaev_residual(const PairKernel& K);

// Normalised left Perron vector and its eigenvalue (power iteration, 1e-13, 1e4 steps).
std::pair<Eigen::VectorXd, double> left_perron(const Eigen::MatrixXd& M);

struct Cm15Candidate {
  Eigen::VectorXd nu, gamma;
  Eigen::MatrixXd D, U;
};

// nu, gamma and (D^gamma, U^gamma) for a positive two-line kernel.
Cm15Candidate cm15_candidate(const PairKernel& K);

PairKernel binary_pair_kernel(const TpcaKernel& T);
PairKernel equal_du_pair_kernel(const TpcaKernel& T);

inline constexpr double kSolverTolerance = 1e-10;

std::optional<Hzmc> solve_hzmc_binary(const TpcaKernel& T);
std::optional<Hzmc> solve_hzmc_equal_du(const TpcaKernel& T);

// Two consecutive cyclic face rows. Row `upper` sits above `lower`; cell i of
// `lower` lies between cells i and i+1 of `upper`. theta maps them to edge row t.
struct FaceRows {
  std::vector<int> upper, lower;
  long t = 0;

  int cells() const { return static_cast<int>(lower.size()); }
};

// z_i ~ T(lower_i, upper_{i+1}, lower_{i+1}; .); returns (lower, z) at t+1.
FaceRows tpca_step(const FaceRows& rows, const TpcaKernel& T, ChainRng& rng);

// Cell i writes (1{x_{i+1}=y_i}, 1{x_{i+1}=y_{i+1}}) to slots (2i+t, 2i+t+1) mod 2n.
EdgeWindow theta8(const FaceRows& rows);

// Same slots; an edge is 1 when its right face is its left face + 1 (mod 3)
// with the edge oriented upwards.
EdgeWindow theta6(const FaceRows& rows);

// Exact law of theta8 applied to A8 space-time diagrams against the line dynamics
// started from the pushed-forward initial law.
bool theta8_consistency(int width, int steps, const KernelParams<Rational>& kp);

// Per-cell P(cell = 1) in the newest row after `steps` A8 steps.
std::vector<Estimate> a8_marginals(const FaceRows& init, double p, double r, int steps, std::uint64_t samples,
                                   std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace eightv
