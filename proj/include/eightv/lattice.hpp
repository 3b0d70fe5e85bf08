#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "eightv/model.hpp"

namespace eightv {

enum class LatticeKind { K, Kbar };

// Vertex at layer t with pair start a (a = t mod 2) joins the edges
// (a,t), (a+1,t) above it to (a,t+1), (a+1,t+1) below it.
struct LatticeVertex {
  long a = 0;
  long t = 0;
  std::array<int, 4> edges{};  // top-left, top-right, bottom-left, bottom-right
};

// Every edge carries its address in the infinite strip, so configurations on
// both lattice kinds compare directly with the line dynamics.
//
// K_N has N x N internal vertices (c, r), row-major index r*N + c. It is placed
// as the rotated sub-window
//   vertex (c, r) -> layer t = c + r, pair start a = a0 + c - r,
// with a0 the smallest even integer >= N-1 (so every index is nonnegative).
// In K_N terms the top-right edge is the north edge, top-left west, bottom-left
// south and bottom-right east.
struct FiniteLattice {
  LatticeKind kind = LatticeKind::Kbar;
  int n = 0;
  std::vector<EdgeAddress> edges;
  std::vector<bool> external;
  std::vector<LatticeVertex> vertices;
  // Edges a boundary pattern applies to: the top row for Kbar, all external edges for K.
  std::vector<int> designated;

  int edge_index(EdgeAddress e) const;
};

FiniteLattice make_kbar(int n);
FiniteLattice make_k(int n);
long k_anchor(int n);

inline constexpr int kMaxLatticeEdges = 24;

using Configuration = std::uint32_t;  // bit e: orientation of edges[e]

struct Free {};
struct Fixed {
  std::vector<std::uint8_t> pattern;
};
struct HalfProduct {
  Rational q;
};
using BoundarySpec = std::variant<Free, Fixed, HalfProduct>;

std::string describe(const BoundarySpec& bc);

// Types 1..8, 0 when the in-degree is odd. Weight classes:
//   a: (k,1-k) -> (1-k,k), types 1,2     b: (k,k) -> (k,k), types 3,4
//   c: (k,1-k) -> (k,1-k), types 5,6     d: (k,k) -> (1-k,1-k), types 7,8
// with k the top-left state.
int vertex_type(int top_left, int top_right, int bottom_left, int bottom_right);
char weight_class(int type);

// Free and Fixed yield the Boltzmann weight. HalfProduct yields the mixture
// weight q^{#1}(1-q)^{#0} W(O) / Z(B(O)) over the designated edges.
void enumerate(const FiniteLattice& lat, const BoundarySpec& bc, const Weights<Rational>& w,
               const std::function<void(Configuration, const Rational&)>& visit);

Rational partition_function(const FiniteLattice& lat, const BoundarySpec& bc, const Weights<Rational>& w);

std::map<Configuration, Rational> gibbs_distribution(const FiniteLattice& lat, const BoundarySpec& bc,
                                                     const Weights<Rational>& w);

// Closed forms for free boundaries: 2^{2N}(a+c)^{N(N+1)/2} on Kbar, 2^{2N}(a+c)^{N^2} on K.
Rational partition_closed_form(const FiniteLattice& lat, const Weights<Rational>& w);

// Law of the stationary dynamics restricted to the Kbar_n- and K_n-shaped
// windows equals the Gibbs measure with weights (p, r, 1-p, 1-r).
bool check_restriction_law(int n, const KernelParams<Rational>& kp);

// The restriction for one lattice: exact marginal of the dynamics on its edges.
std::map<Configuration, Rational> dynamics_restriction(const FiniteLattice& lat, const KernelParams<Rational>& kp);

}  // namespace eightv
