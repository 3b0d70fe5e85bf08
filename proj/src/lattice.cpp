#include "eightv/lattice.hpp"

#include <algorithm>

#include "eightv/dynamics.hpp"

namespace eightv {

namespace {

bool time_major(const EdgeAddress& x, const EdgeAddress& y) {
  return x.t != y.t ? x.t < y.t : x.i < y.i;
}

FiniteLattice assemble(LatticeKind kind, int n, const std::vector<std::pair<long, long>>& layer_starts) {
  FiniteLattice lat;
  lat.kind = kind;
  lat.n = n;
  std::vector<EdgeAddress> all;
  for (auto [a, t] : layer_starts) {
    all.push_back({a, t});
    all.push_back({a + 1, t});
    all.push_back({a, t + 1});
    all.push_back({a + 1, t + 1});
  }
  std::vector<EdgeAddress> uniq = all;
  std::sort(uniq.begin(), uniq.end(), time_major);
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (static_cast<int>(uniq.size()) > kMaxLatticeEdges)
    throw Error(ErrorKind::SizeExceeded, "lattice exceeds 24 edges");
  lat.edges = uniq;
  std::vector<int> uses(uniq.size(), 0);
  for (auto [a, t] : layer_starts) {
    LatticeVertex v{a, t, {}};
    v.edges = {lat.edge_index({a, t}), lat.edge_index({a + 1, t}), lat.edge_index({a, t + 1}),
               lat.edge_index({a + 1, t + 1})};
    for (int e : v.edges) ++uses[e];
    lat.vertices.push_back(v);
  }
  lat.external.resize(uniq.size());
  for (std::size_t e = 0; e < uniq.size(); ++e) lat.external[e] = uses[e] == 1;
  return lat;
}

}  // namespace

int FiniteLattice::edge_index(EdgeAddress e) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), e, time_major);
  if (it == edges.end() || *it != e) return -1;
  return static_cast<int>(it - edges.begin());
}

FiniteLattice make_kbar(int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "N must be positive");
  std::vector<std::pair<long, long>> starts;
  for (long t = 0; t < n; ++t)
    for (long j = 0; j < n - t; ++j) starts.push_back({t + 2 * j, t});
  FiniteLattice lat = assemble(LatticeKind::Kbar, n, starts);
  for (std::size_t e = 0; e < lat.edges.size(); ++e)
    if (lat.edges[e].t == 0) lat.designated.push_back(static_cast<int>(e));
  return lat;
}

long k_anchor(int n) {
  long a0 = n - 1;
  return a0 % 2 == 0 ? a0 : a0 + 1;
}

FiniteLattice make_k(int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "N must be positive");
  long a0 = k_anchor(n);
  std::vector<std::pair<long, long>> starts;
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) starts.push_back({a0 + c - r, c + r});
  FiniteLattice lat = assemble(LatticeKind::K, n, starts);
  for (std::size_t e = 0; e < lat.edges.size(); ++e)
    if (lat.external[e]) lat.designated.push_back(static_cast<int>(e));
  return lat;
}

std::string describe(const BoundarySpec& bc) {
  return std::visit(
      [](const auto& b) -> std::string {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Free>) {
          return "free";
        } else if constexpr (std::is_same_v<B, Fixed>) {
          std::string s = "fixed:";
          for (auto bit : b.pattern) s += bit ? '1' : '0';
          return s;
        } else {
          return "half:" + to_string(b.q);
        }
      },
      bc);
}

int vertex_type(int tl, int tr, int bl, int br) {
  if ((tl ^ tr) != (bl ^ br)) return 0;
  if (tl == tr) return bl == tl ? 3 + tl : 7 + tl;
  if (bl == tr && br == tl) return 1 + tl;
  return 5 + tl;
}

char weight_class(int type) {
  static const char classes[] = {'-', 'a', 'a', 'b', 'b', 'c', 'c', 'd', 'd'};
  return (type >= 1 && type <= 8) ? classes[type] : '-';
}

namespace {

const Rational& class_weight(char cls, const Weights<Rational>& w) {
  switch (cls) {
    case 'a': return w.a;
    case 'b': return w.b;
    case 'c': return w.c;
    default: return w.d;
  }
}

// Boltzmann enumeration with optional forced bits on the designated edges.
void enumerate_weighted(const FiniteLattice& lat, const std::vector<int>* forced, const Weights<Rational>& w,
                        const std::function<void(Configuration, const Rational&)>& visit) {
  const int m = static_cast<int>(lat.edges.size());
  std::vector<std::vector<int>> closes(m);
  for (std::size_t v = 0; v < lat.vertices.size(); ++v) {
    const auto& e = lat.vertices[v].edges;
    closes[*std::max_element(e.begin(), e.end())].push_back(static_cast<int>(v));
  }
  std::vector<int> force(m, -1);
  if (forced)
    for (std::size_t j = 0; j < lat.designated.size(); ++j) force[lat.designated[j]] = (*forced)[j];

  std::function<void(int, Configuration, const Rational&)> rec = [&](int e, Configuration cfg, const Rational& weight) {
    if (e == m) {
      visit(cfg, weight);
      return;
    }
    for (int bit = 0; bit <= 1; ++bit) {
      if (force[e] >= 0 && force[e] != bit) continue;
      Configuration next = cfg | (static_cast<Configuration>(bit) << e);
      Rational nw = weight;
      bool ok = true;
      for (int v : closes[e]) {
        const auto& ed = lat.vertices[v].edges;
        auto s = [&](int k) { return static_cast<int>((next >> ed[k]) & 1u); };
        int type = vertex_type(s(0), s(1), s(2), s(3));
        if (type == 0) {
          ok = false;
          break;
        }
        nw *= class_weight(weight_class(type), w);
      }
      if (ok && nw != 0) rec(e + 1, next, nw);
    }
  };
  rec(0, 0, Rational(1));
}

std::uint32_t designated_bits(const FiniteLattice& lat, Configuration cfg) {
  std::uint32_t bits = 0;
  for (std::size_t j = 0; j < lat.designated.size(); ++j)
    bits |= ((cfg >> lat.designated[j]) & 1u) << j;
  return bits;
}

}  // namespace

void enumerate(const FiniteLattice& lat, const BoundarySpec& bc, const Weights<Rational>& w,
               const std::function<void(Configuration, const Rational&)>& visit) {
  if (static_cast<int>(lat.edges.size()) > kMaxLatticeEdges)
    throw Error(ErrorKind::SizeExceeded, "lattice exceeds 24 edges");
  if (std::holds_alternative<Free>(bc)) {
    enumerate_weighted(lat, nullptr, w, visit);
  } else if (const auto* f = std::get_if<Fixed>(&bc)) {
    if (f->pattern.size() != lat.designated.size())
      throw Error(ErrorKind::Domain, "fixed pattern needs " + std::to_string(lat.designated.size()) + " bits");
    std::vector<int> forced(f->pattern.begin(), f->pattern.end());
    enumerate_weighted(lat, &forced, w, visit);
  } else {
    const Rational& q = std::get<HalfProduct>(bc).q;
    if (q < 0 || q > 1) throw Error(ErrorKind::Domain, "q must lie in [0,1]");
    std::map<std::uint32_t, Rational> zb;
    enumerate_weighted(lat, nullptr, w, [&](Configuration c, const Rational& x) { zb[designated_bits(lat, c)] += x; });
    const int k = static_cast<int>(lat.designated.size());
    enumerate_weighted(lat, nullptr, w, [&](Configuration c, const Rational& x) {
      std::uint32_t b = designated_bits(lat, c);
      int ones = __builtin_popcount(b);
      Rational mix = ipow<Rational>(q, ones) * ipow<Rational>(Rational(1) - q, k - ones);
      if (mix != 0) visit(c, mix * x / zb[b]);
    });
  }
}

Rational partition_function(const FiniteLattice& lat, const BoundarySpec& bc, const Weights<Rational>& w) {
  Rational z(0);
  enumerate(lat, bc, w, [&](Configuration, const Rational& x) { z += x; });
  return z;
}

std::map<Configuration, Rational> gibbs_distribution(const FiniteLattice& lat, const BoundarySpec& bc,
                                                     const Weights<Rational>& w) {
  std::map<Configuration, Rational> out;
  enumerate(lat, bc, w, [&](Configuration c, const Rational& x) { out[c] += x; });
  Rational z(0);
  for (const auto& kv : out) z += kv.second;
  if (z == 0) throw Error(ErrorKind::ZeroPartition, "all configurations have zero weight");
  for (auto& kv : out) kv.second /= z;
  return out;
}

Rational partition_closed_form(const FiniteLattice& lat, const Weights<Rational>& w) {
  long n = lat.n;
  long exponent = lat.kind == LatticeKind::Kbar ? n * (n + 1) / 2 : n * n;
  return ipow<Rational>(Rational(2), 2 * n) * ipow<Rational>(w.a + w.c, exponent);
}

std::map<Configuration, Rational> dynamics_restriction(const FiniteLattice& lat, const KernelParams<Rational>& kp) {
  long max_i = 0, max_t = 0;
  for (const auto& e : lat.edges) {
    if (e.i < 0) throw Error(ErrorKind::Domain, "lattice edges must have nonnegative positions");
    max_i = std::max(max_i, e.i);
    max_t = std::max(max_t, e.t);
  }
  int width = static_cast<int>(max_i + 1);
  if (width % 2 != 0) ++width;
  int steps = static_cast<int>(max_t);
  auto law = exact_window_distribution(width, steps, ProductMeasure{Rational(1, 2)}, kp);
  std::map<Configuration, Rational> out;
  for (const auto& [traj, prob] : law) {
    Configuration c = 0;
    for (std::size_t e = 0; e < lat.edges.size(); ++e) {
      const auto& a = lat.edges[e];
      c |= static_cast<Configuration>(trajectory_state(traj, width, static_cast<int>(a.t), static_cast<int>(a.i))) << e;
    }
    out[c] += prob;
  }
  return out;
}

bool check_restriction_law(int n, const KernelParams<Rational>& kp) {
  if (n < 1) throw Error(ErrorKind::Domain, "n must be positive");
  if (n > 2) throw Error(ErrorKind::SizeExceeded, "restriction check limited to n <= 2");
  Weights<Rational> w = weights_from_pr(kp.p, kp.r);
  for (const FiniteLattice& lat : {make_kbar(n), make_k(n)}) {
    auto lhs = dynamics_restriction(lat, kp);
    auto rhs = gibbs_distribution(lat, Free{}, w);
    std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace eightv
