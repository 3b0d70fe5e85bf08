#include <algorithm>
#include <set>

#include "eightv/lattice.hpp"
#include "support.hpp"

using namespace eightv;
using testing::pr;
using testing::Q;

namespace {

Weights<Rational> wts(long a, long b, long c, long d, long den) {
  return {Q(a, den), Q(b, den), Q(c, den), Q(d, den)};
}

std::vector<std::uint8_t> bits_of(std::uint32_t code, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = (code >> k) & 1u;
  return out;
}

}  // namespace

TEST_CASE("vertex types") {
  std::multiset<char> classes;
  for (int code = 0; code < 16; ++code) {
    int tl = code & 1, tr = (code >> 1) & 1, bl = (code >> 2) & 1, br = (code >> 3) & 1;
    int type = vertex_type(tl, tr, bl, br);
    bool even = (tl + tr + bl + br) % 2 == 0;
    CHECK((type != 0) == even);
    if (type != 0) classes.insert(weight_class(type));
  }
  CHECK(classes == std::multiset<char>{'a', 'a', 'b', 'b', 'c', 'c', 'd', 'd'});
  CHECK(weight_class(vertex_type(0, 1, 1, 0)) == 'a');
  CHECK(weight_class(vertex_type(1, 1, 1, 1)) == 'b');
  CHECK(weight_class(vertex_type(0, 1, 0, 1)) == 'c');
  CHECK(weight_class(vertex_type(0, 0, 1, 1)) == 'd');
}

TEST_CASE("lattice shapes") {
  for (int n = 1; n <= 3; ++n) {
    auto k = make_k(n);
    CHECK(static_cast<int>(k.vertices.size()) == n * n);
    CHECK(static_cast<int>(k.edges.size()) == 2 * n * n + 2 * n);
    CHECK(std::count(k.external.begin(), k.external.end(), true) == 4 * n);
    CHECK(static_cast<int>(k.designated.size()) == 4 * n);
    CHECK(k_anchor(n) % 2 == 0);
    CHECK(k_anchor(n) >= n - 1);
    for (const auto& e : k.edges) CHECK(e.i >= 0);

    auto kb = make_kbar(n);
    CHECK(static_cast<int>(kb.vertices.size()) == n * (n + 1) / 2);
    CHECK(static_cast<int>(kb.designated.size()) == 2 * n);
    for (int idx : kb.designated) CHECK(kb.edges[idx].t == 0);
  }
  auto k1 = make_k(1);
  for (const auto& e : k1.edges) CHECK(k1.edges[k1.edge_index(e)] == e);
}

TEST_CASE("K_1 configurations") {
  auto w = wts(1, 2, 3, 4, 10);
  auto lat = make_k(1);
  std::multiset<Rational> weights;
  enumerate(lat, Free{}, w, [&](Configuration, const Rational& x) { weights.insert(x); });
  CHECK(weights == std::multiset<Rational>{w.a, w.a, w.b, w.b, w.c, w.c, w.d, w.d});
  CHECK(partition_function(lat, Free{}, w) == 2 * (w.a + w.b + w.c + w.d));
}

TEST_CASE("free partition functions match the closed form") {
  for (const auto& kp : testing::exact_grid()) {
    auto w = weights_from_pr(kp.p, kp.r);
    for (int n = 1; n <= 2; ++n) {
      CHECK(partition_function(make_kbar(n), Free{}, w) == partition_closed_form(make_kbar(n), w));
      CHECK(partition_function(make_k(n), Free{}, w) == partition_closed_form(make_k(n), w));
    }
  }
  // Scaling the weights.
  auto w = weights_from_pr(Q(1, 3), Q(1, 2));
  Weights<Rational> w3{3 * w.a, 3 * w.b, 3 * w.c, 3 * w.d};
  CHECK(partition_function(make_kbar(2), Free{}, w3) == partition_closed_form(make_kbar(2), w3));
  CHECK(partition_closed_form(make_kbar(1), w3) == 4 * 3);
}

TEST_CASE("fixed top rows factorise on Kbar") {
  auto w = weights_from_pr(Q(1, 4), Q(2, 3));
  auto lat1 = make_kbar(1);
  CHECK(partition_function(lat1, Fixed{{0, 1}}, w) == w.a + w.c);
  for (int n = 1; n <= 2; ++n) {
    auto lat = make_kbar(n);
    const std::size_t m = lat.designated.size();
    for (std::uint32_t code = 0; code < (1u << m); ++code)
      CHECK(partition_function(lat, Fixed{bits_of(code, m)}, w) == ipow<Rational>(w.a + w.c, n * (n + 1) / 2));
  }
  CHECK_THROWS_AS(partition_function(lat1, Fixed{{0, 1, 1}}, w), Error);
}

TEST_CASE("Gibbs distributions") {
  auto w = weights_from_pr(Q(1, 3), Q(1, 2));
  for (const FiniteLattice& lat : {make_kbar(2), make_k(1), make_k(2)}) {
    auto g = gibbs_distribution(lat, Free{}, w);
    Rational total = 0;
    for (const auto& kv : g) total += kv.second;
    CHECK(total == 1);
  }
  // The half-product mixture reproduces the free measure.
  auto lat = make_kbar(2);
  CHECK(gibbs_distribution(lat, HalfProduct{Q(1, 2)}, w) == gibbs_distribution(lat, Free{}, w));
  CHECK(partition_function(lat, HalfProduct{Q(1, 2)}, w) == 1);
  CHECK(partition_function(lat, HalfProduct{Q(1, 5)}, w) == 1);

  Weights<Rational> zero{Q(0), Q(0), Q(0), Q(0)};
  try {
    gibbs_distribution(make_k(1), Free{}, zero);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroPartition);
  }
}

TEST_CASE("restriction of the stationary dynamics is Gibbs") {
  for (auto kp : {pr(1, 3, 1, 2), pr(1, 4, 3, 4), pr(2, 3, 1, 5)})
    for (int n = 1; n <= 2; ++n) CHECK(check_restriction_law(n, kp));
  CHECK_THROWS_AS(check_restriction_law(3, pr(1, 3, 1, 2)), Error);
  CHECK_THROWS_AS(check_restriction_law(0, pr(1, 3, 1, 2)), Error);
}

TEST_CASE("boundary description") {
  CHECK(describe(Free{}) == "free");
  CHECK(describe(Fixed{{0, 1}}) == "fixed:01");
  CHECK(describe(HalfProduct{Q(1, 2)}) == "half:1/2");
}
