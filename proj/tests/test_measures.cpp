#include <doctest.h>

#include <cmath>

#include "irfk/errors.hpp"
#include "irfk/measures.hpp"
#include "irfk/rng.hpp"

using namespace irfk;

namespace {

Point random_point(RngStream& rng, int d, double lo = -3.0, double hi = 3.0) {
  Point p(d);
  for (int i = 0; i < d; ++i) p(i) = rng.uniform(lo, hi);
  return p;
}

// Every monomial of degree <= k by brute-force enumeration of exponents.
std::vector<std::vector<int>> brute_exponents(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  while (true) {
    int total = 0;
    for (int v : e) total += v;
    if (total <= k) out.push_back(e);
    int i = 0;
    while (i < d && ++e[static_cast<std::size_t>(i)] > k) e[static_cast<std::size_t>(i++)] = 0;
    if (i == d) break;
  }
  return out;
}

int binomial(int n, int r) {
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return static_cast<int>(std::lround(v));
}

}  // namespace

TEST_CASE("monomial basis size and ordering") {
  for (int d = 1; d <= 3; ++d) {
    for (int k = 0; k <= 3; ++k) {
      const auto b = monomial_basis(d, k);
      CHECK(static_cast<int>(b.size()) == binomial(d + k, k));
      CHECK(b.size() == brute_exponents(d, k).size());
    }
  }
  const auto b = monomial_basis(2, 2);
  REQUIRE(b.size() == 6);
  CHECK(b.exponents[0] == std::vector<int>{0, 0});
  CHECK(b.exponents[1] == std::vector<int>{1, 0});
  CHECK(b.exponents[2] == std::vector<int>{0, 1});
  CHECK(b.exponents[3] == std::vector<int>{2, 0});
  CHECK(b.exponents[4] == std::vector<int>{1, 1});
  CHECK(b.exponents[5] == std::vector<int>{0, 2});
}

TEST_CASE("lambda_t annihilates polynomials of degree <= k") {
  RngStream rng(42, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const int k = trial % 3;
    const auto frame = build_frame(monomial_basis(d, k), 100 + static_cast<std::uint64_t>(trial));
    const Point t = random_point(rng, d);
    const auto lam = lambda_t(frame, t);
    for (const auto& e : brute_exponents(d, k)) {
      CHECK(std::abs(moment(lam, e)) <= 1e-9 * std::max(1.0, lam.total_variation()));
    }
    CHECK(annihilation_order(lam, k) == k);
  }
}

TEST_CASE("lambda_t is null at frame nodes and has unit mass at t") {
  const auto frame = build_frame(monomial_basis(2, 1), 5);
  for (const auto& node : frame.nodes) CHECK(lambda_t(frame, node).is_null());
  Point t(2);
  t << 0.7, -1.3;
  const auto lam = lambda_t(frame, t);
  bool found = false;
  for (const auto& a : lam.atoms()) {
    if ((a.t - t).norm() < 1e-14) {
      found = true;
      CHECK(std::abs(a.weight - cplx(1.0)) < 1e-14);
    }
  }
  CHECK(found);
}

TEST_CASE("d = 1 auto frame nodes are equispaced on [0, 1]") {
  const auto frame = build_frame(monomial_basis(1, 2), 9);
  REQUIRE(frame.nodes.size() == 3);
  CHECK(frame.nodes[0](0) == doctest::Approx(0.0));
  CHECK(frame.nodes[1](0) == doctest::Approx(0.5));
  CHECK(frame.nodes[2](0) == doctest::Approx(1.0));
}

TEST_CASE("singular frames are rejected") {
  Point a(2), b(2), c(2);
  a << 0, 0;
  b << 1, 1;
  c << 2, 2;
  CHECK_THROWS_AS(build_frame(monomial_basis(2, 1), {a, b, c}), SingularFrame);
}

TEST_CASE("annihilation order of simple measures") {
  Point z = Point::Zero(1), one = Point::Ones(1), two = 2 * Point::Ones(1);
  const auto d0 = FiniteMeasure::dirac(z);
  CHECK(annihilation_order(d0, 3) == -1);
  const auto first = FiniteMeasure::dirac(one) - d0;
  CHECK(annihilation_order(first, 3) == 0);
  const auto second = FiniteMeasure::dirac(two) - cplx(2.0) * FiniteMeasure::dirac(one) + d0;
  CHECK(annihilation_order(second, 3) == 1);
  CHECK(annihilation_order(FiniteMeasure(1), 3) == 4);
}

TEST_CASE("atoms closer than the merge tolerance combine") {
  Point a = Point::Constant(1, 0.5);
  Point b = a;
  b(0) += 1e-14;
  const FiniteMeasure mu(1, {{a, 1.0}, {b, 2.0}});
  REQUIRE(mu.size() == 1);
  CHECK(std::abs(mu.atoms()[0].weight - cplx(3.0)) < 1e-15);
  const FiniteMeasure cancel(1, {{a, 1.0}, {b, -1.0}});
  CHECK(cancel.is_null());
}

TEST_CASE("Fourier transform of the reflected convolution is lambda^ conj(mu^)") {
  RngStream rng(7, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2;
    std::vector<Atom> la, ma;
    for (int i = 0; i < 3; ++i) la.push_back({random_point(rng, d), rng.complex_normal()});
    for (int i = 0; i < 4; ++i) ma.push_back({random_point(rng, d), rng.complex_normal()});
    const FiniteMeasure lam(d, la), mu(d, ma);
    const auto nu = convolve_reflect(lam, mu);
    const Point u = random_point(rng, d);
    const cplx expect = fourier(lam, u) * std::conj(fourier(mu, u));
    CHECK(std::abs(fourier(nu, u) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("scaling and translation act on moments") {
  RngStream rng(3, 2);
  std::vector<Atom> atoms;
  for (int i = 0; i < 5; ++i) atoms.push_back({random_point(rng, 2), rng.complex_normal()});
  const FiniteMeasure mu(2, atoms);
  const std::vector<int> e{2, 1};
  CHECK(std::abs(moment(scale(mu, 2.5), e) - std::pow(2.5, 3) * moment(mu, e)) < 1e-10);
  CHECK(std::abs(moment(reflect(mu), e) + moment(mu, e)) < 1e-12);
  Point s(2);
  s << 0.3, -0.4;
  const std::vector<int> e1{1, 0};
  const std::vector<int> e0{0, 0};
  CHECK(std::abs(moment(translate(mu, s), e1) - (moment(mu, e1) + 0.3 * moment(mu, e0))) < 1e-12);
}
