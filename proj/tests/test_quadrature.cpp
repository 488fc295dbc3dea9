#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles/oracles.hpp"
#include "vfs/errors.hpp"
#include "vfs/quadrature.hpp"

using vfs::cplx;
using vfs::X2Rule;

namespace {

std::vector<cplx> sample(const X2Rule& rule, auto&& fn) {
  std::vector<cplx> out;
  for (const double y : rule.nodes()) out.push_back(fn(y));
  return out;
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  for (const std::size_t n : {1u, 2u, 5u, 16u, 32u}) {
    const auto gl = vfs::gauss_legendre(n);
    REQUIRE(gl.nodes.size() == n);
    CHECK(std::accumulate(gl.weights.begin(), gl.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    for (std::size_t q = 0; q < n; ++q) {
      CHECK(gl.nodes[q] == doctest::Approx(-gl.nodes[n - 1 - q]).epsilon(1e-14));
    }
    for (std::size_t deg = 0; deg < 2 * n; ++deg) {
      double sum = 0.0;
      for (std::size_t q = 0; q < n; ++q) sum += gl.weights[q] * std::pow(gl.nodes[q], static_cast<double>(deg));
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
      CHECK(std::abs(sum - exact) < 1e-14);
    }
  }
  CHECK_THROWS_AS(vfs::gauss_legendre(0), vfs::ConfigError);
}

TEST_CASE("x2 rule layout") {
  const X2Rule panels(64, 30.0);
  CHECK(panels.size() == 64);
  CHECK(panels.panel_order() == 16);
  CHECK(panels.panel_count() == 4);
  const X2Rule single(10, 5.0);
  CHECK(single.panel_order() == 10);
  CHECK(single.panel_count() == 1);
  for (const auto* r : {&panels, &single}) {
    const auto nodes = r->nodes();
    CHECK(std::is_sorted(nodes.begin(), nodes.end()));
    CHECK(nodes.front() > 0.0);
    CHECK(nodes.back() < r->depth());
    const auto w = r->weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(r->depth()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(X2Rule(1, 1.0), vfs::ConfigError);
  CHECK_THROWS_AS(X2Rule(16, 0.0), vfs::ConfigError);
}

TEST_CASE("integrate and interpolate") {
  const X2Rule rule(64, 30.0);
  const auto f = sample(rule, [](double y) { return cplx(std::exp(-y), std::sin(y)); });
  const cplx exact(1.0 - std::exp(-30.0), 1.0 - std::cos(30.0));
  CHECK(std::abs(rule.integrate(f) - exact) < 1e-13);
  // Degree-15 interpolation of sin(y) over panels of length 7.5 is good to ~1e-8.
  for (const double y : {0.0, 0.3, 7.49, 7.5, 7.51, 29.9, 30.0}) {
    CHECK(std::abs(rule.interpolate(f, y) - cplx(std::exp(-y), std::sin(y))) < 1e-7);
  }
  CHECK(rule.interpolate(f, -0.1) == cplx(0.0));
  CHECK(rule.interpolate(f, 30.1) == cplx(0.0));
  // Polynomials of degree < order are reproduced exactly on one panel.
  const X2Rule one(8, 2.0);
  const auto p = sample(one, [](double y) { return cplx(y * y * y - 2.0 * y, 1.0); });
  CHECK(std::abs(one.interpolate(p, 1.3) - cplx(1.3 * 1.3 * 1.3 - 2.6, 1.0)) < 1e-13);
  CHECK_THROWS_AS(static_cast<void>(rule.integrate(std::vector<cplx>(3))), vfs::DimensionMismatch);
}

TEST_CASE("exponential product integration matches the closed form") {
  const X2Rule rule(128, 40.0);
  const double a = 0.7;
  const auto f = sample(rule, [&](double y) { return cplx(std::exp(-a * y)); });
  for (const cplx mu : {cplx(1.0, 0.0), cplx(0.5, 40.0), cplx(3.0, -7.0), cplx(60.0, 5.0), cplx(0.05, 0.3)}) {
    for (const double c : {0.0, 1.0, 13.7, 39.0}) {
      const auto [below, above] = rule.integrate_exponential(f, mu, c);
      const cplx b_exact = (std::exp(-a * c) - std::exp(-mu * c)) / (mu - a);
      const cplx a_exact = std::exp(-a * c) * (1.0 - std::exp(-(mu + a) * (rule.depth() - c))) / (mu + a);
      CAPTURE(mu);
      CAPTURE(c);
      CHECK(std::abs(below - b_exact) <= 1e-12 * (1.0 + std::abs(b_exact)));
      CHECK(std::abs(above - a_exact) <= 1e-12 * (1.0 + std::abs(a_exact)));
    }
  }
  CHECK_THROWS_AS(static_cast<void>(rule.integrate_exponential(f, cplx(0.0, 1.0), 0.0)), vfs::InvalidFrequency);
  CHECK_THROWS_AS(static_cast<void>(rule.integrate_exponential(f, cplx(-1.0, 0.0), 0.0)), vfs::InvalidFrequency);
}

TEST_CASE("Laplace moment agrees with double-exponential quadrature") {
  const X2Rule rule(128, 60.0);
  const double a = 0.4;
  const auto f = sample(rule, [&](double y) { return cplx(std::exp(-a * y)); });
  for (const cplx mu : {cplx(1.2, 0.0), cplx(0.8, 11.0), cplx(2.0, -3.0)}) {
    const cplx ref = oracle::laplace_of_exponential(mu, a);
    CHECK(std::abs(ref - 1.0 / (mu + a)) < 1e-13);
    const cplx got = rule.integrate_exponential(f, mu, 0.0).above;
    CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
  }
}

TEST_CASE("property: single-panel rule converges spectrally in ny") {
  // e^{-4y} on [0, 10] against the double-exponential oracle (the tail beyond
  // 10 is below 1e-17).
  const double a = 4.0;
  const cplx mu(1.0, 2.0);
  const cplx ref = oracle::laplace_of_exponential(mu, a);
  std::vector<double> errors;
  for (const std::size_t ny : {6u, 12u, 24u}) {
    const X2Rule rule(ny, 10.0);
    const auto f = sample(rule, [&](double y) { return cplx(std::exp(-a * y)); });
    errors.push_back(std::abs(rule.integrate_exponential(f, mu, 0.0).above - ref));
  }
  // Geometric convergence: each doubling gains well over two digits.
  CHECK(errors[1] < 1e-2 * errors[0]);
  CHECK(errors[2] < 1e-12);
}
