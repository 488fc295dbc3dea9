#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles/oracles.hpp"
#include "vfs/errors.hpp"
#include "vfs/front_solver.hpp"
#include "vfs/hemisphere.hpp"

using vfs::Frequency;
using vfs::PhysicalParams;
using vfs::SamplingStrategy;

namespace {

const PhysicalParams kMach2 = PhysicalParams::from_mach(2.0);

const vfs::NamedBound& detail(const vfs::BoundCertificate& cert, const std::string& name) {
  const auto it = std::find_if(cert.details.begin(), cert.details.end(), [&](const auto& d) { return d.name == name; });
  REQUIRE(it != cert.details.end());
  return *it;
}

std::size_t near_roots(const vfs::HemisphereSample& s, const PhysicalParams& p, double radius) {
  const auto roots = vfs::root_points(p);
  return static_cast<std::size_t>(std::count_if(s.points.begin(), s.points.end(), [&](const Frequency& f) {
    return std::any_of(roots.begin(), roots.end(),
                       [&](const auto& r) { return vfs::angular_distance(f, r.unit) < radius; });
  }));
}

}  // namespace

TEST_CASE("root directions") {
  const auto roots = vfs::root_points(kMach2);
  const double y = oracle::frozen::kY2Mach2;
  for (const auto& r : roots) {
    CHECK(r.unit[0] == 0.0);
    CHECK(std::hypot(r.unit[1], r.unit[2]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.unit[1] == doctest::Approx(r.family * y * r.unit[2]).epsilon(1e-14));
    CHECK(std::abs(vfs::big_sigma(Frequency(r.unit[0], r.unit[1], r.unit[2]), kMach2)) < 1e-14);
  }
}

TEST_CASE("sample of one point") {
  const auto s = vfs::sample_hemisphere(1, SamplingStrategy::UniformAngular, 0.0, kMach2);
  REQUIRE(s.points.size() == 1);
  CHECK(std::abs(s.points[0].lambda() - 1.0) <= 1e-12);
  CHECK(s.points[0].gamma() >= 0.0);
}

TEST_CASE("samples lie on the hemisphere above the floor") {
  for (const auto strategy :
       {SamplingStrategy::UniformAngular, SamplingStrategy::StratifiedNearRoots, SamplingStrategy::QuasiRandom}) {
    for (const double floor : {0.0, 1e-6, 0.01}) {
      const auto s = vfs::sample_hemisphere(10000, strategy, floor, kMach2, 7);
      CHECK(s.points.size() == 10000);
      double worst = 0.0;
      double min_gamma = 1.0;
      for (const auto& f : s.points) {
        worst = std::max(worst, std::abs(f.lambda() - 1.0));
        min_gamma = std::min(min_gamma, f.gamma());
      }
      CHECK(worst <= 1e-12);
      CHECK(min_gamma >= floor);
    }
  }
}

TEST_CASE("stratified sample covers the root curves") {
  const auto s = vfs::sample_hemisphere(10000, SamplingStrategy::StratifiedNearRoots, 1e-6, kMach2);
  CHECK(near_roots(s, kMach2, 0.05) >= 2500);
  CHECK_THROWS_AS(vfs::sample_hemisphere(10, SamplingStrategy::StratifiedNearRoots, 1e-6, PhysicalParams::from_mach(1.0)),
                  vfs::RegimeError);
}

TEST_CASE("samples are nested and seeded") {
  for (const auto strategy :
       {SamplingStrategy::UniformAngular, SamplingStrategy::StratifiedNearRoots, SamplingStrategy::QuasiRandom}) {
    const auto small = vfs::sample_hemisphere(500, strategy, 1e-6, kMach2, 99);
    const auto large = vfs::sample_hemisphere(1000, strategy, 1e-6, kMach2, 99);
    CHECK(std::equal(small.points.begin(), small.points.end(), large.points.begin()));
  }
  const auto a = vfs::sample_hemisphere(50, SamplingStrategy::UniformAngular, 0.0, kMach2, 1);
  const auto b = vfs::sample_hemisphere(50, SamplingStrategy::UniformAngular, 0.0, kMach2, 2);
  CHECK_FALSE(std::equal(a.points.begin(), a.points.end(), b.points.begin()));
}

TEST_CASE("invalid sampling arguments") {
  CHECK_THROWS_AS(vfs::sample_hemisphere(0, SamplingStrategy::UniformAngular, 0.0, kMach2), vfs::ConfigError);
  CHECK_THROWS_AS(vfs::sample_hemisphere(10, SamplingStrategy::UniformAngular, 1.0, kMach2), vfs::ConfigError);
  CHECK_THROWS_AS(vfs::sample_hemisphere(10, SamplingStrategy::UniformAngular, -0.1, kMach2), vfs::ConfigError);
  CHECK(vfs::parse_strategy("stratified") == SamplingStrategy::StratifiedNearRoots);
  CHECK(vfs::to_string(SamplingStrategy::QuasiRandom) == "quasi");
  CHECK_THROWS_AS(vfs::parse_strategy("sobol"), vfs::ConfigError);
}

TEST_CASE("sandwich at (1, 0, 0) is exactly 1") {
  vfs::HemisphereSample s;
  s.points = {Frequency(1.0, 0.0, 0.0)};
  const auto cert = vfs::certify_sandwich(s, kMach2);
  CHECK(cert.empirical_min == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.empirical_max == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.pass);
}

TEST_CASE("sandwich certificate at M = 2") {
  const auto s = vfs::sample_hemisphere(10000, SamplingStrategy::StratifiedNearRoots, 1e-6, kMach2);
  const auto cert = vfs::certify_sandwich(s, kMach2);
  CHECK(cert.pass);
  CHECK(cert.homogeneity_ok);
  CHECK(cert.empirical_min > 0.0);
  CHECK(cert.sample_size == 10000);
  CHECK(cert.gamma_floor == 1e-6);
  // The sample range lies inside the exact range over the hemisphere.
  CHECK(cert.empirical_min >= oracle::frozen::kSandwichInf * (1.0 - 1e-9));
  CHECK(cert.empirical_max <= oracle::frozen::kSandwichSup * (1.0 + 1e-9));
  CHECK(detail(cert, "homogeneity_rel_change").max <= 1e-12);
  CHECK(detail(cert, "abs_sigma_over_Lambda").max <= 1.0 + 1e-12);
}

TEST_CASE("sandwich ratio tends to sqrt(4 M^2 + 1) at the root directions") {
  const std::pair<double, double> cases[] = {{1.5, oracle::frozen::kRootLimitMach15},
                                             {2.0, oracle::frozen::kRootLimitMach2},
                                             {3.0, oracle::frozen::kRootLimitMach3}};
  for (const auto& [mach, limit] : cases) {
    CAPTURE(mach);
    const auto p = PhysicalParams::from_mach(mach);
    const auto s = vfs::sample_hemisphere(20000, SamplingStrategy::StratifiedNearRoots, 1e-6, p);
    double previous_spread = 1e300;
    for (const double radius : {1e-3, 2.5e-4}) {
      vfs::CertifyOptions opts;
      opts.limit_radius = radius;
      opts.limit_spread = 1.0;
      const auto cert = vfs::certify_sandwich(s, p, opts);
      double spread = 0.0;
      for (int k = 0; k < 4; ++k) {
        const auto& d = detail(cert, "near_root_limit_" + std::to_string(k));
        REQUIRE(d.count > 0);
        CHECK(d.min <= limit);
        CHECK(d.max >= limit);
        spread = std::max(spread, (d.max - d.min) / limit);
      }
      // The ratio is Lipschitz at the root: a quarter of the radius, about a quarter of the spread.
      CHECK(spread < 0.4 * previous_spread);
      previous_spread = spread;
    }
  }
}

TEST_CASE("sandwich rejects the elliptic regime and empty samples") {
  const auto s = vfs::sample_hemisphere(10, SamplingStrategy::UniformAngular, 0.0, kMach2);
  CHECK_THROWS_AS(vfs::certify_sandwich(s, PhysicalParams::from_mach(1.0)), vfs::RegimeError);
  CHECK_THROWS_AS(vfs::certify_weight_bounds(s, PhysicalParams::from_mach(1.0)), vfs::RegimeError);
  CHECK_THROWS_AS(vfs::certify_sandwich(vfs::HemisphereSample{}, kMach2), vfs::ConfigError);
}

TEST_CASE("sandwich fails when the spread exceeds the explosion threshold") {
  const auto s = vfs::sample_hemisphere(2000, SamplingStrategy::StratifiedNearRoots, 1e-6, kMach2);
  vfs::CertifyOptions opts;
  opts.explosion_threshold = 2.0;
  CHECK_FALSE(vfs::certify_sandwich(s, kMach2, opts).pass);
}

TEST_CASE("weight bounds at (1, 0, 0) are tight") {
  vfs::HemisphereSample s;
  s.points = {Frequency(1.0, 0.0, 0.0)};
  const auto cert = vfs::certify_weight_bounds(s, kMach2);
  CHECK(cert.empirical_min == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cert.empirical_max == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(detail(cert, "abs_sigma_over_gamma").min == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("weight bounds certificate at M = 2") {
  const auto s = vfs::sample_hemisphere(10000, SamplingStrategy::StratifiedNearRoots, 0.01, kMach2);
  const auto cert = vfs::certify_weight_bounds(s, kMach2);
  CHECK(cert.pass);
  CHECK(cert.empirical_max <= 1.0 + 1e-12);
  const auto& lower = detail(cert, "abs_sigma_over_gamma");
  CHECK(lower.min >= oracle::frozen::kWeightOverGammaInf * (1.0 - 1e-12));
  CHECK(lower.min <= 1.01);
  const double tube = oracle::tube_limit(2.0);
  for (const char* name : {"abs_sigma_over_dist_plus_root", "abs_sigma_over_dist_minus_root"}) {
    const auto& d = detail(cert, name);
    CHECK(d.count > 0);
    CHECK(d.min > 0.0);
    CHECK(d.min <= tube * 1.05);
    CHECK(d.max >= tube * 0.95);
  }
  CHECK(detail(cert, "abs_sigma_over_Lambda_off_tubes").min > 0.01);
  CHECK(vfs::embedding_constant(cert) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("refinement never shrinks the range") {
  const auto small = vfs::sample_hemisphere(2000, SamplingStrategy::QuasiRandom, 1e-6, kMach2, 5);
  const auto large = vfs::sample_hemisphere(4000, SamplingStrategy::QuasiRandom, 1e-6, kMach2, 5);
  const auto a = vfs::certify_sandwich(small, kMach2);
  const auto b = vfs::certify_sandwich(large, kMach2);
  CHECK(b.empirical_min <= a.empirical_min);
  CHECK(b.empirical_max >= a.empirical_max);
}

TEST_CASE("locate_roots") {
  const double y = oracle::frozen::kY2Mach2;
  CHECK(vfs::locate_roots(kMach2, +1, 1e-8) == doctest::Approx(y).epsilon(1e-8));
  CHECK(vfs::locate_roots(kMach2, -1, 1e-8) == doctest::Approx(-y).epsilon(1e-8));
  CHECK(vfs::locate_roots(PhysicalParams::from_mach(1.0), +1, 1e-8) ==
        doctest::Approx(oracle::frozen::kY1Mach1).epsilon(1e-8));
  for (const double mach : {1.5, 3.0}) {
    const auto p = PhysicalParams::from_mach(mach, 2.0);
    const double target = 2.0 * static_cast<double>(oracle::y2(mach));
    CHECK(std::abs(vfs::locate_roots(p, +1, 1e-8) - target) <= 1e-8 * target);
  }
  for (const double mach : {0.5, 1.0}) {
    const auto p = PhysicalParams::from_mach(mach, 0.5);
    const double target = 0.5 * static_cast<double>(oracle::y1(mach));
    CHECK(std::abs(vfs::locate_roots(p, -1, 1e-8) - target) <= 1e-8 * target);
  }
  CHECK_THROWS_AS(vfs::locate_roots(PhysicalParams::from_mach(std::numbers::sqrt2), 1, 1e-8), vfs::RegimeError);
  CHECK_THROWS_AS(vfs::locate_roots(kMach2, 0, 1e-8), vfs::ConfigError);
  // An impossible tolerance is reported, not silently met.
  CHECK_THROWS_AS(vfs::locate_roots(kMach2, 1, 0.0), vfs::NoRootFound);
}

TEST_CASE("simple root: band, refinement and derivative") {
  vfs::SimpleRootOptions opts;
  opts.radius = 1e-3;
  const auto coarse = vfs::certify_simple_root(kMach2, opts);
  opts.radius = 5e-4;
  const auto fine = vfs::certify_simple_root(kMach2, opts);
  CHECK(coarse.pass);
  CHECK(fine.pass);
  CHECK(coarse.empirical_max / coarse.empirical_min <= 2.0);
  CHECK(fine.empirical_max / fine.empirical_min <= coarse.empirical_max / coarse.empirical_min);
  CHECK(std::abs(fine.empirical_min / coarse.empirical_min - 1.0) <= 0.05);
  CHECK(std::abs(fine.empirical_max / coarse.empirical_max - 1.0) <= 0.05);
  // The band brackets |d Sigma / d tau| at the root.
  const double deriv = oracle::frozen::kSimpleRootDerivMach2;
  for (const auto* c : {&coarse, &fine}) {
    CHECK(c->empirical_min <= deriv);
    CHECK(c->empirical_max >= deriv);
  }
  opts.family = -1;
  CHECK(vfs::certify_simple_root(kMach2, opts).pass);
}

TEST_CASE("simple root preconditions") {
  vfs::SimpleRootOptions opts;
  opts.center = Frequency(0.0, 0.5, 1.0);
  CHECK_THROWS_AS(vfs::certify_simple_root(kMach2, opts), vfs::InvalidFrequency);
  opts.center = Frequency(0.0, 2.0 * oracle::frozen::kY2Mach2, 2.0);
  CHECK(vfs::certify_simple_root(kMach2, opts).pass);
  CHECK_THROWS_AS(vfs::certify_simple_root(PhysicalParams::from_mach(1.0)), vfs::RegimeError);
}

TEST_CASE("property: embedding chain with the certified constant") {
  const auto s = vfs::sample_hemisphere(20000, SamplingStrategy::StratifiedNearRoots, 1e-6, kMach2);
  const double C = vfs::embedding_constant(vfs::certify_weight_bounds(s, kMach2));
  oracle::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    vfs::GridSpec g;
    g.nt = 16;
    g.nx = 16;
    g.gamma = rng.uniform(1.0, 20.0);
    const double sobolev = rng.uniform(-2.0, 2.0);
    std::vector<vfs::cplx> u(g.plane_size());
    for (auto& z : u) z = rng.complex_normal();
    const double plain = vfs::weighted_norm(u, g, kMach2, sobolev, vfs::NormSpace::Plain);
    const double aniso = vfs::weighted_norm(u, g, kMach2, sobolev, vfs::NormSpace::Anisotropic);
    const double plain1 = vfs::weighted_norm(u, g, kMach2, sobolev + 1.0, vfs::NormSpace::Plain);
    CHECK(g.gamma * plain <= C * aniso * (1.0 + 1e-12));
    CHECK(aniso <= plain1 * (1.0 + 1e-12));
  }
}
