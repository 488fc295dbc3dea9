// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles/oracles.hpp"
#include "vfs/errors.hpp"
#include "vfs/hemisphere.hpp"
#include "vfs/pressure.hpp"
#include "vfs/studies.hpp"

using namespace vfs;

namespace {

// Tolerances, pinned.
constexpr double kRootTol = 1e-8;
constexpr double kBandLimit = 2.0;
constexpr double kBandStability = 0.05;
constexpr double kSimpleRootRadius = 1e-3;
constexpr std::size_t kSandwichSamples = 1'000'000;
constexpr double kGammaFloor = 1e-6;
constexpr double kSandwichMaxOverMin = 1e4;
constexpr double kHomogeneityTol = 1e-12;
constexpr double kManufacturedTol = 1e-12;
constexpr double kSourceClosedFormTol = 1e-8;
constexpr double kSourceTailBound = 1e-12;
constexpr double kSweepSlack = 0.1;
constexpr double kResidualTol = 1e-8;
// Both embedding inequalities are attained with equality at delta = eta = 0
// (|sigma| = gamma = Lambda there); this absorbs the roundoff of the norms.
constexpr double kEmbeddingRoundoff = 1e-12;
constexpr std::uint64_t kSeed = 20261015;

const PhysicalParams kMach2 = PhysicalParams::from_mach(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Shared {
  std::optional<HemisphereSample> sample;
  std::optional<BoundCertificate> sandwich;
  std::optional<BoundCertificate> weights;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

GridSpec random_box(oracle::Rng& rng, std::size_t n) {
  GridSpec g;
  g.nt = n;
  g.nx = n;
  g.ny = 8;
  g.Lt = rng.uniform(4.0, 40.0);
  g.Lx = rng.uniform(4.0, 40.0);
  g.Ly = 30.0;
  g.gamma = rng.uniform(1.0, 10.0);
  return g;
}

std::vector<cplx> random_spectrum(oracle::Rng& rng, const GridSpec& g) {
  std::vector<cplx> u(g.plane_size());
  for (auto& z : u) z = rng.complex_normal();
  return u;
}

Outcome roots() {
  double worst = 0.0;
  for (const double m : {1.5, 2.0, 3.0}) {
    const auto p = PhysicalParams::from_mach(m);
    const double y2 = static_cast<double>(oracle::y2(m));
    for (const int sign : {1, -1}) {
      worst = std::max(worst, std::abs(locate_roots(p, sign, kRootTol) - sign * p.c() * y2) / y2);
    }
  }
  for (const double m : {0.5, 1.0}) {
    const auto p = PhysicalParams::from_mach(m);
    const double y1 = static_cast<double>(oracle::y1(m));
    for (const int sign : {1, -1}) {
      worst = std::max(worst, std::abs(locate_roots(p, sign, kRootTol) - p.c() * y1) / y1);
    }
  }
  return {worst <= kRootTol, "max relative error " + fmt(worst) + " over M in {1.5, 2, 3} and {0.5, 1}"};
}

Outcome simple_root() {
  cli::SimpleRootConfig cfg;
  cfg.radius = kSimpleRootRadius;
  cfg.band_limit = kBandLimit;
  cfg.stability = kBandStability;
  bool pass = true;
  std::string detail;
  for (const double m : {1.5, 2.0, 3.0}) {
    for (const int family : {1, -1}) {
      const auto st = cli::simple_root_study(PhysicalParams::from_mach(m), cfg, family);
      const double band = st.coarse.empirical_max / st.coarse.empirical_min;
      const double change = std::max(st.min_change, st.max_change);
      const bool ok = band <= kBandLimit && change <= kBandStability;
      pass = pass && ok;
      if (m == 2.0 && family == 1) detail = "M=2: band " + fmt(band) + ", change to r/2 " + fmt(change);
      if (!ok) {
        detail += "; M=" + fmt(m) + " family " + std::to_string(family) + " band " + fmt(band) + " change " +
                  fmt(change);
      }
    }
  }
  return {pass, detail + " (M in {1.5, 2, 3}, both families)"};
}

Outcome sandwich(Shared& shared) {
  shared.sample =
      sample_hemisphere(kSandwichSamples, SamplingStrategy::StratifiedNearRoots, kGammaFloor, kMach2, kSeed);
  CertifyOptions opts;
  opts.homogeneity_tolerance = kHomogeneityTol;
  opts.seed = kSeed;
  shared.sandwich = certify_sandwich(*shared.sample, kMach2, opts);
  const auto& c = *shared.sandwich;
  const double spread = c.empirical_max / c.empirical_min;
  const bool ok = c.empirical_min > 0.0 && spread <= kSandwichMaxOverMin && c.homogeneity_ok;
  return {ok, "n=" + std::to_string(c.sample_size) + ", range [" + fmt(c.empirical_min) + ", " + fmt(c.empirical_max) +
                  "], max/min " + fmt(spread) + ", homogeneity " + (c.homogeneity_ok ? "ok" : "failed") +
                  ", full certificate " + (c.pass ? "PASS" : "FAIL")};
}

Outcome weight_bounds(Shared& shared) {
  if (!shared.sample) return {false, "no sample (criterion 3 did not run)"};
  CertifyOptions opts;
  opts.seed = kSeed;
  shared.weights = certify_weight_bounds(*shared.sample, kMach2, opts);
  std::string detail;
  for (const auto& d : shared.weights->details) {
    detail += d.name + " [" + fmt(d.min) + ", " + fmt(d.max) + "]" + (d.pass ? "" : " FAIL") + "; ";
  }
  return {shared.weights->pass, detail + "C = " + fmt(embedding_constant(*shared.weights))};
}

Outcome manufactured() {
  GridSpec g;
  g.nt = 256;
  g.nx = 256;
  g.ny = 8;
  g.Lt = 32.0;
  g.Lx = 32.0;
  g.Ly = 30.0;
  g.gamma = 1.0;
  std::vector<cplx> f0(g.plane_size());
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const auto f = g.frequency(i);
    f0[i] = std::exp(-0.02 * (f.delta() * f.delta() + f.eta() * f.eta())) * cplx(1.0, -0.3);
  }
  const auto sol = solve_front(apply_symbol(f0, g, kMach2), g, kMach2);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    err += std::norm(sol.fhat[i] - f0[i]);
    ref += std::norm(f0[i]);
  }
  const double rel = std::sqrt(err / ref);
  return {rel <= kManufacturedTol, "256x256 relative l2 error " + fmt(rel)};
}

Outcome source_pipeline() {
  oracle::Rng rng(kSeed + 6);
  SolverOptions opts;
  opts.tail_tolerance = kSourceTailBound;
  double worst = 0.0, deepest = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double a = rng.uniform(0.5, 3.0);
    const Frequency freq(rng.uniform(1.0, 4.0), rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0));
    const cplx mu = mu_pm(freq, kMach2).plus;
    // Tail e^{-Re mu+ Ly} and source decay e^{-a Ly} both at most the bound.
    const double depth = -std::log(kSourceTailBound) / std::min(mu.real(), a);
    deepest = std::max(deepest, depth);
    const X2Rule rule(128, depth);
    std::vector<cplx> plus, minus(rule.size());
    for (const double y : rule.nodes()) plus.push_back(std::exp(-a * y));
    const cplx got = source_moment(plus, minus, rule, freq, kMach2, opts, 1.0);
    const cplx want = 1.0 / (mu * (mu + a));
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  }
  return {worst <= kSourceClosedFormTol,
          "ny=128, 40 frequencies, max relative error " + fmt(worst) + ", depth up to " + fmt(deepest)};
}

Outcome sweep() {
  // Smooth bump centred on the front, as in configs/sweep.ini.
  GridSpec g;
  g.nt = 64;
  g.nx = 64;
  g.ny = 64;
  g.Lt = 16.0;
  g.Lx = 16.0;
  g.Ly = 30.0;
  g.gamma = 1.0;
  cli::BumpConfig bump;
  bump.y0 = 0.0;
  const auto fp = transform_source(cli::bump_source(g, bump, Side::Plus), g, Side::Plus);
  const auto fm = transform_source(cli::bump_source(g, bump, Side::Minus), g, Side::Minus);
  const std::vector<double> gammas{1.0, 2.0, 4.0, 8.0, 16.0};
  const auto sw = estimate_sweep(fp, fm, kMach2, 0.0, gammas, kSweepSlack);
  std::string detail = "ratio_front";
  for (const auto& r : sw.rows) detail += " " + fmt(r.ratio_front);
  detail += "; ratio_g";
  for (const auto& r : sw.rows) detail += " " + fmt(r.ratio_g);
  detail += "; ratio_plain";
  for (const auto& r : sw.rows) detail += " " + fmt(r.ratio_plain);
  return {sw.pass && sw.front_bounded && sw.g_bounded && sw.plain_bounded, detail};
}

Outcome norm_equivalence(const Shared& shared) {
  if (!shared.sandwich) return {false, "no sandwich certificate (criterion 3 did not run)"};
  const double lo = shared.sandwich->empirical_min, hi = shared.sandwich->empirical_max;
  oracle::Rng rng(kSeed + 8);
  double rmin = INFINITY, rmax = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_box(rng, 32);
    const double s = rng.uniform(-1.0, 2.0);
    const auto fhat = random_spectrum(rng, g);
    const double lhs = weighted_norm(apply_symbol(fhat, g, kMach2), g, kMach2, s, NormSpace::Plain);
    const double rhs = weighted_norm(fhat, g, kMach2, s + 1.0, NormSpace::Anisotropic);
    rmin = std::min(rmin, lhs / rhs);
    rmax = std::max(rmax, lhs / rhs);
  }
  return {rmin >= lo && rmax <= hi,
          "100 spectra, ratios in [" + fmt(rmin) + ", " + fmt(rmax) + "], band [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

Outcome end_to_end() {
  oracle::Rng rng(kSeed + 9);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    GridSpec g;
    g.nt = 8;
    g.nx = 8;
    g.ny = 64;
    g.Lt = rng.uniform(4.0, 16.0);
    g.Lx = rng.uniform(4.0, 16.0);
    g.Ly = 40.0;
    g.gamma = rng.uniform(1.0, 4.0);
    const long k = rng.integer(-3, 3), m = rng.integer(-3, 3);
    const double d0 = 2.0 * std::numbers::pi * static_cast<double>(k) / g.Lt;
    const double e0 = 2.0 * std::numbers::pi * static_cast<double>(m) / g.Lx;
    const double width = rng.uniform(0.5, 2.0), y0 = rng.uniform(0.0, 4.0), rate = rng.uniform(0.8, 3.0);
    const cplx ap = rng.complex_normal(), am = rng.complex_normal();
    const X2Rule rule(g.ny, g.Ly);
    std::vector<cplx> plus(g.plane_size() * g.ny), minus(plus.size());
    for (std::size_t it = 0; it < g.nt; ++it) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const double t = static_cast<double>(it) * g.dt(), x = static_cast<double>(ix) * g.dx();
        const cplx wave = std::exp(g.gamma * t) * std::exp(cplx(0.0, d0 * t + e0 * x));
        for (std::size_t q = 0; q < g.ny; ++q) {
          const double y = rule.nodes()[q];
          plus[(it * g.nx + ix) * g.ny + q] = wave * ap * std::exp(-(y - y0) * (y - y0) / (width * width));
          minus[(it * g.nx + ix) * g.ny + q] = wave * am * y * std::exp(-rate * y);
        }
      }
    }
    const auto fp = transform_source(plus, g, Side::Plus);
    const auto fm = transform_source(minus, g, Side::Minus);
    const auto sol = solve_front(build_g(fp, fm, kMach2), g, kMach2);
    const std::size_t mode = g.mode_index(k, m);
    const auto freq = g.frequency(mode);
    const auto pair = reconstruct_pressure(sol, fp, fm, mode);
    worst = std::max(worst, front_equation_residual(sol.fhat[mode], pair, freq, kMach2));
  }
  return {worst <= kResidualTol, "50 single-mode cases, max normalized residual " + fmt(worst)};
}

Outcome embedding(const Shared& shared) {
  if (!shared.weights) return {false, "no weight certificate (criterion 4 did not run)"};
  const double c = embedding_constant(*shared.weights);
  oracle::Rng rng(kSeed + 10);
  double worst_left = 0.0, worst_right = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_box(rng, 32);
    const double s = rng.uniform(-1.0, 2.0);
    const auto u = random_spectrum(rng, g);
    const double plain = g.gamma * weighted_norm(u, g, kMach2, s, NormSpace::Plain);
    const double aniso = c * weighted_norm(u, g, kMach2, s, NormSpace::Anisotropic);
    const double next = c * weighted_norm(u, g, kMach2, s + 1.0, NormSpace::Plain);
    worst_left = std::max(worst_left, plain / aniso);
    worst_right = std::max(worst_right, aniso / next);
  }
  const bool ok = worst_left <= 1.0 + kEmbeddingRoundoff && worst_right <= 1.0 + kEmbeddingRoundoff;
  return {ok, "C = " + fmt(c) + ", max gamma|u|_s / C|u|_{s,sigma} = " + fmt(worst_left) +
                  ", max C|u|_{s,sigma} / C|u|_{s+1} = " + fmt(worst_right)};
}

Outcome diagram() {
  const auto rows = cli::stability_diagram({0.5, 3.5, 0.05});
  const auto flip = cli::regime_flip(rows);
  if (!flip) return {false, "no Elliptic -> WeaklyStable flip"};
  const double below = rows[*flip - 1].mach, above = rows[*flip].mach;
  std::size_t flips = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) flips += rows[k].regime != rows[k - 1].regime;
  const bool ok = below < std::numbers::sqrt2 && std::numbers::sqrt2 < above &&
                  rows[*flip - 1].regime == Regime::Elliptic && flips == 1;
  return {ok, "flip between M = " + fmt(below) + " and " + fmt(above) + ", " + std::to_string(flips) +
                  " regime change(s) on [0.5, 3.5] step 0.05"};
}

}  // namespace

int main() {
  Shared shared;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"root certification", roots},
      {"simple-root factorization", simple_root},
      {"sandwich bound", [&] { return sandwich(shared); }},
      {"weight bounds", [&] { return weight_bounds(shared); }},
      {"manufactured solution", manufactured},
      {"source pipeline closed form", source_pipeline},
      {"energy-estimate sweep", sweep},
      {"norm equivalence", [&] { return norm_equivalence(shared); }},
      {"end-to-end front residual", end_to_end},
      {"embedding chain", [&] { return embedding(shared); }},
      {"regime dichotomy", diagram},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !out.pass;
    std::printf("%s %2zu %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
