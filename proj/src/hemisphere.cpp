#include "vfs/hemisphere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "vfs/errors.hpp"
#include "vfs/parallel.hpp"

namespace vfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr cplx kI{0.0, 1.0};

using Vec3 = std::array<double, 3>;

Vec3 unit_vector(const Frequency& f) {
  const double lam = f.lambda();
  return {f.gamma() / lam, f.delta() / lam, f.eta() / lam};
}

Vec3 normalize(Vec3 v) {
  const double n = std::hypot(v[0], v[1], v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Extrema of a strictly positive ratio; anything non-finite or <= 0 counts as bad.
struct Range {
  double min = kInf;
  double max = -kInf;
  std::size_t count = 0;
  std::size_t bad = 0;
  std::size_t argmin = kNone;
  std::size_t argmax = kNone;

  void add(double x, std::size_t index) {
    ++count;
    if (!std::isfinite(x) || !(x > 0.0)) {
      ++bad;
      return;
    }
    if (x < min || (x == min && index < argmin)) {
      min = x;
      argmin = index;
    }
    if (x > max || (x == max && index < argmax)) {
      max = x;
      argmax = index;
    }
  }

  void merge(const Range& o) {
    count += o.count;
    bad += o.bad;
    if (o.min < min || (o.min == min && o.argmin < argmin)) {
      min = o.min;
      argmin = o.argmin;
    }
    if (o.max > max || (o.max == max && o.argmax < argmax)) {
      max = o.max;
      argmax = o.argmax;
    }
  }

  [[nodiscard]] bool two_sided(double explosion) const {
    return count > 0 && bad == 0 && std::isfinite(max) && min > 0.0 && max / min <= explosion;
  }

  [[nodiscard]] NamedBound bound(std::string name, bool pass, std::string note = {}) const {
    return {std::move(name), count > 0 ? min : 0.0, count > 0 ? max : 0.0, count, pass, std::move(note)};
  }
};

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : kInf; }

// Points closer than this to a root direction are ill-conditioned for the
// rescaling test: rounding k * (gamma, delta, eta) alone moves the ratio by
// about eps / distance.  Those are rescaled by exact powers of two.
constexpr double kConditioningRadius = 1e-3;

struct Homogeneity {
  double max_change = 0.0;
  std::size_t evaluations = 0;
  bool pass = true;
};

// Evaluates a degree-0 ratio at `points` and at k * point, 10 random k per
// point: k in (0, 1e3] away from the roots, k = 2^j with j in [-20, 20] near them.
Homogeneity check_homogeneity(const std::vector<Frequency>& points, const std::vector<std::size_t>& indices,
                              const std::array<RootPoint, 4>* roots, double tolerance, std::uint64_t seed,
                              auto&& ratio) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> exponent(-20, 20);
  Homogeneity out;
  for (std::size_t idx : indices) {
    if (idx >= points.size()) continue;
    const Frequency& p = points[idx];
    const double base = ratio(p);
    if (!std::isfinite(base)) {
      out.pass = false;
      continue;
    }
    bool exact_scaling = false;
    if (roots != nullptr) {
      for (const auto& r : *roots) exact_scaling = exact_scaling || angular_distance(p, r.unit) < kConditioningRadius;
    }
    for (int trial = 0; trial < 10; ++trial) {
      const double k = exact_scaling ? std::ldexp(1.0, exponent(rng)) : 1e3 * (1.0 - unit(rng));
      const double change = std::abs(ratio(p.scaled(k)) - base) / std::abs(base);
      ++out.evaluations;
      if (!(change <= tolerance)) out.pass = false;
      if (std::isfinite(change)) out.max_change = std::max(out.max_change, change);
    }
  }
  return out;
}

NamedBound homogeneity_bound(const Homogeneity& h, double tolerance) {
  std::ostringstream note;
  note << "relative change under rescaling, tolerance " << tolerance;
  return {"homogeneity_rel_change", 0.0, h.max_change, h.evaluations, h.pass, note.str()};
}

std::vector<std::size_t> probe_indices(std::size_t n, std::initializer_list<std::size_t> extra) {
  std::vector<std::size_t> out(extra);
  const std::size_t stride = std::max<std::size_t>(1, n / 8);
  for (std::size_t i = 0; i < n && out.size() < 10; i += stride) out.push_back(i);
  return out;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

// Uniform area measure on the zone gamma in [floor, 1] of the unit sphere.
Frequency zone_point(double u_gamma, double u_phi, double floor) {
  const double gamma = floor + (1.0 - floor) * u_gamma;
  const double r = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
  const double phi = 2.0 * std::numbers::pi * u_phi;
  return Frequency(gamma, r * std::cos(phi), r * std::sin(phi)).normalized();
}

}  // namespace

std::string_view to_string(SamplingStrategy strategy) {
  switch (strategy) {
    case SamplingStrategy::UniformAngular:
      return "uniform";
    case SamplingStrategy::StratifiedNearRoots:
      return "stratified";
    case SamplingStrategy::QuasiRandom:
      return "quasi";
  }
  return "unknown";
}

SamplingStrategy parse_strategy(std::string_view name) {
  if (name == "uniform") return SamplingStrategy::UniformAngular;
  if (name == "stratified") return SamplingStrategy::StratifiedNearRoots;
  if (name == "quasi") return SamplingStrategy::QuasiRandom;
  throw ConfigError("unknown sampling strategy '" + std::string(name) + "' (expected uniform, stratified or quasi)");
}

std::array<RootPoint, 4> root_points(const PhysicalParams& params) {
  const double cy = params.c() * y2(params);
  const double n = std::hypot(cy, 1.0);
  return {{
      {{0.0, cy / n, 1.0 / n}, +1},
      {{0.0, -cy / n, -1.0 / n}, +1},
      {{0.0, -cy / n, 1.0 / n}, -1},
      {{0.0, cy / n, -1.0 / n}, -1},
  }};
}

double angular_distance(const Frequency& unit, const std::array<double, 3>& direction) {
  const Vec3 u = unit_vector(unit);
  const double chord = std::hypot(u[0] - direction[0], u[1] - direction[1], u[2] - direction[2]);
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

HemisphereSample sample_hemisphere(std::size_t n, SamplingStrategy strategy, double gamma_floor,
                                   const PhysicalParams& params, std::uint64_t seed, double near_root_radius) {
  if (n == 0) throw ConfigError("hemisphere sample size must be at least 1");
  if (!(gamma_floor >= 0.0) || !(gamma_floor < 1.0)) throw ConfigError("gamma_floor must lie in [0, 1)");

  HemisphereSample out;
  out.strategy = strategy;
  out.gamma_floor = gamma_floor;
  out.points.reserve(n);

  if (strategy == SamplingStrategy::QuasiRandom) {
    for (std::size_t i = 0; i < n; ++i) {
      out.points.push_back(zone_point(radical_inverse(i + 1, 2), radical_inverse(i + 1, 3), gamma_floor));
    }
    return out;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (strategy == SamplingStrategy::UniformAngular) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = unit(rng);
      const double b = unit(rng);
      out.points.push_back(zone_point(a, b, gamma_floor));
    }
    return out;
  }

  // Stratified: even indices near a root direction, odd indices uniform.
  const auto roots = root_points(params);
  const double rho_max = near_root_radius;
  // At angular distance rho from a root gamma is at most sin(rho); from 2 asin(floor)
  // on, half of each circle clears the floor.
  const double rho_min =
      std::max(std::min(rho_max / 10.0, std::max(10.0 * gamma_floor, 1e-8)), 2.0 * std::asin(gamma_floor));
  if (!(rho_min < rho_max)) {
    throw ConfigError("gamma_floor is too large for the near-root stratum (needs 2 asin(floor) < near_root_radius)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 1) {
      const double a = unit(rng);
      const double b = unit(rng);
      out.points.push_back(zone_point(a, b, gamma_floor));
      continue;
    }
    const Vec3& p = roots[(i / 2) % 4].unit;
    const Vec3 e1{1.0, 0.0, 0.0};
    const Vec3 e2 = normalize({0.0, p[2], -p[1]});
    const double u = unit(rng);
    double rho;
    if (u < 0.5) {
      // log-uniform radius: resolves the approach to the root
      rho = rho_min * std::pow(rho_max / rho_min, unit(rng));
    } else {
      // area-uniform in the cap
      rho = std::acos(std::cos(rho_min) - unit(rng) * (std::cos(rho_min) - std::cos(rho_max)));
    }
    Vec3 q{};
    for (;;) {
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      for (int k = 0; k < 3; ++k) {
        q[k] = std::cos(rho) * p[k] + std::sin(rho) * (std::cos(theta) * e1[k] + std::sin(theta) * e2[k]);
      }
      q[0] = std::abs(q[0]);
      if (q[0] >= gamma_floor) break;
    }
    out.points.push_back(Frequency(q[0], q[1], q[2]).normalized());
  }
  return out;
}

BoundCertificate certify_sandwich(const HemisphereSample& sample, const PhysicalParams& params,
                                  const CertifyOptions& options) {
  if (params.regime() != Regime::WeaklyStable) {
    throw RegimeError("sandwich certification requires M > sqrt(2): the weight sigma is undefined otherwise");
  }
  if (sample.points.empty()) throw ConfigError("empty hemisphere sample");

  const auto roots = root_points(params);
  auto ratio = [&](const Frequency& f) {
    try {
      return safe_ratio(std::abs(big_sigma(f, params)), std::abs(weight_sigma(f, params)) * f.lambda());
    } catch (const DegenerateDenominator&) {
      return kInf;
    }
  };

  struct Acc {
    Range main;
    Range weight;
    std::array<Range, 4> limit;
  };
  const auto& pts = sample.points;
  const Acc acc = parallel_reduce(
      pts.size(), Acc{},
      [&](Acc& a, std::size_t i) {
        const Frequency& f = pts[i];
        const double r = ratio(f);
        a.main.add(r, i);
        a.weight.add(std::abs(weight_sigma(f, params)) / f.lambda(), i);
        for (std::size_t k = 0; k < roots.size(); ++k) {
          if (angular_distance(f, roots[k].unit) < options.limit_radius) a.limit[k].add(r, i);
        }
      },
      [](Acc& a, const Acc& b) {
        a.main.merge(b.main);
        a.weight.merge(b.weight);
        for (std::size_t k = 0; k < a.limit.size(); ++k) a.limit[k].merge(b.limit[k]);
      });

  BoundCertificate cert;
  cert.ratio_name = "abs_Sigma_over_abs_sigma_Lambda";
  cert.empirical_min = acc.main.min;
  cert.empirical_max = acc.main.max;
  cert.sample_size = pts.size();
  cert.gamma_floor = sample.gamma_floor;
  cert.params = params;

  const bool main_ok = acc.main.two_sided(options.explosion_threshold);
  cert.details.push_back(acc.main.bound(cert.ratio_name, main_ok));
  const bool weight_ok = acc.weight.bad == 0 && std::isfinite(acc.weight.max);
  cert.details.push_back(acc.weight.bound("abs_sigma_over_Lambda", weight_ok));

  bool limits_ok = true;
  for (std::size_t k = 0; k < acc.limit.size(); ++k) {
    const Range& r = acc.limit[k];
    std::ostringstream name;
    name << "near_root_limit_" << k;
    if (r.count == 0) {
      cert.details.push_back(r.bound(name.str(), true, "no sample points within the limit radius"));
      continue;
    }
    const bool ok = r.bad == 0 && (r.max - r.min) <= options.limit_spread * r.max;
    limits_ok = limits_ok && ok;
    cert.details.push_back(r.bound(name.str(), ok));
  }

  const auto homog = check_homogeneity(pts, probe_indices(pts.size(), {acc.main.argmin, acc.main.argmax}), &roots,
                                       options.homogeneity_tolerance, options.seed, ratio);
  cert.homogeneity_ok = homog.pass;
  cert.details.push_back(homogeneity_bound(homog, options.homogeneity_tolerance));
  cert.pass = main_ok && weight_ok && limits_ok && cert.homogeneity_ok;
  return cert;
}

BoundCertificate certify_weight_bounds(const HemisphereSample& sample, const PhysicalParams& params,
                                       const CertifyOptions& options) {
  if (params.regime() != Regime::WeaklyStable) {
    throw RegimeError("weight bounds require M > sqrt(2)");
  }
  if (sample.points.empty()) throw ConfigError("empty hemisphere sample");

  const auto roots = root_points(params);
  const double cy = params.c() * y2(params);

  struct Acc {
    Range over_lambda;
    Range over_gamma;
    Range tube_plus;
    Range tube_minus;
    Range off_tubes;
  };
  const auto& pts = sample.points;
  const Acc acc = parallel_reduce(
      pts.size(), Acc{},
      [&](Acc& a, std::size_t i) {
        const Frequency& f = pts[i];
        const double lam = f.lambda();
        const double w = std::abs(weight_sigma(f, params));
        a.over_lambda.add(w / lam, i);
        a.over_gamma.add(safe_ratio(w, f.gamma()), i);
        double nearest = kInf;
        int family = 0;
        for (const auto& r : roots) {
          const double d = angular_distance(f, r.unit);
          if (d < nearest) {
            nearest = d;
            family = r.family;
          }
        }
        if (nearest < options.near_root_radius) {
          const cplx shift = kI * cy * f.eta();
          if (family > 0) {
            a.tube_plus.add(safe_ratio(w, std::abs(f.tau() - shift)), i);
          } else {
            a.tube_minus.add(safe_ratio(w, std::abs(f.tau() + shift)), i);
          }
        } else {
          a.off_tubes.add(w / lam, i);
        }
      },
      [](Acc& a, const Acc& b) {
        a.over_lambda.merge(b.over_lambda);
        a.over_gamma.merge(b.over_gamma);
        a.tube_plus.merge(b.tube_plus);
        a.tube_minus.merge(b.tube_minus);
        a.off_tubes.merge(b.off_tubes);
      });

  BoundCertificate cert;
  cert.ratio_name = "abs_sigma_over_Lambda";
  cert.empirical_min = acc.over_lambda.min;
  cert.empirical_max = acc.over_lambda.max;
  cert.sample_size = pts.size();
  cert.gamma_floor = sample.gamma_floor;
  cert.params = params;

  const bool upper_ok = acc.over_lambda.bad == 0 && std::isfinite(acc.over_lambda.max);
  cert.details.push_back(acc.over_lambda.bound("abs_sigma_over_Lambda", upper_ok));
  const bool lower_ok = acc.over_gamma.bad == 0 && acc.over_gamma.min > 0.0;
  cert.details.push_back(acc.over_gamma.bound("abs_sigma_over_gamma", lower_ok));

  auto tube = [&](const Range& r, const char* name) {
    if (r.count == 0) {
      cert.details.push_back(r.bound(name, true, "no sample points inside the tube"));
      return true;
    }
    const bool ok = r.two_sided(options.explosion_threshold);
    cert.details.push_back(r.bound(name, ok));
    return ok;
  };
  const bool plus_ok = tube(acc.tube_plus, "abs_sigma_over_dist_plus_root");
  const bool minus_ok = tube(acc.tube_minus, "abs_sigma_over_dist_minus_root");
  const bool off_ok = tube(acc.off_tubes, "abs_sigma_over_Lambda_off_tubes");

  auto ratio = [&](const Frequency& f) { return std::abs(weight_sigma(f, params)) / f.lambda(); };
  const auto homog =
      check_homogeneity(pts, probe_indices(pts.size(), {acc.over_lambda.argmin, acc.over_lambda.argmax}), &roots,
                        options.homogeneity_tolerance, options.seed, ratio);
  cert.homogeneity_ok = homog.pass;
  cert.details.push_back(homogeneity_bound(homog, options.homogeneity_tolerance));
  cert.pass = upper_ok && lower_ok && plus_ok && minus_ok && off_ok && cert.homogeneity_ok;
  return cert;
}

double embedding_constant(const BoundCertificate& weight_bounds) {
  double lower = 0.0;
  double upper = 0.0;
  for (const auto& d : weight_bounds.details) {
    if (d.name == "abs_sigma_over_gamma") lower = d.min;
    if (d.name == "abs_sigma_over_Lambda") upper = d.max;
  }
  if (!(lower > 0.0) || !(upper > 0.0)) {
    throw ConfigError("certificate does not carry the weight bounds needed for the embedding constant");
  }
  return std::max(1.0 / lower, upper);
}

double locate_roots(const PhysicalParams& params, int eta_sign, double tolerance) {
  if (eta_sign != 1 && eta_sign != -1) throw ConfigError("eta_sign must be +1 or -1");
  const Regime regime = params.regime();
  if (regime == Regime::Degenerate) throw RegimeError("no isolated root family at M = sqrt(2)");
  const RootConstants rc = root_constants(params);
  const double eta = static_cast<double>(eta_sign);

  double target;
  std::function<double(double)> objective;
  if (regime == Regime::WeaklyStable) {
    // tau = i delta on the boundary of the frequency set
    target = eta * params.c() * *rc.y2;
    objective = [&](double delta) { return std::abs(big_sigma(Frequency(0.0, delta, eta), params)); };
  } else {
    // real tau = gamma > 0
    target = params.c() * *rc.y1;
    objective = [&](double gamma) { return std::abs(big_sigma(Frequency(gamma, 0.0, eta), params)); };
  }

  double a = std::min(0.8 * target, 1.2 * target);
  double b = std::max(0.8 * target, 1.2 * target);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 400 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(target); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double located = f1 <= f2 ? x1 : x2;
  const double minimum = std::min(f1, f2);
  const double scale = 1.0 + located * located;  // Lambda^2 at the located point
  if (!(minimum <= 1e-8 * scale)) {
    std::ostringstream msg;
    msg << "minimum of |Sigma| in the bracket is " << minimum << ", not a zero";
    throw NoRootFound(msg.str());
  }
  if (!(std::abs(located - target) <= tolerance * std::abs(target))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "located root " << located << " misses the closed form " << target << " beyond tolerance " << tolerance;
    throw NoRootFound(msg.str());
  }
  return located;
}

BoundCertificate certify_simple_root(const PhysicalParams& params, const SimpleRootOptions& options) {
  if (params.regime() != Regime::WeaklyStable) throw RegimeError("simple-root certification requires M > sqrt(2)");
  if (options.family != 1 && options.family != -1) throw ConfigError("root family must be +1 or -1");
  if (!(options.radius > 0.0) || options.points == 0) throw ConfigError("circle radius and point count must be positive");

  const double cy = params.c() * y2(params);
  const double fam = static_cast<double>(options.family);
  Vec3 center = normalize({0.0, fam * cy, 1.0});
  if (options.center) {
    const Frequency u = options.center->normalized();
    const bool on_curve = u.gamma() <= 1e-9 && u.eta() != 0.0 && std::abs(u.delta() - fam * cy * u.eta()) <= 1e-9;
    if (!on_curve) {
      throw InvalidFrequency("circle centre is not on the root curve tau = " +
                             std::string(options.family > 0 ? "+" : "-") + "i c Y2 eta");
    }
    center = unit_vector(u);
  }
  const Vec3 e1{1.0, 0.0, 0.0};
  const Vec3 e2 = normalize({0.0, center[2], -center[1]});

  auto quotient = [&](const Frequency& f) {
    const cplx linear = f.tau() - fam * kI * cy * f.eta();
    return safe_ratio(std::abs(big_sigma(f, params)), std::abs(linear) * f.lambda());
  };

  std::vector<Frequency> ring;
  ring.reserve(options.points);
  Range range;
  for (std::size_t j = 0; j < options.points; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(options.points);
    Vec3 q{};
    for (int k = 0; k < 3; ++k) {
      q[k] = center[k] + options.radius * (std::cos(theta) * e1[k] + std::sin(theta) * e2[k]);
    }
    q[0] = std::abs(q[0]);
    q = normalize(q);
    ring.emplace_back(q[0], q[1], q[2]);
    range.add(quotient(ring.back()), j);
  }

  BoundCertificate cert;
  cert.ratio_name = "abs_Sigma_over_root_factor_Lambda";
  cert.empirical_min = range.min;
  cert.empirical_max = range.max;
  cert.sample_size = options.points;
  cert.gamma_floor = 0.0;
  cert.params = params;
  const bool band_ok = range.bad == 0 && range.min > 0.0 && range.max / range.min <= options.band_limit;
  std::ostringstream note;
  note << "radius " << options.radius << ", family " << options.family;
  cert.details.push_back(range.bound(cert.ratio_name, band_ok, note.str()));
  const auto roots = root_points(params);
  const auto homog =
      check_homogeneity(ring, probe_indices(ring.size(), {range.argmin, range.argmax}), &roots, 1e-12, 0x5eed, quotient);
  cert.homogeneity_ok = homog.pass;
  cert.details.push_back(homogeneity_bound(homog, 1e-12));
  cert.pass = band_ok && cert.homogeneity_ok;
  return cert;
}

}  // namespace vfs
