#include "vfs/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vfs/errors.hpp"

namespace vfs {

namespace {

constexpr cplx kI{0.0, 1.0};

double max_abs(std::span<const cplx> values) {
  double m = 0.0;
  for (const auto& z : values) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

cplx PressureProfile::value(double depth) const {
  const auto [below, above] = rule.integrate_exponential(source, mu, depth);
  return amplitude * std::exp(-mu * depth) + (below + above) / (2.0 * mu * c * c);
}

cplx PressureProfile::depth_derivative(double depth) const {
  const auto [below, above] = rule.integrate_exponential(source, mu, depth);
  return -mu * amplitude * std::exp(-mu * depth) - (below - above) / (2.0 * c * c);
}

cplx PressureProfile::normal_derivative(double depth) const {
  const cplx d = depth_derivative(depth);
  return side == Side::Plus ? d : -d;
}

cplx PressureProfile::forcing(double depth) const { return rule.interpolate(source, depth); }

std::vector<cplx> PressureProfile::node_values() const {
  std::vector<cplx> out(particular.size());
  const auto nodes = rule.nodes();
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = amplitude * std::exp(-mu * nodes[q]) + particular[q];
  return out;
}

HalfSpacePair solve_half_spaces(cplx fhat, std::span<const cplx> plus_profile, std::span<const cplx> minus_profile,
                                const X2Rule& rule, const Frequency& freq, const PhysicalParams& params,
                                const SolverOptions& options) {
  if (plus_profile.size() != rule.size() || minus_profile.size() != rule.size()) {
    throw DimensionMismatch("source profiles do not match the x2 rule");
  }
  const auto mu = mu_pm(freq, params);
  if (!(mu.plus.real() > 0.0) || !(mu.minus.real() > 0.0)) {
    throw InvalidFrequency("half-space problem needs Re mu+- > 0 (gamma > 0)");
  }
  const double scale = std::max(max_abs(plus_profile), max_abs(minus_profile));
  for (const auto& [profile, m, side] :
       {std::tuple{plus_profile, mu.plus, "plus"}, std::tuple{minus_profile, mu.minus, "minus"}}) {
    if (scale == 0.0) break;
    if (std::abs(profile.back()) > options.decay_tolerance * scale) {
      throw DecayViolated(std::string(side) + " pressure source has not decayed at the truncation depth");
    }
    if (std::exp(-m.real() * rule.depth()) * max_abs(profile) > options.tail_tolerance * scale) {
      throw DecayViolated(std::string(side) + " pressure kernel tail e^{-Re mu Ly} exceeds tolerance; increase Ly");
    }
  }

  const double c2 = params.c() * params.c();
  const cplx ip = laplace_moment(plus_profile, rule, mu.plus);
  const cplx im = laplace_moment(minus_profile, rule, mu.minus);
  // Rows: P+(0) - P-(0) = 0 and c^2 (d2 P+(0) - d2 P-(0)) = jump, unknowns (A+, A-).
  const cplx jump = -4.0 * params.v() * freq.tau() * (kI * freq.eta()) * fhat;
  const cplx r1 = im / (2.0 * mu.minus * c2) - ip / (2.0 * mu.plus * c2);
  const cplx r2 = (jump - 0.5 * (ip + im)) / c2;
  const cplx det = -(mu.plus + mu.minus);
  if (std::abs(det) == 0.0) throw DegenerateDenominator("jump system is singular (mu+ + mu- = 0)");
  const cplx a_plus = (-mu.minus * r1 + r2) / det;
  const cplx a_minus = (r2 + mu.plus * r1) / det;

  const auto make = [&](Side side, cplx amp, cplx m, std::span<const cplx> profile) {
    PressureProfile p{side, amp, m, params.c(), rule, std::vector<cplx>(profile.begin(), profile.end()), {}};
    p.particular.resize(rule.size());
    const auto nodes = rule.nodes();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [below, above] = rule.integrate_exponential(profile, m, nodes[q]);
      p.particular[q] = (below + above) / (2.0 * m * c2);
    }
    return p;
  };
  return {make(Side::Plus, a_plus, mu.plus, plus_profile), make(Side::Minus, a_minus, mu.minus, minus_profile)};
}

HalfSpacePair reconstruct_pressure(const FrontSolution& front, const SourceField& plus, const SourceField& minus,
                                   std::size_t mode, const SolverOptions& options) {
  if (!(plus.grid == front.grid) || !(minus.grid == front.grid)) {
    throw DimensionMismatch("sources and front solution live on different grids");
  }
  if (mode >= front.fhat.size()) throw DimensionMismatch("mode index outside the lattice");
  // Decay is judged against the whole field, as in build_g.
  SolverOptions relaxed = options;
  const double scale = std::max(plus.max_abs_spectral(), minus.max_abs_spectral());
  const double local = std::max(max_abs(plus.profile(mode)), max_abs(minus.profile(mode)));
  if (local > 0.0 && scale > local) {
    relaxed.decay_tolerance *= scale / local;
    relaxed.tail_tolerance *= scale / local;
  }
  return solve_half_spaces(front.fhat[mode], plus.profile(mode), minus.profile(mode), plus.rule,
                           front.grid.frequency(mode), front.params, relaxed);
}

JumpResidual jump_residual(cplx fhat, const HalfSpacePair& pair, const Frequency& freq, const PhysicalParams& params) {
  const double c2 = params.c() * params.c();
  const cplx jump = -4.0 * params.v() * freq.tau() * (kI * freq.eta()) * fhat;
  return {std::abs(pair.plus.value(0.0) - pair.minus.value(0.0)),
          std::abs(c2 * (pair.plus.normal_derivative(0.0) - pair.minus.normal_derivative(0.0)) - jump)};
}

double front_equation_residual(cplx fhat, const HalfSpacePair& pair, const Frequency& freq,
                               const PhysicalParams& params) {
  const double c2 = params.c() * params.c();
  const cplx tau = freq.tau();
  const double veta2 = params.v() * params.v() * freq.eta() * freq.eta();
  const cplx dp = pair.plus.normal_derivative(0.0);
  const cplx dm = pair.minus.normal_derivative(0.0);
  const double residual = std::abs((tau * tau - veta2) * fhat + 0.5 * c2 * (dp + dm));
  const double lam = freq.lambda();
  const double scale = lam * lam * std::abs(fhat) + 0.5 * c2 * (std::abs(dp) + std::abs(dm));
  return scale == 0.0 ? 0.0 : residual / scale;
}

double ode_residual(const PressureProfile& profile, double depth, double step, int order) {
  if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
  const auto p = [&](double y) { return profile.value(y); };
  const cplx p0 = p(depth);
  cplx second;
  if (order == 2) {
    second = (p(depth + step) - 2.0 * p0 + p(depth - step)) / (step * step);
  } else if (order == 4) {
    second = (-p(depth + 2.0 * step) + 16.0 * p(depth + step) - 30.0 * p0 + 16.0 * p(depth - step) -
              p(depth - 2.0 * step)) /
             (12.0 * step * step);
  } else {
    throw ConfigError("finite-difference order must be 2 or 4");
  }
  const double c2 = profile.c * profile.c;
  const cplx lhs = c2 * profile.mu * profile.mu * p0;
  const double scale = c2 * std::norm(profile.mu) * max_abs(profile.node_values()) + max_abs(profile.source);
  return scale == 0.0 ? 0.0 : std::abs(lhs - c2 * second - profile.forcing(depth)) / scale;
}

std::vector<double> node_ode_residuals(const PressureProfile& profile, int order) {
  const auto& rule = profile.rule;
  const double h = rule.depth() / static_cast<double>(rule.panel_count());
  const int reach = order == 2 ? 1 : 2;
  std::vector<double> out;
  out.reserve(rule.size());
  for (const double y : rule.nodes()) {
    const double a = h * std::floor(y / h);
    const double room = std::min(y - a, a + h - y);
    const double step = std::min(2e-3 / std::abs(profile.mu), 0.9 * room / reach);
    out.push_back(ode_residual(profile, y, step, order));
  }
  return out;
}

void write_pressure_csv(std::ostream& out, const HalfSpacePair& pair) {
  std::ostringstream body;
  body << std::setprecision(17);
  body << "x2,re,im\n";
  const auto minus = pair.minus.node_values();
  const auto plus = pair.plus.node_values();
  const auto nodes = pair.plus.rule.nodes();
  for (std::size_t q = minus.size(); q-- > 0;) {
    body << -pair.minus.rule.nodes()[q] << ',' << minus[q].real() << ',' << minus[q].imag() << '\n';
  }
  for (std::size_t q = 0; q < plus.size(); ++q) {
    body << nodes[q] << ',' << plus[q].real() << ',' << plus[q].imag() << '\n';
  }
  out << body.str();
}

}  // namespace vfs
