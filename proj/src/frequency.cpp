#include "vfs/frequency.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vfs/errors.hpp"

namespace vfs {

namespace {

constexpr cplx kI{0.0, 1.0};

// sqrt(((tau + sign*i v eta)/c)^2 + eta^2) on a normalized frequency.
cplx characteristic_root(const Frequency& unit, const PhysicalParams& p, double sign) {
  const cplx w = (unit.tau() + sign * kI * p.v() * unit.eta()) / p.c();
  cplx z = w * w + unit.eta() * unit.eta();
  if (unit.gamma() == 0.0 && z.real() < 0.0) {
    // On the cut.  d(radicand)/dgamma = 2 (tau +- i v eta) / c^2 is purely
    // imaginary here with the sign of (delta +- v eta); approach from that side.
    const double side = unit.delta() + sign * p.v() * unit.eta();
    z = cplx(z.real(), std::copysign(0.0, side));
  }
  return std::sqrt(z);
}

MuPair unit_mu(const Frequency& unit, const PhysicalParams& p) {
  return {characteristic_root(unit, p, +1.0), characteristic_root(unit, p, -1.0)};
}

cplx unit_sigma_big(const Frequency& unit, const PhysicalParams& p, const SigmaOptions& options) {
  const auto [mp, mm] = unit_mu(unit, p);
  const cplx den = mp + mm;
  if (std::abs(den) < options.degenerate_threshold) {
    if (!options.continuous_extension) {
      std::ostringstream msg;
      msg << "mu+ + mu- vanishes at (gamma, delta, eta) = (" << unit.gamma() << ", " << unit.delta() << ", "
          << unit.eta() << ") on the unit hemisphere";
      throw DegenerateDenominator(msg.str());
    }
    const Frequency shifted(options.extension_epsilon, unit.delta(), unit.eta());
    SigmaOptions inner = options;
    inner.continuous_extension = false;
    inner.degenerate_threshold = 0.0;
    return unit_sigma_big(shifted, p, inner);
  }
  const cplx tau = unit.tau();
  const cplx ratio = (tau / p.c()) / den;
  const double veta2 = p.v() * p.v() * unit.eta() * unit.eta();
  return tau * tau + veta2 * (8.0 * ratio * ratio - 1.0);
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Elliptic:
      return "Elliptic";
    case Regime::WeaklyStable:
      return "WeaklyStable";
    case Regime::Degenerate:
      return "Degenerate";
  }
  return "Unknown";
}

PhysicalParams::PhysicalParams(double v, double c) : v_(v), c_(c) {
  if (!(v > 0.0) || !(c > 0.0) || !std::isfinite(v) || !std::isfinite(c)) {
    throw RegimeError("physical parameters require v > 0 and c > 0");
  }
}

Regime PhysicalParams::regime() const noexcept {
  const double m = mach();
  if (std::abs(m - std::numbers::sqrt2) < kMachBoundaryTolerance) return Regime::Degenerate;
  return m < std::numbers::sqrt2 ? Regime::Elliptic : Regime::WeaklyStable;
}

PhysicalParams PhysicalParams::from_mach(double mach, double c) { return {mach * c, c}; }

Frequency::Frequency(double gamma, double delta, double eta) : gamma_(gamma), delta_(delta), eta_(eta) {
  if (!std::isfinite(gamma) || !std::isfinite(delta) || !std::isfinite(eta)) {
    throw InvalidFrequency("frequency components must be finite");
  }
  if (gamma < 0.0) throw InvalidFrequency("gamma must be non-negative");
  if (gamma == 0.0 && delta == 0.0 && eta == 0.0) {
    throw InvalidFrequency("(tau, eta) = (0, 0) is not in the frequency set");
  }
}

double Frequency::lambda() const noexcept { return std::hypot(gamma_, delta_, eta_); }

Frequency Frequency::scaled(double k) const {
  if (!(k > 0.0)) throw InvalidFrequency("scaling factor must be positive");
  return {k * gamma_, k * delta_, k * eta_};
}

Frequency Frequency::normalized() const {
  const double lam = lambda();
  return {gamma_ / lam, delta_ / lam, eta_ / lam};
}

MuPair mu_pm(const Frequency& freq, const PhysicalParams& params) {
  const double lam = freq.lambda();
  const auto [mp, mm] = unit_mu(freq.normalized(), params);
  return {mp * lam, mm * lam};
}

cplx big_sigma(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options) {
  const double lam = freq.lambda();
  return unit_sigma_big(freq.normalized(), params, options) * (lam * lam);
}

cplx adjoint_sigma(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options) {
  return big_sigma(freq.conjugated(), params, options);
}

cplx weight_sigma(const Frequency& freq, const PhysicalParams& params) {
  const double root = y2(params);
  const double lam = freq.lambda();
  const Frequency unit = freq.normalized();
  const cplx tau = unit.tau();
  const double shift = params.c() * root * unit.eta();
  return (tau * tau + shift * shift) * lam;
}

RootConstants root_constants(const PhysicalParams& params) {
  const double m2 = params.mach() * params.mach();
  const double disc = std::sqrt(4.0 * m2 + 1.0);
  switch (params.regime()) {
    case Regime::Elliptic:
      return {std::sqrt(-(m2 + 1.0) + disc), std::nullopt};
    case Regime::WeaklyStable:
      return {std::nullopt, std::sqrt(m2 + 1.0 - disc)};
    case Regime::Degenerate:
      break;
  }
  throw RegimeError("Mach number within tolerance of sqrt(2): root constants collapse to zero");
}

double y2(const PhysicalParams& params) {
  if (params.regime() != Regime::WeaklyStable) {
    throw RegimeError("the weight sigma requires M > sqrt(2)");
  }
  return *root_constants(params).y2;
}

double lambda_power(const Frequency& freq, double s) {
  if (s == 0.0) return 1.0;
  const double lam = freq.lambda();
  return std::pow(lam, s);
}

SymbolValue evaluate_symbol(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options) {
  const auto [mp, mm] = mu_pm(freq, params);
  SymbolValue out{big_sigma(freq, params, options), mp, mm, std::nullopt};
  if (params.regime() == Regime::WeaklyStable) out.weight_sigma = weight_sigma(freq, params);
  return out;
}

}  // namespace vfs
