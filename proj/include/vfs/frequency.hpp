// Frequency-domain objects of the linearized vortex-sheet front equation.
//
// A frequency is a point (tau, eta) with tau = gamma + i*delta, gamma >= 0,
// (tau, eta) != (0, 0).  Everything here is homogeneous in (tau, eta):
//
//   mu+-(tau, eta)  = sqrt(((tau +- i v eta) / c)^2 + eta^2)          degree 1
//   Sigma(tau, eta) = tau^2 + v^2 eta^2 (8 ((tau/c) / (mu+ + mu-))^2 - 1)  degree 2
//   sigma(tau, eta) = (tau - i c Y2 eta)(tau + i c Y2 eta) / Lambda      degree 1
//   Lambda          = sqrt(gamma^2 + delta^2 + eta^2)
//
// Evaluation always normalizes the frequency to Lambda = 1 first and rescales
// the result, so values at very large or very small |(tau, eta)| neither
// overflow nor lose the homogeneity identities.
#pragma once

#include <complex>
#include <optional>
#include <string_view>

namespace vfs {

using cplx = std::complex<double>;

enum class Regime { Elliptic, WeaklyStable, Degenerate };

std::string_view to_string(Regime regime);

/// |M - sqrt(2)| below this is classified Degenerate.
inline constexpr double kMachBoundaryTolerance = 1e-9;

/// Constant state of the linearization: half velocity jump v and sound speed c.
class PhysicalParams {
 public:
  PhysicalParams(double v, double c);

  [[nodiscard]] double v() const noexcept { return v_; }
  [[nodiscard]] double c() const noexcept { return c_; }
  [[nodiscard]] double mach() const noexcept { return v_ / c_; }
  [[nodiscard]] Regime regime() const noexcept;

  /// Convenience: c = 1, v = mach.
  static PhysicalParams from_mach(double mach, double c = 1.0);

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;

 private:
  double v_;
  double c_;
};

class Frequency {
 public:
  /// Throws InvalidFrequency for gamma < 0, non-finite input or the origin.
  Frequency(double gamma, double delta, double eta);

  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] cplx tau() const noexcept { return {gamma_, delta_}; }
  [[nodiscard]] double lambda() const noexcept;

  [[nodiscard]] Frequency scaled(double k) const;
  /// Projection onto the hemisphere Lambda = 1.
  [[nodiscard]] Frequency normalized() const;
  /// (conj(tau), eta).
  [[nodiscard]] Frequency conjugated() const { return {gamma_, -delta_, eta_}; }

  friend bool operator==(const Frequency&, const Frequency&) = default;

 private:
  double gamma_;
  double delta_;
  double eta_;
};

struct MuPair {
  cplx plus;
  cplx minus;
};

struct RootConstants {
  std::optional<double> y1;  // present iff M < sqrt(2)
  std::optional<double> y2;  // present iff M > sqrt(2)
};

struct SigmaOptions {
  /// Opt in to the gamma -> 0+ limit at points where mu+ + mu- vanishes.
  bool continuous_extension = false;
  /// |mu+ + mu-| < threshold * Lambda raises DegenerateDenominator.
  double degenerate_threshold = 1e-10;
  /// Relative shift gamma = epsilon * Lambda used by the extension.
  double extension_epsilon = 1e-9;
};

struct SymbolValue {
  cplx sigma_big;
  cplx mu_plus;
  cplx mu_minus;
  std::optional<cplx> weight_sigma;  // only in the weakly stable regime
};

/// Principal roots with Re mu+- > 0 for gamma > 0.  At gamma = 0 the
/// one-sided limit gamma -> 0+ is returned.
MuPair mu_pm(const Frequency& freq, const PhysicalParams& params);

cplx big_sigma(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options = {});

/// Symbol of the adjoint operator, Sigma(conj(tau), eta).
cplx adjoint_sigma(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options = {});

/// Anisotropic weight; requires the weakly stable regime.
cplx weight_sigma(const Frequency& freq, const PhysicalParams& params);

RootConstants root_constants(const PhysicalParams& params);

/// Y2 for M > sqrt(2); throws RegimeError otherwise.
double y2(const PhysicalParams& params);

/// Lambda^s.
double lambda_power(const Frequency& freq, double s);

SymbolValue evaluate_symbol(const Frequency& freq, const PhysicalParams& params, const SigmaOptions& options = {});

}  // namespace vfs
