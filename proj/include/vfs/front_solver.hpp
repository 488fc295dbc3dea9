// Spectral solver for the front equation  Sigma(tau, eta) f_hat = g_hat  with
//
//   g_hat = -(mu+ mu- / (mu+ + mu-)) M(tau, eta),
//   M     = (1/mu+) int_0^inf e^{-mu+ y} F_hat+(y) dy - (1/mu-) int_0^inf e^{-mu- y} F_hat-(-y) dy,
//
// on the periodic (t, x1) box of a GridSpec, with the x2 integrals evaluated
// by the composite Gauss-Legendre rule of X2Rule.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfs/frequency.hpp"
#include "vfs/quadrature.hpp"
#include "vfs/spectral_grid.hpp"

namespace vfs {

enum class Side { Plus, Minus };
enum class NormSpace { Plain, Anisotropic };

std::string_view to_string(Side side);

struct SolverOptions {
  /// e^{-Re mu Ly} max|F_hat(mode, .)| must not exceed this times max|F_hat|.
  double tail_tolerance = 1e-10;
  /// |F_hat| at the deepest node relative to max|F_hat| (discrete decay at infinity).
  double decay_tolerance = 1e-8;
  /// |Sigma| < floor * Lambda^2 at a lattice point raises SymbolTooSmall.
  double symbol_floor = 1e-10;
};

/// Source F+ (x2 > 0) or F- (x2 < 0) sampled on the (t, x1) grid and the x2
/// nodes (depth y = |x2|).  Layout of both arrays: ((t or delta) * nx + (x1 or eta)) * ny + node.
struct SourceField {
  Side side = Side::Plus;
  GridSpec grid;
  X2Rule rule{2, 1.0};
  std::vector<cplx> values;
  std::vector<cplx> spectral;

  [[nodiscard]] std::span<const cplx> profile(std::size_t mode) const {
    return std::span<const cplx>(spectral).subspan(mode * grid.ny, grid.ny);
  }
  [[nodiscard]] double max_abs_spectral() const;
  /// Discrete stand-in for lim_{y -> inf} F_hat(., y) = 0.
  [[nodiscard]] bool decayed(double tolerance) const;
};

/// DFT over (t, x1) of e^{-gamma t} raw at every x2 node.
SourceField transform_source(std::span<const cplx> raw, const GridSpec& grid, Side side);

/// Time-domain samples recovered from the spectral data.
std::vector<cplx> inverse_transform(const SourceField& field);

/// int_0^inf e^{-mu y} F(y) dy by the rule (F = 0 beyond the truncation depth).
cplx laplace_moment(std::span<const cplx> profile, const X2Rule& rule, cplx mu);

/// Source functional M for one mode given its two x2 profiles.  `scale` is the
/// amplitude the tail estimate is compared against (defaults to the profiles' max).
cplx source_moment(std::span<const cplx> plus_profile, std::span<const cplx> minus_profile, const X2Rule& rule,
                   const Frequency& freq, const PhysicalParams& params, const SolverOptions& options = {},
                   std::optional<double> scale = std::nullopt);

/// Source functional M at lattice mode `mode` of two transformed sources.
cplx source_moment(const SourceField& plus, const SourceField& minus, std::size_t mode, const PhysicalParams& params,
                   const SolverOptions& options = {});

/// -(mu+ mu- / (mu+ + mu-)) M.
cplx g_from_moment(cplx moment, const Frequency& freq, const PhysicalParams& params);

/// g_hat over the whole lattice.
std::vector<cplx> build_g(const SourceField& plus, const SourceField& minus, const PhysicalParams& params,
                          const SolverOptions& options = {});

struct NormKey {
  double s;
  NormSpace space;
  auto operator<=>(const NormKey&) const = default;
};

/// "H^{s}" or "H^{s,sigma}".
std::string norm_label(const NormKey& key);

struct FrontSolution {
  GridSpec grid;
  PhysicalParams params{1.0, 1.0};
  double s = 0.0;
  Regime regime = Regime::WeaklyStable;
  std::vector<cplx> fhat;
  /// e^{gamma t} times the inverse transform of fhat with the Nyquist lines
  /// (k = nt/2 or m = nx/2) removed, so real data give a real front.
  std::vector<cplx> f;
  std::map<NormKey, double> norms;        // norms of f
  double g_norm = 0.0;                    // ||g||_{H^s}
  std::optional<double> estimate_ratio;   // ||f||_{H^{s+1,sigma}} / ||g||_{H^s}
};

/// Discrete Plancherel norm: sqrt( (Lt Lx)^-1 sum |w Lambda^s u_hat|^2 ) with
/// w = 1 (Plain) or |sigma| (Anisotropic), evaluated at tau = gamma + i delta.
double weighted_norm(std::span<const cplx> u_hat, const GridSpec& grid, const PhysicalParams& params, double s,
                     NormSpace space);

/// Sigma * f_hat on the lattice (the transform of S f).
std::vector<cplx> apply_symbol(std::span<const cplx> fhat, const GridSpec& grid, const PhysicalParams& params);

/// f_hat = g_hat / Sigma, the inverse transform and the norms.  In the
/// elliptic regime the anisotropic norm and the estimate ratio are omitted.
FrontSolution solve_front(std::span<const cplx> g, const GridSpec& grid, const PhysicalParams& params, double s = 0.0,
                          const SolverOptions& options = {});

/// ||F||^2_{L^2(R+-; H^s_gamma)} = sum_q w_q ||F_hat(., q)||^2_{H^s}.
double source_norm_sq(const SourceField& field, double s);

struct SweepRow {
  double gamma = 0.0;
  double source_norm_sq = 0.0;   // ||F+||^2 + ||F-||^2
  double g_norm_sq = 0.0;        // ||g||^2_{H^s}
  double f_aniso_sq = 0.0;       // ||f||^2_{H^{s+1,sigma}} (NaN when elliptic)
  double f_plain_sq = 0.0;       // ||f||^2_{H^{s+1}}
  double ratio_front = 0.0;      // gamma ||f||^2_{H^{s+1,sigma}} / sources
  double ratio_g = 0.0;          // gamma ||g||^2_{H^s} / sources
  double ratio_plain = 0.0;      // gamma^3 ||f||^2_{H^{s+1}} / sources
};

struct EstimateSweep {
  std::vector<SweepRow> rows;
  double slack = 0.1;
  bool front_applicable = true;  // false in the elliptic regime (no sigma)
  bool front_bounded = false;
  bool g_bounded = false;
  bool plain_bounded = false;
  bool pass = false;
};

/// True when every value is finite and none exceeds (1 + slack) times the
/// first value or (1 + slack) times its predecessor.
bool bounded_without_growth(std::span<const double> ratios, double slack);

/// Re-transforms the two sources at every gamma and reports the three
/// a priori estimate ratios.
EstimateSweep estimate_sweep(const SourceField& plus, const SourceField& minus, const PhysicalParams& params, double s,
                             std::span<const double> gammas, double slack = 0.1, const SolverOptions& options = {});

}  // namespace vfs
