// Pressure transforms on the two half-spaces for one (tau, eta) mode.
//
// In depth y = |x2| each side solves  c^2 mu^2 P - c^2 P'' = F  with P -> 0,
// so P(y) = A e^{-mu y} + (1 / (2 mu c^2)) int_0^inf e^{-mu |y - y'|} F(y') dy'.
// The amplitudes A+- are fixed by the coupling at x2 = 0:
//
//   P+(0) = P-(0),   c^2 (d2 P+(0) - d2 P-(0)) = -4 v tau (i eta) f_hat,
//
// with d2 the derivative in x2 (d2 = d/dy on the plus side, -d/dy on the minus side).
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "vfs/front_solver.hpp"

namespace vfs {

struct PressureProfile {
  Side side = Side::Plus;
  cplx amplitude;
  cplx mu;
  double c = 1.0;
  X2Rule rule{2, 1.0};
  std::vector<cplx> source;      // F_hat at the rule nodes (depth)
  std::vector<cplx> particular;  // Green's-function part at the rule nodes

  /// P_hat at depth y = |x2|.
  [[nodiscard]] cplx value(double depth) const;
  /// dP_hat/dy at depth y.
  [[nodiscard]] cplx depth_derivative(double depth) const;
  /// d2 P_hat, the derivative in x2, at x2 = +-depth.
  [[nodiscard]] cplx normal_derivative(double depth) const;
  /// Interpolated forcing F_hat at depth y.
  [[nodiscard]] cplx forcing(double depth) const;
  /// P_hat at every rule node.
  [[nodiscard]] std::vector<cplx> node_values() const;
};

struct HalfSpacePair {
  PressureProfile plus;
  PressureProfile minus;
};

/// Both half-space solutions for a front mode f_hat.  The two amplitudes are
/// coupled through the jump conditions, so the sides are solved together.
/// Throws DecayViolated when a profile has not decayed at the truncation depth.
HalfSpacePair solve_half_spaces(cplx fhat, std::span<const cplx> plus_profile, std::span<const cplx> minus_profile,
                                const X2Rule& rule, const Frequency& freq, const PhysicalParams& params,
                                const SolverOptions& options = {});

/// Half-space pair for lattice mode `mode` of a front solution and its sources.
HalfSpacePair reconstruct_pressure(const FrontSolution& front, const SourceField& plus, const SourceField& minus,
                                   std::size_t mode, const SolverOptions& options = {});

/// |P+(0) - P-(0)| and |c^2 (d2 P+(0) - d2 P-(0)) + 4 v tau i eta f_hat|.
struct JumpResidual {
  double value;
  double derivative;
};

JumpResidual jump_residual(cplx fhat, const HalfSpacePair& pair, const Frequency& freq, const PhysicalParams& params);

/// |tau^2 f - v^2 eta^2 f + (c^2/2)(d2 P+(0) + d2 P-(0))| divided by
/// Lambda^2 |f| + (c^2/2)(|d2 P+(0)| + |d2 P-(0)|); 0 when both vanish.
double front_equation_residual(cplx fhat, const HalfSpacePair& pair, const Frequency& freq,
                               const PhysicalParams& params);

/// |c^2 mu^2 P - c^2 P'' - F| at depth y, with P'' from central differences
/// of step h and order 2 or 4, divided by the profile scale
/// |c^2 mu^2| max|P| + max|F| over the nodes.  0 when P and F vanish.
double ode_residual(const PressureProfile& profile, double depth, double step, int order = 4);

/// ode_residual at every rule node, with the step kept inside the node's
/// panel (the forcing interpolant is only piecewise smooth).
std::vector<double> node_ode_residuals(const PressureProfile& profile, int order = 4);

/// CSV with header "x2,re,im": minus side (x2 < 0, deepest first), then plus side.
void write_pressure_csv(std::ostream& out, const HalfSpacePair& pair);

}  // namespace vfs
