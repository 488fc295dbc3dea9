// Empirical certification of the symbol estimates on the unit hemisphere
//   Xi_1 = {(tau, eta) : |tau|^2 + eta^2 = 1, Re tau >= 0}.
//
// All ratios certified here are homogeneous of degree 0, so their range over
// Xi_1 is their range over the whole frequency set.  Constants reported are
// sample extrema with a stated sample size and gamma floor, not proofs.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfs/frequency.hpp"

namespace vfs {

enum class SamplingStrategy { UniformAngular, StratifiedNearRoots, QuasiRandom };

std::string_view to_string(SamplingStrategy strategy);
SamplingStrategy parse_strategy(std::string_view name);

struct HemisphereSample {
  std::vector<Frequency> points;
  SamplingStrategy strategy = SamplingStrategy::UniformAngular;
  double gamma_floor = 0.0;
};

/// A point of Xi_1 where Sigma vanishes, with the family it belongs to:
/// family +1 is tau = +i c Y2 eta, family -1 is tau = -i c Y2 eta.
struct RootPoint {
  std::array<double, 3> unit;  // (gamma, delta, eta), gamma = 0
  int family;
};

/// The four root directions on Xi_1 (two per family, eta > 0 and eta < 0).
std::array<RootPoint, 4> root_points(const PhysicalParams& params);

/// Angular distance on the unit sphere between a normalized frequency and a unit vector.
double angular_distance(const Frequency& unit, const std::array<double, 3>& direction);

/// Points are generated sequentially from one seeded stream, so the sample of
/// size 2n always contains the sample of size n as its prefix.
/// StratifiedNearRoots puts every even-indexed point within angular distance
/// `near_root_radius` of a root direction (requires M > sqrt(2)).
HemisphereSample sample_hemisphere(std::size_t n, SamplingStrategy strategy, double gamma_floor,
                                   const PhysicalParams& params, std::uint64_t seed = 0x5eed,
                                   double near_root_radius = 0.05);

/// Range of one homogeneous ratio over a subset of the sample.
struct NamedBound {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool pass = false;
  std::string note;
};

struct BoundCertificate {
  std::string ratio_name;
  double empirical_min = 0.0;
  double empirical_max = 0.0;
  std::size_t sample_size = 0;
  double gamma_floor = 0.0;
  PhysicalParams params{1.0, 1.0};
  bool pass = false;
  bool homogeneity_ok = false;
  std::vector<NamedBound> details;
};

struct CertifyOptions {
  /// max/min above this flags a suspected unbounded ratio.
  double explosion_threshold = 1e8;
  /// Tube radius around root directions (angular).
  double near_root_radius = 0.05;
  /// Points this close to a root direction are used to probe the limit of the sandwich ratio.
  double limit_radius = 1e-3;
  /// Allowed relative spread of the sandwich ratio inside the limit radius.
  double limit_spread = 0.05;
  /// Relative tolerance of the rescaling test.
  double homogeneity_tolerance = 1e-12;
  std::uint64_t seed = 0x5eed;
};

/// |Sigma| / (|sigma| Lambda) over the sample: its minimum is 1/C1 and its
/// maximum C2 of the two-sided estimate |sigma| Lambda <= C1 |Sigma| <= C2 |sigma| Lambda.
/// Also certifies |sigma| <= C3' Lambda.
BoundCertificate certify_sandwich(const HemisphereSample& sample, const PhysicalParams& params,
                                  const CertifyOptions& options = {});

/// Bounds of the weight: |sigma| >= C gamma globally, |sigma| <= C' Lambda,
/// |sigma| >= C |tau -+ i c Y2 eta| in the tubes and |sigma| ~ Lambda off them.
/// The headline ratio is |sigma| / Lambda.
BoundCertificate certify_weight_bounds(const HemisphereSample& sample, const PhysicalParams& params,
                                       const CertifyOptions& options = {});

/// Constant C of gamma ||u||_{H^s} <= C ||u||_{H^{s,sigma}} <= C ||u||_{H^{s+1}},
/// taken from a weight-bounds certificate.
double embedding_constant(const BoundCertificate& weight_bounds);

/// Golden-section search for the zero of |Sigma|.  For M > sqrt(2) returns
/// delta* on the imaginary axis at eta = eta_sign; for M < sqrt(2) returns the
/// real root tau* = c Y1 |eta|.  Throws NoRootFound when the minimum is not a
/// zero or misses the closed form by more than `tolerance` (relative).
double locate_roots(const PhysicalParams& params, int eta_sign, double tolerance);

struct SimpleRootOptions {
  double radius = 1e-3;
  std::size_t points = 360;
  int family = +1;
  /// Centre of the circle; defaults to the root direction of `family` with eta > 0.
  std::optional<Frequency> center;
  /// max/min of |H| above this indicates a higher-order zero.
  double band_limit = 2.0;
};

/// Certifies Sigma = (tau -+ i c Y2 eta) H with H bounded away from zero on a
/// small circle around a root direction.  Circle points with gamma < 0 are
/// reflected into Xi_1.
BoundCertificate certify_simple_root(const PhysicalParams& params, const SimpleRootOptions& options = {});

}  // namespace vfs
