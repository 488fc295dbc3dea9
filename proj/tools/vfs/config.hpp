// Run configuration: an INI file with one section per concern.  See
// configs/*.ini and the README for the full schema.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vfs/front_solver.hpp"
#include "vfs/hemisphere.hpp"

namespace vfs::cli {

enum class Study { Certify, Roots, Solve, Sweep, StabilityDiagram };

std::string_view to_string(Study study);
/// certify | roots | solve | sweep | diagram
Study parse_study(std::string_view name);

struct SampleConfig {
  std::size_t n = 10000;
  SamplingStrategy strategy = SamplingStrategy::StratifiedNearRoots;
  double gamma_floor = 1e-6;
  double near_root_radius = 0.05;
  double explosion_threshold = 1e8;
  double limit_radius = 1e-3;
  double limit_spread = 0.05;
};

struct SimpleRootConfig {
  bool enabled = true;
  double radius = 1e-3;
  std::size_t points = 360;
  double band_limit = 2.0;
  /// Allowed relative change of the band ends between radius and radius / 2.
  double stability = 0.05;
};

struct HeatmapConfig {
  bool enabled = false;
  std::size_t n_delta = 64;
  std::size_t n_eta = 64;
  double delta_max = 3.0;
  double eta_max = 3.0;
  double gamma = 1.0;
};

struct RootsConfig {
  double tolerance = 1e-8;
};

/// Smooth compactly supported bump
///   A b((t - t0)/rt) b((x1 - x0)/rx) b((y - y0)/ry),  b(r) = exp(1 - 1/(1 - r^2)) for |r| < 1,
/// on each side, with amplitude A = amplitude_plus or amplitude_minus.
struct BumpConfig {
  double amplitude_plus = 1.0;
  double amplitude_minus = 0.5;
  double t0 = 4.0;
  double x0 = 8.0;
  double y0 = 3.0;
  double rt = 2.0;
  double rx = 2.0;
  double ry = 2.5;
};

struct SourceConfig {
  std::string kind = "bump";  // bump | file
  BumpConfig bump;
  std::filesystem::path plus_file;
  std::filesystem::path minus_file;
};

struct SolveConfig {
  double s = 0.0;
  SolverOptions solver;
  /// Lattice modes (signed wave numbers k:m) whose pressure profiles are reconstructed.
  std::vector<std::pair<long, long>> pressure_modes{{0, 1}, {1, 0}, {2, -3}};
  double residual_tolerance = 1e-8;
};

struct SweepConfig {
  std::vector<double> gammas{1.0, 2.0, 4.0, 8.0, 16.0};
  double slack = 0.1;
};

struct DiagramConfig {
  double mach_min = 0.5;
  double mach_max = 3.5;
  double step = 0.05;
};

struct RunConfig {
  Study study = Study::Certify;
  PhysicalParams params{2.0, 1.0};
  std::optional<GridSpec> grid;
  SampleConfig sample;
  SimpleRootConfig simple_root;
  HeatmapConfig heatmap;
  RootsConfig roots;
  SourceConfig source;
  SolveConfig solve;
  SweepConfig sweep;
  DiagramConfig diagram;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0x5eed;
};

/// Parses and validates `path` for `study`.  Relative file paths inside the
/// config resolve against the config's directory.  Throws ConfigError with
/// the offending section/key on unknown keys, bad values or missing sections.
RunConfig load_config(const std::filesystem::path& path, Study study);

}  // namespace vfs::cli
