#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vfs/config.hpp"
#include "vfs/pressure.hpp"

namespace vfs::cli {

/// Exit codes of `vfs`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Runs the configured study, writes its artifacts under cfg.output_dir and
/// prints a short summary to `log`.  Returns kExitPass or kExitFail; lets
/// ConfigError and RegimeError propagate.
int run(const RunConfig& cfg, std::ostream& log);

/// The bump source of `bump` sampled on the grid and the x2 nodes of one side.
std::vector<cplx> bump_source(const GridSpec& grid, const BumpConfig& bump, Side side);

/// Raw plus/minus samples for a solve or sweep run (bump or files).
std::pair<std::vector<cplx>, std::vector<cplx>> load_sources(const RunConfig& cfg);

enum class HeatmapField { AbsSigmaBig, AbsWeightSigma, Ratio };

std::string_view to_string(HeatmapField field);

struct HeatmapRow {
  double delta;
  double eta;
  double value;
};

/// Field values on the tensor grid deltas x etas at fixed gamma (delta-major).
/// Points with gamma = delta = eta = 0 are skipped; Sigma uses its continuous
/// extension where mu+ + mu- vanishes.
std::vector<HeatmapRow> heatmap(HeatmapField field, const std::vector<double>& deltas, const std::vector<double>& etas,
                                double gamma, const PhysicalParams& params);

/// n evenly spaced values on [-max, max] (just 0 when n = 1).
std::vector<double> symmetric_axis(std::size_t n, double max);

void write_heatmap_csv(const std::filesystem::path& path, const std::vector<HeatmapRow>& rows);

struct DiagramRow {
  double mach;
  Regime regime;
  std::string root_type;  // real | imaginary | none
  std::optional<double> y;
};

/// M_k = mach_min + k step for every M_k <= mach_max.
std::vector<DiagramRow> stability_diagram(const DiagramConfig& cfg, double c = 1.0);

/// Index k of the first row with regime WeaklyStable that follows an Elliptic
/// row (the flip lies in [M_{k-1}, M_k]); nullopt when there is no flip.
std::optional<std::size_t> regime_flip(const std::vector<DiagramRow>& rows);

struct SimpleRootStudy {
  int family = 1;
  BoundCertificate coarse;  // radius r
  BoundCertificate fine;    // radius r / 2
  double min_change = 0.0;  // relative change of the band ends
  double max_change = 0.0;
  bool stable = false;
  bool pass = false;
};

SimpleRootStudy simple_root_study(const PhysicalParams& params, const SimpleRootConfig& cfg, int family);

}  // namespace vfs::cli
