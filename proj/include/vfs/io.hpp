// File formats.
//
// Source binary (little-endian):
//   u32 nt, u32 nx, u32 ny, f64 Lt, f64 Lx, f64 Ly, f64 gamma,
//   then nt*nx*ny complex64 values (f32 re, f32 im), t-major: ((t * nx + x1) * ny + node).
// Source CSV: header "it,ix,iq,re,im", one row per nonzero sample; the grid
// comes from the run configuration.
// Solution binary: the same 44-byte header, then nt*nx complex128 f_hat
// (lattice order) and nt*nx complex128 f (t-major).  A JSON sidecar holds
// norms, estimate ratio, parameters and grid.
#pragma once

#include <filesystem>
#include <json.hpp>
#include <vector>

#include "vfs/front_solver.hpp"
#include "vfs/hemisphere.hpp"

namespace vfs {

struct RawSource {
  GridSpec grid;
  std::vector<cplx> values;
};

void write_source_binary(const std::filesystem::path& path, const GridSpec& grid, std::span<const cplx> values);
RawSource read_source_binary(const std::filesystem::path& path);

void write_source_csv(const std::filesystem::path& path, const GridSpec& grid, std::span<const cplx> values);
/// Samples not listed are zero.  Throws ConfigError on malformed rows or out-of-range indices.
std::vector<cplx> read_source_csv(const std::filesystem::path& path, const GridSpec& grid);

void write_solution_binary(const std::filesystem::path& path, const FrontSolution& solution);
/// Reads back (grid, f_hat, f); norms are not stored in the binary.
FrontSolution read_solution_binary(const std::filesystem::path& path, const PhysicalParams& params);

nlohmann::ordered_json to_json(const GridSpec& grid);
nlohmann::ordered_json to_json(const PhysicalParams& params);
nlohmann::ordered_json to_json(const BoundCertificate& certificate);
nlohmann::ordered_json to_json(const FrontSolution& solution);
nlohmann::ordered_json to_json(const EstimateSweep& sweep);

/// Writes `doc` with 2-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace vfs
