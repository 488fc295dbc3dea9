#include "vfs/spectral_grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "vfs/errors.hpp"

namespace vfs {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

double wave_number(std::size_t k, std::size_t n, double period) {
  const auto kk = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * kk / period;
}

}  // namespace

void GridSpec::validate() const {
  std::ostringstream err;
  if (nt < 2 || !std::has_single_bit(nt)) err << "nt must be a power of two >= 2 (got " << nt << "); ";
  if (nx < 2 || !std::has_single_bit(nx)) err << "nx must be a power of two >= 2 (got " << nx << "); ";
  if (ny < 2) err << "ny must be at least 2 (got " << ny << "); ";
  if (!(Lt > 0.0) || !(Lx > 0.0) || !(Ly > 0.0)) err << "Lt, Lx and Ly must be positive; ";
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) err << "gamma must be >= 1 (got " << gamma << "); ";
  if (const auto msg = err.str(); !msg.empty()) throw ConfigError("invalid grid: " + msg);
}

double GridSpec::delta(std::size_t k) const noexcept { return wave_number(k, nt, Lt); }
double GridSpec::eta(std::size_t m) const noexcept { return wave_number(m, nx, Lx); }

Frequency GridSpec::frequency(std::size_t index) const { return frequency(index, gamma); }

Frequency GridSpec::frequency(std::size_t index, double g) const {
  return {g, delta(index / nx), eta(index % nx)};
}

std::size_t GridSpec::mode_index(long kk, long mm) const {
  const auto wrap = [](long k, std::size_t n) {
    const auto nn = static_cast<long>(n);
    if (k < -nn / 2 || k >= nn / 2) throw DimensionMismatch("mode outside the lattice");
    return static_cast<std::size_t>((k + nn) % nn);
  };
  return wrap(kk, nt) * nx + wrap(mm, nx);
}

struct PlaneFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

PlaneFft::PlaneFft(std::size_t nt, std::size_t nx) : size_(nt * nx), plans_(std::make_unique<Plans>()) {
  std::vector<cplx> scratch(size_);
  const std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft_2d(static_cast<int>(nt), static_cast<int>(nx), as_fftw(scratch.data()),
                                     as_fftw(scratch.data()), FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft_2d(static_cast<int>(nt), static_cast<int>(nx), as_fftw(scratch.data()),
                                      as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (plans_->forward == nullptr || plans_->backward == nullptr) throw Error("FFTW planning failed");
}

PlaneFft::~PlaneFft() {
  const std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->backward);
}

void PlaneFft::forward(std::span<cplx> data) const {
  if (data.size() != size_) throw DimensionMismatch("FFT plane size mismatch");
  fftw_execute_dft(plans_->forward, as_fftw(data.data()), as_fftw(data.data()));
}

void PlaneFft::backward(std::span<cplx> data) const {
  if (data.size() != size_) throw DimensionMismatch("FFT plane size mismatch");
  fftw_execute_dft(plans_->backward, as_fftw(data.data()), as_fftw(data.data()));
}

std::vector<cplx> weighted_forward(std::span<const cplx> plane, const GridSpec& grid, const PlaneFft& fft) {
  if (plane.size() != grid.plane_size()) throw DimensionMismatch("plane does not match the (t, x1) grid");
  std::vector<cplx> out(plane.begin(), plane.end());
  const double cell = grid.dt() * grid.dx();
  for (std::size_t j = 0; j < grid.nt; ++j) {
    const double w = cell * std::exp(-grid.gamma * grid.dt() * static_cast<double>(j));
    for (std::size_t l = 0; l < grid.nx; ++l) out[j * grid.nx + l] *= w;
  }
  fft.forward(out);
  return out;
}

std::vector<cplx> weighted_backward(std::span<const cplx> spectrum, const GridSpec& grid, const PlaneFft& fft) {
  if (spectrum.size() != grid.plane_size()) throw DimensionMismatch("spectrum does not match the lattice");
  std::vector<cplx> out(spectrum.begin(), spectrum.end());
  fft.backward(out);
  const double scale = grid.plancherel_weight();
  for (std::size_t j = 0; j < grid.nt; ++j) {
    const double w = scale * std::exp(grid.gamma * grid.dt() * static_cast<double>(j));
    for (std::size_t l = 0; l < grid.nx; ++l) out[j * grid.nx + l] *= w;
  }
  return out;
}

}  // namespace vfs
