// Discretization of the (t, x1) plane as a periodic box and its Fourier lattice.
//
// Transform convention (fixed once for the whole toolkit):
//   u_hat(delta, eta) = int int e^{-i (delta t + eta x1)} u(t, x1) dt dx1
//   u(t, x1)          = (2 pi)^-2 int int e^{+i (delta t + eta x1)} u_hat d delta d eta
// On the box this becomes u_hat = dt dx * DFT(u) and u = IDFT(u_hat) / (Lt Lx).
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "vfs/frequency.hpp"

namespace vfs {

struct GridSpec {
  std::size_t nt = 64;
  std::size_t nx = 64;
  std::size_t ny = 32;  // x2 quadrature nodes per side
  double Lt = 16.0;
  double Lx = 16.0;
  double Ly = 30.0;
  double gamma = 1.0;

  /// Throws ConfigError on non-power-of-two sizes, ny < 2, non-positive lengths or gamma < 1.
  void validate() const;

  [[nodiscard]] std::size_t plane_size() const noexcept { return nt * nx; }
  [[nodiscard]] double dt() const noexcept { return Lt / static_cast<double>(nt); }
  [[nodiscard]] double dx() const noexcept { return Lx / static_cast<double>(nx); }

  /// Lattice frequencies in FFT order (index k <-> k or k - n).
  [[nodiscard]] double delta(std::size_t k) const noexcept;
  [[nodiscard]] double eta(std::size_t m) const noexcept;
  /// (gamma, delta_k, eta_m) for the flattened index k * nx + m.
  [[nodiscard]] Frequency frequency(std::size_t index) const;
  /// Same lattice point at a different gamma.
  [[nodiscard]] Frequency frequency(std::size_t index, double gamma) const;

  /// Flattened index of lattice mode (kk, mm) given as signed wave numbers.
  [[nodiscard]] std::size_t mode_index(long kk, long mm) const;

  /// Weight of one lattice cell in the Plancherel sum: (2 pi)^-2 d delta d eta = 1 / (Lt Lx).
  [[nodiscard]] double plancherel_weight() const noexcept { return 1.0 / (Lt * Lx); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// 2-D complex FFT on an nt x nx row-major plane (t-major).  Scaling is left
/// to the caller.  Not copyable; plans are created once.
class PlaneFft {
 public:
  PlaneFft(std::size_t nt, std::size_t nx);
  ~PlaneFft();
  PlaneFft(const PlaneFft&) = delete;
  PlaneFft& operator=(const PlaneFft&) = delete;

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

 private:
  struct Plans;
  std::size_t size_;
  std::unique_ptr<Plans> plans_;
};

/// u_hat = dt dx * DFT(e^{-gamma t} u) on one plane.
std::vector<cplx> weighted_forward(std::span<const cplx> plane, const GridSpec& grid, const PlaneFft& fft);

/// Inverse of weighted_forward: e^{gamma t} IDFT(u_hat) / (Lt Lx).
std::vector<cplx> weighted_backward(std::span<const cplx> spectrum, const GridSpec& grid, const PlaneFft& fft);

}  // namespace vfs
