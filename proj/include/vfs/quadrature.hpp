#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vfs/frequency.hpp"

namespace vfs {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(std::size_t order);

/// Composite Gauss-Legendre rule on [0, depth] for the normal variable x2.
///
/// ny >= 16 and divisible by 16: ny/16 equal panels of order 16.
/// Otherwise: one panel of order ny.
///
/// Samples given at the nodes are interpolated panel-wise by their Lagrange
/// polynomial, which is what the kernel integrals below integrate.
class X2Rule {
 public:
  X2Rule(std::size_t ny, double depth);

  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] double depth() const noexcept { return depth_; }
  [[nodiscard]] std::size_t panel_order() const noexcept { return order_; }
  [[nodiscard]] std::size_t panel_count() const noexcept { return nodes_.size() / order_; }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

  /// sum_q w_q values_q.
  [[nodiscard]] cplx integrate(std::span<const cplx> values) const;

  /// Panel interpolant of `values` at x; zero outside [0, depth].
  [[nodiscard]] cplx interpolate(std::span<const cplx> values, double x) const;

  struct ExponentialSplit {
    cplx below;  // int_0^center        e^{-mu (center - y)} F(y) dy
    cplx above;  // int_center^depth    e^{-mu (y - center)} F(y) dy
  };

  /// Product integration of e^{-mu |y - center|} against the panel
  /// interpolant F, for Re mu > 0.  Panels are subdivided so that
  /// |mu| * (piece length) <= 8, each piece uses Gauss-Legendre of twice the
  /// panel order, and pieces where Re mu |y - center| > 40 are dropped.
  [[nodiscard]] ExponentialSplit integrate_exponential(std::span<const cplx> values, cplx mu, double center) const;

 private:
  double depth_;
  std::size_t order_;
  GaussLegendre reference_;
  GaussLegendre fine_;  // order 2 * order_, for product integration
  std::vector<double> barycentric_;  // weights for the reference nodes
  std::vector<double> nodes_;
  std::vector<double> weights_;

  [[nodiscard]] cplx interpolate_panel(std::span<const cplx> values, std::size_t panel, double x) const;
};

}  // namespace vfs
