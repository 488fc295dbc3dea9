#include "vfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vfs/errors.hpp"

namespace vfs {

GaussLegendre gauss_legendre(std::size_t order) {
  if (order == 0) throw ConfigError("Gauss-Legendre order must be positive");
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const auto kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[order - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) gl.nodes[order / 2] = 0.0;
  return gl;
}

X2Rule::X2Rule(std::size_t ny, double depth) : depth_(depth) {
  if (ny < 2) throw ConfigError("x2 quadrature needs at least 2 nodes");
  if (!(depth > 0.0) || !std::isfinite(depth)) throw ConfigError("x2 truncation depth must be positive");
  order_ = (ny >= 16 && ny % 16 == 0) ? 16 : ny;
  reference_ = gauss_legendre(order_);
  fine_ = gauss_legendre(2 * order_);

  barycentric_.resize(order_);
  for (std::size_t j = 0; j < order_; ++j) {
    double w = 1.0;
    for (std::size_t k = 0; k < order_; ++k) {
      if (k != j) w *= (reference_.nodes[j] - reference_.nodes[k]);
    }
    barycentric_[j] = 1.0 / w;
  }

  const std::size_t panels = ny / order_;
  const double h = depth / static_cast<double>(panels);
  nodes_.reserve(ny);
  weights_.reserve(ny);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = h * static_cast<double>(p);
    for (std::size_t j = 0; j < order_; ++j) {
      nodes_.push_back(a + 0.5 * h * (reference_.nodes[j] + 1.0));
      weights_.push_back(0.5 * h * reference_.weights[j]);
    }
  }
}

cplx X2Rule::integrate(std::span<const cplx> values) const {
  if (values.size() != size()) throw DimensionMismatch("profile length does not match the x2 rule");
  cplx sum = 0.0;
  for (std::size_t q = 0; q < size(); ++q) sum += weights_[q] * values[q];
  return sum;
}

cplx X2Rule::interpolate_panel(std::span<const cplx> values, std::size_t panel, double x) const {
  const double h = depth_ / static_cast<double>(panel_count());
  const double a = h * static_cast<double>(panel);
  const double t = 2.0 * (x - a) / h - 1.0;
  const std::size_t offset = panel * order_;
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < order_; ++j) {
    const double diff = t - reference_.nodes[j];
    if (diff == 0.0) return values[offset + j];
    const double c = barycentric_[j] / diff;
    num += c * values[offset + j];
    den += c;
  }
  return num / den;
}

cplx X2Rule::interpolate(std::span<const cplx> values, double x) const {
  if (values.size() != size()) throw DimensionMismatch("profile length does not match the x2 rule");
  if (x < 0.0 || x > depth_) return 0.0;
  const double h = depth_ / static_cast<double>(panel_count());
  const auto panel = std::min(panel_count() - 1, static_cast<std::size_t>(x / h));
  return interpolate_panel(values, panel, x);
}

X2Rule::ExponentialSplit X2Rule::integrate_exponential(std::span<const cplx> values, cplx mu, double center) const {
  if (values.size() != size()) throw DimensionMismatch("profile length does not match the x2 rule");
  if (!(mu.real() > 0.0)) throw InvalidFrequency("exponential kernel needs Re mu > 0");
  constexpr double kPieceScale = 8.0;
  constexpr double kCutoff = 40.0;
  const double reach = kCutoff / mu.real();
  const double h = depth_ / static_cast<double>(panel_count());
  ExponentialSplit out{0.0, 0.0};

  // The interpolant already has degree order_ - 1, so pieces use a rule of twice that order.
  const auto piece = [&](std::size_t p, double lo, double hi) {
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::abs(mu) * (hi - lo) / kPieceScale)));
    const double len = (hi - lo) / static_cast<double>(m);
    const double half = 0.5 * len;
    cplx sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double s0 = lo + len * static_cast<double>(k);
      for (std::size_t j = 0; j < fine_.nodes.size(); ++j) {
        const double y = s0 + half * (fine_.nodes[j] + 1.0);
        sum += half * fine_.weights[j] * std::exp(-mu * std::abs(y - center)) * interpolate_panel(values, p, y);
      }
    }
    return sum;
  };

  for (std::size_t p = 0; p < panel_count(); ++p) {
    const double a = h * static_cast<double>(p);
    const double b = p + 1 == panel_count() ? depth_ : a + h;
    // below: [a, b] intersected with [center - reach, center]
    if (const double lo = std::max(a, center - reach), hi = std::min(b, center); lo < hi) {
      out.below += piece(p, lo, hi);
    }
    if (const double lo = std::max(a, center), hi = std::min(b, center + reach); lo < hi) {
      out.above += piece(p, lo, hi);
    }
  }
  return out;
}

}  // namespace vfs
