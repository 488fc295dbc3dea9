#include "vfs/front_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "vfs/errors.hpp"
#include "vfs/parallel.hpp"

namespace vfs {

namespace {

void check_field(const SourceField& field) {
  const std::size_t n = field.grid.plane_size() * field.grid.ny;
  if (field.spectral.size() != n || field.rule.size() != field.grid.ny) {
    throw DimensionMismatch("source field arrays do not match its grid");
  }
}

// Sum of per-mode terms in index order, so results do not depend on the
// worker count.
template <class Term>
double ordered_sum(std::size_t n, Term&& term) {
  std::vector<double> terms(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) terms[i] = term(i);
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

// The lines delta_{nt/2} and eta_{nx/2} have no conjugate partner on the
// lattice, so Sigma cannot act on them in a real-preserving way.
std::vector<cplx> without_nyquist(std::span<const cplx> spectrum, const GridSpec& grid) {
  std::vector<cplx> out(spectrum.begin(), spectrum.end());
  for (std::size_t m = 0; m < grid.nx; ++m) out[(grid.nt / 2) * grid.nx + m] = 0.0;
  for (std::size_t k = 0; k < grid.nt; ++k) out[k * grid.nx + grid.nx / 2] = 0.0;
  return out;
}

double max_abs(std::span<const cplx> values) {
  double m = 0.0;
  for (const auto& z : values) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::Plus ? "plus" : "minus"; }

double SourceField::max_abs_spectral() const { return max_abs(spectral); }

bool SourceField::decayed(double tolerance) const {
  const double scale = max_abs_spectral();
  if (scale == 0.0) return true;
  for (std::size_t mode = 0; mode < grid.plane_size(); ++mode) {
    if (std::abs(spectral[mode * grid.ny + grid.ny - 1]) > tolerance * scale) return false;
  }
  return true;
}

SourceField transform_source(std::span<const cplx> raw, const GridSpec& grid, Side side) {
  grid.validate();
  const std::size_t plane = grid.plane_size();
  if (raw.size() != plane * grid.ny) {
    std::ostringstream msg;
    msg << "source has " << raw.size() << " samples, grid expects " << plane * grid.ny;
    throw DimensionMismatch(msg.str());
  }
  SourceField field{side, grid, X2Rule(grid.ny, grid.Ly), std::vector<cplx>(raw.begin(), raw.end()),
                    std::vector<cplx>(raw.size())};
  const PlaneFft fft(grid.nt, grid.nx);
  parallel_for(grid.ny, [&](std::size_t begin, std::size_t end) {
    std::vector<cplx> slice(plane);
    for (std::size_t q = begin; q < end; ++q) {
      for (std::size_t i = 0; i < plane; ++i) slice[i] = raw[i * grid.ny + q];
      const auto hat = weighted_forward(slice, grid, fft);
      for (std::size_t i = 0; i < plane; ++i) field.spectral[i * grid.ny + q] = hat[i];
    }
  });
  return field;
}

std::vector<cplx> inverse_transform(const SourceField& field) {
  check_field(field);
  const auto& grid = field.grid;
  const std::size_t plane = grid.plane_size();
  std::vector<cplx> out(plane * grid.ny);
  const PlaneFft fft(grid.nt, grid.nx);
  parallel_for(grid.ny, [&](std::size_t begin, std::size_t end) {
    std::vector<cplx> slice(plane);
    for (std::size_t q = begin; q < end; ++q) {
      for (std::size_t i = 0; i < plane; ++i) slice[i] = field.spectral[i * grid.ny + q];
      const auto back = weighted_backward(slice, grid, fft);
      for (std::size_t i = 0; i < plane; ++i) out[i * grid.ny + q] = back[i];
    }
  });
  return out;
}

cplx laplace_moment(std::span<const cplx> profile, const X2Rule& rule, cplx mu) {
  return rule.integrate_exponential(profile, mu, 0.0).above;
}

cplx source_moment(std::span<const cplx> plus_profile, std::span<const cplx> minus_profile, const X2Rule& rule,
                   const Frequency& freq, const PhysicalParams& params, const SolverOptions& options,
                   std::optional<double> scale) {
  const auto mu = mu_pm(freq, params);
  if (!(mu.plus.real() > 0.0) || !(mu.minus.real() > 0.0)) {
    throw InvalidFrequency("source moment needs Re mu+- > 0 (gamma > 0)");
  }
  const double amp_plus = max_abs(plus_profile);
  const double amp_minus = max_abs(minus_profile);
  const double ref = scale.value_or(std::max(amp_plus, amp_minus));
  if (ref == 0.0) return 0.0;

  for (const auto& [profile, amp, side] :
       {std::tuple{plus_profile, amp_plus, "plus"}, std::tuple{minus_profile, amp_minus, "minus"}}) {
    if (!profile.empty() && std::abs(profile.back()) > options.decay_tolerance * ref) {
      std::ostringstream msg;
      msg << side << " source has not decayed at the truncation depth: |F(Ly)| = " << std::abs(profile.back())
          << ", reference amplitude " << ref;
      throw DecayViolated(msg.str());
    }
  }
  for (const auto& [m, amp, side] :
       {std::tuple{mu.plus, amp_plus, "plus"}, std::tuple{mu.minus, amp_minus, "minus"}}) {
    const double tail = std::exp(-m.real() * rule.depth()) * amp;
    if (tail > options.tail_tolerance * ref) {
      std::ostringstream msg;
      msg << side << " tail bound e^{-Re mu Ly} max|F| = " << tail << " exceeds " << options.tail_tolerance
          << " relative; increase Ly";
      throw QuadratureUnderResolved(msg.str());
    }
  }
  return laplace_moment(plus_profile, rule, mu.plus) / mu.plus -
         laplace_moment(minus_profile, rule, mu.minus) / mu.minus;
}

cplx source_moment(const SourceField& plus, const SourceField& minus, std::size_t mode, const PhysicalParams& params,
                   const SolverOptions& options) {
  check_field(plus);
  check_field(minus);
  if (!(plus.grid == minus.grid)) throw DimensionMismatch("plus and minus sources live on different grids");
  if (mode >= plus.grid.plane_size()) throw DimensionMismatch("mode index outside the lattice");
  const double scale = std::max(plus.max_abs_spectral(), minus.max_abs_spectral());
  return source_moment(plus.profile(mode), minus.profile(mode), plus.rule, plus.grid.frequency(mode), params, options,
                       scale);
}

cplx g_from_moment(cplx moment, const Frequency& freq, const PhysicalParams& params) {
  const auto mu = mu_pm(freq, params);
  const cplx den = mu.plus + mu.minus;
  if (std::abs(den) == 0.0) throw DegenerateDenominator("mu+ + mu- vanishes");
  return -(mu.plus * mu.minus / den) * moment;
}

std::vector<cplx> build_g(const SourceField& plus, const SourceField& minus, const PhysicalParams& params,
                          const SolverOptions& options) {
  check_field(plus);
  check_field(minus);
  if (!(plus.grid == minus.grid)) throw DimensionMismatch("plus and minus sources live on different grids");
  const auto& grid = plus.grid;
  const double scale = std::max(plus.max_abs_spectral(), minus.max_abs_spectral());
  std::vector<cplx> g(grid.plane_size());
  if (scale == 0.0) return g;
  for (const auto* field : {&plus, &minus}) {
    if (!field->decayed(options.decay_tolerance)) {
      throw DecayViolated(std::string(to_string(field->side)) +
                          " source does not decay at the truncation depth; increase Ly or check the x2 profile");
    }
  }
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t mode = begin; mode < end; ++mode) {
      const auto freq = grid.frequency(mode);
      const cplx m = source_moment(plus.profile(mode), minus.profile(mode), plus.rule, freq, params, options, scale);
      g[mode] = g_from_moment(m, freq, params);
    }
  });
  return g;
}

std::string norm_label(const NormKey& key) {
  std::ostringstream out;
  out << "H^{" << key.s << (key.space == NormSpace::Anisotropic ? ",sigma}" : "}");
  return out.str();
}

double weighted_norm(std::span<const cplx> u_hat, const GridSpec& grid, const PhysicalParams& params, double s,
                     NormSpace space) {
  if (u_hat.size() != grid.plane_size()) throw DimensionMismatch("spectrum does not match the lattice");
  if (space == NormSpace::Anisotropic && params.regime() != Regime::WeaklyStable) {
    throw RegimeError("the anisotropic norm needs the weakly stable regime (M > sqrt(2))");
  }
  const double sum = ordered_sum(u_hat.size(), [&](std::size_t i) {
    if (u_hat[i] == cplx{}) return 0.0;
    const auto freq = grid.frequency(i);
    double w = lambda_power(freq, s) * std::abs(u_hat[i]);
    if (space == NormSpace::Anisotropic) w *= std::abs(weight_sigma(freq, params));
    return w * w;
  });
  return std::sqrt(grid.plancherel_weight() * sum);
}

std::vector<cplx> apply_symbol(std::span<const cplx> fhat, const GridSpec& grid, const PhysicalParams& params) {
  if (fhat.size() != grid.plane_size()) throw DimensionMismatch("spectrum does not match the lattice");
  std::vector<cplx> out(fhat.size());
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = big_sigma(grid.frequency(i), params) * fhat[i];
  });
  return out;
}

FrontSolution solve_front(std::span<const cplx> g, const GridSpec& grid, const PhysicalParams& params, double s,
                          const SolverOptions& options) {
  grid.validate();
  if (g.size() != grid.plane_size()) throw DimensionMismatch("g does not match the lattice");
  if (params.regime() == Regime::Degenerate) throw RegimeError("front solve at M = sqrt(2) is not supported");

  FrontSolution sol{grid, params, s, params.regime(), std::vector<cplx>(g.size()), {}, {}, 0.0, std::nullopt};
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto freq = grid.frequency(i);
      const cplx symbol = big_sigma(freq, params);
      const double lam = freq.lambda();
      if (std::abs(symbol) < options.symbol_floor * lam * lam) {
        std::ostringstream msg;
        msg << "|Sigma| = " << std::abs(symbol) << " below " << options.symbol_floor << " Lambda^2 at (gamma, delta, eta) = ("
            << freq.gamma() << ", " << freq.delta() << ", " << freq.eta() << ")";
        throw SymbolTooSmall(msg.str());
      }
      sol.fhat[i] = g[i] / symbol;
    }
  });
  const PlaneFft fft(grid.nt, grid.nx);
  sol.f = weighted_backward(without_nyquist(sol.fhat, grid), grid, fft);

  sol.norms[{s, NormSpace::Plain}] = weighted_norm(sol.fhat, grid, params, s, NormSpace::Plain);
  sol.norms[{s + 1.0, NormSpace::Plain}] = weighted_norm(sol.fhat, grid, params, s + 1.0, NormSpace::Plain);
  sol.g_norm = weighted_norm(g, grid, params, s, NormSpace::Plain);
  if (sol.regime == Regime::WeaklyStable) {
    const double aniso = weighted_norm(sol.fhat, grid, params, s + 1.0, NormSpace::Anisotropic);
    sol.norms[{s + 1.0, NormSpace::Anisotropic}] = aniso;
    if (sol.g_norm > 0.0) sol.estimate_ratio = aniso / sol.g_norm;
  }
  return sol;
}

double source_norm_sq(const SourceField& field, double s) {
  check_field(field);
  const auto& grid = field.grid;
  const auto weights = field.rule.weights();
  const double sum = ordered_sum(grid.plane_size(), [&](std::size_t mode) {
    const auto profile = field.profile(mode);
    double acc = 0.0;
    for (std::size_t q = 0; q < profile.size(); ++q) acc += weights[q] * std::norm(profile[q]);
    if (acc == 0.0) return 0.0;
    const double lam_s = lambda_power(grid.frequency(mode), s);
    return lam_s * lam_s * acc;
  });
  return grid.plancherel_weight() * sum;
}

bool bounded_without_growth(std::span<const double> ratios, double slack) {
  if (ratios.empty()) return true;
  const double first = ratios.front();
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!std::isfinite(ratios[i])) return false;
    if (ratios[i] > (1.0 + slack) * first) return false;
    if (i > 0 && ratios[i] > (1.0 + slack) * ratios[i - 1]) return false;
  }
  return true;
}

EstimateSweep estimate_sweep(const SourceField& plus, const SourceField& minus, const PhysicalParams& params, double s,
                             std::span<const double> gammas, double slack, const SolverOptions& options) {
  check_field(plus);
  check_field(minus);
  if (!(plus.grid == minus.grid)) throw DimensionMismatch("plus and minus sources live on different grids");
  EstimateSweep out;
  out.slack = slack;
  out.front_applicable = params.regime() == Regime::WeaklyStable;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const double gamma : gammas) {
    GridSpec grid = plus.grid;
    grid.gamma = gamma;
    const auto fp = transform_source(plus.values, grid, Side::Plus);
    const auto fm = transform_source(minus.values, grid, Side::Minus);
    const auto g = build_g(fp, fm, params, options);
    const auto sol = solve_front(g, grid, params, s, options);

    SweepRow row;
    row.gamma = gamma;
    row.source_norm_sq = source_norm_sq(fp, s) + source_norm_sq(fm, s);
    row.g_norm_sq = sol.g_norm * sol.g_norm;
    const double plain = sol.norms.at({s + 1.0, NormSpace::Plain});
    row.f_plain_sq = plain * plain;
    if (out.front_applicable) {
      const double aniso = sol.norms.at({s + 1.0, NormSpace::Anisotropic});
      row.f_aniso_sq = aniso * aniso;
    } else {
      row.f_aniso_sq = nan;
    }
    if (row.source_norm_sq > 0.0) {
      row.ratio_front = gamma * row.f_aniso_sq / row.source_norm_sq;
      row.ratio_g = gamma * row.g_norm_sq / row.source_norm_sq;
      row.ratio_plain = gamma * gamma * gamma * row.f_plain_sq / row.source_norm_sq;
    } else {
      row.ratio_front = out.front_applicable ? 0.0 : nan;
    }
    out.rows.push_back(row);
  }

  const auto column = [&](double SweepRow::*member) {
    std::vector<double> v;
    for (const auto& r : out.rows) v.push_back(r.*member);
    return v;
  };
  out.front_bounded = out.front_applicable && bounded_without_growth(column(&SweepRow::ratio_front), slack);
  out.g_bounded = bounded_without_growth(column(&SweepRow::ratio_g), slack);
  out.plain_bounded = bounded_without_growth(column(&SweepRow::ratio_plain), slack);
  out.pass = (out.front_bounded || !out.front_applicable) && out.g_bounded && out.plain_bounded;
  return out;
}

}  // namespace vfs
