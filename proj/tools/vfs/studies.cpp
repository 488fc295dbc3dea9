#include "vfs/studies.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vfs/errors.hpp"
#include "vfs/io.hpp"

namespace vfs::cli {

namespace {

using json = nlohmann::ordered_json;

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

double bump(double r) { return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

int run_certify(const RunConfig& cfg, std::ostream& log) {
  const auto& p = cfg.params;
  if (p.regime() != Regime::WeaklyStable) {
    throw RegimeError("certify needs M > sqrt(2): the weight sigma is undefined for M = " + std::to_string(p.mach()));
  }
  const auto& s = cfg.sample;
  const auto sample = sample_hemisphere(s.n, s.strategy, s.gamma_floor, p, cfg.seed, s.near_root_radius);
  CertifyOptions opts;
  opts.explosion_threshold = s.explosion_threshold;
  opts.near_root_radius = s.near_root_radius;
  opts.limit_radius = s.limit_radius;
  opts.limit_spread = s.limit_spread;
  opts.seed = cfg.seed;

  std::vector<BoundCertificate> certs{certify_sandwich(sample, p, opts), certify_weight_bounds(sample, p, opts)};
  bool pass = certs[0].pass && certs[1].pass;
  for (const auto& c : certs) {
    log << verdict(c.pass) << ' ' << c.ratio_name << " in [" << c.empirical_min << ", " << c.empirical_max
        << "] over " << c.sample_size << " points\n";
  }

  json doc{{"study", "certify"},
           {"params", to_json(p)},
           {"seed", cfg.seed},
           {"strategy", to_string(s.strategy)},
           {"sample_size", s.n},
           {"gamma_floor", s.gamma_floor}};
  auto list = json::array();
  for (const auto& c : certs) list.push_back(to_json(c));
  doc["certificates"] = std::move(list);
  doc["embedding_constant"] = embedding_constant(certs[1]);

  if (cfg.simple_root.enabled) {
    auto roots = json::array();
    for (const int family : {1, -1}) {
      const auto study = simple_root_study(p, cfg.simple_root, family);
      pass = pass && study.pass;
      log << verdict(study.pass) << " simple root family " << family << ": band " << study.coarse.empirical_min
          << ".." << study.coarse.empirical_max << " at r, " << study.fine.empirical_min << ".."
          << study.fine.empirical_max << " at r/2\n";
      roots.push_back({{"family", family},
                       {"radius", to_json(study.coarse)},
                       {"half_radius", to_json(study.fine)},
                       {"min_change", study.min_change},
                       {"max_change", study.max_change},
                       {"stable", study.stable},
                       {"pass", study.pass}});
    }
    doc["simple_roots"] = std::move(roots);
  }

  if (cfg.heatmap.enabled) {
    const auto& h = cfg.heatmap;
    const auto deltas = symmetric_axis(h.n_delta, h.delta_max);
    const auto etas = symmetric_axis(h.n_eta, h.eta_max);
    auto files = json::array();
    for (const auto field : {HeatmapField::AbsSigmaBig, HeatmapField::AbsWeightSigma, HeatmapField::Ratio}) {
      const auto name = "heatmap_" + std::string(to_string(field)) + ".csv";
      write_heatmap_csv(cfg.output_dir / name, heatmap(field, deltas, etas, h.gamma, p));
      files.push_back(name);
    }
    doc["heatmaps"] = std::move(files);
  }
  doc["pass"] = pass;
  write_json(cfg.output_dir / "certificates.json", doc);
  return pass ? kExitPass : kExitFail;
}

int run_roots(const RunConfig& cfg, std::ostream& log) {
  const auto& p = cfg.params;
  if (p.regime() == Regime::Degenerate) throw RegimeError("no isolated roots at M = sqrt(2)");
  const auto rc = root_constants(p);
  const bool stable = p.regime() == Regime::WeaklyStable;
  json doc{{"study", "roots"},
           {"params", to_json(p)},
           {"root_type", stable ? "imaginary" : "real"},
           {"Y", stable ? *rc.y2 : *rc.y1},
           {"tolerance", cfg.roots.tolerance}};
  auto found = json::array();
  bool pass = true;
  for (const int sign : {1, -1}) {
    const double closed = stable ? sign * p.c() * *rc.y2 : p.c() * *rc.y1;
    json item{{"eta_sign", sign}, {"closed_form", closed}};
    try {
      const double located = locate_roots(p, sign, cfg.roots.tolerance);
      item["located"] = located;
      item["relative_error"] = std::abs(located - closed) / std::abs(closed);
      item["pass"] = true;
      log << "PASS root at eta = " << sign << ": " << (stable ? "delta* = " : "tau* = ") << std::setprecision(17)
          << located << std::setprecision(6) << '\n';
    } catch (const NoRootFound& e) {
      item["located"] = nullptr;
      item["error"] = e.what();
      item["pass"] = false;
      pass = false;
      log << "FAIL root at eta = " << sign << ": " << e.what() << '\n';
    }
    found.push_back(std::move(item));
  }
  doc["roots"] = std::move(found);
  doc["pass"] = pass;
  write_json(cfg.output_dir / "roots.json", doc);
  return pass ? kExitPass : kExitFail;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
  const auto& p = cfg.params;
  const GridSpec grid = *cfg.grid;
  const auto [raw_plus, raw_minus] = load_sources(cfg);
  const auto fp = transform_source(raw_plus, grid, Side::Plus);
  const auto fm = transform_source(raw_minus, grid, Side::Minus);
  const auto g = build_g(fp, fm, p, cfg.solve.solver);
  const auto sol = solve_front(g, grid, p, cfg.solve.s, cfg.solve.solver);
  write_solution_binary(cfg.output_dir / "solution.bin", sol);

  double imag = 0.0;
  for (const auto& z : sol.f) imag = std::max(imag, std::abs(z.imag()));

  json doc = to_json(sol);
  doc["source_norms_sq"] = {{"plus", source_norm_sq(fp, cfg.solve.s)}, {"minus", source_norm_sq(fm, cfg.solve.s)}};
  doc["max_abs_imag_f"] = imag;

  bool pass = true;
  const double tol = cfg.solve.residual_tolerance;
  auto modes = json::array();
  for (const auto& [k, m] : cfg.solve.pressure_modes) {
    const std::size_t mode = grid.mode_index(k, m);
    const auto freq = grid.frequency(mode);
    const auto pair = reconstruct_pressure(sol, fp, fm, mode, cfg.solve.solver);
    const double front = front_equation_residual(sol.fhat[mode], pair, freq, p);
    const auto jumps = jump_residual(sol.fhat[mode], pair, freq, p);
    const double lam = freq.lambda();
    const double jump_scale = 4.0 * p.v() * lam * lam * std::abs(sol.fhat[mode]) +
                              p.c() * p.c() * (std::abs(pair.plus.normal_derivative(0.0)) +
                                               std::abs(pair.minus.normal_derivative(0.0)));
    const double jump_rel = jump_scale == 0.0 ? 0.0 : jumps.derivative / jump_scale;
    const double value_scale = std::abs(pair.plus.value(0.0)) + std::abs(pair.minus.value(0.0));
    const double value_rel = value_scale == 0.0 ? 0.0 : jumps.value / value_scale;
    double ode = 0.0;
    for (const auto* prof : {&pair.plus, &pair.minus}) {
      for (const double r : node_ode_residuals(*prof)) ode = std::max(ode, r);
    }
    const bool ok = front <= tol && jump_rel <= tol && value_rel <= tol && ode <= tol;
    pass = pass && ok;
    std::ostringstream name;
    name << "pressure_k" << k << "_m" << m << ".csv";
    std::ofstream csv(cfg.output_dir / name.str(), std::ios::binary | std::ios::trunc);
    write_pressure_csv(csv, pair);
    modes.push_back({{"k", k},
                     {"m", m},
                     {"delta", freq.delta()},
                     {"eta", freq.eta()},
                     {"fhat", {sol.fhat[mode].real(), sol.fhat[mode].imag()}},
                     {"front_equation_residual", front},
                     {"pressure_jump_residual", value_rel},
                     {"derivative_jump_residual", jump_rel},
                     {"max_ode_residual", ode},
                     {"profile_csv", name.str()},
                     {"pass", ok}});
    log << verdict(ok) << " pressure mode (" << k << ", " << m << "): front residual " << front << ", ODE residual "
        << ode << '\n';
  }
  doc["pressure_modes"] = std::move(modes);
  doc["residual_tolerance"] = tol;
  doc["pass"] = pass;
  write_json(cfg.output_dir / "solution.json", doc);

  for (const auto& [key, value] : sol.norms) log << "  ||f||_" << norm_label(key) << " = " << value << '\n';
  if (sol.estimate_ratio) log << "  ||f||_{s+1,sigma} / ||g||_s = " << *sol.estimate_ratio << '\n';
  return pass ? kExitPass : kExitFail;
}

int run_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto& p = cfg.params;
  const GridSpec grid = *cfg.grid;
  const auto [raw_plus, raw_minus] = load_sources(cfg);
  const auto fp = transform_source(raw_plus, grid, Side::Plus);
  const auto fm = transform_source(raw_minus, grid, Side::Minus);
  const auto sweep = estimate_sweep(fp, fm, p, cfg.solve.s, cfg.sweep.gammas, cfg.sweep.slack, cfg.solve.solver);

  json doc = to_json(sweep);
  doc["params"] = to_json(p);
  doc["grid"] = to_json(grid);
  doc["s"] = cfg.solve.s;
  write_json(cfg.output_dir / "sweep.json", doc);

  std::ostringstream csv;
  csv << std::setprecision(17) << "gamma,ratio_front,ratio_g,ratio_plain\n";
  for (const auto& r : sweep.rows) {
    csv << r.gamma << ',' << r.ratio_front << ',' << r.ratio_g << ',' << r.ratio_plain << '\n';
    log << "  gamma " << r.gamma << ": front " << r.ratio_front << ", g " << r.ratio_g << ", plain " << r.ratio_plain
        << '\n';
  }
  write_text(cfg.output_dir / "sweep.csv", csv.str());
  log << verdict(sweep.pass) << " estimate sweep (slack " << sweep.slack << ")\n";
  return sweep.pass ? kExitPass : kExitFail;
}

int run_diagram(const RunConfig& cfg, std::ostream& log) {
  const auto rows = stability_diagram(cfg.diagram, cfg.params.c());
  std::ostringstream csv;
  csv << std::setprecision(17) << "mach,regime,root_type,y\n";
  for (const auto& r : rows) {
    csv << r.mach << ',' << to_string(r.regime) << ',' << r.root_type << ',';
    if (r.y) csv << *r.y;
    csv << '\n';
  }
  write_text(cfg.output_dir / "diagram.csv", csv.str());

  const auto flip = regime_flip(rows);
  json doc{{"study", "diagram"}, {"c", cfg.params.c()}, {"rows", rows.size()}};
  if (flip) {
    const double lo = rows[*flip - 1].mach;
    const double hi = rows[*flip].mach;
    doc["flip"] = {{"index", *flip}, {"mach_below", lo}, {"mach_above", hi}};
    log << "regime flips Elliptic -> WeaklyStable between M = " << lo << " and M = " << hi << '\n';
  } else {
    doc["flip"] = nullptr;
    log << "no regime flip in the sampled range\n";
  }
  write_json(cfg.output_dir / "diagram.json", doc);
  return kExitPass;
}

}  // namespace

std::string_view to_string(HeatmapField field) {
  switch (field) {
    case HeatmapField::AbsSigmaBig:
      return "abs_Sigma";
    case HeatmapField::AbsWeightSigma:
      return "abs_sigma";
    case HeatmapField::Ratio:
      return "ratio";
  }
  return "unknown";
}

std::vector<cplx> bump_source(const GridSpec& grid, const BumpConfig& b, Side side) {
  const X2Rule rule(grid.ny, grid.Ly);
  const double amp = side == Side::Plus ? b.amplitude_plus : b.amplitude_minus;
  std::vector<cplx> out(grid.plane_size() * grid.ny);
  for (std::size_t j = 0; j < grid.nt; ++j) {
    const double bt = bump((grid.dt() * static_cast<double>(j) - b.t0) / b.rt);
    for (std::size_t l = 0; l < grid.nx; ++l) {
      const double bx = bump((grid.dx() * static_cast<double>(l) - b.x0) / b.rx);
      for (std::size_t q = 0; q < grid.ny; ++q) {
        out[(j * grid.nx + l) * grid.ny + q] = amp * bt * bx * bump((rule.nodes()[q] - b.y0) / b.ry);
      }
    }
  }
  return out;
}

std::pair<std::vector<cplx>, std::vector<cplx>> load_sources(const RunConfig& cfg) {
  if (!cfg.grid) throw ConfigError("sources need a [grid] section");
  const GridSpec& grid = *cfg.grid;
  const auto& src = cfg.source;
  if (src.kind == "bump") return {bump_source(grid, src.bump, Side::Plus), bump_source(grid, src.bump, Side::Minus)};
  const auto load = [&](const std::filesystem::path& path) {
    if (path.extension() == ".csv") return read_source_csv(path, grid);
    auto raw = read_source_binary(path);
    if (!(raw.grid == grid)) throw ConfigError(path.string() + ": header grid differs from the [grid] section");
    return std::move(raw.values);
  };
  return {load(src.plus_file), load(src.minus_file)};
}

std::vector<double> symmetric_axis(std::size_t n, double max) {
  if (n == 1) return {0.0};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = -max + 2.0 * max * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<HeatmapRow> heatmap(HeatmapField field, const std::vector<double>& deltas, const std::vector<double>& etas,
                                double gamma, const PhysicalParams& params) {
  if (field != HeatmapField::AbsSigmaBig && params.regime() != Regime::WeaklyStable) {
    throw RegimeError("the weight sigma needs M > sqrt(2)");
  }
  SigmaOptions opts;
  opts.continuous_extension = true;
  std::vector<HeatmapRow> rows;
  rows.reserve(deltas.size() * etas.size());
  for (const double d : deltas) {
    for (const double e : etas) {
      if (gamma == 0.0 && d == 0.0 && e == 0.0) continue;
      const Frequency f(gamma, d, e);
      double value = 0.0;
      switch (field) {
        case HeatmapField::AbsSigmaBig:
          value = std::abs(big_sigma(f, params, opts));
          break;
        case HeatmapField::AbsWeightSigma:
          value = std::abs(weight_sigma(f, params));
          break;
        case HeatmapField::Ratio:
          value = std::abs(big_sigma(f, params, opts)) / (std::abs(weight_sigma(f, params)) * f.lambda());
          break;
      }
      rows.push_back({d, e, value});
    }
  }
  return rows;
}

void write_heatmap_csv(const std::filesystem::path& path, const std::vector<HeatmapRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(17) << "delta,eta,value\n";
  for (const auto& r : rows) out << r.delta << ',' << r.eta << ',' << r.value << '\n';
  write_text(path, out.str());
}

std::vector<DiagramRow> stability_diagram(const DiagramConfig& cfg, double c) {
  std::vector<DiagramRow> rows;
  const auto count = static_cast<std::size_t>(std::floor((cfg.mach_max - cfg.mach_min) / cfg.step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double mach = cfg.mach_min + static_cast<double>(k) * cfg.step;
    const auto params = PhysicalParams::from_mach(mach, c);
    DiagramRow row{mach, params.regime(), "none", std::nullopt};
    if (row.regime != Regime::Degenerate) {
      const auto rc = root_constants(params);
      row.root_type = rc.y1 ? "real" : "imaginary";
      row.y = rc.y1 ? rc.y1 : rc.y2;
    }
    rows.push_back(row);
  }
  return rows;
}

std::optional<std::size_t> regime_flip(const std::vector<DiagramRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].regime == Regime::WeaklyStable && rows[k - 1].regime != Regime::WeaklyStable) return k;
  }
  return std::nullopt;
}

SimpleRootStudy simple_root_study(const PhysicalParams& params, const SimpleRootConfig& cfg, int family) {
  SimpleRootOptions opts;
  opts.radius = cfg.radius;
  opts.points = cfg.points;
  opts.family = family;
  opts.band_limit = cfg.band_limit;
  SimpleRootStudy out;
  out.family = family;
  out.coarse = certify_simple_root(params, opts);
  opts.radius = cfg.radius / 2.0;
  out.fine = certify_simple_root(params, opts);
  out.min_change = std::abs(out.fine.empirical_min / out.coarse.empirical_min - 1.0);
  out.max_change = std::abs(out.fine.empirical_max / out.coarse.empirical_max - 1.0);
  out.stable = out.min_change <= cfg.stability && out.max_change <= cfg.stability;
  out.pass = out.coarse.pass && out.fine.pass && out.stable;
  return out;
}

int run(const RunConfig& cfg, std::ostream& log) {
  std::filesystem::create_directories(cfg.output_dir);
  switch (cfg.study) {
    case Study::Certify:
      return run_certify(cfg, log);
    case Study::Roots:
      return run_roots(cfg, log);
    case Study::Solve:
      return run_solve(cfg, log);
    case Study::Sweep:
      return run_sweep(cfg, log);
    case Study::StabilityDiagram:
      return run_diagram(cfg, log);
  }
  return kExitFail;
}

}  // namespace vfs::cli
