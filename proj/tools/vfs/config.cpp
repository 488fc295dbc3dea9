#include "vfs/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "vfs/errors.hpp"

namespace vfs::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"physics", {"mach", "v", "c"}},
      {"sample",
       {"n", "strategy", "gamma_floor", "near_root_radius", "explosion_threshold", "limit_radius", "limit_spread"}},
      {"simple_root", {"enabled", "radius", "points", "band_limit", "stability"}},
      {"heatmap", {"enabled", "n_delta", "n_eta", "delta_max", "eta_max", "gamma"}},
      {"roots", {"tolerance"}},
      {"grid", {"nt", "nx", "ny", "Lt", "Lx", "Ly", "gamma"}},
      {"source",
       {"kind", "plus_file", "minus_file", "amplitude_plus", "amplitude_minus", "t0", "x0", "y0", "rt", "rx", "ry"}},
      {"solve", {"s", "tail_tolerance", "decay_tolerance", "symbol_floor", "pressure_modes", "residual_tolerance"}},
      {"sweep", {"gammas", "slack"}},
      {"diagram", {"mach_min", "mach_max", "step"}},
      {"run", {"output_dir", "seed"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(pt::ptree tree) : tree_(std::move(tree)) {}

  [[nodiscard]] bool has(const std::string& section) const { return tree_.get_child_optional(section).has_value(); }

  template <class T>
  void read(const std::string& section, const std::string& key, T& out) const {
    const auto node = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    if (!node) return;
    out = convert<T>(section, key, *node);
  }

  template <class T>
  T convert(const std::string& section, const std::string& key, const std::string& text) const {
    const auto fail = [&](std::string_view expected) {
      std::ostringstream msg;
      msg << "[" << section << "] " << key << " = '" << text << "': expected " << expected;
      return ConfigError(msg.str());
    };
    if constexpr (std::is_same_v<T, std::string> || std::is_same_v<T, std::filesystem::path>) {
      return T(text);
    } else if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      throw fail("true or false");
    } else {
      T value{};
      const char* first = text.data();
      const char* last = text.data() + text.size();
      if constexpr (std::is_unsigned_v<T>) {
        if (!text.empty() && text.front() == '-') throw fail("a non-negative integer");
      }
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) throw fail(std::is_integral_v<T> ? "an integer" : "a number");
      return value;
    }
  }

  [[nodiscard]] std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto node = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    if (!node) return std::nullopt;
    return *node;
  }

  void check_keys() const {
    for (const auto& [section, child] : tree_) {
      const auto it = schema().find(section);
      if (it == schema().end()) {
        if (child.data().empty() && child.empty()) continue;
        throw ConfigError("unknown section [" + section + "]");
      }
      for (const auto& [key, value] : child) {
        if (!it->second.contains(key)) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      }
    }
  }

 private:
  pt::ptree tree_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_section(const Reader& r, const std::string& section, Study study) {
  if (!r.has(section)) {
    throw ConfigError("study '" + std::string(to_string(study)) + "' needs a [" + section +
                      "] section with at least one key");
  }
}

}  // namespace

std::string_view to_string(Study study) {
  switch (study) {
    case Study::Certify:
      return "certify";
    case Study::Roots:
      return "roots";
    case Study::Solve:
      return "solve";
    case Study::Sweep:
      return "sweep";
    case Study::StabilityDiagram:
      return "diagram";
  }
  return "unknown";
}

Study parse_study(std::string_view name) {
  for (const auto s : {Study::Certify, Study::Roots, Study::Solve, Study::Sweep, Study::StabilityDiagram}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown study '" + std::string(name) + "' (certify, roots, solve, sweep, diagram)");
}

RunConfig load_config(const std::filesystem::path& path, Study study) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  const Reader r(std::move(tree));
  r.check_keys();

  RunConfig cfg;
  cfg.study = study;
  const auto base = path.parent_path();

  if (study != Study::StabilityDiagram) require_section(r, "physics", study);
  double c = 1.0;
  r.read("physics", "c", c);
  require(c > 0.0, "[physics] c must be positive");
  const auto mach = r.raw("physics", "mach");
  const auto v_text = r.raw("physics", "v");
  if (mach && v_text) throw ConfigError("[physics] give either mach or v, not both");
  if (mach || v_text) {
    double v = 0.0;
    if (mach) {
      v = r.convert<double>("physics", "mach", *mach) * c;
    } else {
      v = r.convert<double>("physics", "v", *v_text);
    }
    require(v > 0.0, "[physics] mach (or v) must be positive");
    cfg.params = PhysicalParams(v, c);
  } else if (study != Study::StabilityDiagram) {
    throw ConfigError("[physics] needs mach or v");
  } else {
    cfg.params = PhysicalParams(2.0 * c, c);
  }

  auto& smp = cfg.sample;
  if (study == Study::Certify) require_section(r, "sample", study);
  r.read("sample", "n", smp.n);
  if (const auto s = r.raw("sample", "strategy")) smp.strategy = parse_strategy(*s);
  r.read("sample", "gamma_floor", smp.gamma_floor);
  r.read("sample", "near_root_radius", smp.near_root_radius);
  r.read("sample", "explosion_threshold", smp.explosion_threshold);
  r.read("sample", "limit_radius", smp.limit_radius);
  r.read("sample", "limit_spread", smp.limit_spread);
  require(smp.n >= 1, "[sample] n must be at least 1");
  require(smp.gamma_floor >= 0.0 && smp.gamma_floor < 1.0, "[sample] gamma_floor must lie in [0, 1)");
  require(smp.near_root_radius > 0.0, "[sample] near_root_radius must be positive");
  require(smp.explosion_threshold > 1.0, "[sample] explosion_threshold must exceed 1");

  auto& sr = cfg.simple_root;
  r.read("simple_root", "enabled", sr.enabled);
  r.read("simple_root", "radius", sr.radius);
  r.read("simple_root", "points", sr.points);
  r.read("simple_root", "band_limit", sr.band_limit);
  r.read("simple_root", "stability", sr.stability);
  require(sr.radius > 0.0 && sr.radius < 0.1, "[simple_root] radius must lie in (0, 0.1)");
  require(sr.points >= 8, "[simple_root] points must be at least 8");

  auto& hm = cfg.heatmap;
  r.read("heatmap", "enabled", hm.enabled);
  r.read("heatmap", "n_delta", hm.n_delta);
  r.read("heatmap", "n_eta", hm.n_eta);
  r.read("heatmap", "delta_max", hm.delta_max);
  r.read("heatmap", "eta_max", hm.eta_max);
  r.read("heatmap", "gamma", hm.gamma);
  require(hm.n_delta >= 1 && hm.n_eta >= 1, "[heatmap] n_delta and n_eta must be positive");
  require(hm.gamma >= 0.0, "[heatmap] gamma must be non-negative");

  r.read("roots", "tolerance", cfg.roots.tolerance);
  require(cfg.roots.tolerance > 0.0, "[roots] tolerance must be positive");

  if (study == Study::Solve || study == Study::Sweep) {
    require_section(r, "grid", study);
    require_section(r, "source", study);
  }
  if (r.has("grid")) {
    GridSpec g;
    r.read("grid", "nt", g.nt);
    r.read("grid", "nx", g.nx);
    r.read("grid", "ny", g.ny);
    r.read("grid", "Lt", g.Lt);
    r.read("grid", "Lx", g.Lx);
    r.read("grid", "Ly", g.Ly);
    r.read("grid", "gamma", g.gamma);
    g.validate();
    cfg.grid = g;
  }

  auto& src = cfg.source;
  r.read("source", "kind", src.kind);
  require(src.kind == "bump" || src.kind == "file", "[source] kind must be 'bump' or 'file'");
  r.read("source", "plus_file", src.plus_file);
  r.read("source", "minus_file", src.minus_file);
  if (src.kind == "file") {
    require(!src.plus_file.empty() && !src.minus_file.empty(), "[source] kind = file needs plus_file and minus_file");
    if (src.plus_file.is_relative()) src.plus_file = base / src.plus_file;
    if (src.minus_file.is_relative()) src.minus_file = base / src.minus_file;
  }
  auto& b = src.bump;
  r.read("source", "amplitude_plus", b.amplitude_plus);
  r.read("source", "amplitude_minus", b.amplitude_minus);
  r.read("source", "t0", b.t0);
  r.read("source", "x0", b.x0);
  r.read("source", "y0", b.y0);
  r.read("source", "rt", b.rt);
  r.read("source", "rx", b.rx);
  r.read("source", "ry", b.ry);
  require(b.rt > 0.0 && b.rx > 0.0 && b.ry > 0.0, "[source] bump radii rt, rx, ry must be positive");

  auto& sv = cfg.solve;
  r.read("solve", "s", sv.s);
  r.read("solve", "tail_tolerance", sv.solver.tail_tolerance);
  r.read("solve", "decay_tolerance", sv.solver.decay_tolerance);
  r.read("solve", "symbol_floor", sv.solver.symbol_floor);
  r.read("solve", "residual_tolerance", sv.residual_tolerance);
  if (const auto modes = r.raw("solve", "pressure_modes")) {
    sv.pressure_modes.clear();
    for (const auto& item : split_list(*modes)) {
      const auto colon = item.find(':');
      require(colon != std::string::npos, "[solve] pressure_modes entries look like k:m (got '" + item + "')");
      sv.pressure_modes.emplace_back(r.convert<long>("solve", "pressure_modes", item.substr(0, colon)),
                                     r.convert<long>("solve", "pressure_modes", item.substr(colon + 1)));
    }
  }

  if (const auto gammas = r.raw("sweep", "gammas")) {
    cfg.sweep.gammas.clear();
    for (const auto& item : split_list(*gammas)) cfg.sweep.gammas.push_back(r.convert<double>("sweep", "gammas", item));
  }
  r.read("sweep", "slack", cfg.sweep.slack);
  require(!cfg.sweep.gammas.empty(), "[sweep] gammas must not be empty");
  for (const double g : cfg.sweep.gammas) require(g >= 1.0, "[sweep] every gamma must be >= 1");
  require(cfg.sweep.slack >= 0.0, "[sweep] slack must be non-negative");

  if (study == Study::StabilityDiagram) require_section(r, "diagram", study);
  r.read("diagram", "mach_min", cfg.diagram.mach_min);
  r.read("diagram", "mach_max", cfg.diagram.mach_max);
  r.read("diagram", "step", cfg.diagram.step);
  require(cfg.diagram.mach_min > 0.0 && cfg.diagram.mach_max >= cfg.diagram.mach_min,
          "[diagram] need 0 < mach_min <= mach_max");
  require(cfg.diagram.step > 0.0, "[diagram] step must be positive");

  r.read("run", "output_dir", cfg.output_dir);
  r.read("run", "seed", cfg.seed);
  return cfg;
}

}  // namespace vfs::cli
