#include "vfs/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "vfs/errors.hpp"

namespace vfs {

namespace {

constexpr std::size_t kHeaderBytes = 3 * 4 + 4 * 8;

template <class U>
void put_le(std::string& out, U value) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

template <class U>
U get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(U) > in.size()) throw ConfigError("binary file truncated");
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    value |= static_cast<U>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  }
  pos += sizeof(U);
  return value;
}

void put_f32(std::string& out, double x) { put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(x))); }
void put_f64(std::string& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }
double get_f32(const std::string& in, std::size_t& pos) {
  return std::bit_cast<float>(get_le<std::uint32_t>(in, pos));
}
double get_f64(const std::string& in, std::size_t& pos) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in, pos));
}

void put_header(std::string& out, const GridSpec& grid) {
  put_le(out, static_cast<std::uint32_t>(grid.nt));
  put_le(out, static_cast<std::uint32_t>(grid.nx));
  put_le(out, static_cast<std::uint32_t>(grid.ny));
  put_f64(out, grid.Lt);
  put_f64(out, grid.Lx);
  put_f64(out, grid.Ly);
  put_f64(out, grid.gamma);
}

GridSpec get_header(const std::string& in, std::size_t& pos) {
  GridSpec grid;
  grid.nt = get_le<std::uint32_t>(in, pos);
  grid.nx = get_le<std::uint32_t>(in, pos);
  grid.ny = get_le<std::uint32_t>(in, pos);
  grid.Lt = get_f64(in, pos);
  grid.Lx = get_f64(in, pos);
  grid.Ly = get_f64(in, pos);
  grid.gamma = get_f64(in, pos);
  grid.validate();
  return grid;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void write_source_binary(const std::filesystem::path& path, const GridSpec& grid, std::span<const cplx> values) {
  if (values.size() != grid.plane_size() * grid.ny) throw DimensionMismatch("source does not match the grid");
  std::string bytes;
  bytes.reserve(kHeaderBytes + 8 * values.size());
  put_header(bytes, grid);
  for (const auto& z : values) {
    put_f32(bytes, z.real());
    put_f32(bytes, z.imag());
  }
  dump(path, bytes);
}

RawSource read_source_binary(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  std::size_t pos = 0;
  RawSource src{get_header(bytes, pos), {}};
  const std::size_t n = src.grid.plane_size() * src.grid.ny;
  if (bytes.size() != kHeaderBytes + 8 * n) {
    std::ostringstream msg;
    msg << path.string() << ": expected " << kHeaderBytes + 8 * n << " bytes for the header grid, found "
        << bytes.size();
    throw ConfigError(msg.str());
  }
  src.values.resize(n);
  for (auto& z : src.values) {
    const double re = get_f32(bytes, pos);
    z = {re, get_f32(bytes, pos)};
  }
  return src;
}

void write_source_csv(const std::filesystem::path& path, const GridSpec& grid, std::span<const cplx> values) {
  if (values.size() != grid.plane_size() * grid.ny) throw DimensionMismatch("source does not match the grid");
  std::ostringstream out;
  out.precision(17);
  out << "it,ix,iq,re,im\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == cplx{}) continue;
    const std::size_t q = i % grid.ny;
    const std::size_t l = (i / grid.ny) % grid.nx;
    const std::size_t j = i / (grid.ny * grid.nx);
    out << j << ',' << l << ',' << q << ',' << values[i].real() << ',' << values[i].imag() << '\n';
  }
  dump(path, out.str());
}

std::vector<cplx> read_source_csv(const std::filesystem::path& path, const GridSpec& grid) {
  std::istringstream in(slurp(path));
  std::vector<cplx> values(grid.plane_size() * grid.ny);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("it", 0) == 0)) continue;
    std::istringstream row(line);
    long j = -1, l = -1, q = -1;
    double re = 0.0, im = 0.0;
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (!(row >> j >> c1 >> l >> c2 >> q >> c3 >> re >> c4 >> im) || c1 != ',' || c2 != ',' || c3 != ',' ||
        c4 != ',') {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected it,ix,iq,re,im");
    }
    if (j < 0 || l < 0 || q < 0 || static_cast<std::size_t>(j) >= grid.nt || static_cast<std::size_t>(l) >= grid.nx ||
        static_cast<std::size_t>(q) >= grid.ny) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": index outside the grid");
    }
    values[(static_cast<std::size_t>(j) * grid.nx + static_cast<std::size_t>(l)) * grid.ny +
           static_cast<std::size_t>(q)] = {re, im};
  }
  return values;
}

void write_solution_binary(const std::filesystem::path& path, const FrontSolution& solution) {
  std::string bytes;
  put_header(bytes, solution.grid);
  for (const auto* arr : {&solution.fhat, &solution.f}) {
    for (const auto& z : *arr) {
      put_f64(bytes, z.real());
      put_f64(bytes, z.imag());
    }
  }
  dump(path, bytes);
}

FrontSolution read_solution_binary(const std::filesystem::path& path, const PhysicalParams& params) {
  const auto bytes = slurp(path);
  std::size_t pos = 0;
  FrontSolution sol;
  sol.grid = get_header(bytes, pos);
  sol.params = params;
  sol.regime = params.regime();
  const std::size_t n = sol.grid.plane_size();
  if (bytes.size() != kHeaderBytes + 32 * n) throw ConfigError(path.string() + ": size does not match its header");
  for (auto* arr : {&sol.fhat, &sol.f}) {
    arr->resize(n);
    for (auto& z : *arr) {
      const double re = get_f64(bytes, pos);
      z = {re, get_f64(bytes, pos)};
    }
  }
  return sol;
}

nlohmann::ordered_json to_json(const GridSpec& grid) {
  return {{"nt", grid.nt}, {"nx", grid.nx}, {"ny", grid.ny}, {"Lt", grid.Lt},
          {"Lx", grid.Lx}, {"Ly", grid.Ly}, {"gamma", grid.gamma}};
}

nlohmann::ordered_json to_json(const PhysicalParams& params) {
  return {{"v", params.v()}, {"c", params.c()}, {"mach", params.mach()}, {"regime", to_string(params.regime())}};
}

nlohmann::ordered_json to_json(const BoundCertificate& certificate) {
  nlohmann::ordered_json doc{{"ratio_name", certificate.ratio_name},
                             {"empirical_min", certificate.empirical_min},
                             {"empirical_max", certificate.empirical_max},
                             {"sample_size", certificate.sample_size},
                             {"gamma_floor", certificate.gamma_floor},
                             {"mach", certificate.params.mach()},
                             {"pass", certificate.pass},
                             {"homogeneity_ok", certificate.homogeneity_ok}};
  auto details = nlohmann::ordered_json::array();
  for (const auto& d : certificate.details) {
    nlohmann::ordered_json item{{"name", d.name}, {"min", d.min}, {"max", d.max}, {"count", d.count},
                                {"pass", d.pass}};
    if (!d.note.empty()) item["note"] = d.note;
    details.push_back(std::move(item));
  }
  doc["details"] = std::move(details);
  return doc;
}

nlohmann::ordered_json to_json(const FrontSolution& solution) {
  nlohmann::ordered_json norms = nlohmann::ordered_json::object();
  for (const auto& [key, value] : solution.norms) norms[norm_label(key)] = value;
  nlohmann::ordered_json doc{{"s", solution.s},
                             {"regime", to_string(solution.regime)},
                             {"params", to_json(solution.params)},
                             {"grid", to_json(solution.grid)},
                             {"norms", std::move(norms)},
                             {"g_norm", solution.g_norm}};
  if (solution.estimate_ratio) {
    doc["estimate_ratio"] = *solution.estimate_ratio;
  } else {
    doc["estimate_ratio"] = nullptr;
  }
  return doc;
}

nlohmann::ordered_json to_json(const EstimateSweep& sweep) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"gamma", r.gamma},
                    {"source_norm_sq", r.source_norm_sq},
                    {"g_norm_sq", r.g_norm_sq},
                    {"f_aniso_sq", r.f_aniso_sq},
                    {"f_plain_sq", r.f_plain_sq},
                    {"ratio_front", r.ratio_front},
                    {"ratio_g", r.ratio_g},
                    {"ratio_plain", r.ratio_plain}});
  }
  return {{"slack", sweep.slack},
          {"front_applicable", sweep.front_applicable},
          {"front_bounded", sweep.front_bounded},
          {"g_bounded", sweep.g_bounded},
          {"plain_bounded", sweep.plain_bounded},
          {"pass", sweep.pass},
          {"rows", std::move(rows)}};
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  dump(path, doc.dump(2) + "\n");
}

}  // namespace vfs
