#include <CLI11.hpp>
#include <iostream>

#include "vfs/errors.hpp"
#include "vfs/studies.hpp"

int main(int argc, char** argv) {
  CLI::App app{"vfs: symbol certificates and front solver for the linearized vortex-sheet problem"};
  app.require_subcommand(1);

  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  for (const auto* name : {"certify", "roots", "solve", "sweep", "diagram"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "INI run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides [run] output_dir)");
    sub->add_option("--seed", seed, "sampling seed (overrides [run] seed)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? vfs::cli::kExitPass : vfs::cli::kExitConfig;
  }

  try {
    const auto study = vfs::cli::parse_study(app.get_subcommands().front()->get_name());
    auto cfg = vfs::cli::load_config(config, study);
    if (out) cfg.output_dir = *out;
    if (seed) cfg.seed = *seed;
    return vfs::cli::run(cfg, std::cout);
  } catch (const vfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return vfs::cli::kExitConfig;
  } catch (const vfs::RegimeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return vfs::cli::kExitConfig;
  } catch (const vfs::Error& e) {
    std::cerr << "FAIL: " << e.what() << '\n';
    return vfs::cli::kExitFail;
  }
}
