// Command-line front end: nfrad --config run.ini [--mode M] [--out DIR] [--threads N] [--tolerance R]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nfrad/nfrad.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Near-field radiative energy and momentum transfer"};
  std::string config_path, mode_name, out_dir;
  unsigned threads = 0;
  double tolerance = 0.0;
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--mode", mode_name, "override [output] mode");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", tolerance, "relative tolerance")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(nfrad::kVersion));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nfrad::kExitConfig;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "nfrad: cannot read config '" << config_path << "'\n";
    return nfrad::kExitConfig;
  }
  std::ostringstream text;
  text << in.rdbuf();

  std::optional<nfrad::Mode> mode;
  if (!mode_name.empty()) {
    mode = nfrad::parse_mode(mode_name);
    if (!mode) {
      std::cerr << "nfrad: unknown mode '" << mode_name << "'\n";
      return nfrad::kExitConfig;
    }
  }

  nfrad::RunConfig cfg;
  try {
    const auto base = std::filesystem::path(config_path).parent_path();
    cfg = nfrad::parse_config(text.str(), base.empty() ? "." : base, mode);
  } catch (const nfrad::ConfigError& e) {
    std::cerr << config_path << ": configuration error\n" << e.what() << '\n';
    return nfrad::kExitConfig;
  }

  // Overrides that change results are part of the hashed configuration.
  std::string effective = text.str();
  if (mode) effective += "\n#--mode " + mode_name;
  if (tolerance > 0.0) {
    cfg.integration.relative = tolerance;
    effective += "\n#--tolerance " + nfrad::sci(tolerance);
  }
  if (threads > 0) cfg.integration.threads = threads;
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  try {
    const auto result = nfrad::run(cfg, "fnv1a64:" + nfrad::hex64(nfrad::fnv1a64(effective)));
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "nfrad: " << e.what() << '\n';
    return nfrad::kExitRuntime;
  }
}
