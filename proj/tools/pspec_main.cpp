#include "pspec/config.hpp"
#include "pspec/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian eigenvalue and symmetrization experiments on triangle meshes"};
  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  app.add_option("command", command, "mesh | eigen | symmetrize | verify | sweep | oracle")
      ->required()
      ->check(CLI::IsMember({"mesh", "eigen", "symmetrize", "verify", "sweep", "oracle"}));
  app.add_option("--config", config_path, "key = value configuration file")->required();
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed for random batteries");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  pspec::RunConfig cfg;
  try {
    cfg = pspec::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << "\n";
    return 2;
  }
  if (cfg.command != command) {
    std::cerr << "error: command '" << command << "' does not match config command '" << cfg.command << "'\n";
    return 2;
  }
  if (*out_opt) cfg.out_dir = out_dir;
  if (*seed_opt) cfg.seed = seed;
  return pspec::run(cfg, std::cout, std::cerr);
}
