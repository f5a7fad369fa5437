#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "membrane/runner.hpp"

int main(int argc, char **argv) {
  CLI::App app{"membrane relaxation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  membrane::RunOptions opt;
  long long seed = -1;

  CLI::App *run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", config_path, "path to the JSON run configuration")
      ->required();
  run->add_option("--out", opt.out_dir, "output directory for artifacts");
  run->add_option("--seed", seed, "override the configured random seed");
  run->add_option("--threads", opt.threads, "worker hint recorded in the manifest");

  CLI11_PARSE(app, argc, argv);

  if (seed >= 0) opt.seed_override = static_cast<unsigned long long>(seed);

  try {
    const membrane::RunResult res = membrane::run_config_file(config_path, opt);
    std::fputs(res.summary.c_str(), stdout);
    return res.status;
  } catch (const membrane::SchemaError &e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
