#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveflow/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-stable finite element evolution of closed planar curves"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "Execute one experiment from a config file");
  run->add_option("--config", config_file, "Flat key = value config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "Override a config key, e.g. --set J=64");

  std::string scheme = "linear";
  int levels = 5;
  std::string converge_dir = "converge_out";
  CLI::App* converge =
      app.add_subcommand("converge", "Expanding-circle convergence ladder with verdict");
  converge->add_option("--scheme", scheme, "linear or nonlinear")
      ->check(CLI::IsMember({"linear", "nonlinear"}));
  converge->add_option("--levels", levels, "Number of refinement levels")->required();
  converge->add_option("--output-dir", converge_dir, "Artifact directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      curveflow::RunConfig config = curveflow::parse_run_config(config_file);
      for (const std::string& kv : overrides) curveflow::apply_override(config, kv);
      return curveflow::cmd_run(std::move(config));
    }
    curveflow::ConvergeOptions options;
    options.scheme = curveflow::variant_from_string(scheme);
    options.levels = levels;
    options.output_dir = converge_dir;
    return curveflow::cmd_converge(options);
  } catch (const curveflow::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
