#include "transducer/errors.hpp"
#include "transducer/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid optical/microwave/REDC/NV transducer simulator"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  transducer::RunOverrides overrides;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--dt", overrides.dt, "Integrator step in units of 1/g");
    cmd->add_option("--sample-every", overrides.sample_every, "Sampling interval; 0 keeps every step");
  };

  auto* list = app.add_subcommand("list-presets", "Print the built-in scenario names");

  std::string preset_name;
  auto* run_preset = app.add_subcommand("run-preset", "Run a built-in scenario");
  run_preset->add_option("name", preset_name, "Preset name")->required();
  add_common(run_preset);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  add_common(run);

  std::string sweep_config, key_path;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Vary one numeric field of a scenario file");
  sweep->add_option("config", sweep_config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", key_path, "Dotted key path, e.g. channels.gamma_c")->required();
  sweep->add_option("--values", values, "Comma separated values")->required()->delimiter(',');
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& name : transducer::preset_names()) std::cout << name << '\n';
    } else if (*run_preset) {
      report(transducer::run_preset(preset_name, out_dir, overrides));
    } else if (*run) {
      report(transducer::run_config(config_path, out_dir, overrides));
    } else if (*sweep) {
      std::cout << transducer::run_sweep(sweep_config, key_path, values, out_dir, overrides).string() << '\n';
    }
  } catch (const transducer::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const transducer::OutputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const transducer::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
