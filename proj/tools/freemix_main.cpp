#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "freemix/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"freemix: quantum Markov mixing classification and free-shift "
               "norm-decay experiments"};
  app.require_subcommand(1);

  std::string run_config_path;
  std::optional<std::string> out_dir;
  CLI::App* run = app.add_subcommand("run", "run the experiments in a config");
  run->add_option("config", run_config_path, "JSON configuration file")
      ->required();
  std::string out_value;
  CLI::Option* out_opt =
      run->add_option("--out", out_value, "output directory for CSV files");

  std::string validate_config_path;
  CLI::App* validate =
      app.add_subcommand("validate", "parse a config and validate its objects");
  validate->add_option("config", validate_config_path, "JSON configuration file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const freemix::ExperimentConfig config =
          freemix::load_config(run_config_path);
      if (out_opt->count() > 0) out_dir = out_value;
      return freemix::run_experiments(
          config, freemix::resolve_out_dir(config, out_dir));
    }
    const freemix::ExperimentConfig config =
        freemix::load_config(validate_config_path);
    return freemix::validate_experiments(config);
  } catch (const freemix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const freemix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
