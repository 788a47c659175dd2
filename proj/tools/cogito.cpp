#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "cogito/cli.hpp"
#include "cogito/error.hpp"
#include "cogito/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cogito: autonomous thinking loop"};
  app.require_subcommand(1);

  cogito::CliOptions options;
  std::string out_dir = "out";
  std::string backend;
  std::int64_t max_cycles = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;

  const std::map<std::string, cogito::BackendMode> modes{{"offline", cogito::BackendMode::offline},
                                                          {"remote", cogito::BackendMode::remote},
                                                          {"fixture", cogito::BackendMode::fixture}};

  auto* run = app.add_subcommand("run", "run the thinking loop and write its artifacts");
  run->add_option("--scenario", options.scenario_path, "scenario JSON file")->required();
  auto* backend_opt = run->add_option("--backend", backend, "offline, remote or fixture")
                          ->check(CLI::IsMember({"offline", "remote", "fixture"}));
  run->add_option("--out-dir", out_dir, "output directory");
  auto* cycles_opt = run->add_option("--max-cycles", max_cycles, "override max_cycles");
  auto* seed_opt = run->add_option("--seed", seed, "override the run seed");
  auto* sigma_opt = run->add_option("--sigma", sigma, "override the sketch blur sigma");
  run->add_flag("--save-color", options.save_color, "also write the colour images as PPM");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a scenario file and list violations");
  validate->add_option("scenario", validate_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cogito::kExitOk : cogito::kExitUsage;
  }

  if (*validate) {
    try {
      const auto report = cogito::validate_scenario(cogito::load_scenario(validate_path));
      for (const auto& v : report) std::cerr << "violation: " << v.field << ": " << v.message << "\n";
      if (!report.empty()) return cogito::kExitValidation;
      std::cout << "ok\n";
      return cogito::kExitOk;
    } catch (const cogito::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cogito::kExitValidation;
    }
  }

  options.out_dir = out_dir;
  if (*backend_opt) options.backend = modes.at(backend);
  if (*cycles_opt) options.max_cycles = max_cycles;
  if (*seed_opt) options.seed = seed;
  if (*sigma_opt) options.sigma = sigma;
  return cogito::run(options, std::cout, std::cerr);
}
