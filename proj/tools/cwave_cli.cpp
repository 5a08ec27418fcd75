// cwave: run characteristic-coordinate wave experiments from a JSON config.
//
//   cwave <solve|slice|singularities|metric|lipschitz|bounds> --config FILE [--out DIR]
//         [--threads N] [--seed S]
//
// Exit status: 0 ok, 2 configuration error, 3 solver failure.

#include "cwave/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative solutions of u_tt - c(u)(c(u) u_x)_x = 0 and their Finsler path lengths"};
  app.set_version_flag("--version", CWAVE_VERSION);
  std::string config_file, out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;

  app.require_subcommand(1);
  for (const auto& kind : cwave::kExperimentKinds) {
    auto* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    sub->add_option("--config", config_file, "experiment config (JSON), or a manifest.json to re-run")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: the config's directory/out)");
    sub->add_option("--threads", threads, "worker threads for chart marches")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized suites");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  cwave::ExperimentConfig cfg;
  try {
    const std::filesystem::path file = std::filesystem::absolute(config_file);
    cwave::Json j = cwave::read_json(file);
    if (j.contains("program") && j.contains("config")) j = j.at("config");
    if (!j.contains("kind")) j["kind"] = kind;
    if (j.at("kind") != kind)
      throw cwave::ConfigError("config is for '" + j.at("kind").get<std::string>() + "', not '" + kind + "'");
    if (threads > 0) j["threads"] = threads;
    if (seed) j["seed"] = *seed;
    cfg = cwave::parse_config(j, file.parent_path());
    cfg.out = out_dir.empty() ? file.parent_path() / "out" : std::filesystem::path(out_dir);
  } catch (const cwave::Error& e) {
    std::cerr << "cwave: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "cwave: config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto res = cwave::run_experiment(cfg);
    for (const auto& f : res.files) std::cout << f.string() << '\n';
  } catch (const cwave::SolverError& e) {
    std::cerr << "cwave: solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const cwave::ConfigError& e) {
    std::cerr << "cwave: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cwave::DomainError& e) {
    std::cerr << "cwave: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "cwave: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
