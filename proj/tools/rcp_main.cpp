#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rcp/cli/config.hpp"
#include "rcp/cli/csv.hpp"
#include "rcp/cli/experiments.hpp"
#include "rcp/graphical/dump.hpp"

namespace {

int fail(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
  } catch (...) {
    std::cerr << "error: unknown failure\n";
  }
  return rcp::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renewal contact process simulator and numerics toolkit"};
  app.set_version_flag("--version", rcp::provenance());
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--seed", seed, "Master seed; overrides RCP_SEED and the config");
  app.add_option("--workers", workers, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "Output directory");

  auto* replay = app.add_subcommand("replay", "Re-run a command on a sample dump");
  std::string dump_path;
  std::string command = "evolve";
  replay->add_option("--dump", dump_path, "Sample dump (.rcpg)")->required();
  replay->add_option("--command", command, "evolve or crossing")->check(CLI::IsMember({"evolve", "crossing"}));
  replay->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay->parsed()) {
      const rcp::GraphicalSample sample = rcp::read_sample_dump(dump_path);
      const std::string csv = rcp::replay_csv(sample, command);
      std::filesystem::create_directories(out_dir);
      const std::string stem = std::filesystem::path(dump_path).stem().string();
      const std::string path = (std::filesystem::path(out_dir) / (stem + "_" + command + ".csv")).string();
      rcp::write_atomic(path, csv);
      std::cout << path << "\n";
      return 0;
    }
    if (config_path.empty()) {
      std::cerr << "error: --config is required\n";
      return 2;
    }
    rcp::ExperimentConfig cfg = rcp::load_config(config_path);
    rcp::apply_seed_overrides(cfg, seed);
    if (workers) cfg.workers = *workers;
    const rcp::ExperimentOutput out = rcp::run_experiment(cfg);
    rcp::write_outputs(cfg, out, out_dir);
    std::cout << (std::filesystem::path(out_dir) / (cfg.output + ".csv")).string() << "\n";
    return 0;
  } catch (...) {
    return fail(std::current_exception());
  }
}
