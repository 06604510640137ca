#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pdrelax/errors.hpp"
#include "pdrelax/provenance.hpp"

using namespace pdrelax;
using namespace pdrelax::cli;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runner for the relaxed pressure-dependent plasticity experiments"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", energy;
  std::uint64_t seed = 0;
  int refine = 0;
  RunOptions opt;
  opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const std::vector<std::pair<std::string, std::string>> commands{
      {"envelope", "compare the closed-form envelope with the sampled convex hull"},
      {"fem1d", "bar experiments over the four regimes with both energies"},
      {"point3d", "material point strain paths through the regions"},
      {"plate", "plate with a hole under compression on a coarse/fine mesh pair"},
  };
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, CLI::Option*> seed_opt, refine_opt, energy_opt;
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "JSON config (defaults are used when omitted)")->check(CLI::ExistingFile);
    s->add_option("--out", out_dir, "output directory")->capture_default_str();
    seed_opt[name] = s->add_option("--seed", seed, "seed override");
    refine_opt[name] = s->add_option("--refine", refine, "refinement level");
    energy_opt[name] = s->add_option("--energy", energy, "energy kind")->check(CLI::IsMember({"condensed", "relaxed"}));
    s->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    s->add_flag("--quiet", opt.quiet, "no progress lines on stdout");
    subs[name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  std::string command;
  for (const auto& [name, s] : subs)
    if (s->parsed()) command = name;

  try {
    json raw = config_path.empty() ? json::object() : read_json_file(config_path);
    Overrides over;
    if (seed_opt[command]->count()) over.seed = seed;
    if (refine_opt[command]->count()) over.refine = refine;
    if (energy_opt[command]->count()) over.energy = energy;
    std::string config_dir =
        config_path.empty() ? "." : std::filesystem::path(config_path).parent_path().string();
    if (config_dir.empty()) config_dir = ".";
    RunConfig rc = load_config(command, raw, out_dir, over, config_dir);
    if (command == "envelope") return cmd_envelope(rc, opt);
    if (command == "fem1d") return cmd_fem1d(rc, opt);
    if (command == "point3d") return cmd_point3d(rc, opt);
    return cmd_plate(rc, opt);
  } catch (const ConfigError& e) {
    write_failure_report(out_dir, command, kConfig, "config_error", e.what());
    return kConfig;
  } catch (const NoConvergence& e) {
    write_failure_report(out_dir, command, kConvergence, "convergence_failure", e.what());
    return kConvergence;
  } catch (const std::exception& e) {
    write_failure_report(out_dir, command, kInternal, "internal_error", e.what());
    return kInternal;
  }
}
