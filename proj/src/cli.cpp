#include "edgesplit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "edgesplit/errors.hpp"
#include "edgesplit/experiment.hpp"

namespace edgesplit {

namespace {

struct RunArgs {
  std::string scenario;
  std::string out_dir = "edgesplit-out";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> budget;
  std::optional<int> reps;
  bool loopback = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("scenario", args.scenario, "scenario document (JSON)")->required();
  cmd->add_option("--out", args.out_dir, "directory for windows.csv, summary.csv and comparison.txt")
      ->capture_default_str();
  cmd->add_option("--seed", args.seed, "override experiment.seed");
  cmd->add_option("--budget", args.budget, "override experiment.budget (inferences per strategy)");
  cmd->add_option("--reps", args.reps, "override experiment.repetitions");
  cmd->add_flag("--loopback", args.loopback, "probe links through a localhost loopback server");
}

int do_run(const RunArgs& args, bool force_compare, std::ostream& out) {
  ScenarioConfig cfg = load_scenario_file(args.scenario);
  if (force_compare) cfg.experiment.mode = ExperimentMode::compare;
  if (args.seed) cfg.experiment.seed = *args.seed;
  if (args.budget) cfg.experiment.budget = *args.budget;
  if (args.reps) cfg.experiment.repetitions = *args.reps;
  cfg.scheduler.total_budget = cfg.experiment.budget;
  cfg.validate();

  const auto outcome = run_experiment(cfg, RunOptions{args.loopback});
  emit_reports(outcome, args.out_dir);
  out << comparison_text(outcome);
  out << fmt::format("\nreports written to {}\n", args.out_dir);
  return 0;
}

ModelProfile resolve_profile(const std::string& ref) {
  for (const auto& name : preset_profile_names()) {
    if (name == ref) return preset_profile(ref);
  }
  if (!std::filesystem::exists(ref)) {
    throw UnknownFixtureError(fmt::format("'{}' is neither a preset ({}) nor a readable file", ref,
                                          fmt::join(preset_profile_names(), ", ")));
  }
  return load_profile_file(ref);
}

int do_probe_model(const std::string& ref, std::ostream& out) {
  const ModelProfile p = resolve_profile(ref);
  const auto& b = p.activation_bytes();
  const auto& w = p.compute_weights();
  double sum = 0.0;
  for (double x : w) sum += x;
  out << fmt::format("model: {}\n", p.name());
  out << fmt::format("N={}\n", p.feature_count());
  out << fmt::format("sum(W)={:.12f} ({})\n", sum, std::abs(sum - 1.0) <= 1e-9 ? "ok" : "NOT normalized");
  out << fmt::format("{:>5}  {:<24} {:>14} {:>14}\n", "k", "layer", "B[k] bytes", "W[k]");
  for (std::size_t k = 0; k < b.size(); ++k) {
    const std::string name = k < p.layer_names().size() ? p.layer_names()[k] : std::string{};
    out << fmt::format("{:>5}  {:<24} {:>14} {:>14.6g}\n", k, name, b[k], w[k]);
  }
  out << fmt::format("{:>5}  {:<24} {:>14} {:>14.6g}\n", "head", "(classifier)", "-", p.head_weight());
  return 0;
}

int do_validate(const std::string& path, std::ostream& out) {
  const ScenarioConfig cfg = load_scenario_file(path);
  out << fmt::format("ok: {} (model {}, N={}, initial split {}, mode {}, budget {}, repetitions {})\n", cfg.name,
                     cfg.profile.name(), cfg.profile.feature_count(), to_string(cfg.scheduler.initial_split),
                     to_string(cfg.experiment), cfg.experiment.budget, cfg.experiment.repetitions);
  return 0;
}

int do_fixture(const std::string& name, const std::string& out_file, std::ostream& out) {
  const ScenarioFixture fx = name == "link-drop" ? link_drop_scenario() : paper_scenario(name);
  ExperimentSpec spec;
  if (name == "link-drop") spec.mode = ExperimentMode::adaptive;
  const std::string text = to_json(scenario_from_fixture(fx, spec)).dump(2) + "\n";
  if (out_file.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw Error(fmt::format("cannot write {}", out_file));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive edge-fog-cloud DNN split scheduling on a simulated testbed", "edgesplit"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a scenario");
  add_run_options(run_cmd, run_args);

  RunArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "run single-device, static and adaptive strategies");
  add_run_options(compare_cmd, compare_args);

  std::string profile_ref;
  auto* probe_cmd = app.add_subcommand("probe-model", "print a profile's feature count, weight check and sizes");
  probe_cmd->add_option("profile", profile_ref, "preset name or profile file")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario document");
  validate_cmd->add_option("scenario", validate_path, "scenario document (JSON)")->required();

  std::string fixture_name;
  std::string fixture_out;
  auto* fixture_cmd = app.add_subcommand("fixture", "emit the scenario document of a built-in fixture");
  fixture_cmd->add_option("name", fixture_name, "vgg16, alexnet, mobilenetv2 or link-drop")->required();
  fixture_cmd->add_option("--out", fixture_out, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (app.get_subcommands().size() == 1) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return 1;
  }

  try {
    if (*run_cmd) return do_run(run_args, false, out);
    if (*compare_cmd) return do_run(compare_args, true, out);
    if (*probe_cmd) return do_probe_model(profile_ref, out);
    if (*validate_cmd) return do_validate(validate_path, out);
    if (*fixture_cmd) return do_fixture(fixture_name, fixture_out, out);
  } catch (const DocumentError& e) {
    err << "invalid document: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const InvalidModelError& e) {
    err << "invalid model: " << e.what() << "\n";
    return 1;
  } catch (const UnknownFixtureError& e) {
    err << "unknown name: " << e.what() << "\n";
    return 1;
  } catch (const InvalidSplitError& e) {
    err << "invalid split: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace edgesplit
