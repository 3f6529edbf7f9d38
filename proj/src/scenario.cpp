#include "edgesplit/scenario.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "edgesplit/errors.hpp"
#include "json_util.hpp"

namespace edgesplit {

using nlohmann::json;
using detail::get_integer;
using detail::get_number;
using detail::join_path;

std::string to_string(const ExperimentSpec& spec) {
  switch (spec.mode) {
    case ExperimentMode::single_device: return fmt::format("single-device:{}", to_string(spec.single_device_tier));
    case ExperimentMode::static_split: return "static";
    case ExperimentMode::adaptive: return "adaptive";
    case ExperimentMode::compare: return "compare";
  }
  return "?";
}

namespace {

// Runs `fn`, re-raising library validation errors as DocumentError at `path`.
template <class Fn>
void at_path(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    throw DocumentError(path, e.what());
  }
}

int get_count(const json& obj, const std::string& path, std::string_view key, int fallback) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return fallback;
  const auto where = join_path(path, std::string(key));
  const auto v = get_integer(*it, where);
  if (v < 0 || v > 1'000'000'000) throw DocumentError(where, fmt::format("count out of range: {}", v));
  return static_cast<int>(v);
}

double get_number_or(const json& obj, const std::string& path, std::string_view key, double fallback) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return fallback;
  return get_number(*it, join_path(path, std::string(key)));
}

Trace parse_trace(const json& obj, const std::string& path) {
  Trace trace;
  auto it = obj.find("trace");
  if (it == obj.end()) return trace;
  const auto t_path = join_path(path, "trace");
  const auto& arr = detail::get_array(*it, t_path);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto p = detail::index_path(t_path, k);
    detail::require_keys(arr[k], p, {"at", "multiplier"});
    TracePoint tp;
    tp.effective_from_s = get_number(detail::require_field(arr[k], p, "at"), join_path(p, "at"));
    tp.multiplier = get_number(detail::require_field(arr[k], p, "multiplier"), join_path(p, "multiplier"));
    if (!(tp.multiplier > 0.0)) throw DocumentError(join_path(p, "multiplier"), "must be > 0");
    if (k > 0 && !(tp.effective_from_s > trace.back().effective_from_s)) {
      throw DocumentError(join_path(p, "at"), "trace timestamps must be strictly increasing");
    }
    trace.push_back(tp);
  }
  return trace;
}

NodeSpec parse_node(const json& obj, const std::string& path) {
  detail::require_keys(obj, path, {"seconds_per_work", "power_w", "trace"});
  NodeSpec n;
  n.seconds_per_work =
      get_number(detail::require_field(obj, path, "seconds_per_work"), join_path(path, "seconds_per_work"));
  if (!(n.seconds_per_work > 0.0)) throw DocumentError(join_path(path, "seconds_per_work"), "must be > 0");
  n.power_w = get_number(detail::require_field(obj, path, "power_w"), join_path(path, "power_w"));
  if (!(n.power_w > 0.0)) throw DocumentError(join_path(path, "power_w"), "must be > 0");
  n.trace = parse_trace(obj, path);
  return n;
}

HopSpec parse_hop(const json& obj, const std::string& path) {
  detail::require_keys(obj, path, {"overhead_s", "throughput_bps", "trace"});
  HopSpec h;
  h.overhead_s = get_number(detail::require_field(obj, path, "overhead_s"), join_path(path, "overhead_s"));
  if (!(h.overhead_s >= 0.0)) throw DocumentError(join_path(path, "overhead_s"), "must be >= 0");
  h.throughput_bps =
      get_number(detail::require_field(obj, path, "throughput_bps"), join_path(path, "throughput_bps"));
  if (!(h.throughput_bps > 0.0)) throw DocumentError(join_path(path, "throughput_bps"), "must be > 0");
  h.trace = parse_trace(obj, path);
  return h;
}

Split parse_split(const json& value, const std::string& path) {
  const auto& arr = detail::get_array(value, path);
  if (arr.size() != 2) throw DocumentError(path, "expected [last_edge, last_fog]");
  const auto i = get_integer(arr[0], detail::index_path(path, 0));
  const auto j = get_integer(arr[1], detail::index_path(path, 1));
  if (i < 0 || j < 0 || i > 1'000'000 || j > 1'000'000) throw DocumentError(path, "split indices out of range");
  if (i >= j) throw DocumentError(path, fmt::format("last_edge ({}) must be below last_fog ({})", i, j));
  return Split{static_cast<int>(i), static_cast<int>(j)};
}

SchedulerConfig parse_scheduler(const json& obj, const std::string& path) {
  detail::require_keys(obj, path,
                       {"initial_split", "weights", "deadline_s", "r_profile", "r_probe", "r_steady", "k_warm",
                        "switch_threshold", "min_edge_layers", "probe", "edge_power_w"});
  SchedulerConfig c;
  c.initial_split = parse_split(detail::require_field(obj, path, "initial_split"), join_path(path, "initial_split"));
  if (auto it = obj.find("weights"); it != obj.end()) {
    const auto w_path = join_path(path, "weights");
    detail::require_keys(*it, w_path, {"edge_energy", "total_energy", "latency"});
    c.weights.edge_energy = get_number_or(*it, w_path, "edge_energy", c.weights.edge_energy);
    c.weights.total_energy = get_number_or(*it, w_path, "total_energy", c.weights.total_energy);
    c.weights.latency = get_number_or(*it, w_path, "latency", c.weights.latency);
  }
  c.deadline_s = get_number_or(obj, path, "deadline_s", c.deadline_s);
  c.r_profile = get_count(obj, path, "r_profile", c.r_profile);
  c.r_probe = get_count(obj, path, "r_probe", c.r_probe);
  c.r_steady = get_count(obj, path, "r_steady", c.r_steady);
  c.k_warm = get_count(obj, path, "k_warm", c.k_warm);
  c.switch_threshold = get_number_or(obj, path, "switch_threshold", c.switch_threshold);
  c.min_edge_layers = get_count(obj, path, "min_edge_layers", c.min_edge_layers);
  c.edge_watts = get_number_or(obj, path, "edge_power_w", c.edge_watts);
  if (auto it = obj.find("probe"); it != obj.end()) {
    const auto p_path = join_path(path, "probe");
    detail::require_keys(*it, p_path, {"small_bytes", "large_bytes", "repeats"});
    c.probe.small_bytes = static_cast<std::uint64_t>(get_count(*it, p_path, "small_bytes", 1024));
    c.probe.large_bytes = static_cast<std::uint64_t>(get_count(*it, p_path, "large_bytes", 1024 * 1024));
    c.probe.repeats = get_count(*it, p_path, "repeats", c.probe.repeats);
  }
  return c;
}

ExperimentSpec parse_experiment(const json& obj, const std::string& path) {
  detail::require_keys(obj, path, {"mode", "budget", "repetitions", "seed"});
  ExperimentSpec e;
  if (auto it = obj.find("mode"); it != obj.end()) {
    const auto m_path = join_path(path, "mode");
    const std::string mode = detail::get_string(*it, m_path);
    if (mode == "static") {
      e.mode = ExperimentMode::static_split;
    } else if (mode == "adaptive") {
      e.mode = ExperimentMode::adaptive;
    } else if (mode == "compare") {
      e.mode = ExperimentMode::compare;
    } else if (mode.starts_with("single-device:")) {
      e.mode = ExperimentMode::single_device;
      at_path(m_path, [&] { e.single_device_tier = tier_from_string(mode.substr(14)); });
    } else {
      throw DocumentError(m_path, fmt::format("unknown mode '{}'; accepted: single-device:<edge|fog|cloud>, static, "
                                              "adaptive, compare",
                                              mode));
    }
  }
  if (auto it = obj.find("budget"); it != obj.end()) e.budget = get_integer(*it, join_path(path, "budget"));
  e.repetitions = get_count(obj, path, "repetitions", e.repetitions);
  if (auto it = obj.find("seed"); it != obj.end()) {
    const auto v = get_integer(*it, join_path(path, "seed"));
    if (v < 0) throw DocumentError(join_path(path, "seed"), "must be >= 0");
    e.seed = static_cast<std::uint64_t>(v);
  }
  return e;
}

json trace_json(const Trace& trace) {
  json arr = json::array();
  for (const auto& p : trace) arr.push_back({{"at", p.effective_from_s}, {"multiplier", p.multiplier}});
  return arr;
}

}  // namespace

void ScenarioConfig::validate() const {
  const int n = profile.feature_count();
  const auto& c = scheduler;
  at_path("scheduler.initial_split", [&] { require_valid_split(c.initial_split, n, c.min_edge_layers); });
  if (c.min_edge_layers < 1) throw DocumentError("scheduler.min_edge_layers", "must be >= 1");
  if (c.r_profile <= c.k_warm) throw DocumentError("scheduler.r_profile", "must exceed scheduler.k_warm");
  if (c.r_probe <= c.k_warm) throw DocumentError("scheduler.r_probe", "must exceed scheduler.k_warm");
  if (c.r_steady <= c.k_warm) throw DocumentError("scheduler.r_steady", "must exceed scheduler.k_warm");
  if (!(c.switch_threshold >= 0.0)) throw DocumentError("scheduler.switch_threshold", "must be >= 0");
  if (!(c.deadline_s >= 0.0)) throw DocumentError("scheduler.deadline_s", "must be >= 0 (0 disables)");
  if (!(c.edge_watts > 0.0)) throw DocumentError("scheduler.edge_power_w", "must be > 0");
  const auto& w = c.weights;
  if (!(w.edge_energy >= 0.0 && w.total_energy >= 0.0 && w.latency >= 0.0) ||
      !(w.edge_energy + w.total_energy + w.latency > 0.0)) {
    throw DocumentError("scheduler.weights", "weights must be >= 0 and not all zero");
  }
  at_path("scheduler.probe", [&] { c.probe.validate(); });
  at_path("scheduler", [&] { c.validate(n); });
  for (Tier t : kTiers) {
    at_path(fmt::format("nodes.{}", to_string(t)), [&] { sim.nodes[t].validate(); });
  }
  at_path("hops.edge_fog", [&] { sim.edge_fog.validate(); });
  at_path("hops.fog_cloud", [&] { sim.fog_cloud.validate(); });
  if (!(sim.noise.sigma >= 0.0)) throw DocumentError("noise.sigma", "must be >= 0");

  if (experiment.repetitions < 1) throw DocumentError("experiment.repetitions", "must be >= 1");
  const bool adaptive = experiment.mode == ExperimentMode::adaptive || experiment.mode == ExperimentMode::compare;
  if (adaptive && experiment.budget < c.minimum_budget()) {
    throw DocumentError("experiment.budget",
                        fmt::format("budget {} is below the minimum of {} inferences (r_profile + 3*r_probe + r_steady)",
                                    experiment.budget, c.minimum_budget()));
  }
  if (!adaptive && experiment.budget <= c.k_warm) {
    throw DocumentError("experiment.budget", fmt::format("budget {} must exceed k_warm ({})", experiment.budget,
                                                         c.k_warm));
  }
}

ScenarioConfig load_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  const json doc = detail::parse_json(text);
  detail::require_keys(doc, "", {"name", "profile", "nodes", "hops", "noise", "scheduler", "experiment"});

  std::optional<std::string> preset;
  const json& p = detail::require_field(doc, "", "profile");
  auto profile = [&]() -> ModelProfile {
    if (p.is_string()) {
      preset = p.get<std::string>();
      try {
        return preset_profile(*preset);
      } catch (const UnknownFixtureError& e) {
        throw DocumentError("profile", e.what());
      }
    }
    if (p.is_object() && p.contains("file")) {
      detail::require_keys(p, "profile", {"file"});
      std::filesystem::path file = detail::get_string(p["file"], "profile.file");
      if (file.is_relative()) file = base_dir / file;
      try {
        return load_profile_file(file);
      } catch (const DocumentError& e) {
        throw DocumentError("profile.file -> " + e.where(), e.message());
      } catch (const Error& e) {
        throw DocumentError("profile.file", e.what());
      }
    }
    try {
      return profile_from_json(p, "profile");
    } catch (const InvalidModelError& e) {
      throw DocumentError("profile", e.what());
    }
  }();

  SimConfig sim;
  const json& nodes = detail::require_field(doc, "", "nodes");
  detail::require_keys(nodes, "nodes", {"edge", "fog", "cloud"});
  for (Tier t : kTiers) {
    const std::string key(to_string(t));
    sim.nodes[t] = parse_node(detail::require_field(nodes, "nodes", key), "nodes." + key);
  }
  const json& hops = detail::require_field(doc, "", "hops");
  detail::require_keys(hops, "hops", {"edge_fog", "fog_cloud"});
  sim.edge_fog = parse_hop(detail::require_field(hops, "hops", "edge_fog"), "hops.edge_fog");
  sim.fog_cloud = parse_hop(detail::require_field(hops, "hops", "fog_cloud"), "hops.fog_cloud");
  if (auto it = doc.find("noise"); it != doc.end()) {
    detail::require_keys(*it, "noise", {"sigma"});
    sim.noise.sigma = get_number_or(*it, "noise", "sigma", 0.0);
    if (!(sim.noise.sigma >= 0.0)) throw DocumentError("noise.sigma", "must be >= 0");
  }

  ScenarioConfig cfg{"", std::move(profile), preset, sim, {}, {}};
  if (auto it = doc.find("name"); it != doc.end()) cfg.name = detail::get_string(*it, "name");
  if (cfg.name.empty()) cfg.name = cfg.profile.name();
  cfg.scheduler = parse_scheduler(detail::require_field(doc, "", "scheduler"), "scheduler");
  if (auto it = doc.find("experiment"); it != doc.end()) cfg.experiment = parse_experiment(*it, "experiment");
  cfg.scheduler.total_budget = cfg.experiment.budget;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path.string());
  try {
    return load_scenario(text, path.parent_path());
  } catch (const DocumentError& e) {
    throw DocumentError(path.string() + ": " + e.where(), e.message());
  }
}

json to_json(const ScenarioConfig& config) {
  json doc;
  doc["name"] = config.name;
  if (config.profile_preset) {
    doc["profile"] = *config.profile_preset;
  } else {
    doc["profile"] = to_json(config.profile);
  }
  for (Tier t : kTiers) {
    const auto& n = config.sim.nodes[t];
    doc["nodes"][std::string(to_string(t))] = {
        {"seconds_per_work", n.seconds_per_work}, {"power_w", n.power_w}, {"trace", trace_json(n.trace)}};
  }
  auto hop_json = [](const HopSpec& h) {
    return json{{"overhead_s", h.overhead_s}, {"throughput_bps", h.throughput_bps}, {"trace", trace_json(h.trace)}};
  };
  doc["hops"]["edge_fog"] = hop_json(config.sim.edge_fog);
  doc["hops"]["fog_cloud"] = hop_json(config.sim.fog_cloud);
  doc["noise"] = {{"sigma", config.sim.noise.sigma}};
  const auto& c = config.scheduler;
  doc["scheduler"] = {
      {"initial_split", {c.initial_split.last_edge, c.initial_split.last_fog}},
      {"weights",
       {{"edge_energy", c.weights.edge_energy}, {"total_energy", c.weights.total_energy}, {"latency", c.weights.latency}}},
      {"deadline_s", c.deadline_s},
      {"r_profile", c.r_profile},
      {"r_probe", c.r_probe},
      {"r_steady", c.r_steady},
      {"k_warm", c.k_warm},
      {"switch_threshold", c.switch_threshold},
      {"min_edge_layers", c.min_edge_layers},
      {"probe",
       {{"small_bytes", c.probe.small_bytes}, {"large_bytes", c.probe.large_bytes}, {"repeats", c.probe.repeats}}},
      {"edge_power_w", c.edge_watts},
  };
  const auto& e = config.experiment;
  doc["experiment"] = {{"mode", to_string(e)}, {"budget", e.budget}, {"repetitions", e.repetitions}, {"seed", e.seed}};
  return doc;
}

ScenarioConfig scenario_from_fixture(const ScenarioFixture& fixture, const ExperimentSpec& experiment) {
  ScenarioConfig cfg{fixture.name, fixture.profile, std::nullopt, fixture.sim, fixture.scheduler, experiment};
  for (const auto& name : preset_profile_names()) {
    if (name == fixture.profile.name()) cfg.profile_preset = name;
  }
  cfg.sim.noise.seed = 0;
  cfg.scheduler.total_budget = experiment.budget;
  cfg.validate();
  return cfg;
}

}  // namespace edgesplit
