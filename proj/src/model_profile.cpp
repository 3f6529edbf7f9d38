#include "edgesplit/model_profile.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "edgesplit/errors.hpp"
#include "edgesplit_presets.hpp"
#include "json_util.hpp"

namespace edgesplit {

using nlohmann::json;

void ModelDescriptor::validate() const {
  if (feature_layers.size() < 3) {
    throw InvalidModelError(fmt::format("model '{}': needs at least 3 feature layers, has {}", name,
                                        feature_layers.size()));
  }
  for (std::size_t k = 0; k < feature_layers.size(); ++k) {
    const auto& layer = feature_layers[k];
    if (layer.output_activation_bytes == 0) {
      throw InvalidModelError(fmt::format("model '{}': layer {} emits zero bytes", name, k));
    }
    if (!(layer.compute_cost >= 0.0) || !std::isfinite(layer.compute_cost)) {
      throw InvalidModelError(fmt::format("model '{}': layer {} has invalid cost {}", name, k, layer.compute_cost));
    }
  }
  if (!(head_compute_cost > 0.0) || !std::isfinite(head_compute_cost)) {
    throw InvalidModelError(fmt::format("model '{}': head cost must be > 0", name));
  }
}

ModelProfile::ModelProfile(std::string name, std::vector<std::uint64_t> activation_bytes,
                           std::vector<double> compute_weights, std::vector<std::string> layer_names)
    : name_(std::move(name)),
      activation_bytes_(std::move(activation_bytes)),
      compute_weights_(std::move(compute_weights)),
      layer_names_(std::move(layer_names)) {
  if (activation_bytes_.empty()) throw InvalidModelError(fmt::format("profile '{}': no feature layers", name_));
  if (compute_weights_.size() != activation_bytes_.size() + 1) {
    throw InvalidModelError(fmt::format("profile '{}': {} weights for {} feature layers (need N+1)", name_,
                                        compute_weights_.size(), activation_bytes_.size()));
  }
  if (!layer_names_.empty() && layer_names_.size() != activation_bytes_.size()) {
    throw InvalidModelError(fmt::format("profile '{}': {} layer names for {} feature layers", name_,
                                        layer_names_.size(), activation_bytes_.size()));
  }
  for (std::size_t i = 0; i < activation_bytes_.size(); ++i) {
    if (activation_bytes_[i] < 1) {
      throw InvalidModelError(fmt::format("profile '{}': activation_bytes[{}] must be >= 1", name_, i));
    }
  }
  for (std::size_t k = 0; k < compute_weights_.size(); ++k) {
    if (!(compute_weights_[k] >= 0.0) || !std::isfinite(compute_weights_[k])) {
      throw InvalidModelError(fmt::format("profile '{}': compute_weights[{}] = {} must be >= 0", name_, k,
                                          compute_weights_[k]));
    }
  }
  const double total = std::accumulate(compute_weights_.begin(), compute_weights_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidModelError(fmt::format("profile '{}': compute weights sum to {:.12g}, expected 1", name_, total));
  }
}

double ModelProfile::weight_sum(int first, int last) const noexcept {
  double sum = 0.0;
  for (int k = std::max(first, 0); k <= last && k < static_cast<int>(compute_weights_.size()); ++k) {
    sum += compute_weights_[static_cast<std::size_t>(k)];
  }
  return sum;
}

DescriptorExecutor::DescriptorExecutor(ModelDescriptor model, double seconds_per_unit)
    : model_(std::move(model)), seconds_per_unit_(seconds_per_unit) {
  model_.validate();
  if (!(seconds_per_unit_ > 0.0)) throw InvalidModelError("seconds per work unit must be > 0");
}

LayerRun DescriptorExecutor::run_feature(int index) {
  ++calls_;
  const auto& layer = model_.feature_layers.at(static_cast<std::size_t>(index));
  return {layer.compute_cost * seconds_per_unit_, layer.output_activation_bytes};
}

double DescriptorExecutor::run_head() {
  ++calls_;
  return model_.head_compute_cost * seconds_per_unit_;
}

ModelProfile profile_model(LayerExecutor& executor, int warmup_rounds) {
  const int n = executor.feature_count();
  if (n < 1) throw InvalidModelError(fmt::format("model '{}': empty layer list", executor.model_name()));
  if (warmup_rounds < 0) throw InvalidModelError("warmup rounds must be >= 0");

  for (int round = 0; round < warmup_rounds; ++round) {
    for (int i = 0; i < n; ++i) executor.run_feature(i);
    executor.run_head();
  }

  std::vector<double> timings(static_cast<std::size_t>(n) + 1);
  std::vector<std::uint64_t> bytes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const LayerRun run = executor.run_feature(i);
    timings[static_cast<std::size_t>(i)] = std::max(run.elapsed_s, 0.0);
    bytes[static_cast<std::size_t>(i)] = run.output_bytes;
  }
  timings.back() = std::max(executor.run_head(), 0.0);

  const double total = std::accumulate(timings.begin(), timings.end(), 0.0);
  if (!(total > 0.0)) {
    throw ProfileDegenerateError(fmt::format("model '{}': total measured time is zero", executor.model_name()));
  }
  for (double& t : timings) t /= total;
  return ModelProfile(executor.model_name(), std::move(bytes), std::move(timings));
}

std::vector<std::string> preset_profile_names() {
  std::vector<std::string> names;
  for (const auto& preset : detail::kPresetProfiles) names.emplace_back(preset.name);
  return names;
}

ModelProfile preset_profile(std::string_view name) {
  for (const auto& preset : detail::kPresetProfiles) {
    if (preset.name == name) return parse_profile(preset.document);
  }
  throw UnknownFixtureError(fmt::format("unknown profile fixture '{}'; known: {}", name,
                                        fmt::join(preset_profile_names(), ", ")));
}

ModelProfile profile_from_json(const json& doc, const std::string& path) {
  detail::require_keys(doc, path, {"name", "activation_bytes", "compute_weights", "layer_names"});
  const std::string name = detail::get_string(detail::require_field(doc, path, "name"), detail::join_path(path, "name"));

  const std::string b_path = detail::join_path(path, "activation_bytes");
  const auto& b_json = detail::get_array(detail::require_field(doc, path, "activation_bytes"), b_path);
  std::vector<std::uint64_t> bytes;
  for (std::size_t i = 0; i < b_json.size(); ++i) {
    const auto where = detail::index_path(b_path, i);
    const auto v = detail::get_integer(b_json[i], where);
    if (v < 1) throw DocumentError(where, fmt::format("activation size must be >= 1, got {}", v));
    bytes.push_back(static_cast<std::uint64_t>(v));
  }
  if (bytes.empty()) throw DocumentError(b_path, "needs at least one feature layer");

  const std::string w_path = detail::join_path(path, "compute_weights");
  const auto& w_json = detail::get_array(detail::require_field(doc, path, "compute_weights"), w_path);
  std::vector<double> weights;
  for (std::size_t k = 0; k < w_json.size(); ++k) {
    const auto where = detail::index_path(w_path, k);
    const double v = detail::get_number(w_json[k], where);
    if (v < 0.0) throw DocumentError(where, fmt::format("compute weight must be >= 0, got {}", v));
    weights.push_back(v);
  }
  if (weights.size() != bytes.size() + 1) {
    throw DocumentError(w_path, fmt::format("expected {} entries (feature layers + head), got {}", bytes.size() + 1,
                                            weights.size()));
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw DocumentError(w_path, fmt::format("weights sum to {:.12g}, expected 1 within 1e-9", total));
  }

  std::vector<std::string> layer_names;
  if (auto it = doc.find("layer_names"); it != doc.end()) {
    const std::string n_path = detail::join_path(path, "layer_names");
    const auto& names = detail::get_array(*it, n_path);
    for (std::size_t i = 0; i < names.size(); ++i) {
      layer_names.push_back(detail::get_string(names[i], detail::index_path(n_path, i)));
    }
    if (layer_names.size() != bytes.size()) {
      throw DocumentError(n_path, fmt::format("expected {} names, got {}", bytes.size(), layer_names.size()));
    }
  }
  return ModelProfile(name, std::move(bytes), std::move(weights), std::move(layer_names));
}

ModelProfile parse_profile(std::string_view text) { return profile_from_json(detail::parse_json(text)); }

ModelProfile load_profile_file(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path.string());
  try {
    return parse_profile(text);
  } catch (const DocumentError& e) {
    throw DocumentError(path.string() + ": " + e.where(), e.message());
  }
}

json to_json(const ModelProfile& profile) {
  json doc;
  doc["name"] = profile.name();
  if (!profile.layer_names().empty()) {
    doc["layer_names"] = std::vector<std::string>(profile.layer_names().begin(), profile.layer_names().end());
  }
  doc["activation_bytes"] =
      std::vector<std::uint64_t>(profile.activation_bytes().begin(), profile.activation_bytes().end());
  doc["compute_weights"] = std::vector<double>(profile.compute_weights().begin(), profile.compute_weights().end());
  return doc;
}

}  // namespace edgesplit
