#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace edgesplit {

struct LayerDescriptor {
  std::uint64_t output_activation_bytes = 1;
  double compute_cost = 0.0;  // abstract work units
};

/// Abstract layered network: ordered feature layers plus a classifier head.
struct ModelDescriptor {
  std::string name;
  std::vector<LayerDescriptor> feature_layers;
  double head_compute_cost = 1.0;

  /// Throws InvalidModelError unless N >= 3, every activation size > 0,
  /// every cost >= 0 and the head cost > 0.
  void validate() const;
};

/// Activation-size table B (one entry per feature layer) and normalized
/// compute-weight table W (one entry per feature layer plus the head, last).
class ModelProfile {
 public:
  /// Validates: len(W) == len(B) + 1, B[i] >= 1, W[k] >= 0, sum(W) == 1 +- 1e-9.
  /// Throws InvalidModelError otherwise.
  ModelProfile(std::string name, std::vector<std::uint64_t> activation_bytes,
               std::vector<double> compute_weights, std::vector<std::string> layer_names = {});

  const std::string& name() const noexcept { return name_; }
  int feature_count() const noexcept { return static_cast<int>(activation_bytes_.size()); }
  std::span<const std::uint64_t> activation_bytes() const noexcept { return activation_bytes_; }
  std::span<const double> compute_weights() const noexcept { return compute_weights_; }
  double head_weight() const noexcept { return compute_weights_.back(); }
  /// Empty when the source did not name its layers.
  std::span<const std::string> layer_names() const noexcept { return layer_names_; }

  /// Sum of W[first..last], inclusive; empty when last < first.
  double weight_sum(int first, int last) const noexcept;

  bool operator==(const ModelProfile&) const = default;

 private:
  std::string name_;
  std::vector<std::uint64_t> activation_bytes_;
  std::vector<double> compute_weights_;
  std::vector<std::string> layer_names_;
};

struct LayerRun {
  double elapsed_s = 0.0;
  std::uint64_t output_bytes = 0;
};

/// Something that can execute a model stage by stage and time each stage.
class LayerExecutor {
 public:
  virtual ~LayerExecutor() = default;
  virtual std::string model_name() const = 0;
  virtual int feature_count() const = 0;
  virtual LayerRun run_feature(int index) = 0;
  virtual double run_head() = 0;
};

/// Noiseless executor: each stage takes compute_cost * seconds_per_unit.
class DescriptorExecutor final : public LayerExecutor {
 public:
  explicit DescriptorExecutor(ModelDescriptor model, double seconds_per_unit = 1e-3);

  std::string model_name() const override { return model_.name; }
  int feature_count() const override { return static_cast<int>(model_.feature_layers.size()); }
  LayerRun run_feature(int index) override;
  double run_head() override;

  int calls() const noexcept { return calls_; }

 private:
  ModelDescriptor model_;
  double seconds_per_unit_;
  int calls_ = 0;
};

inline constexpr int kDefaultWarmupRounds = 3;

/// Runs `warmup_rounds` full passes, then times every feature layer and the
/// head once; W[k] = T[k] / sum(T).
ModelProfile profile_model(LayerExecutor& executor, int warmup_rounds = kDefaultWarmupRounds);

std::vector<std::string> preset_profile_names();

/// Committed fixtures: "vgg16-like", "alexnet-like", "mobilenetv2-like".
ModelProfile preset_profile(std::string_view name);

/// Parses a profile document {name, activation_bytes, compute_weights[, layer_names]}.
/// Violations raise DocumentError naming the field or the line/column.
ModelProfile parse_profile(std::string_view text);
ModelProfile profile_from_json(const nlohmann::json& doc, const std::string& path = "");
ModelProfile load_profile_file(const std::filesystem::path& path);
nlohmann::json to_json(const ModelProfile& profile);

}  // namespace edgesplit
