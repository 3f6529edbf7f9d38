#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "edgesplit/errors.hpp"
#include "edgesplit/model_profile.hpp"

using namespace edgesplit;
using doctest::Approx;

namespace {

// Replays fixed per-stage timings.
class FixedExecutor final : public LayerExecutor {
 public:
  FixedExecutor(std::vector<double> t, std::vector<std::uint64_t> b) : t_(std::move(t)), b_(std::move(b)) {}
  std::string model_name() const override { return "fixed"; }
  int feature_count() const override { return static_cast<int>(b_.size()); }
  LayerRun run_feature(int i) override { return {t_[static_cast<std::size_t>(i)], b_[static_cast<std::size_t>(i)]}; }
  double run_head() override { return t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<std::uint64_t> b_;
};

double sum(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("profiling normalizes raw timings") {
  FixedExecutor ex({2, 1, 1, 4}, {10, 20, 30});
  const auto p = profile_model(ex);
  const std::vector<double> expect{0.25, 0.125, 0.125, 0.5};
  REQUIRE(p.compute_weights().size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(p.compute_weights()[k] == Approx(expect[k]).epsilon(1e-12));
  CHECK(p.feature_count() == 3);
}

TEST_CASE("equal timings give uniform weights") {
  const int n = 9;
  FixedExecutor ex(std::vector<double>(n + 1, 0.37), std::vector<std::uint64_t>(n, 4));
  const auto p = profile_model(ex, 0);
  for (double w : p.compute_weights()) CHECK(w == Approx(1.0 / (n + 1)).epsilon(1e-12));
}

TEST_CASE("descriptor executor profile") {
  ModelDescriptor d{"synthetic", {{1000, 5}, {2000, 3}, {3000, 2}}, 10};
  DescriptorExecutor ex(d);
  const auto p = profile_model(ex, 3);
  const std::vector<double> expect{0.25, 0.15, 0.10, 0.50};
  for (std::size_t k = 0; k < 4; ++k) CHECK(p.compute_weights()[k] == Approx(expect[k]).epsilon(1e-12));
  CHECK(std::vector<std::uint64_t>(p.activation_bytes().begin(), p.activation_bytes().end()) ==
        std::vector<std::uint64_t>{1000, 2000, 3000});
  // three warmup passes plus the timed pass, each over 3 layers + head
  CHECK(ex.calls() == 16);
  CHECK(p.name() == "synthetic");
}

TEST_CASE("profile invariants hold for random timings and are scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 40);
    std::vector<double> t;
    std::vector<std::uint64_t> b;
    for (int k = 0; k <= n; ++k) t.push_back(u(rng) < 0.1 ? 0.0 : u(rng));
    t.back() += 0.01;
    for (int k = 0; k < n; ++k) b.push_back(1 + rng() % 1000000);
    FixedExecutor a(t, b);
    const auto p = profile_model(a, 0);
    CHECK(sum(p.compute_weights()) == Approx(1.0).epsilon(1e-9));
    for (double w : p.compute_weights()) CHECK(w >= 0.0);
    CHECK(std::equal(b.begin(), b.end(), p.activation_bytes().begin()));

    const double c = 0.001 + 1000 * u(rng);
    for (double& x : t) x *= c;
    FixedExecutor scaled(t, b);
    const auto q = profile_model(scaled, 0);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(std::abs(q.compute_weights()[k] - p.compute_weights()[k]) <= 1e-9);
    }
  }
}

TEST_CASE("degenerate executors") {
  FixedExecutor zero({0, 0, 0, 0}, {1, 1, 1});
  CHECK_THROWS_AS(profile_model(zero), ProfileDegenerateError);
  FixedExecutor empty({1.0}, {});
  CHECK_THROWS_AS(profile_model(empty), InvalidModelError);
  CHECK_THROWS_AS(profile_model(zero, -1), Error);
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS((ModelDescriptor{"x", {{1, 1}, {1, 1}}, 1}.validate()), InvalidModelError);
  CHECK_THROWS_AS((ModelDescriptor{"x", {{0, 1}, {1, 1}, {1, 1}}, 1}.validate()), InvalidModelError);
  CHECK_THROWS_AS((ModelDescriptor{"x", {{1, -1}, {1, 1}, {1, 1}}, 1}.validate()), InvalidModelError);
  CHECK_THROWS_AS((ModelDescriptor{"x", {{1, 1}, {1, 1}, {1, 1}}, 0}.validate()), InvalidModelError);
  CHECK_NOTHROW((ModelDescriptor{"x", {{1, 0}, {1, 1}, {1, 1}}, 1}.validate()));
}

TEST_CASE("profile construction checks its tables") {
  CHECK_NOTHROW(ModelProfile("ok", {1, 2}, {0.5, 0.25, 0.25}));
  CHECK_THROWS_AS(ModelProfile("len", {1, 2}, {0.5, 0.5}), InvalidModelError);
  CHECK_THROWS_AS(ModelProfile("sum", {1, 2}, {0.5, 0.25, 0.2}), InvalidModelError);
  CHECK_THROWS_AS(ModelProfile("neg", {1, 2}, {1.25, -0.25, 0.0}), InvalidModelError);
  CHECK_THROWS_AS(ModelProfile("zero-b", {0, 2}, {0.5, 0.25, 0.25}), InvalidModelError);
  const ModelProfile p("sums", {1, 2, 3}, {0.1, 0.2, 0.3, 0.4});
  CHECK(p.weight_sum(0, 1) == Approx(0.3));
  CHECK(p.weight_sum(2, 3) == Approx(0.7));
  CHECK(p.weight_sum(2, 1) == 0.0);
  CHECK(p.head_weight() == 0.4);
}

TEST_CASE("preset profiles") {
  const std::vector<std::pair<std::string, int>> expect{{"vgg16-like", 31}, {"alexnet-like", 14},
                                                        {"mobilenetv2-like", 19}};
  CHECK(preset_profile_names().size() == expect.size());
  for (const auto& [name, n] : expect) {
    const auto p = preset_profile(name);
    CHECK(p.name() == name);
    CHECK(p.feature_count() == n);
    CHECK(sum(p.compute_weights()) == Approx(1.0).epsilon(1e-9));
    CHECK(p.layer_names().size() == static_cast<std::size_t>(n));
  }
  CHECK_THROWS_AS(preset_profile("resnet50-like"), UnknownFixtureError);
}

TEST_CASE("preset activation sizes follow float32 output shapes") {
  const auto vgg = preset_profile("vgg16-like");
  CHECK(vgg.activation_bytes()[0] == 64u * 224 * 224 * 4);
  CHECK(vgg.activation_bytes()[10] == 256u * 56 * 56 * 4);  // first conv after the second pooling stage
  CHECK(vgg.activation_bytes()[30] == 512u * 7 * 7 * 4);
  const auto alex = preset_profile("alexnet-like");
  CHECK(alex.activation_bytes()[13] == 256u * 6 * 6 * 4);
}

TEST_CASE("profile documents") {
  const auto p = parse_profile(R"({"name": "tiny", "activation_bytes": [10, 20, 30],
                                   "compute_weights": [0.1, 0.2, 0.3, 0.4]})");
  CHECK(p.feature_count() == 3);
  CHECK(parse_profile(to_json(p).dump()) == p);
  const auto vgg = preset_profile("vgg16-like");
  CHECK(parse_profile(to_json(vgg).dump()) == vgg);

  auto where = [](const char* text) {
    try {
      parse_profile(text);
    } catch (const DocumentError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  const auto unknown = where(R"({"name": "x", "activation_bytes": [1,1,1], "compute_weights": [0.25,0.25,0.25,0.25],
                                "extra": 1})");
  CHECK(unknown.find("extra") != std::string::npos);
  CHECK(unknown.find("compute_weights") != std::string::npos);  // accepted keys are listed
  CHECK(where(R"({"name": "x", "activation_bytes": [1,1,1], "compute_weights": [0.25,0.25,0.25]})")
            .find("compute_weights") != std::string::npos);
  CHECK(where(R"({"name": "x", "activation_bytes": [1,0,1], "compute_weights": [0.25,0.25,0.25,0.25]})")
            .find("activation_bytes[1]") != std::string::npos);
  CHECK(where("{\n  \"name\": \"x\",\n  oops\n}").find("line 3") != std::string::npos);
  CHECK(where(R"({"activation_bytes": [1,1,1], "compute_weights": [0.25,0.25,0.25,0.25]})").find("name") !=
        std::string::npos);
}
