#include <doctest.h>

#include <random>
#include <set>

#include "edgesplit/errors.hpp"
#include "edgesplit/fixtures.hpp"
#include "edgesplit/scheduler.hpp"
#include "oracles.hpp"

using namespace edgesplit;
using doctest::Approx;

namespace {

// Simulator that starts failing after a number of inferences or on probing.
class FailingEnv final : public InferenceEnvironment {
 public:
  FailingEnv(SimConfig cfg, long fail_at_inference, bool fail_probes)
      : sim_(std::move(cfg)), fail_at_(fail_at_inference), fail_probes_(fail_probes) {}
  InferenceSample run_inference(Split s, const ModelProfile& p) override {
    if (++count_ == fail_at_) throw EnvironmentError("node unreachable");
    return sim_.run_inference(s, p);
  }
  RttTransport& hop(Hop h) override {
    if (fail_probes_) return broken_;
    return sim_.hop(h);
  }
  long count_ = 0;
  bool fail_probes_;

 private:
  class Broken final : public RttTransport {
   public:
    std::string identity() const override { return "broken-hop"; }
    double round_trip(std::uint64_t) override { throw TransportError("no route"); }
  };
  SimEnvironment sim_;
  long fail_at_;
  Broken broken_;
};

ScenarioFixture noiseless(std::string_view model) {
  auto fx = paper_scenario(model);
  fx.sim.noise.sigma = 0.0;
  return fx;
}

// The cascade written out as a plain truth table.
SwitchOutcome expected(Split c, Split c0, std::optional<Split> cand, double delta, bool hit, double theta) {
  const bool other = cand.has_value() && *cand != c;
  if (hit && other) return {Decision::forced_switch, *cand};
  if (other && delta >= theta) return {Decision::normal_switch, *cand};
  if (hit && c != c0) return {Decision::fallback, c0};
  return {Decision::stay, c};
}

}  // namespace

TEST_CASE("decision names") {
  CHECK(to_string(Decision::stay) == "stay");
  CHECK(to_string(Decision::normal_switch) == "normal-switch");
  CHECK(to_string(Decision::forced_switch) == "forced-switch");
  CHECK(to_string(Decision::fallback) == "fallback");
}

TEST_CASE("decide_switch examples") {
  const Split c{3, 7}, c0{1, 5}, other{2, 6};
  CHECK(decide_switch(c, c0, other, 0.05, false, 0.03) == SwitchOutcome{Decision::normal_switch, other});
  CHECK(decide_switch(c, c0, other, -0.5, true, 0.03) == SwitchOutcome{Decision::forced_switch, other});
  CHECK(decide_switch(c, c0, std::nullopt, 0.0, true, 0.03) == SwitchOutcome{Decision::fallback, c0});
  CHECK(decide_switch(c, c0, other, 0.01, false, 0.03) == SwitchOutcome{Decision::stay, c});
  CHECK(decide_switch(c0, c0, std::nullopt, 0.0, true, 0.03) == SwitchOutcome{Decision::stay, c0});
  CHECK(decide_switch(c, c0, other, 0.03, false, 0.03).decision == Decision::normal_switch);  // threshold inclusive
}

TEST_CASE("decide_switch matches the cascade on every combination") {
  const Split c0{1, 5}, x{3, 7}, y{2, 6};
  const double theta = 0.03;
  const std::vector<double> deltas{-0.5, 0.0, theta - 1e-12, theta, theta + 1e-12, 0.5};
  std::set<Decision> seen;
  for (Split c : {c0, x}) {
    for (std::optional<Split> cand : {std::optional<Split>{}, std::optional<Split>{c}, std::optional<Split>{c0},
                                      std::optional<Split>{y}}) {
      for (double d : deltas) {
        for (bool hit : {false, true}) {
          for (double th : {0.0, theta}) {
            const auto got = decide_switch(c, c0, cand, d, hit, th);
            CHECK(got == expected(c, c0, cand, d, hit, th));
            seen.insert(got.decision);
          }
        }
      }
    }
  }
  CHECK(seen.size() == 4);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    auto pick = [&] { return Split{static_cast<int>(rng() % 3), 3 + static_cast<int>(rng() % 3)}; };
    const Split c = pick(), base = pick();
    const std::optional<Split> cand = rng() % 4 == 0 ? std::nullopt : std::optional<Split>(pick());
    const double d = u(rng), th = std::abs(u(rng)) * 0.1;
    const bool hit = rng() % 2 == 0;
    CHECK(decide_switch(c, base, cand, d, hit, th) == expected(c, base, cand, d, hit, th));
  }
}

TEST_CASE("probe splits at fifths") {
  CHECK(probe_splits(31, 1) == std::vector<Split>{{18, 24}, {12, 18}, {6, 12}});
  CHECK(probe_splits(5, 1) == std::vector<Split>{{3, 4}, {2, 3}, {1, 2}});
  const auto tiny = probe_splits(3, 1);
  CHECK(std::set<Split>(tiny.begin(), tiny.end()) == std::set<Split>{{0, 1}, {0, 2}, {1, 2}});
  CHECK_THROWS_AS(probe_splits(2, 1), ProbeSpaceError);
  CHECK_THROWS_AS(probe_splits(4, 3), ProbeSpaceError);

  for (int n = 3; n <= 64; ++n) {
    for (int m = 1; m <= 3; ++m) {
      if ((n - m + 1) * (n - m) / 2 < 3) continue;
      const auto p = probe_splits(n, m);
      REQUIRE(p.size() == 3);
      CHECK(std::set<Split>(p.begin(), p.end()).size() == 3);
      for (Split s : p) CHECK(is_valid_split(s, n, m));
    }
  }
}

TEST_CASE("scheduler configuration checks") {
  SchedulerConfig c;
  c.initial_split = {10, 30};
  CHECK_NOTHROW(c.validate(31));
  CHECK(c.minimum_budget() == 195);
  auto bad = c;
  bad.r_probe = 5;
  CHECK_THROWS_AS(bad.validate(31), ConfigError);
  bad = c;
  bad.switch_threshold = -0.1;
  CHECK_THROWS_AS(bad.validate(31), ConfigError);
  bad = c;
  bad.total_budget = 0;
  CHECK_THROWS_AS(bad.validate(31), ConfigError);
  bad = c;
  bad.initial_split = {30, 31};
  CHECK_THROWS_AS(bad.validate(31), ConfigError);
}

TEST_CASE("initialization bookkeeping") {
  const auto fx = noiseless("vgg16");
  SimEnvironment env(fx.sim);
  const auto st = initialize(fx.scheduler, fx.profile, env);
  CHECK(st.base_samples.size() == 45);
  CHECK(st.probes_run == std::vector<Split>{{18, 24}, {12, 18}, {6, 12}});
  CHECK(st.probe_samples.size() == 30);
  CHECK(st.inferences_run == 95);
  const auto pm = mean_of(st.probe_samples);
  CHECK(st.anchors.edge_energy_j == Approx(pm.energy_j.edge).epsilon(1e-12));
  CHECK(st.anchors.total_energy_j == Approx(pm.total_energy_j).epsilon(1e-12));
  CHECK(st.anchors.latency_s == Approx(pm.latency_s).epsilon(1e-12));
  // the measured baseline matches the estimate of c0 on a noiseless simulator
  const auto e0 = estimate_split(st.baseline, fx.profile, st.rates, st.links.edge_fog, st.links.fog_cloud);
  CHECK(score(e0, st.objective(fx.scheduler)) == Approx(st.baseline_score).epsilon(1e-9));
  const auto ec = estimate_split(st.current, fx.profile, st.rates, st.links.edge_fog, st.links.fog_cloud);
  CHECK(score(ec, st.objective(fx.scheduler)) <= st.baseline_score + 1e-12);
}

TEST_CASE("a probe equal to the initial split is skipped") {
  auto fx = noiseless("vgg16");
  fx.scheduler.initial_split = {12, 18};
  fx.scheduler.deadline_s = 0;
  SimEnvironment env(fx.sim);
  const auto st = initialize(fx.scheduler, fx.profile, env);
  CHECK(st.probes_run == std::vector<Split>{{18, 24}, {6, 12}});
  CHECK(st.probe_samples.size() == 20);
  CHECK(st.inferences_run == 80);
}

TEST_CASE("a globally optimal initial split is kept and never left") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 15);
    const auto t = oracle::random_truth(rng, n);
    const auto probes = probe_splits(n, 1);
    // anchors are the probe means, which on a noiseless simulator are the probe costs
    double anchors[3] = {0, 0, 0};
    for (Split p : probes) {
      const auto c = oracle::cost(t, p.last_edge, p.last_fog);
      anchors[0] += c.e_edge / 3;
      anchors[1] += c.e_total() / 3;
      anchors[2] += c.latency / 3;
    }
    const double w[3] = {0.7, 0.2, 0.1};
    const auto best = oracle::brute_best(t, w, anchors, 1e300, 0, 1, std::nullopt);
    const Split c0{best->first, best->second};
    if (std::find(probes.begin(), probes.end(), c0) != probes.end()) continue;
    ++checked;

    SchedulerConfig cfg;
    cfg.initial_split = c0;
    SimEnvironment env(oracle::to_sim(t));
    const auto profile = oracle::to_profile(t);
    auto st = initialize(cfg, profile, env);
    CHECK(st.current == c0);
    for (int k = 0; k < 3; ++k) CHECK(steady_window(st, cfg, profile, env).decision == Decision::stay);
    CHECK(st.current == c0);
  }
  CHECK(checked > 10);
}

TEST_CASE("a much faster cloud pulls work off the edge") {
  auto fx = noiseless("vgg16");
  fx.sim.edge_fog.throughput_bps = 1e10;
  fx.sim.fog_cloud.throughput_bps = 1e10;
  SimEnvironment env(fx.sim);
  const auto st = initialize(fx.scheduler, fx.profile, env);
  CHECK(st.current.last_edge <= 2);
}

TEST_CASE("stationary environment stays put") {
  const auto fx = noiseless("alexnet");
  SimEnvironment env(fx.sim);
  auto st = initialize(fx.scheduler, fx.profile, env);
  const Anchors anchors = st.anchors;
  const double s_star = st.baseline_score;
  const Split start = st.current;
  for (int k = 0; k < 5; ++k) {
    const auto w = steady_window(st, fx.scheduler, fx.profile, env);
    CHECK(w.decision == Decision::stay);
    CHECK(w.index == k);
    CHECK(w.samples.size() == 95);
  }
  CHECK(st.current == start);
  CHECK(st.anchors == anchors);
  CHECK(st.baseline_score == s_star);
}

TEST_CASE("unreachable deadline falls back to the baseline split") {
  const auto fx = noiseless("vgg16");
  SimEnvironment env(fx.sim);
  auto cfg = fx.scheduler;
  cfg.deadline_s = 0.0;
  auto st = initialize(cfg, fx.profile, env);
  REQUIRE(st.current != st.baseline);
  cfg.deadline_s = 1e-6;
  const auto w = steady_window(st, cfg, fx.profile, env);
  CHECK(w.deadline_hit);
  CHECK_FALSE(w.candidate.has_value());
  CHECK(w.decision == Decision::fallback);
  CHECK(st.current == fx.scheduler.initial_split);
  const auto w2 = steady_window(st, cfg, fx.profile, env);
  CHECK(w2.decision == Decision::stay);
  CHECK(st.current == fx.scheduler.initial_split);
}

TEST_CASE("environment failures carry the phase") {
  const auto fx = noiseless("mobilenetv2");
  auto phase_of = [&](long fail_at, bool fail_probes) {
    FailingEnv env(fx.sim, fail_at, fail_probes);
    try {
      initialize(fx.scheduler, fx.profile, env);
    } catch (const InitializationError& e) {
      return e.phase();
    }
    return std::string("none");
  };
  CHECK(phase_of(1, false) == "1a");
  CHECK(phase_of(60, false) == "1b");
  CHECK(phase_of(-1, true) == "1c");
  CHECK(phase_of(-1, false) == "none");
}

TEST_CASE("an aborted window leaves the state untouched") {
  const auto fx = noiseless("mobilenetv2");
  FailingEnv env(fx.sim, 95 + 100 + 50, false);
  auto st = initialize(fx.scheduler, fx.profile, env);
  steady_window(st, fx.scheduler, fx.profile, env);
  const SchedulerState before = st;
  CHECK_THROWS_AS(steady_window(st, fx.scheduler, fx.profile, env), WindowAbortedError);
  CHECK(st.windows.size() == before.windows.size());
  CHECK(st.current == before.current);
  CHECK(st.rates == before.rates);
  CHECK(st.links == before.links);
  CHECK(st.inferences_run == before.inferences_run);

  env.fail_probes_ = true;
  CHECK_THROWS_AS(steady_window(st, fx.scheduler, fx.profile, env), WindowAbortedError);
  CHECK(st.windows.size() == before.windows.size());
}

TEST_CASE("run accounting") {
  const auto fx = paper_scenario("vgg16");
  SimEnvironment env(fx.sim);
  std::vector<int> sunk;
  const auto rep = run(fx.scheduler, fx.profile, env, [&](const WindowReport& w) { sunk.push_back(w.index); });
  CHECK(rep.windows.size() == 4);
  CHECK(sunk == std::vector<int>{0, 1, 2, 3});
  CHECK(rep.phase1_inferences == 95);
  CHECK(rep.steady_inferences == 405);
  CHECK(rep.steady_means.count == 4 * 95);
  const auto& m = rep.steady_means;
  CHECK(std::abs(m.total_energy_j - (m.energy_j.edge + m.energy_j.fog + m.energy_j.cloud)) <= 1e-9);

  auto cfg = fx.scheduler;
  cfg.total_budget = 194;
  SimEnvironment env2(fx.sim);
  try {
    run(cfg, fx.profile, env2);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("195") != std::string::npos);
  }
  cfg.total_budget = 195;
  SimEnvironment env3(fx.sim);
  const auto small = run(cfg, fx.profile, env3);
  CHECK(small.windows.size() == 1);
  CHECK(small.steady_inferences == 100);
}

TEST_CASE("runs are bit-identical under a fixed seed") {
  const auto fx = paper_scenario("mobilenetv2");
  SimEnvironment a(fx.sim), b(fx.sim);
  CHECK(run(fx.scheduler, fx.profile, a) == run(fx.scheduler, fx.profile, b));
  auto other = fx.sim;
  other.noise.seed = 1;
  SimEnvironment c(other);
  CHECK_FALSE(run(fx.scheduler, fx.profile, c) == run(fx.scheduler, fx.profile, a));
}

TEST_CASE("voluntary switches never exceed the baseline score") {
  for (const char* model : {"vgg16", "alexnet", "mobilenetv2"}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto fx = paper_scenario(model);
      fx.sim.noise = {0.05, seed};
      SimEnvironment env(fx.sim);
      const auto rep = run(fx.scheduler, fx.profile, env);
      for (const auto& w : rep.windows) {
        if (w.decision == Decision::normal_switch) CHECK(*w.candidate_score <= rep.baseline_score);
        if (w.improvement) {
          CHECK(*w.improvement == Approx((w.current_score - *w.candidate_score) / w.current_score));
        }
        CHECK(is_valid_split(w.next_split, fx.profile.feature_count()));
      }
    }
  }
}
