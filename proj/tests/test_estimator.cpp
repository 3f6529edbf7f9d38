#include <doctest.h>

#include <random>

#include "edgesplit/errors.hpp"
#include "edgesplit/estimator.hpp"
#include "oracles.hpp"

using namespace edgesplit;
using doctest::Approx;

namespace {

const ModelProfile kTwoLayer("two", {1000000, 100000}, {0.5, 0.3, 0.2});

NodeRates example_rates() {
  NodeRates r;
  r.seconds_per_work = {1.0, 0.5, 0.1};
  r.watts = {12.0, 15.0, 30.0};
  return r;
}

InferenceSample sample(Split s, PerTier<double> t, PerTier<double> e = {0, 0, 0}) {
  InferenceSample x;
  x.split = s;
  x.compute_s = t;
  x.energy_j = e;
  return x;
}

}  // namespace

TEST_CASE("hand-evaluated estimate") {
  const LinkModel link{0.005, 1e7, true};
  const auto est = estimate_split({0, 1}, kTwoLayer, example_rates(), link, link);
  CHECK(est.compute_s.edge == Approx(0.5).epsilon(1e-12));
  CHECK(est.compute_s.fog == Approx(0.15).epsilon(1e-12));
  CHECK(est.compute_s.cloud == Approx(0.02).epsilon(1e-12));
  CHECK(est.edge_fog_transfer_s == Approx(0.105).epsilon(1e-12));
  CHECK(est.fog_cloud_transfer_s == Approx(0.015).epsilon(1e-12));
  CHECK(est.latency_s == Approx(0.79).epsilon(1e-12));
  CHECK(est.energy_j.edge == Approx(6.0).epsilon(1e-12));
  CHECK(est.energy_j.fog == Approx(2.25).epsilon(1e-12));
  CHECK(est.energy_j.cloud == Approx(0.6).epsilon(1e-12));
  CHECK(est.total_energy_j == Approx(8.85).epsilon(1e-12));
}

TEST_CASE("negligible payloads leave only compute") {
  const ModelProfile p("ones", {1, 1, 1, 1}, {0.1, 0.2, 0.3, 0.2, 0.2});
  const LinkModel link{0.0, 1e12, true};
  for (Split s : {Split{0, 1}, Split{1, 3}, Split{2, 3}}) {
    const auto est = estimate_split(s, p, example_rates(), link, link);
    CHECK(std::abs(est.latency_s - (est.compute_s.edge + est.compute_s.fog + est.compute_s.cloud)) <= 1e-6);
  }
}

TEST_CASE("estimate rejects invalid splits") {
  const LinkModel link{0.0, 1e6, true};
  CHECK_THROWS_AS(estimate_split({1, 1}, kTwoLayer, example_rates(), link, link), InvalidSplitError);
  CHECK_THROWS_AS(estimate_split({0, 2}, kTwoLayer, example_rates(), link, link), InvalidSplitError);
}

TEST_CASE("estimates agree with the oracle and keep their invariants") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 38);
    const auto t = oracle::random_truth(rng, n);
    const auto profile = oracle::to_profile(t);
    NodeRates rates;
    rates.seconds_per_work = {t.sigma[0], t.sigma[1], t.sigma[2]};
    rates.watts = {t.power[0], t.power[1], t.power[2]};
    const LinkModel ef{t.omega[0], t.beta[0], true}, fc{t.omega[1], t.beta[1], true};
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto est = estimate_split({i, j}, profile, rates, ef, fc);
        const auto want = oracle::cost(t, i, j);
        CHECK(oracle::rel_close(est.latency_s, want.latency, 1e-12));
        CHECK(oracle::rel_close(est.energy_j.edge, want.e_edge, 1e-12));
        CHECK(oracle::rel_close(est.total_energy_j, want.e_total(), 1e-12));
        CHECK(std::abs(est.latency_s - (est.compute_s.edge + est.compute_s.fog + est.compute_s.cloud +
                                        est.edge_fog_transfer_s + est.fog_cloud_transfer_s)) <= 1e-9);
        CHECK(est.total_energy_j >= est.energy_j.edge);
        CHECK(est.energy_j.edge >= 0.0);
        const auto w = work_shares(profile, {i, j});
        CHECK(w.edge >= 0.0);
        CHECK(w.fog >= 0.0);
        CHECK(w.cloud >= 0.0);
        CHECK(std::abs(w.edge + w.fog + w.cloud - 1.0) <= 1e-9);
        CHECK(std::abs(est.compute_s.edge / rates.seconds_per_work.edge +
                       est.compute_s.fog / rates.seconds_per_work.fog +
                       est.compute_s.cloud / rates.seconds_per_work.cloud - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("monotonicity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 20);
    auto t = oracle::random_truth(rng, n);
    NodeRates rates;
    rates.seconds_per_work = {t.sigma[0], t.sigma[1], t.sigma[2]};
    rates.watts = {t.power[0], t.power[1], t.power[2]};
    const LinkModel ef{t.omega[0], t.beta[0], true}, fc{t.omega[1], t.beta[1], true};
    const int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 2));
    const int j = i + 1;
    const auto base = estimate_split({i, j}, oracle::to_profile(t), rates, ef, fc);

    auto bigger = t;
    bigger.B[static_cast<std::size_t>(i)] += 1000;
    CHECK(estimate_split({i, j}, oracle::to_profile(bigger), rates, ef, fc).latency_s > base.latency_s);

    for (Tier tier : kTiers) {
      auto slower = rates;
      slower.seconds_per_work[tier] *= 1.5;
      CHECK(estimate_split({i, j}, oracle::to_profile(t), slower, ef, fc).latency_s >= base.latency_s);
    }
    // one layer fewer on the edge
    CHECK(estimate_split({i - 1, j}, oracle::to_profile(t), rates, ef, fc).energy_j.edge < base.energy_j.edge);
  }
}

TEST_CASE("rate fit examples") {
  const ModelProfile p("fit", {10, 10, 10, 10}, {0.25, 0.25, 0.2, 0.2, 0.1});
  // edge shares 0.25 and 0.5
  std::vector<InferenceSample> s{sample({0, 1}, {0.25, 0.1, 0.1}), sample({1, 2}, {0.5, 0.1, 0.1})};
  CHECK(fit_rates(s, p).seconds_per_work.edge == Approx(1.0).epsilon(1e-12));

  const ModelProfile q("fit2", {10, 10, 10, 10}, {0.4, 0.4, 0.1, 0.05, 0.05});
  // edge shares 0.4 and 0.8
  s = {sample({0, 1}, {0.5, 0.1, 0.1}), sample({1, 2}, {0.9, 0.1, 0.1})};
  CHECK(fit_rates(s, q).seconds_per_work.edge == Approx(1.15).epsilon(1e-12));

  s = {sample({0, 1}, {0.5, 0.02, 0.1}, {6, 0.30, 1}), sample({1, 2}, {0.9, 0.01, 0.1}, {10.8, 0.15, 1})};
  const auto r = fit_rates(s, q, 12.0);
  CHECK(r.watts.fog == Approx(15.0).epsilon(1e-12));
  CHECK(r.watts.cloud == Approx(10.0).epsilon(1e-12));
  CHECK(r.watts.edge == 12.0);
  CHECK(fit_rates(s, q, 9.5).watts.edge == 9.5);
}

TEST_CASE("rate fit refuses uncovered nodes") {
  const ModelProfile p("fit", {10, 10, 10, 10}, {0.25, 0.25, 0.2, 0.2, 0.1});
  std::vector<InferenceSample> s{sample({0, 1}, {0.25, 0.1, 0.0})};
  try {
    fit_rates(s, p);
    FAIL("expected RateFitCoverageError");
  } catch (const RateFitCoverageError& e) {
    CHECK(e.node() == "cloud");
  }
  CHECK_THROWS_AS(fit_rates(std::vector<InferenceSample>{}, p), RateFitCoverageError);
}
