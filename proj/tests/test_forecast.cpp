#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "energyopt/error.hpp"
#include "energyopt/forecast/ensemble.hpp"
#include "energyopt/forecast/hierarchy.hpp"

using namespace energyopt::forecast;
using energyopt::ValidationError;
using energyopt::ts::Duration;
using energyopt::ts::parse_iso8601;
using energyopt::ts::TimePoint;

namespace {

const TimePoint kStart = parse_iso8601("2022-01-03T00:00:00Z");

TimeSeries series(std::vector<double> v) { return TimeSeries(kStart, Duration{1800}, std::move(v), "kWh"); }

TimeSeries daily_pattern(std::size_t n, double phase = 0.0) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    v[t] = 50.0 + 20.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 48.0 + phase);
  }
  return series(v);
}

ModelPool default_pool() {
  ModelPool pool;
  pool.push_back(std::make_unique<EmaModel>(0.3));
  pool.push_back(std::make_unique<SeasonalNaiveModel>(48));
  pool.push_back(std::make_unique<LinearArModel>(2));
  return pool;
}

}  // namespace

TEST_CASE("ema_forecast") {
  CHECK(ema_forecast(series({5, 5, 5}), 0.37, 4).values == std::vector<double>(4, 5.0));
  // Hand recursion: level 0 -> 0 -> 5.
  CHECK(ema_forecast(series({0, 10}), 0.5, 3).values == std::vector<double>(3, 5.0));
  CHECK(ema_forecast(series({3, 9, 4}), 1.0, 2).values == std::vector<double>(2, 4.0));
  CHECK_THROWS_AS(ema_forecast(series({1}), 0.0, 1), ValidationError);
  CHECK_THROWS_AS(ema_forecast(series({1}), 1.5, 1), ValidationError);
  const auto f = ema_forecast(series({1, 2}), 0.5, 2);
  CHECK(f.start == kStart + Duration{3600});
}

TEST_CASE("seasonal_naive_forecast") {
  const auto hist = daily_pattern(48 * 3);
  const auto actual = daily_pattern(48 * 4).slice(48 * 3, 48 * 4);
  const auto f = seasonal_naive_forecast(hist, 48, 48);
  CHECK(score(actual, f).mae == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(seasonal_naive_forecast(series({1, 2, 7}), 1, 3).values == std::vector<double>(3, 7.0));
  CHECK_THROWS_AS(seasonal_naive_forecast(series({1, 2}), 3, 1), ValidationError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 10);
  std::vector<double> v(30);
  for (auto& x : v) x = u(rng);
  const auto g = seasonal_naive_forecast(series(v), 7, 5);
  for (std::size_t h = 0; h < 5; ++h) CHECK(g[h] == v[30 + h - 7]);
}

TEST_CASE("linear_ar_forecast") {
  SUBCASE("exact doubling recovers the coefficient") {
    std::vector<double> v{1.0};
    for (int t = 1; t < 20; ++t) v.push_back(2.0 * v.back());
    LinearArModel m(1);
    m.fit(series(v));
    CHECK(std::abs(m.coefficients()[1] - 2.0) <= 1e-9);
    const auto f = m.predict(3);
    CHECK(f[0] == doctest::Approx(2.0 * v.back()).epsilon(1e-9));
    CHECK(f[2] == doctest::Approx(8.0 * v.back()).epsilon(1e-9));
  }
  SUBCASE("zero-variance exogenous column is rank deficient") {
    std::vector<double> v(40);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (auto& x : v) x = g(rng);
    const TimeSeries flat = series(std::vector<double>(50, 3.0));
    CHECK_THROWS_WITH_AS(linear_ar_forecast(series(v), 1, {flat}, 2), doctest::Contains("exog[0]"), ValidationError);
  }
  SUBCASE("white noise gives a coefficient near zero") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(10.0, 1.0);
    std::vector<double> v(2000);
    for (auto& x : v) x = g(rng);
    LinearArModel m(1);
    m.fit(series(v));
    CHECK(std::abs(m.coefficients()[1]) <= 3.0 * m.standard_errors()[1]);
    CHECK(m.predict(1)[0] == doctest::Approx(10.0).epsilon(0.05));
  }
  SUBCASE("too short") { CHECK_THROWS_AS(linear_ar_forecast(series({1, 2, 3}), 2, {}, 1), ValidationError); }
}

TEST_CASE("update_weights") {
  auto w = update_weights(std::vector<double>{1.0, 3.0}, 1e-15);
  CHECK(w.w[0] == doctest::Approx(0.75));
  CHECK(w.w[1] == doctest::Approx(0.25));
  w = update_weights(std::vector<double>{2.0, 2.0, 2.0});
  for (double x : w.w) CHECK(x == doctest::Approx(1.0 / 3.0));
  w = update_weights(std::vector<double>{0.0, 1.0}, 1e-6);
  CHECK(w.w[0] > 0.999);
  CHECK_THROWS_AS(update_weights(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(update_weights(std::vector<double>{1.0}, 0.0), ValidationError);
}

TEST_CASE("weights stay normalised and ordered (property)") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> e(1 + trial % 6);
    for (auto& x : e) x = u(rng);
    const auto w = update_weights(e);
    double sum = 0.0;
    for (double x : w.w) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    for (std::size_t a = 0; a < e.size(); ++a) {
      for (std::size_t b = 0; b < e.size(); ++b) {
        if (e[a] < e[b]) CHECK(w.w[a] > w.w[b]);
      }
    }
  }
}

TEST_CASE("ensemble_forecast") {
  const auto a = series({1, 2, 3});
  CHECK(ensemble_forecast({a}, EnsembleWeights{{1.0}}).values == a.values);
  CHECK(ensemble_forecast({series({0, 0}), series({10, 10})}, EnsembleWeights{{0.5, 0.5}}).values ==
        std::vector<double>{5, 5});
  CHECK_THROWS_AS(ensemble_forecast({series({1, 2}), series({1})}, EnsembleWeights{{0.5, 0.5}}), ValidationError);
  CHECK_THROWS_AS(ensemble_forecast({a, a}, EnsembleWeights{{0.5, 0.6}}), ValidationError);
  CHECK_THROWS_AS(ensemble_forecast({a}, EnsembleWeights{{0.5, 0.5}}), ValidationError);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TimeSeries> members;
    std::vector<double> errors;
    for (int m = 0; m < 3; ++m) {
      std::vector<double> v(10);
      for (auto& x : v) x = u(rng);
      members.push_back(series(v));
      errors.push_back(std::abs(u(rng)));
    }
    const auto ens = ensemble_forecast(members, update_weights(errors));
    for (std::size_t k = 0; k < 10; ++k) {
      const double lo = std::min({members[0][k], members[1][k], members[2][k]});
      const double hi = std::max({members[0][k], members[1][k], members[2][k]});
      CHECK(ens[k] >= lo - 1e-12);
      CHECK(ens[k] <= hi + 1e-12);
    }
  }
}

TEST_CASE("backtest with a perfect model converges on it") {
  const auto hist = daily_pattern(48 * 12);
  ModelPool pool;
  pool.push_back(std::make_unique<EmaModel>(0.3));
  pool.push_back(std::make_unique<SeasonalNaiveModel>(48));
  const auto r = backtest(pool, hist, {}, {48, 96, 96});
  REQUIRE(r.trajectory.size() == 10);
  CHECK(r.trajectory.front().weights.w[1] == doctest::Approx(0.5));
  for (std::size_t f = 1; f < r.trajectory.size(); ++f) CHECK(r.trajectory[f].weights.w[1] > 0.999);
  CHECK(r.members[1].mae < 1e-9);
  // The first fold is uniformly weighted; thereafter the ensemble is exact.
  const auto late = score(hist.slice(144, hist.size()), r.ensemble_predictions.slice(144, hist.size()));
  CHECK(late.mae < 1e-3);
}

TEST_CASE("backtest of a single model equals scoring that model") {
  const auto hist = daily_pattern(48 * 6, 0.4);
  ModelPool pool;
  pool.push_back(std::make_unique<EmaModel>(0.5));
  const auto r = backtest(pool, hist, {}, {24, 48, 48});
  CHECK(r.ensemble.mae == r.members[0].mae);
  CHECK(r.ensemble.rmse == r.members[0].rmse);
  for (const auto& f : r.trajectory) CHECK(f.weights.w[0] == 1.0);
}

TEST_CASE("backtest weights respond to a regime change only after it happens") {
  // Periodic for 6 days then flat at the day-boundary level: seasonal naive
  // wins first, and the fold right after the switch favours the EMA.
  const std::size_t switch_at = 48 * 6;
  std::vector<double> v = daily_pattern(48 * 9).values;
  for (std::size_t t = switch_at; t < v.size(); ++t) v[t] = 50.0;
  const auto hist = series(v);
  ModelPool pool;
  pool.push_back(std::make_unique<EmaModel>(0.9));
  pool.push_back(std::make_unique<SeasonalNaiveModel>(48));
  const auto r = backtest(pool, hist, {}, {48, 48, 96});
  bool saw_switch_fold = false;
  for (const auto& f : r.trajectory) {
    const auto origin = static_cast<std::size_t>((f.origin - kStart) / Duration{1800});
    if (origin > 96 && origin <= switch_at) CHECK(f.weights.w[1] > 0.9);
    if (origin == switch_at + 48) {
      saw_switch_fold = true;
      CHECK(f.weights.w[0] > 0.75);
    }
  }
  CHECK(saw_switch_fold);
}

TEST_CASE("backtest is causality-safe") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 2.0);
  auto hist = daily_pattern(48 * 8);
  for (auto& x : hist.values) x += g(rng);
  const BacktestOptions opts{48, 96, 96};
  const auto full = backtest(default_pool(), hist, {}, opts);
  for (std::size_t fold = 0; fold < full.trajectory.size(); fold += 2) {
    const std::size_t boundary = 96 + (fold + 1) * 48;
    auto cut = hist;
    for (std::size_t t = boundary; t < cut.size(); ++t) cut[t] = 0.0;
    const auto partial = backtest(default_pool(), cut, {}, opts);
    for (std::size_t f = 0; f <= fold; ++f) CHECK(partial.trajectory[f].weights.w == full.trajectory[f].weights.w);
    for (std::size_t t = 96; t < std::min(boundary, hist.size()); ++t) {
      CHECK(partial.ensemble_predictions[t] == full.ensemble_predictions[t]);
    }
  }
}

TEST_CASE("backtest rejects a window longer than the history") {
  CHECK_THROWS_AS(backtest(default_pool(), daily_pattern(100), {}, {48, 200, 0}), ValidationError);
}

TEST_CASE("aggregate_bottom_up") {
  Hierarchy h;
  h.meter_to_contract = {{"m1", "c1"}, {"m2", "c1"}};
  h.contract_to_sector = {{"c1", "s1"}};
  h.sector_to_district = {{"s1", "d1"}};
  const std::map<std::string, TimeSeries> meters{{"m1", series({1, 2})}, {"m2", series({3, 4})}};
  CHECK(aggregate_bottom_up(meters, h, Level::contract).at("c1").values == std::vector<double>{4, 6});
  CHECK(aggregate_bottom_up(meters, h, Level::portfolio).at(kPortfolioNode).values == std::vector<double>{4, 6});

  auto extra = meters;
  extra["m3"] = series({1, 1});
  CHECK_THROWS_AS(aggregate_bottom_up(extra, h, Level::sector), ValidationError);
  CHECK_THROWS_AS(aggregate_bottom_up({{"m1", series({1, 2})}}, h, Level::sector), ValidationError);
}

TEST_CASE("hierarchy from labels rejects a node with two parents") {
  std::vector<energyopt::ts::MeterRecord> recs{
      {"m1", series({1}), {{"contract", "c1"}, {"sector", "s1"}, {"district", "d1"}}},
      {"m2", series({1}), {{"contract", "c1"}, {"sector", "s2"}, {"district", "d1"}}}};
  CHECK_THROWS_AS(Hierarchy::from_labels(recs), ValidationError);
  recs[1].labels.erase("district");
  CHECK_THROWS_AS(Hierarchy::from_labels(recs), ValidationError);
}

TEST_CASE("bottom-up coherence on random hierarchies (property)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<energyopt::ts::MeterRecord> recs;
    std::map<std::string, TimeSeries> meters;
    for (int m = 0; m < 30; ++m) {
      const int c = static_cast<int>(rng() % 10);
      const int s = c % 4;
      const int d = s % 2;
      std::vector<double> v(12);
      for (auto& x : v) x = u(rng);
      const std::string id = "m" + std::to_string(m);
      recs.push_back({id, series(v),
                      {{"contract", "c" + std::to_string(c)},
                       {"sector", "s" + std::to_string(s)},
                       {"district", "d" + std::to_string(d)}}});
      meters[id] = series(v);
    }
    const auto h = Hierarchy::from_labels(recs);
    const std::vector<Level> levels{Level::meter, Level::contract, Level::sector, Level::district, Level::portfolio};
    for (std::size_t li = 1; li < levels.size(); ++li) {
      const auto parents = aggregate_bottom_up(meters, h, levels[li]);
      const auto kids = aggregate_bottom_up(meters, h, levels[li - 1]);
      for (const auto& [node, children] : h.children(levels[li])) {
        for (std::size_t k = 0; k < 12; ++k) {
          double sum = 0.0;
          for (const auto& c : children) sum += kids.at(c)[k];
          CHECK(parents.at(node)[k] == sum);
        }
      }
    }
    // Flat sum over all meters agrees with the portfolio up to rounding.
    const auto top = aggregate_bottom_up(meters, h, Level::portfolio).at(kPortfolioNode);
    for (std::size_t k = 0; k < 12; ++k) {
      double flat = 0.0;
      for (const auto& [id, s] : meters) flat += s[k];
      CHECK(top[k] == doctest::Approx(flat).epsilon(1e-12));
    }
  }
}
