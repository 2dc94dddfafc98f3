#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "wdmpair/figures_of_merit.hpp"
#include "wdmpair/source_detection.hpp"

using namespace wdmpair;

namespace {

const Frequency kPump = thz(384.8);

DetectorSpec setup_detector(double dark_cps = 500.0) {
  return make_detector(2e6, 20.0, dark_cps, 10.0, 0.1);
}

}  // namespace

TEST_CASE("dark probability per gate") {
  CHECK(dark_prob_per_gate(setup_detector(500.0)) == doctest::Approx(2.5e-4).epsilon(1e-12));
  CHECK(dark_prob_per_gate(setup_detector(0.0)) == 0.0);
  CHECK(dark_prob_per_gate(setup_detector(1000.0)) == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("detector validation") {
  CHECK_THROWS_AS(make_detector(0.0, 20.0, 500.0, 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_detector(2e6, -1.0, 500.0, 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_detector(2e6, 20.0, -5.0, 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_detector(2e6, 20.0, 500.0, 10.0, 1.5), std::invalid_argument);
  // gates may not overlap: 600 ns gates at 2 MHz would
  CHECK_THROWS_AS(make_detector(2e6, 600.0, 500.0, 10.0, 0.1), std::invalid_argument);
}

TEST_CASE("forward model reproduces the splitting-mode ratios") {
  SourceSpec src = make_source(kPump, 0.05);

  auto det = forward_model(src, {1.0}, {1.0}, 1.0, SplittingMode::Deterministic, 0.0);
  CHECK(det.p_tc == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(det.p_ac == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(det.p_ac / det.p_tc == doctest::Approx(0.05).epsilon(1e-12));

  auto stat = forward_model(src, {1.0}, {1.0}, 1.0, SplittingMode::Statistical, 0.0);
  CHECK(stat.p_tc == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(stat.p_ac == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(stat.p_ac / stat.p_tc == doctest::Approx(0.1).epsilon(1e-12));

  // source off: only dark coincidences remain
  auto off = forward_model(make_source(kPump, 0.0), {1.0}, {1.0}, 1.0,
                           SplittingMode::Deterministic, 2.5e-4);
  CHECK(off.p_tc == 0.0);
  CHECK(off.p_ac == doctest::Approx(2.5e-4 * 2.5e-4).epsilon(1e-12));
}

TEST_CASE("forward model rejects invalid input") {
  SourceSpec src = make_source(kPump, 0.05);
  CHECK_THROWS_AS(forward_model(src, {0.8}, {0.7}, 1.0, SplittingMode::Statistical, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(forward_model(src, {1.0}, {1.0}, 0.0, SplittingMode::Deterministic, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(forward_model(src, {1.0}, {1.0}, 1.1, SplittingMode::Deterministic, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_source(kPump, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(make_source(kPump, -0.1), std::invalid_argument);
}

TEST_CASE("inversion round trip recovers p in both modes") {
  std::mt19937_64 rng(93);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double p = 1e-3 + 0.499 * u(rng);
    double eta = 0.01 + 0.99 * u(rng);
    double ratio_i2_i1 = 0.05 + 0.95 * u(rng);
    SourceSpec src = make_source(kPump, p);
    for (SplittingMode mode : {SplittingMode::Deterministic, SplittingMode::Statistical}) {
      auto probs = forward_model(src, {eta}, {eta}, ratio_i2_i1, mode, 0.0);
      double recovered = invert_p(probs.p_ac / probs.p_tc, 1.0, ratio_i2_i1, mode);
      CHECK(std::abs(recovered - p) / p < 1e-12);
    }
    // deterministic inversion is independent of unequal arm efficiencies
    double eta_i = 0.01 + 0.99 * u(rng);
    auto probs = forward_model(src, {eta}, {eta_i}, ratio_i2_i1, SplittingMode::Deterministic, 0.0);
    double recovered = invert_p(probs.p_ac / probs.p_tc, 1.0, ratio_i2_i1,
                                SplittingMode::Deterministic);
    CHECK(std::abs(recovered - p) / p < 1e-12);
  }
}

TEST_CASE("monotonicity and the dark-count direction") {
  SourceSpec lo = make_source(kPump, 0.02);
  SourceSpec hi = make_source(kPump, 0.04);
  auto mode = SplittingMode::Deterministic;
  CHECK(forward_model(hi, {0.5}, {0.5}, 0.8, mode, 0.0).p_tc >
        forward_model(lo, {0.5}, {0.5}, 0.8, mode, 0.0).p_tc);
  CHECK(forward_model(lo, {0.7}, {0.5}, 0.8, mode, 0.0).p_tc >
        forward_model(lo, {0.5}, {0.5}, 0.8, mode, 0.0).p_tc);
  CHECK(forward_model(lo, {0.5}, {0.7}, 0.8, mode, 0.0).p_tc >
        forward_model(lo, {0.5}, {0.5}, 0.8, mode, 0.0).p_tc);
  CHECK(forward_model(lo, {0.5}, {0.5}, 0.9, mode, 0.0).p_tc >
        forward_model(lo, {0.5}, {0.5}, 0.8, mode, 0.0).p_tc);

  auto dark = forward_model(lo, {0.5}, {0.5}, 0.8, mode, 2.5e-4);
  auto no_dark = forward_model(lo, {0.5}, {0.5}, 0.8, mode, 0.0);
  CHECK(dark.p_ac > no_dark.p_ac);
  CHECK(dark.p_tc == no_dark.p_tc);
}

TEST_CASE("statistical ratio at p equals deterministic ratio at 2p") {
  for (double p : {0.005, 0.01, 0.02, 0.05, 0.09}) {
    auto stat = forward_model(make_source(kPump, p), {0.4}, {0.4}, 0.7,
                              SplittingMode::Statistical, 0.0);
    auto det = forward_model(make_source(kPump, 2.0 * p), {0.4}, {0.4}, 0.7,
                             SplittingMode::Deterministic, 0.0);
    CHECK(stat.p_ac / stat.p_tc == doctest::Approx(det.p_ac / det.p_tc).epsilon(1e-13));
  }
}

TEST_CASE("dead-time live fraction") {
  DetectorSpec det = setup_detector();
  CHECK(dead_time_live_fraction(det, 0.0) == 1.0);
  // a 10 us dead time blocks 20 gates at 2 MHz
  CHECK(dead_time_live_fraction(det, 0.05) == doctest::Approx(0.5).epsilon(1e-12));
  DetectorSpec no_dead = make_detector(2e6, 20.0, 500.0, 0.0, 0.1);
  CHECK(dead_time_live_fraction(no_dead, 0.3) == 1.0);
}
