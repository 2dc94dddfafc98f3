#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "wdmpair/figures_of_merit.hpp"

using namespace wdmpair;

namespace {

const Frequency kPump = thz(384.8);

DemuxSpec grid_demux(double peak = 1.0, int flattop_order = 0) {
  std::vector<ChannelSpec> channels;
  for (int n = 21; n <= 27; ++n) {
    TransmissionCurve curve =
        flattop_order > 0 ? make_flattop(itu_center_frequency(n), 100.0, peak, flattop_order)
                          : make_gaussian(itu_center_frequency(n), 100.0, peak);
    channels.push_back(make_channel(n, curve));
  }
  return make_demux(DemuxTechnology::DG, std::move(channels));
}

}  // namespace

TEST_CASE("vmax anchors") {
  CHECK(vmax(0.0) == 1.0);
  CHECK(vmax(1.0) == 1.0 / 3.0);
  double bound_ratio = (std::sqrt(2.0) - 1.0) / 2.0;
  CHECK(std::abs(vmax(bound_ratio) - std::sqrt(2.0) / 2.0) < 1e-12);
  CHECK_THROWS_AS(vmax(-0.1), std::invalid_argument);
}

TEST_CASE("vmax is strictly decreasing with limits 1 and 0") {
  double prev = vmax(0.0);
  CHECK(prev == 1.0);
  for (double ratio : {0.01, 0.05, 0.2, 1.0, 5.0, 50.0, 1e4}) {
    double v = vmax(ratio);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(vmax(1e12) < 1e-11);
}

TEST_CASE("invert_p anchors and flagging") {
  CHECK(invert_p(0.05, 1.0, 1.0, SplittingMode::Deterministic) ==
        doctest::Approx(0.05).epsilon(1e-15));
  CHECK(invert_p(0.05, 1.0, 1.0, SplittingMode::Statistical) ==
        doctest::Approx(0.025).epsilon(1e-15));
  CHECK_THROWS_AS(invert_p(0.05, 1.0, 1.5, SplittingMode::Deterministic), std::invalid_argument);
  CHECK_THROWS_AS(invert_p(0.05, 0.0, 0.5, SplittingMode::Deterministic), std::invalid_argument);

  CHECK(in_sweep_range(0.05));
  CHECK_FALSE(in_sweep_range(invert_p(0.5, 1.0, 1.0, SplittingMode::Deterministic)));
  CHECK_FALSE(in_sweep_range(invert_p(0.005, 1.0, 1.0, SplittingMode::Deterministic)));
}

TEST_CASE("brightness") {
  DetectorSpec det = make_detector(2e6, 20.0, 500.0, 10.0, 0.1);
  CHECK(brightness(5e-4, det, 1.0) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(brightness(0.0, det, 1.0) == 0.0);
  CHECK(brightness(5e-4, det, 0.5) == doctest::Approx(500.0).epsilon(1e-12));
  CHECK_THROWS_AS(brightness(5e-4, det, 0.0), std::invalid_argument);
}

TEST_CASE("sweep endpoints and visibility ordering") {
  DemuxSpec demux = grid_demux(0.8);
  DetectorSpec det = make_detector(2e6, 20.0, 500.0, 10.0, 0.1);

  SweepRequest req;
  req.mode = SplittingMode::Deterministic;
  req.channel_a = 23;
  req.channel_b = 25;
  req.points = 2;
  auto two = sweep_fom(demux, req, kPump, det);
  REQUIRE(two.size() == 2);
  CHECK(two[0].p_inband == doctest::Approx(0.01));
  CHECK(two[1].p_inband == doctest::Approx(0.18));
  CHECK(two[0].v_max > two[1].v_max);

  req.points = 18;
  auto det_sweep = sweep_fom(demux, req, kPump, det);
  REQUIRE(det_sweep.size() == 18);
  for (std::size_t k = 0; k + 1 < det_sweep.size(); ++k) {
    CHECK(det_sweep[k].p_inband < det_sweep[k + 1].p_inband);
  }

  SweepRequest stat_req = req;
  stat_req.mode = SplittingMode::Statistical;
  stat_req.channel_a = 24;
  auto stat_sweep = sweep_fom(demux, stat_req, kPump, det);
  REQUIRE(stat_sweep.size() == 18);
  for (std::size_t k = 0; k < det_sweep.size(); ++k) {
    CHECK(det_sweep[k].v_max >= stat_sweep[k].v_max);
  }

  // high p pushes the visibility below the entanglement bound; the point is
  // flagged, not dropped
  bool any_flagged_off = false;
  for (const auto& pt : stat_sweep) {
    CHECK(pt.v_max == doctest::Approx(1.0 / (1.0 + 2.0 * pt.p_ac / pt.p_tc)).epsilon(1e-12));
    if (!pt.entanglable) any_flagged_off = true;
  }
  CHECK(any_flagged_off);
}

TEST_CASE("shape and peak orderings across sweeps") {
  DetectorSpec det = make_detector(2e6, 20.0, 500.0, 10.0, 0.1);
  auto demux_of = [](TransmissionCurve (*make)(Frequency, double, double), double peak) {
    std::vector<ChannelSpec> channels;
    for (int n = 23; n <= 25; ++n) {
      channels.push_back(make_channel(n, make(itu_center_frequency(n), 100.0, peak)));
    }
    return make_demux(DemuxTechnology::DG, std::move(channels));
  };
  auto gaussian_demux = [&](double peak) {
    return demux_of(
        [](Frequency c, double fwhm, double peak_) { return make_gaussian(c, fwhm, peak_); },
        peak);
  };
  auto rectangle_demux = [&](double peak) {
    return demux_of(
        [](Frequency c, double width, double peak_) { return make_rectangle(c, width, peak_); },
        peak);
  };

  SweepRequest req;
  req.channel_a = 23;
  req.channel_b = 25;

  // the ideal rectangle (I2/I1 = 1) dominates the Gaussian (I2/I1 = 1/sqrt2)
  auto v_rect = sweep_fom(rectangle_demux(0.8), req, kPump, det);
  auto v_gauss = sweep_fom(gaussian_demux(0.8), req, kPump, det);
  for (std::size_t k = 0; k < v_rect.size(); ++k) {
    CHECK(v_rect[k].v_max > v_gauss[k].v_max);
  }

  // equal shape: the higher peak is strictly brighter at every p
  auto bright = sweep_fom(gaussian_demux(0.9), req, kPump, det);
  auto dim = sweep_fom(gaussian_demux(0.6), req, kPump, det);
  for (std::size_t k = 0; k < bright.size(); ++k) {
    CHECK(bright[k].brightness_cps > dim[k].brightness_cps);
  }
}

TEST_CASE("sweep input validation") {
  DemuxSpec demux = grid_demux();
  DetectorSpec det = make_detector(2e6, 20.0, 500.0, 10.0, 0.1);
  SweepRequest req;
  req.channel_a = 23;
  req.channel_b = 25;

  SweepRequest asym = req;
  asym.channel_b = 26;  // 23+26 is 100 GHz off the pump
  CHECK_THROWS_AS(sweep_fom(demux, asym, kPump, det), std::invalid_argument);

  SweepRequest unknown = req;
  unknown.channel_b = 42;
  CHECK_THROWS_AS(sweep_fom(demux, unknown, kPump, det), std::invalid_argument);

  SweepRequest too_few = req;
  too_few.points = 1;
  CHECK_THROWS_AS(sweep_fom(demux, too_few, kPump, det), std::invalid_argument);
}

TEST_CASE("log-spaced sweep hits both endpoints") {
  DemuxSpec demux = grid_demux();
  DetectorSpec det = make_detector(2e6, 20.0, 500.0, 10.0, 0.1);
  SweepRequest req;
  req.channel_a = 23;
  req.channel_b = 25;
  req.points = 7;
  req.log_spacing = true;
  auto pts = sweep_fom(demux, req, kPump, det);
  REQUIRE(pts.size() == 7);
  CHECK(pts.front().p_inband == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(pts.back().p_inband == doctest::Approx(0.18).epsilon(1e-9));
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) CHECK(pts[k].p_inband < pts[k + 1].p_inband);
}
