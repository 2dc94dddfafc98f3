#include "wdmpair/figures_of_merit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wdmpair {

double vmax(double ratio_ac_tc) {
  if (ratio_ac_tc < 0.0) throw std::invalid_argument("accidental/true ratio must be nonnegative");
  return 1.0 / (1.0 + 2.0 * ratio_ac_tc);
}

double invert_p(double ratio_ac_tc, double i1_thz, double i2_thz, SplittingMode mode) {
  if (!(i1_thz > 0.0)) throw std::invalid_argument("I1 must be positive");
  if (!(i2_thz > 0.0) || i2_thz > i1_thz) {
    throw std::invalid_argument("I2 must be in (0, I1]; transmission cannot exceed unity");
  }
  if (ratio_ac_tc < 0.0) throw std::invalid_argument("accidental/true ratio must be nonnegative");
  if (mode == SplittingMode::Statistical) {
    return i2_thz / (2.0 * i1_thz) * ratio_ac_tc;
  }
  return i2_thz / i1_thz * ratio_ac_tc;
}

double brightness(double p_tc, const DetectorSpec& det, double live_fraction) {
  if (p_tc < 0.0 || p_tc > 1.0) throw std::invalid_argument("p_tc must be in [0, 1]");
  if (!(live_fraction > 0.0) || live_fraction > 1.0) {
    throw std::invalid_argument("live fraction must be in (0, 1]");
  }
  return p_tc * det.trigger_rate_hz * live_fraction;
}

std::vector<FomPoint> sweep_fom(const DemuxSpec& demux, const SweepRequest& request,
                                Frequency pump, const DetectorSpec& det,
                                double coupling_efficiency) {
  if (request.points < 2) throw std::invalid_argument("sweep needs at least 2 points");
  if (!(request.p_min > 0.0) || request.p_min > request.p_max || request.p_max > 0.5) {
    throw std::invalid_argument("sweep p range must satisfy 0 < p_min <= p_max <= 0.5");
  }

  bool statistical = request.mode == SplittingMode::Statistical;
  const ChannelSpec* ch_a = demux.find_channel(request.channel_a);
  const ChannelSpec* ch_b =
      statistical ? ch_a : demux.find_channel(request.channel_b);
  if (ch_a == nullptr || ch_b == nullptr) {
    throw std::invalid_argument("sweep references a channel absent from the demux");
  }

  // Energy conservation: the channel pair (or the shared channel, twice) must
  // be symmetric about pump/2 for the pairs to overlap the filters at all.
  double asym_ghz = std::abs(to_ghz(ch_a->center + ch_b->center - pump));
  if (asym_ghz > 2.0 * demux.centering_tolerance_ghz) {
    throw std::invalid_argument("channel pair " + std::to_string(ch_a->itu_number) + "-" +
                                std::to_string(ch_b->itu_number) +
                                " is not symmetric about pump/2 (offset " +
                                std::to_string(asym_ghz) + " GHz)");
  }

  NormalizedCurve shape_a = normalize_shape(ch_a->curve);
  NormalizedCurve shape_b = normalize_shape(ch_b->curve);
  double i1 = integral_i1(shape_a.shape);
  double i2 = integral_i2(shape_a.shape, shape_b.shape, pump);
  // quadrature noise can graze 1 for perfectly overlapped rectangles
  double ratio = std::min(1.0, i2 / i1);

  PathEfficiency eta_s = make_path_efficiency(shape_a.peak * coupling_efficiency * det.efficiency);
  PathEfficiency eta_i = make_path_efficiency(shape_b.peak * coupling_efficiency * det.efficiency);
  double dark = dark_prob_per_gate(det);

  // Points are independent; the output stays ordered by p whatever the
  // schedule does.
  std::vector<FomPoint> out(request.points);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < request.points; ++k) {
    double p = request.log_spacing
                   ? request.p_min * std::exp(k * (std::log(request.p_max / request.p_min) /
                                                   (request.points - 1)))
                   : request.p_min + k * (request.p_max - request.p_min) / (request.points - 1);
    p = std::min(p, request.p_max);  // exp/log can overshoot the last point
    SourceSpec src = make_source(pump, p);
    CoincidenceProbs probs = forward_model(src, eta_s, eta_i, ratio, request.mode, dark);
    FomPoint point;
    point.p_inband = p;
    point.mode = request.mode;
    point.p_tc = probs.p_tc;
    point.p_ac = probs.p_ac;
    point.v_max = vmax(probs.p_ac / probs.p_tc);
    double live = dead_time_live_fraction(det, probs.p_single_s) *
                  dead_time_live_fraction(det, probs.p_single_i);
    point.brightness_cps = brightness(probs.p_tc, det, live);
    point.entanglable = point.v_max > kEntanglementVisibilityBound;
    out[k] = point;
  }
  return out;
}

}  // namespace wdmpair
