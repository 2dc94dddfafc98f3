#include "wdmpair/source_detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wdmpair {

SourceSpec make_source(Frequency pump, double p_inband) {
  if (!(pump.thz > 0.0)) throw std::invalid_argument("pump frequency must be positive");
  if (p_inband < 0.0 || p_inband > 0.5) {
    throw std::invalid_argument("p_inband must be in [0, 0.5], got " + std::to_string(p_inband));
  }
  return {pump, p_inband};
}

DetectorSpec make_detector(double trigger_rate_hz, double gate_width_ns, double dark_rate_cps,
                           double dead_time_us, double efficiency) {
  if (!(trigger_rate_hz > 0.0)) throw std::invalid_argument("trigger rate must be positive");
  if (!(gate_width_ns > 0.0)) throw std::invalid_argument("gate width must be positive");
  if (dark_rate_cps < 0.0) throw std::invalid_argument("dark rate must be nonnegative");
  if (dead_time_us < 0.0) throw std::invalid_argument("dead time must be nonnegative");
  if (efficiency < 0.0 || efficiency > 1.0) {
    throw std::invalid_argument("detector efficiency must be in [0, 1]");
  }
  if (trigger_rate_hz * gate_width_ns * 1e-9 > 1.0) {
    throw std::invalid_argument("gates overlap: trigger_rate * gate_width exceeds 1");
  }
  return {trigger_rate_hz, gate_width_ns, dark_rate_cps, dead_time_us, efficiency};
}

PathEfficiency make_path_efficiency(double value) {
  if (value < 0.0 || value > 1.0) {
    throw std::invalid_argument("path efficiency must be in [0, 1], got " + std::to_string(value));
  }
  return {value};
}

double dark_prob_per_gate(const DetectorSpec& det) {
  return det.dark_rate_cps / det.trigger_rate_hz;
}

CoincidenceProbs forward_model(const SourceSpec& src, PathEfficiency eta_s, PathEfficiency eta_i,
                               double i2_over_i1, SplittingMode mode, double dark_per_gate) {
  return forward_model(src, eta_s, eta_i, i2_over_i1, mode, dark_per_gate, dark_per_gate);
}

CoincidenceProbs forward_model(const SourceSpec& src, PathEfficiency eta_s, PathEfficiency eta_i,
                               double i2_over_i1, SplittingMode mode, double dark_s,
                               double dark_i) {
  if (!(i2_over_i1 > 0.0) || i2_over_i1 > 1.0) {
    throw std::invalid_argument("i2_over_i1 must be in (0, 1], got " + std::to_string(i2_over_i1));
  }
  if (dark_s < 0.0 || dark_s > 1.0 || dark_i < 0.0 || dark_i > 1.0) {
    throw std::invalid_argument("dark probability per gate must be in [0, 1]");
  }
  double p = src.p_inband;
  CoincidenceProbs out;
  // Two photons per pair compensate the 1/2 splitter routing, so the singles
  // take the same form in both modes. Clamped: probabilities saturate at 1.
  out.p_single_s = std::min(1.0, p * eta_s.value + dark_s);
  out.p_single_i = std::min(1.0, p * eta_i.value + dark_i);
  if (mode == SplittingMode::Statistical) {
    if (eta_s.value != eta_i.value) {
      throw std::invalid_argument(
          "statistical splitting shares one channel; arm efficiencies must be equal");
    }
    out.p_tc = 0.5 * p * eta_s.value * eta_s.value * i2_over_i1;
  } else {
    out.p_tc = p * eta_s.value * eta_i.value * i2_over_i1;
  }
  out.p_ac = out.p_single_s * out.p_single_i;
  return out;
}

double dead_time_live_fraction(const DetectorSpec& det, double p_click) {
  if (p_click < 0.0 || p_click > 1.0) {
    throw std::invalid_argument("p_click must be in [0, 1]");
  }
  return 1.0 / (1.0 + p_click * det.trigger_rate_hz * det.dead_time_us * 1e-6);
}

}  // namespace wdmpair
