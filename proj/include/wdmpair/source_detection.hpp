#pragma once

#include "wdmpair/types.hpp"

namespace wdmpair {

/// Pair source: pump frequency plus the inband pair emission probability per
/// detection gate.
struct SourceSpec {
  Frequency pump;
  double p_inband = 0.0;
};

SourceSpec make_source(Frequency pump, double p_inband);

/// Gated single-photon detector parameters.
struct DetectorSpec {
  double trigger_rate_hz = 2e6;
  double gate_width_ns = 20.0;
  double dark_rate_cps = 500.0;
  double dead_time_us = 10.0;
  double efficiency = 0.1;
};

DetectorSpec make_detector(double trigger_rate_hz, double gate_width_ns, double dark_rate_cps,
                           double dead_time_us, double efficiency);

/// Lumped transmission of one arm: channel peak transmission times coupling
/// losses times detector efficiency.
struct PathEfficiency {
  double value = 1.0;
};

PathEfficiency make_path_efficiency(double value);

/// Per-gate detection probabilities for the two arms.
struct CoincidenceProbs {
  double p_single_s = 0.0;
  double p_single_i = 0.0;
  double p_tc = 0.0;  // true coincidences
  double p_ac = 0.0;  // accidental coincidences
};

/// Dark-count probability per gate: dark rate over trigger rate.
double dark_prob_per_gate(const DetectorSpec& det);

/// First-order model of singles, true and accidental coincidences per gate.
///
/// Multi-pair emission enters only through the accidentals (product of the
/// singles); higher-order corrections are the Monte Carlo oracle's job.
/// i2_over_i1 is the unit-peak overlap ratio of the channel shapes; the peaks
/// live in the path efficiencies. Statistical splitting shares one physical
/// channel, so it requires eta_s == eta_i.
CoincidenceProbs forward_model(const SourceSpec& src, PathEfficiency eta_s, PathEfficiency eta_i,
                               double i2_over_i1, SplittingMode mode, double dark_per_gate);

/// Per-arm dark probabilities; the single-dark overload applies one value to
/// both arms.
CoincidenceProbs forward_model(const SourceSpec& src, PathEfficiency eta_s, PathEfficiency eta_i,
                               double i2_over_i1, SplittingMode mode, double dark_s,
                               double dark_i);

/// Fraction of gates a detector is live when each click blocks the following
/// dead_time * trigger_rate gates: 1 / (1 + p_click * trigger_rate * dead_time).
double dead_time_live_fraction(const DetectorSpec& det, double p_click);

}  // namespace wdmpair
