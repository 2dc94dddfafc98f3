#pragma once

#include <vector>

#include "wdmpair/source_detection.hpp"
#include "wdmpair/spectral_core.hpp"
#include "wdmpair/types.hpp"

namespace wdmpair {

/// Fringe visibility below which no entanglement is possible (sqrt(2)/2).
inline constexpr double kEntanglementVisibilityBound = 0.7071067811865476;

// Inband pair emission probabilities outside this range are flagged as
// out-of-sweep-range by the sweep and inversion helpers.
inline constexpr double kSweepPMin = 0.01;
inline constexpr double kSweepPMax = 0.18;

inline bool in_sweep_range(double p) { return p >= kSweepPMin && p <= kSweepPMax; }

/// One point of a figure-of-merit sweep.
struct FomPoint {
  double p_inband = 0.0;
  SplittingMode mode = SplittingMode::Deterministic;
  double p_tc = 0.0;
  double p_ac = 0.0;
  double v_max = 0.0;
  double brightness_cps = 0.0;
  bool entanglable = false;  // v_max > sqrt(2)/2
};

/// Maximum attainable visibility from the accidental-to-true coincidence
/// ratio: 1 / (1 + 2 ratio).
double vmax(double ratio_ac_tc);

/// Inverts a measured accidental-to-true ratio to the inband pair emission
/// probability: p = (I2 / I1) ratio for deterministic splitting and
/// p = (I2 / (2 I1)) ratio for statistical splitting.
double invert_p(double ratio_ac_tc, double i1_thz, double i2_thz, SplittingMode mode);

/// True coincidences per second: p_tc * trigger_rate * live_fraction.
double brightness(double p_tc, const DetectorSpec& det, double live_fraction);

struct SweepRequest {
  SplittingMode mode = SplittingMode::Deterministic;
  // Deterministic splitting uses the (channel_a, channel_b) pair; statistical
  // splitting reads one shared channel, channel_a (channel_b ignored).
  int channel_a = 23;
  int channel_b = 25;
  double p_min = kSweepPMin;
  double p_max = kSweepPMax;
  int points = 18;
  bool log_spacing = false;
};

/// Runs the forward model over a grid of p values and assembles the figure of
/// merit at each point; output is ordered by ascending p. Both detectors'
/// dead-time live fractions are applied to the brightness.
std::vector<FomPoint> sweep_fom(const DemuxSpec& demux, const SweepRequest& request,
                                Frequency pump, const DetectorSpec& det,
                                double coupling_efficiency = 1.0);

}  // namespace wdmpair
