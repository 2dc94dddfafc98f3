#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wdmpair/transmission_curve.hpp"
#include "wdmpair/types.hpp"

namespace wdmpair {

/// Center frequency of ITU channel n on the 100 GHz C-band grid:
/// 190.0 + 0.1 n THz. Valid for 0 <= n <= 100; throws otherwise.
Frequency itu_center_frequency(int channel_number);

struct ChannelSpec {
  int itu_number = 0;
  Frequency center;          // measured center; usually the grid frequency
  TransmissionCurve curve;
  bool center_flagged = false;  // |center - grid| exceeded the demux tolerance
};

using DelayTableNs = std::map<ChannelPair, std::optional<double>>;  // nullopt = unmeasured

struct DemuxSpec {
  DemuxTechnology technology = DemuxTechnology::DG;
  std::vector<ChannelSpec> channels;
  double grid_spacing_ghz = 100.0;
  double centering_tolerance_ghz = 1.0;
  DelayTableNs delays_ns;

  const ChannelSpec* find_channel(int itu_number) const;
};

/// Builds a ChannelSpec, flagging (but keeping) centers that deviate from the
/// ITU grid frequency by more than the tolerance.
ChannelSpec make_channel(int itu_number, TransmissionCurve curve,
                         std::optional<Frequency> measured_center = std::nullopt,
                         double centering_tolerance_ghz = 1.0);

/// Validates channel uniqueness and grid spacing.
DemuxSpec make_demux(DemuxTechnology technology, std::vector<ChannelSpec> channels,
                     double grid_spacing_ghz = 100.0, double centering_tolerance_ghz = 1.0,
                     DelayTableNs delays_ns = {});

/// Integral of the transmission curve over ordinary frequency, in THz.
/// Tabulated curves use the composite trapezoid on their native grid;
/// parametric curves a uniform trapezoid grid (>= 2001 points, >= 200 points
/// per fwhm) over the support window.
double integral_i1(const TransmissionCurve& curve);

/// Overlap integral of curve_i at nu with curve_j at (pump - nu), in THz.
/// The quadrature grid merges both curves' native/uniform grids inside the
/// window where both supports overlap; disjoint supports give 0.
double integral_i2(const TransmissionCurve& curve_i, const TransmissionCurve& curve_j,
                   Frequency pump);

// Exact Gaussian results kept as an independent check on the quadrature.
double gaussian_i1_closed_form(double peak, double fwhm_ghz);
double gaussian_i2_closed_form(double peak_i, double peak_j, double fwhm_ghz);

struct DetuningPoint {
  double detuning_ghz = 0.0;
  double i2_thz = 0.0;
};

/// integral_i2 evaluated at pump = pump_center + detuning over a symmetric
/// range of n_points (odd, >= 3, so zero detuning is sampled).
std::vector<DetuningPoint> detuning_sweep(const TransmissionCurve& curve_i,
                                          const TransmissionCurve& curve_j,
                                          Frequency pump_center, double half_range_ghz,
                                          int n_points);

}  // namespace wdmpair
