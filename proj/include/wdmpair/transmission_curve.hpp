#pragma once

#include <variant>
#include <vector>

#include "wdmpair/types.hpp"

namespace wdmpair {

/// Gaussian intensity transmission: peak * exp(-4 ln2 ((f-center)/fwhm)^2).
struct GaussianShape {
  Frequency center;
  double fwhm_ghz = 100.0;
  double peak = 1.0;
};

/// Super-Gaussian of integer order m: peak * exp(-ln2 (2(f-center)/fwhm)^(2m)).
/// order == 1 evaluates bit-identically to GaussianShape with the same parameters.
struct FlatTopShape {
  Frequency center;
  double fwhm_ghz = 100.0;
  double peak = 1.0;
  int order = 4;
};

struct TabPoint {
  double freq_thz = 0.0;
  double transmission = 0.0;
};

/// Measured curve; linear interpolation between samples, zero outside the
/// sampled range (out-of-band light is blocked).
struct TabulatedShape {
  std::vector<TabPoint> points;
};

using TransmissionCurve = std::variant<GaussianShape, FlatTopShape, TabulatedShape>;

// Factories validate invariants (peak in (0,1], fwhm > 0, order >= 1,
// tabulated: >= 3 strictly increasing samples with transmission in [0,1])
// and throw std::invalid_argument on violation.
TransmissionCurve make_gaussian(Frequency center, double fwhm_ghz, double peak = 1.0);
TransmissionCurve make_flattop(Frequency center, double fwhm_ghz, double peak = 1.0, int order = 4);
TransmissionCurve make_tabulated(std::vector<TabPoint> points);

/// Ideal rectangle of the given width, built as a three-sample plateau so the
/// tabulated interpolation reproduces it exactly.
TransmissionCurve make_rectangle(Frequency center, double width_ghz, double peak = 1.0);

double eval_transmission(const TransmissionCurve& curve, Frequency f);

/// Peak transmission: the shape's peak parameter, or the maximum sample for
/// tabulated curves.
double curve_peak(const TransmissionCurve& curve);

/// Nominal center: shape center for parametric curves, transmission-weighted
/// centroid for tabulated ones.
Frequency curve_center(const TransmissionCurve& curve);

/// Interval outside which the curve is treated as zero for quadrature and
/// simulation windows: center +- 5 fwhm for parametric curves, the sampled
/// range for tabulated ones.
FrequencyInterval curve_support(const TransmissionCurve& curve);

struct NormalizedCurve {
  TransmissionCurve shape;  // unit peak
  double peak = 1.0;        // extracted factor
};

/// Splits a curve into a unit-peak shape and its peak factor, so insertion
/// loss can be accounted for in path efficiencies while overlap ratios are
/// computed on shapes alone.
NormalizedCurve normalize_shape(const TransmissionCurve& curve);

/// Curve with its peak multiplied by alpha in (0,1].
TransmissionCurve scaled_peak(const TransmissionCurve& curve, double alpha);

}  // namespace wdmpair
