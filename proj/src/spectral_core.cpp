#include "wdmpair/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace wdmpair {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kLn2 = 0.6931471805599453;
constexpr int kMinQuadraturePoints = 2001;
constexpr double kPointsPerFwhm = 200.0;

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    sum += 0.5 * (y[k] + y[k + 1]) * (x[k + 1] - x[k]);
  }
  return sum;
}

int uniform_point_count(double width_thz, double fwhm_ghz) {
  double per_fwhm = width_thz * 1e3 / fwhm_ghz * kPointsPerFwhm;
  int n = static_cast<int>(std::ceil(per_fwhm)) + 1;
  return std::max(kMinQuadraturePoints, n);
}

// Quadrature nodes contributed by one curve inside [lo, hi] of the
// integration variable. reflect_pump set means the curve is evaluated at
// (pump - nu), so its native samples land at pump - x.
void append_nodes(const TransmissionCurve& curve, double lo, double hi,
                  std::optional<double> reflect_pump, std::vector<double>& nodes) {
  if (const auto* tab = std::get_if<TabulatedShape>(&curve)) {
    for (const auto& p : tab->points) {
      double nu = reflect_pump ? *reflect_pump - p.freq_thz : p.freq_thz;
      if (nu >= lo && nu <= hi) nodes.push_back(nu);
    }
    return;
  }
  // A reflected uniform grid over [lo, hi] is again uniform over [lo, hi],
  // so parametric curves always contribute a direct grid.
  double fwhm_ghz = std::holds_alternative<GaussianShape>(curve)
                        ? std::get<GaussianShape>(curve).fwhm_ghz
                        : std::get<FlatTopShape>(curve).fwhm_ghz;
  int n = uniform_point_count(hi - lo, fwhm_ghz);
  double h = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) nodes.push_back(lo + k * h);
}

}  // namespace

Frequency itu_center_frequency(int channel_number) {
  if (channel_number < 0 || channel_number > 100) {
    throw std::out_of_range("ITU channel number must be in [0, 100], got " +
                            std::to_string(channel_number));
  }
  return {190.0 + 0.1 * channel_number};
}

const ChannelSpec* DemuxSpec::find_channel(int itu_number) const {
  for (const auto& ch : channels) {
    if (ch.itu_number == itu_number) return &ch;
  }
  return nullptr;
}

ChannelSpec make_channel(int itu_number, TransmissionCurve curve,
                         std::optional<Frequency> measured_center,
                         double centering_tolerance_ghz) {
  Frequency grid = itu_center_frequency(itu_number);
  Frequency center = measured_center ? *measured_center : curve_center(curve);
  bool flagged = std::abs(to_ghz(center - grid)) > centering_tolerance_ghz;
  return {itu_number, center, std::move(curve), flagged};
}

DemuxSpec make_demux(DemuxTechnology technology, std::vector<ChannelSpec> channels,
                     double grid_spacing_ghz, double centering_tolerance_ghz,
                     DelayTableNs delays_ns) {
  if (!(grid_spacing_ghz > 0.0)) {
    throw std::invalid_argument("grid spacing must be positive");
  }
  std::set<int> seen;
  for (const auto& ch : channels) {
    if (!seen.insert(ch.itu_number).second) {
      throw std::invalid_argument("duplicate ITU channel number " + std::to_string(ch.itu_number));
    }
  }
  return {technology, std::move(channels), grid_spacing_ghz, centering_tolerance_ghz,
          std::move(delays_ns)};
}

double integral_i1(const TransmissionCurve& curve) {
  if (const auto* tab = std::get_if<TabulatedShape>(&curve)) {
    double sum = 0.0;
    const auto& pts = tab->points;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      sum += 0.5 * (pts[k].transmission + pts[k + 1].transmission) *
             (pts[k + 1].freq_thz - pts[k].freq_thz);
    }
    return sum;
  }
  FrequencyInterval win = curve_support(curve);
  std::vector<double> x;
  append_nodes(curve, win.lo_thz, win.hi_thz, std::nullopt, x);
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = eval_transmission(curve, {x[k]});
  return trapezoid(x, y);
}

double integral_i2(const TransmissionCurve& curve_i, const TransmissionCurve& curve_j,
                   Frequency pump) {
  if (!(pump.thz > 0.0)) throw std::invalid_argument("pump frequency must be positive");
  FrequencyInterval si = curve_support(curve_i);
  FrequencyInterval sj = curve_support(curve_j);
  // curve_j is sampled at pump - nu, so its support reflects about pump/2
  double lo = std::max(si.lo_thz, pump.thz - sj.hi_thz);
  double hi = std::min(si.hi_thz, pump.thz - sj.lo_thz);
  if (!(lo < hi)) return 0.0;

  std::vector<double> x;
  x.push_back(lo);
  x.push_back(hi);
  append_nodes(curve_i, lo, hi, std::nullopt, x);
  append_nodes(curve_j, lo, hi, pump.thz, x);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());

  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    y[k] = eval_transmission(curve_i, {x[k]}) * eval_transmission(curve_j, {pump.thz - x[k]});
  }
  return trapezoid(x, y);
}

double gaussian_i1_closed_form(double peak, double fwhm_ghz) {
  return peak * fwhm_ghz * 1e-3 * std::sqrt(kPi / (4.0 * kLn2));
}

double gaussian_i2_closed_form(double peak_i, double peak_j, double fwhm_ghz) {
  return peak_i * peak_j * fwhm_ghz * 1e-3 * std::sqrt(kPi / (8.0 * kLn2));
}

std::vector<DetuningPoint> detuning_sweep(const TransmissionCurve& curve_i,
                                          const TransmissionCurve& curve_j,
                                          Frequency pump_center, double half_range_ghz,
                                          int n_points) {
  if (n_points < 3) throw std::invalid_argument("detuning sweep needs at least 3 points");
  if (n_points % 2 == 0) {
    throw std::invalid_argument("detuning sweep needs an odd point count so 0 GHz is sampled");
  }
  if (!(pump_center.thz - half_range_ghz * 1e-3 > 0.0)) {
    throw std::invalid_argument("detuning range reaches nonpositive pump frequencies");
  }
  std::vector<DetuningPoint> out(n_points);
  double step = 2.0 * half_range_ghz / (n_points - 1);
  int mid = (n_points - 1) / 2;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n_points; ++k) {
    double detuning = (k - mid) * step;  // integer offset keeps the center exactly 0
    Frequency pump = pump_center + from_ghz(detuning);
    out[k] = {detuning, integral_i2(curve_i, curve_j, pump)};
  }
  return out;
}

}  // namespace wdmpair
