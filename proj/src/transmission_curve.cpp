#include "wdmpair/transmission_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wdmpair {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSupportFwhms = 5.0;  // parametric curves treated as zero beyond this

double ipow(double base, int n) {
  double r = base;
  for (int i = 1; i < n; ++i) r *= base;
  return r;
}

// Shared evaluation so FlatTop(order 1) and Gaussian are bit-identical:
// peak * exp(-ln2 * ((2(f-c)/fwhm)^2)^order).
double super_gaussian(Frequency center, double fwhm_ghz, double peak, int order, Frequency f) {
  double u = 2.0 * to_ghz(f - center) / fwhm_ghz;
  double s = u * u;
  return peak * std::exp(-kLn2 * ipow(s, order));
}

void check_peak(double peak) {
  if (!(peak > 0.0) || peak > 1.0) {
    throw std::invalid_argument("curve peak must be in (0, 1], got " + std::to_string(peak));
  }
}

void check_fwhm(double fwhm_ghz) {
  if (!(fwhm_ghz > 0.0)) {
    throw std::invalid_argument("curve fwhm must be positive");
  }
}

}  // namespace

TransmissionCurve make_gaussian(Frequency center, double fwhm_ghz, double peak) {
  check_peak(peak);
  check_fwhm(fwhm_ghz);
  return GaussianShape{center, fwhm_ghz, peak};
}

TransmissionCurve make_flattop(Frequency center, double fwhm_ghz, double peak, int order) {
  check_peak(peak);
  check_fwhm(fwhm_ghz);
  if (order < 1) throw std::invalid_argument("flat-top order must be >= 1");
  return FlatTopShape{center, fwhm_ghz, peak, order};
}

TransmissionCurve make_tabulated(std::vector<TabPoint> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("tabulated curve needs at least 3 samples");
  }
  double maxt = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.transmission < 0.0 || p.transmission > 1.0) {
      throw std::invalid_argument("tabulated transmission outside [0, 1]: " +
                                  std::to_string(p.transmission));
    }
    if (i > 0 && !(points[i - 1].freq_thz < p.freq_thz)) {
      throw std::invalid_argument("tabulated frequencies must be strictly increasing");
    }
    maxt = std::max(maxt, p.transmission);
  }
  if (!(maxt > 0.0)) {
    throw std::invalid_argument("tabulated curve is identically zero");
  }
  return TabulatedShape{std::move(points)};
}

TransmissionCurve make_rectangle(Frequency center, double width_ghz, double peak) {
  check_peak(peak);
  check_fwhm(width_ghz);
  double half = width_ghz * 0.5e-3;
  return make_tabulated({{center.thz - half, peak}, {center.thz, peak}, {center.thz + half, peak}});
}

double eval_transmission(const TransmissionCurve& curve, Frequency f) {
  return std::visit(
      [f](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, GaussianShape>) {
          return super_gaussian(shape.center, shape.fwhm_ghz, shape.peak, 1, f);
        } else if constexpr (std::is_same_v<T, FlatTopShape>) {
          return super_gaussian(shape.center, shape.fwhm_ghz, shape.peak, shape.order, f);
        } else {
          const auto& pts = shape.points;
          if (f.thz < pts.front().freq_thz || f.thz > pts.back().freq_thz) return 0.0;
          auto it = std::lower_bound(pts.begin(), pts.end(), f.thz,
                                     [](const TabPoint& p, double x) { return p.freq_thz < x; });
          if (it->freq_thz == f.thz) return it->transmission;
          const TabPoint& hi = *it;
          const TabPoint& lo = *(it - 1);
          double t = (f.thz - lo.freq_thz) / (hi.freq_thz - lo.freq_thz);
          return lo.transmission + t * (hi.transmission - lo.transmission);
        }
      },
      curve);
}

double curve_peak(const TransmissionCurve& curve) {
  return std::visit(
      [](const auto& shape) -> double {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, TabulatedShape>) {
          double m = 0.0;
          for (const auto& p : shape.points) m = std::max(m, p.transmission);
          return m;
        } else {
          return shape.peak;
        }
      },
      curve);
}

Frequency curve_center(const TransmissionCurve& curve) {
  return std::visit(
      [](const auto& shape) -> Frequency {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, TabulatedShape>) {
          // transmission-weighted centroid; an argmax would sit on the edge
          // of flat-top plateaus
          double area = 0.0;
          double moment = 0.0;
          const auto& pts = shape.points;
          for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            double dx = pts[k + 1].freq_thz - pts[k].freq_thz;
            area += 0.5 * (pts[k].transmission + pts[k + 1].transmission) * dx;
            moment += 0.5 *
                      (pts[k].transmission * pts[k].freq_thz +
                       pts[k + 1].transmission * pts[k + 1].freq_thz) *
                      dx;
          }
          return {moment / area};
        } else {
          return shape.center;
        }
      },
      curve);
}

FrequencyInterval curve_support(const TransmissionCurve& curve) {
  return std::visit(
      [](const auto& shape) -> FrequencyInterval {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, TabulatedShape>) {
          return {shape.points.front().freq_thz, shape.points.back().freq_thz};
        } else {
          double half = kSupportFwhms * shape.fwhm_ghz * 1e-3;
          return {shape.center.thz - half, shape.center.thz + half};
        }
      },
      curve);
}

NormalizedCurve normalize_shape(const TransmissionCurve& curve) {
  return std::visit(
      [](const auto& shape) -> NormalizedCurve {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, TabulatedShape>) {
          double peak = 0.0;
          for (const auto& p : shape.points) peak = std::max(peak, p.transmission);
          TabulatedShape unit = shape;
          for (auto& p : unit.points) p.transmission /= peak;
          return {TransmissionCurve{std::move(unit)}, peak};
        } else {
          T unit = shape;
          unit.peak = 1.0;
          return {TransmissionCurve{unit}, shape.peak};
        }
      },
      curve);
}

TransmissionCurve scaled_peak(const TransmissionCurve& curve, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("peak scale factor must be in (0, 1]");
  }
  return std::visit(
      [alpha](const auto& shape) -> TransmissionCurve {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, TabulatedShape>) {
          TabulatedShape scaled = shape;
          for (auto& p : scaled.points) p.transmission *= alpha;
          return scaled;
        } else {
          T scaled = shape;
          scaled.peak *= alpha;
          return scaled;
        }
      },
      curve);
}

}  // namespace wdmpair
