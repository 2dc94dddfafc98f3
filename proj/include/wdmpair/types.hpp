#pragma once

#include <algorithm>
#include <compare>
#include <string>

namespace wdmpair {

// speed of light expressed so that wavelength_nm = c / frequency_thz
inline constexpr double kSpeedOfLightThzNm = 299792.458;

/// Optical frequency carried in THz everywhere; GHz only at API edges.
struct Frequency {
  double thz = 0.0;
  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

inline Frequency thz(double v) { return {v}; }
inline Frequency from_ghz(double v) { return {v * 1e-3}; }
inline double to_ghz(Frequency f) { return f.thz * 1e3; }
inline Frequency operator+(Frequency a, Frequency b) { return {a.thz + b.thz}; }
inline Frequency operator-(Frequency a, Frequency b) { return {a.thz - b.thz}; }
inline Frequency midpoint(Frequency a, Frequency b) { return {0.5 * (a.thz + b.thz)}; }
inline double wavelength_nm(Frequency f) { return kSpeedOfLightThzNm / f.thz; }

/// Closed frequency interval [lo, hi] in THz.
struct FrequencyInterval {
  double lo_thz = 0.0;
  double hi_thz = 0.0;
  double width() const { return hi_thz - lo_thz; }
  bool contains(const FrequencyInterval& other) const {
    return lo_thz <= other.lo_thz && other.hi_thz <= hi_thz;
  }
};

enum class SplittingMode { Deterministic, Statistical };

std::string to_string(SplittingMode mode);
SplittingMode splitting_mode_from_string(const std::string& s);

enum class DemuxTechnology { DTF, AWG, DG };

std::string to_string(DemuxTechnology tech);
DemuxTechnology technology_from_string(const std::string& s);

/// Unordered pair of ITU channel numbers, stored normalized (lo <= hi).
struct ChannelPair {
  int lo = 0;
  int hi = 0;
  ChannelPair() = default;
  ChannelPair(int a, int b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  friend auto operator<=>(const ChannelPair&, const ChannelPair&) = default;
};

std::string to_string(ChannelPair pair);
ChannelPair channel_pair_from_string(const std::string& s);  // "23-25"

}  // namespace wdmpair
