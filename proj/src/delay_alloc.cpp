#include "wdmpair/delay_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace wdmpair {

std::string to_string(FilterShapeTag tag) {
  return tag == FilterShapeTag::FlatTop ? "flat_top" : "gaussian";
}

FilterShapeTag shape_tag_from_string(const std::string& s) {
  if (s == "flat_top" || s == "flattop" || s == "flat-top") return FilterShapeTag::FlatTop;
  if (s == "gaussian") return FilterShapeTag::Gaussian;
  throw std::invalid_argument("unknown filter shape tag: " + s);
}

std::string to_string(Arm arm) { return arm == Arm::Signal ? "signal" : "idler"; }

std::vector<DelayEntry> builtin_delay_table() {
  using Tech = DemuxTechnology;
  constexpr auto flat = FilterShapeTag::FlatTop;
  constexpr auto gauss = FilterShapeTag::Gaussian;
  return {
      {Tech::DTF, flat, {23, 25}, 15.0},
      {Tech::DTF, flat, {22, 26}, 22.5},
      {Tech::DTF, flat, {21, 27}, -2.5},
      {Tech::AWG, flat, {23, 25}, 12.5},
      {Tech::AWG, flat, {22, 26}, 10.0},
      {Tech::AWG, flat, {21, 27}, std::nullopt},  // too large to measure
      // the grating delay is constant over pairs and the same for both shapes
      {Tech::DG, flat, {23, 25}, 10.0},
      {Tech::DG, flat, {22, 26}, 10.0},
      {Tech::DG, flat, {21, 27}, 10.0},
      {Tech::DG, gauss, {23, 25}, 10.0},
      {Tech::DG, gauss, {22, 26}, 10.0},
      {Tech::DG, gauss, {21, 27}, 10.0},
  };
}

std::optional<DelayEntry> lookup_delay(const std::vector<DelayEntry>& table,
                                       DemuxTechnology tech, FilterShapeTag shape,
                                       ChannelPair pair) {
  for (const auto& entry : table) {
    if (entry.tech == tech && entry.shape == shape && entry.pair == pair) {
      return entry;
    }
  }
  return std::nullopt;
}

DelayLine make_delay_line(double min_ns, double max_ns, double resolution_ns) {
  if (min_ns < 0.0) throw std::invalid_argument("delay line lower bound must be >= 0");
  if (max_ns < min_ns) throw std::invalid_argument("delay line range is inverted");
  if (!(resolution_ns > 0.0)) throw std::invalid_argument("delay line resolution must be positive");
  return {min_ns, max_ns, resolution_ns};
}

CompensationSetting compensation_setting(const DelayEntry& entry, const DelayLine& line) {
  if (!entry.delay_ns) {
    throw std::domain_error("unmeasured_delay: channel pair " + to_string(entry.pair) + " on " +
                            to_string(entry.tech) + " has no measured group delay");
  }
  double magnitude = std::abs(*entry.delay_ns);
  double setting = std::round(magnitude / line.resolution_ns) * line.resolution_ns;
  if (setting < line.min_ns || setting > line.max_ns) {
    throw std::domain_error("delay_out_of_range: " + std::to_string(magnitude) +
                            " ns is outside the delay line range [" + std::to_string(line.min_ns) +
                            ", " + std::to_string(line.max_ns) + "] ns");
  }
  Arm arm = *entry.delay_ns >= 0.0 ? Arm::Signal : Arm::Idler;
  return {arm, setting};
}

double coincidence_vs_delay(double applied_ns, double true_delay_ns, double gate_width_ns,
                            double p_tc_aligned) {
  if (!(gate_width_ns > 0.0)) throw std::invalid_argument("gate width must be positive");
  double overlap = 1.0 - std::abs(applied_ns - true_delay_ns) / gate_width_ns;
  return p_tc_aligned * std::max(0.0, overlap);
}

PumpChoice pump_for_channel_pair(int channel_a, int channel_b) {
  Frequency pump = itu_center_frequency(channel_a) + itu_center_frequency(channel_b);
  return {pump, wavelength_nm(pump)};
}

std::vector<RetuneStep> retune_plan(const std::vector<ChannelPair>& pairs,
                                    const std::vector<DelayEntry>& table, DemuxTechnology tech,
                                    FilterShapeTag shape, const DelayLine& line,
                                    double gate_width_ns) {
  if (!(gate_width_ns > 0.0)) throw std::invalid_argument("gate width must be positive");
  std::vector<RetuneStep> plan;
  plan.reserve(pairs.size());
  for (const auto& pair : pairs) {
    auto entry = lookup_delay(table, tech, shape, pair);
    if (!entry) {
      throw std::domain_error("unknown_pair: no delay table entry for " + to_string(pair) +
                              " on " + to_string(tech));
    }
    RetuneStep step;
    step.pair = pair;
    step.pump = pump_for_channel_pair(pair.lo, pair.hi);
    step.setting = compensation_setting(*entry, line);  // throws on unmeasured entries
    step.scan_start_ns = line.min_ns;
    step.scan_stop_ns = line.max_ns;
    step.scan_step_ns = gate_width_ns / 4.0;
    plan.push_back(step);
  }
  return plan;
}

AllocationPlan allocate(const std::vector<UserPair>& requests, const DemuxSpec& demux,
                        std::optional<Frequency> pump_fixed, const DelayLine& line) {
  std::set<std::string> users;
  for (const auto& req : requests) {
    if (!users.insert(req.user_a).second || !users.insert(req.user_b).second) {
      throw std::invalid_argument("duplicate_user: each user can appear in one request only");
    }
  }

  AllocationPlan plan;
  if (requests.empty()) {
    plan.simultaneous = pump_fixed.has_value();
    return plan;
  }

  auto delay_for = [&](ChannelPair pair) -> std::optional<CompensationSetting> {
    auto it = demux.delays_ns.find(pair);
    if (it == demux.delays_ns.end() || !it->second) return std::nullopt;
    DelayEntry entry{demux.technology, FilterShapeTag::FlatTop, pair, it->second};
    return compensation_setting(entry, line);
  };

  if (pump_fixed) {
    // Candidate pairs symmetric about pump/2, assigned outward from the
    // degeneracy channel.
    double tol_ghz = 2.0 * demux.centering_tolerance_ghz;
    Frequency degeneracy{pump_fixed->thz * 0.5};
    struct Candidate {
      ChannelPair pair;
      double distance_ghz;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < demux.channels.size(); ++a) {
      for (std::size_t b = a + 1; b < demux.channels.size(); ++b) {
        const auto& ca = demux.channels[a];
        const auto& cb = demux.channels[b];
        if (std::abs(to_ghz(ca.center + cb.center - *pump_fixed)) <= tol_ghz) {
          candidates.push_back({ChannelPair{ca.itu_number, cb.itu_number},
                                std::abs(to_ghz(ca.center - degeneracy))});
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
      return x.distance_ghz != y.distance_ghz ? x.distance_ghz < y.distance_ghz
                                              : x.pair < y.pair;
    });
    if (candidates.size() < requests.size()) {
      throw std::domain_error("insufficient_pairs: " + std::to_string(requests.size()) +
                              " requests but only " + std::to_string(candidates.size()) +
                              " channel pairs are symmetric about the pump");
    }
    for (std::size_t k = 0; k < requests.size(); ++k) {
      const ChannelPair pair = candidates[k].pair;
      plan.entries.push_back({requests[k], pair,
                              {*pump_fixed, wavelength_nm(*pump_fixed)},
                              SplittingMode::Deterministic, delay_for(pair)});
    }
    plan.simultaneous = true;
    plan.requires_tunable_pump = false;
    return plan;
  }

  // Free pump: pair off channels in grid order; every request may need its
  // own pump, so a single source cannot serve the plan simultaneously.
  std::vector<const ChannelSpec*> free_channels;
  for (const auto& ch : demux.channels) free_channels.push_back(&ch);
  std::sort(free_channels.begin(), free_channels.end(),
            [](const ChannelSpec* x, const ChannelSpec* y) { return x->itu_number < y->itu_number; });
  if (free_channels.size() < 2 * requests.size()) {
    throw std::domain_error("insufficient_pairs: " + std::to_string(requests.size()) +
                            " requests need " + std::to_string(2 * requests.size()) +
                            " free channels, demux has " +
                            std::to_string(free_channels.size()));
  }
  std::set<double> pumps;
  for (std::size_t k = 0; k < requests.size(); ++k) {
    const ChannelSpec* ca = free_channels[2 * k];
    const ChannelSpec* cb = free_channels[2 * k + 1];
    Frequency pump = ca->center + cb->center;
    pumps.insert(pump.thz);
    plan.entries.push_back({requests[k], ChannelPair{ca->itu_number, cb->itu_number},
                            {pump, wavelength_nm(pump)}, SplittingMode::Deterministic,
                            delay_for({ca->itu_number, cb->itu_number})});
  }
  plan.simultaneous = false;
  plan.requires_tunable_pump = pumps.size() > 1;
  return plan;
}

}  // namespace wdmpair
