#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wdmpair/spectral_core.hpp"
#include "wdmpair/types.hpp"

namespace wdmpair {

enum class FilterShapeTag { FlatTop, Gaussian };

std::string to_string(FilterShapeTag tag);
FilterShapeTag shape_tag_from_string(const std::string& s);

/// Measured inter-channel group delay for one technology, curve shape, and
/// channel pair. An empty delay marks a pair whose delay was too large to
/// measure.
struct DelayEntry {
  DemuxTechnology tech = DemuxTechnology::DG;
  FilterShapeTag shape = FilterShapeTag::FlatTop;
  ChannelPair pair;
  std::optional<double> delay_ns;
};

/// The measured table; the diffraction grating shows the same constant delay
/// for both curve shapes.
std::vector<DelayEntry> builtin_delay_table();

std::optional<DelayEntry> lookup_delay(const std::vector<DelayEntry>& table,
                                       DemuxTechnology tech, FilterShapeTag shape,
                                       ChannelPair pair);

struct DelayLine {
  double min_ns = 0.0;
  double max_ns = 25.0;
  double resolution_ns = 0.5;
};

DelayLine make_delay_line(double min_ns = 0.0, double max_ns = 25.0, double resolution_ns = 0.5);

enum class Arm { Signal, Idler };

std::string to_string(Arm arm);

struct CompensationSetting {
  Arm delayed_arm = Arm::Signal;
  double delay_ns = 0.0;
};

/// Which arm to delay, and by how much, to realign a channel pair.
/// Sign convention: a positive table delay means the idler arrives late, so
/// the signal arm is the one delayed (only relative consistency is testable).
/// Rounds to the line resolution; throws on unmeasured entries or settings
/// outside the line range.
CompensationSetting compensation_setting(const DelayEntry& entry, const DelayLine& line);

/// True-coincidence probability left when the applied delay misses the real
/// one: triangular overlap of two equal square gates,
/// p = p_aligned * max(0, 1 - |applied - true| / gate_width).
double coincidence_vs_delay(double applied_ns, double true_delay_ns, double gate_width_ns,
                            double p_tc_aligned);

struct PumpChoice {
  Frequency pump;
  double wavelength_nm = 0.0;
};

/// Pump that makes a channel pair symmetric about its degeneracy frequency:
/// pump = f(a) + f(b).
PumpChoice pump_for_channel_pair(int channel_a, int channel_b);

struct RetuneStep {
  ChannelPair pair;
  PumpChoice pump;
  CompensationSetting setting;
  // coarse coincidence scan bracketing the compensation before data taking
  double scan_start_ns = 0.0;
  double scan_stop_ns = 25.0;
  double scan_step_ns = 5.0;
};

/// Per-pair retuning schedule: pump choice, delay compensation, and a coarse
/// delay scan (gate_width / 4 steps over the line range) whose peak is picked
/// with coincidence_vs_delay. Aborts on the first pair without a measured
/// delay, naming it.
std::vector<RetuneStep> retune_plan(const std::vector<ChannelPair>& pairs,
                                    const std::vector<DelayEntry>& table, DemuxTechnology tech,
                                    FilterShapeTag shape, const DelayLine& line,
                                    double gate_width_ns = 20.0);

struct UserPair {
  std::string user_a;
  std::string user_b;
};

struct AllocationEntry {
  UserPair users;
  ChannelPair pair;
  PumpChoice pump;
  SplittingMode mode = SplittingMode::Deterministic;
  std::optional<CompensationSetting> delay;  // absent when the pair delay is unknown
};

struct AllocationPlan {
  std::vector<AllocationEntry> entries;
  bool simultaneous = false;           // all pairs share one pump
  bool requires_tunable_pump = false;  // entries need different pumps
};

/// Assigns channel pairs to user pairs. With a fixed pump only pairs
/// symmetric about pump/2 are assignable, outward from degeneracy; without
/// one, each request gets its own pump and the plan is not simultaneous.
AllocationPlan allocate(const std::vector<UserPair>& requests, const DemuxSpec& demux,
                        std::optional<Frequency> pump_fixed,
                        const DelayLine& line = DelayLine{});

}  // namespace wdmpair
