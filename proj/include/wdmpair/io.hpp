#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wdmpair/delay_alloc.hpp"
#include "wdmpair/figures_of_merit.hpp"
#include "wdmpair/montecarlo.hpp"
#include "wdmpair/source_detection.hpp"
#include "wdmpair/spectral_core.hpp"

namespace wdmpair {

inline constexpr std::string_view kToolVersion = "wdmpairlab 0.1.0";

/// Loads a tabulated transmission curve from CSV. Header is
/// `frequency_thz,transmission` (linear, in [0,1]) or
/// `frequency_thz,transmission_db` (dB <= 0, converted to linear); `#` lines
/// are comments.
TransmissionCurve load_filter_csv(const std::filesystem::path& path);

struct SweepSection {
  double p_min = kSweepPMin;
  double p_max = kSweepPMax;
  int points = 18;
  std::vector<SplittingMode> modes = {SplittingMode::Deterministic, SplittingMode::Statistical};
  bool log_spacing = false;
};

struct McSection {
  SplittingMode mode = SplittingMode::Deterministic;
  std::uint64_t n_gates = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t batch_gates = 65536;
  std::optional<FrequencyInterval> window;  // derived from the channels when absent
};

struct AnalysisChannels {
  std::optional<int> signal;
  std::optional<int> idler;
  std::optional<int> statistical;  // shared channel in front of the splitter
};

struct ExperimentConfig {
  DemuxSpec demux;
  SourceSpec source;
  DetectorSpec det_s;
  DetectorSpec det_i;
  double coupling_efficiency = 1.0;
  AnalysisChannels analysis;
  SweepSection sweep;
  McSection mc;
  std::uint64_t digest = 0;  // of the document as written
};

/// Parses and validates a JSON experiment description; tabulated channel CSV
/// paths resolve relative to the config file.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Assembles the event-level simulation input: unit-peak channel shapes with
/// peaks folded into the arm efficiencies, and a window covering supports and
/// reflections unless one was given.
McConfig build_mc_config(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Whole-file write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<FomPoint>& points);
std::string montecarlo_csv(const ExperimentConfig& cfg, const McConfig& mc, const RunStats& stats);
std::string detuning_csv(const ExperimentConfig& cfg, double half_range_ghz,
                         const std::vector<DetuningPoint>& points);

struct ParsedCsv {
  std::vector<std::string> comments;  // leading '#' lines, verbatim
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text);

std::string delay_table_to_json(const std::vector<DelayEntry>& table);
std::vector<DelayEntry> delay_table_from_json(const std::string& text);

/// Full command-line surface; returns the process exit status. Failures
/// print one machine-readable JSON line on err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wdmpair
