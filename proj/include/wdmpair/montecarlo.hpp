#pragma once

#include <cstdint>

#include "wdmpair/source_detection.hpp"
#include "wdmpair/transmission_curve.hpp"
#include "wdmpair/types.hpp"

namespace wdmpair {

/// Event-level gate-by-gate simulation config. Channel curves are carried as
/// unit-peak shapes; the peaks are folded into the arm path efficiencies, the
/// same factorization the analytic forward model uses.
struct McConfig {
  Frequency pump;
  double p_inband = 0.0;
  SplittingMode mode = SplittingMode::Deterministic;
  TransmissionCurve shape_s = GaussianShape{};  // statistical mode: the shared channel
  TransmissionCurve shape_i = GaussianShape{};  // ignored in statistical mode
  double eta_s = 1.0;
  double eta_i = 1.0;
  DetectorSpec det_s;
  DetectorSpec det_i;
  std::uint64_t n_gates = 1'000'000;
  std::uint64_t seed = 1;
  FrequencyInterval window;  // must contain both supports and their reflections
  std::uint64_t batch_gates = 65536;
};

struct RateEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Raw counts from a run plus binomial rate estimates.
struct RunStats {
  std::uint64_t gates_run = 0;
  std::uint64_t live_gates_s = 0;
  std::uint64_t live_gates_i = 0;
  std::uint64_t singles_s = 0;
  std::uint64_t singles_i = 0;
  std::uint64_t coincidences = 0;          // both detectors click in the same gate
  std::uint64_t delayed_coincidences = 0;  // s click paired with i click one gate later
  std::uint64_t delayed_pairs = 0;         // gate pairs examined for the delayed estimator

  RateEstimate p_single_s() const;
  RateEstimate p_single_i() const;
  RateEstimate p_coincidence() const;
  RateEstimate p_delayed() const;
};

/// Runs the simulation, one batch at a time, in batch order. Reference path
/// for the parallel runner.
RunStats run_mc_serial(const McConfig& cfg);

/// Same batches scheduled across OpenMP threads; per-batch seeds make the
/// result bit-identical to run_mc_serial.
RunStats run_mc(const McConfig& cfg);

struct RatioEstimate {
  double ratio_ac_tc = 0.0;
  double std_error = 0.0;
};

/// Accidental/true ratio from run counts: the delayed-gate rate estimates
/// P_AC, total coincidences minus that estimate P_TC. Throws when the run has
/// no true-coincidence signal (P_TC estimate <= 0).
RatioEstimate estimate_ratio(const RunStats& stats);

}  // namespace wdmpair
