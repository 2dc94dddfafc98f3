// Acceptance suite: each test prints one pass/fail line for its criterion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wdmpair/delay_alloc.hpp"
#include "wdmpair/figures_of_merit.hpp"
#include "wdmpair/io.hpp"
#include "wdmpair/montecarlo.hpp"

using namespace wdmpair;
namespace fs = std::filesystem;

namespace {

void report(int criterion, const char* description, bool ok) {
  std::printf("criterion %2d [%s] %s\n", criterion, ok ? "PASS" : "FAIL", description);
  std::fflush(stdout);
}

const Frequency kPump = thz(384.8);
constexpr std::uint64_t kMatrixSeed = 20250808;
constexpr double kMatrixEta = 0.05;  // keeps the matrix in the first-order model regime

DetectorSpec acceptance_detector(double dark_cps, double dead_time_us = 0.0) {
  return make_detector(2e6, 20.0, dark_cps, dead_time_us, 0.1);
}

}  // namespace

TEST_CASE("criterion 1") {
  bool ok = vmax(0.0) == 1.0;
  ok = ok && vmax(1.0) == 1.0 / 3.0;
  double at_bound = vmax((std::sqrt(2.0) - 1.0) / 2.0);
  ok = ok && std::abs(at_bound - std::sqrt(2.0) / 2.0) <= 1e-12;
  report(1, "visibility anchors: vmax(0)=1, vmax(1)=1/3, vmax((sqrt2-1)/2)=sqrt2/2", ok);
  CHECK(ok);
}

TEST_CASE("criterion 2") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    double p = 1e-4 + (0.5 - 1e-4) * u(rng);
    double eta = 1e-3 + (1.0 - 1e-3) * u(rng);
    double ratio_i2_i1 = 1e-3 + (1.0 - 1e-3) * u(rng);
    SourceSpec src = make_source(kPump, p);
    for (SplittingMode mode : {SplittingMode::Deterministic, SplittingMode::Statistical}) {
      CoincidenceProbs probs = forward_model(src, {eta}, {eta}, ratio_i2_i1, mode, 0.0);
      double recovered = invert_p(probs.p_ac / probs.p_tc, 1.0, ratio_i2_i1, mode);
      if (std::abs(recovered - p) / p > 1e-12) ok = false;
    }
  }
  report(2, "forward model inverts to p within 1e-12 for 1000 random tuples, both modes", ok);
  CHECK(ok);
}

TEST_CASE("criterion 3") {
  bool ok = true;
  auto visibility = [](double p, SplittingMode mode) {
    auto probs = forward_model(make_source(kPump, p), {0.3}, {0.3}, 0.75, mode, 0.0);
    return vmax(probs.p_ac / probs.p_tc);
  };
  for (int k = 1; k <= 18; ++k) {
    double p = 0.005 * k;
    double v_stat = visibility(p, SplittingMode::Statistical);
    if (std::abs(v_stat - visibility(2.0 * p, SplittingMode::Deterministic)) > 1e-12) ok = false;
    if (visibility(p, SplittingMode::Deterministic) < v_stat) ok = false;
  }
  report(3, "v_stat(p) = v_det(2p) within 1e-12 on p in {0.005..0.09}", ok);
  CHECK(ok);
}

TEST_CASE("criterion 4") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> peak_dist(0.05, 1.0);
  std::uniform_real_distribution<double> fwhm_dist(20.0, 300.0);
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    double peak = peak_dist(rng);
    double fwhm = fwhm_dist(rng);
    auto a = make_gaussian(itu_center_frequency(23), fwhm, peak);
    auto b = make_gaussian(itu_center_frequency(25), fwhm, peak);
    double i1 = integral_i1(a);
    double i2 = integral_i2(a, b, kPump);
    if (std::abs(i1 - gaussian_i1_closed_form(peak, fwhm)) / gaussian_i1_closed_form(peak, fwhm) >
        1e-6) {
      ok = false;
    }
    double i2_closed = gaussian_i2_closed_form(peak, peak, fwhm);
    if (std::abs(i2 - i2_closed) / i2_closed > 1e-6) ok = false;
  }
  report(4, "Gaussian I1 and zero-detuning I2 quadrature match closed forms within 1e-6", ok);
  CHECK(ok);
}

TEST_CASE("criterion 5") {
  struct ShapeCase {
    const char* name;
    bool gaussian;
  };
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (double p : {0.01, 0.05, 0.18}) {
    for (SplittingMode mode : {SplittingMode::Deterministic, SplittingMode::Statistical}) {
      for (ShapeCase shape : {ShapeCase{"rectangle", false}, ShapeCase{"gaussian", true}}) {
        for (double dark_cps : {0.0, 500.0}) {
          McConfig cfg;
          cfg.pump = kPump;
          cfg.p_inband = p;
          cfg.mode = mode;
          cfg.eta_s = kMatrixEta;
          cfg.eta_i = kMatrixEta;
          cfg.det_s = acceptance_detector(dark_cps);
          cfg.det_i = acceptance_detector(dark_cps);
          cfg.n_gates = 1'000'000;
          cfg.seed = kMatrixSeed;
          if (mode == SplittingMode::Deterministic) {
            if (shape.gaussian) {
              cfg.shape_s = make_gaussian(itu_center_frequency(23), 100.0, 1.0);
              cfg.shape_i = make_gaussian(itu_center_frequency(25), 100.0, 1.0);
              cfg.window = {191.8, 193.0};
            } else {
              cfg.shape_s = make_rectangle(itu_center_frequency(23), 100.0, 1.0);
              cfg.shape_i = make_rectangle(itu_center_frequency(25), 100.0, 1.0);
              cfg.window = {192.2, 192.6};
            }
          } else {
            if (shape.gaussian) {
              cfg.shape_s = make_gaussian(itu_center_frequency(24), 100.0, 1.0);
              cfg.window = {191.9, 192.9};
            } else {
              cfg.shape_s = make_rectangle(itu_center_frequency(24), 100.0, 1.0);
              cfg.window = {192.3, 192.5};
            }
            cfg.shape_i = cfg.shape_s;
          }

          RunStats stats = run_mc(cfg);
          double i1 = integral_i1(cfg.shape_s);
          double i2 = integral_i2(cfg.shape_s, cfg.shape_i, cfg.pump);
          CoincidenceProbs model =
              forward_model(SourceSpec{cfg.pump, p}, {cfg.eta_s}, {cfg.eta_i},
                            std::min(1.0, i2 / i1), mode, dark_prob_per_gate(cfg.det_s));

          auto sigma_of = [](double rate, std::uint64_t n) {
            return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
          };
          double d_singles_s = (stats.p_single_s().value - model.p_single_s) /
                               sigma_of(model.p_single_s, stats.gates_run);
          double d_singles_i = (stats.p_single_i().value - model.p_single_i) /
                               sigma_of(model.p_single_i, stats.gates_run);
          double d_coinc = (stats.p_coincidence().value - (model.p_tc + model.p_ac)) /
                           sigma_of(model.p_tc + model.p_ac, stats.gates_run);
          double d_delayed = (stats.p_delayed().value - model.p_ac) /
                             sigma_of(model.p_ac, stats.delayed_pairs);

          bool config_ok = std::abs(d_singles_s) < 3.0 && std::abs(d_singles_i) < 3.0 &&
                           std::abs(d_coinc) < 3.0 && std::abs(d_delayed) < 3.0;
          ok = ok && config_ok;
          std::printf(
              "    p=%.2f %-13s %-9s dark=%.0e  singles %+5.2f/%+5.2f coinc %+5.2f delayed %+5.2f"
              " sigma  %s\n",
              p, to_string(mode).c_str(), shape.name, dark_prob_per_gate(cfg.det_s), d_singles_s,
              d_singles_i, d_coinc, d_delayed, config_ok ? "ok" : "OUT OF RANGE");
        }
      }
    }
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = elapsed < 60.0;
  std::printf("    matrix runtime %.1f s\n", elapsed);
  ok = ok && in_time;
  report(5, "24-config Monte Carlo matrix within 3 binomial sigma of the forward model, <60 s",
         ok);
  CHECK(ok);
}

TEST_CASE("criterion 6") {
  auto table = builtin_delay_table();
  int numeric = 0, unmeasured = 0;
  for (const auto& entry : table) {
    entry.delay_ns ? ++numeric : ++unmeasured;
  }
  // every measured (technology, shape, pair) combination, one unmeasured
  // entry, and nothing else
  bool ok = numeric == 11 && unmeasured == 1;

  auto value = [&](DemuxTechnology tech, FilterShapeTag shape, ChannelPair pair,
                   std::optional<double> expected) {
    auto entry = lookup_delay(table, tech, shape, pair);
    return entry && entry->delay_ns == expected;
  };
  constexpr auto flat = FilterShapeTag::FlatTop;
  constexpr auto gauss = FilterShapeTag::Gaussian;
  ok = ok && value(DemuxTechnology::DTF, flat, {23, 25}, 15.0);
  ok = ok && value(DemuxTechnology::DTF, flat, {22, 26}, 22.5);
  ok = ok && value(DemuxTechnology::DTF, flat, {21, 27}, -2.5);
  ok = ok && value(DemuxTechnology::AWG, flat, {23, 25}, 12.5);
  ok = ok && value(DemuxTechnology::AWG, flat, {22, 26}, 10.0);
  ok = ok && value(DemuxTechnology::AWG, flat, {21, 27}, std::nullopt);
  for (auto pair : {ChannelPair{23, 25}, ChannelPair{22, 26}, ChannelPair{21, 27}}) {
    ok = ok && value(DemuxTechnology::DG, flat, pair, 10.0);
    ok = ok && value(DemuxTechnology::DG, gauss, pair, 10.0);
  }

  std::ostringstream out, err;
  int status = run_command({"delay-plan", "--filter", "AWG", "--pairs", "21-27"}, out, err);
  ok = ok && status != 0 && err.str().find("unmeasured_delay") != std::string::npos;

  report(6, "builtin delay table matches the measured values exactly; AWG 21-27 plan fails", ok);
  CHECK(ok);
}

TEST_CASE("criterion 7") {
  auto p2325 = pump_for_channel_pair(23, 25);
  bool ok = std::abs(p2325.pump.thz - 384.8) < 1e-9;
  ok = ok && p2325.wavelength_nm >= 779.0 && p2325.wavelength_nm <= 779.3;
  ok = ok && std::abs(pump_for_channel_pair(22, 26).pump.thz - 384.8) < 1e-9;
  ok = ok && std::abs(pump_for_channel_pair(21, 27).pump.thz - 384.8) < 1e-9;
  report(7, "pump planning: 23-25 -> 384.8 THz near 779 nm; all three pairs share the pump", ok);
  CHECK(ok);
}

TEST_CASE("criterion 8") {
  DetectorSpec det = acceptance_detector(500.0, 10.0);

  // order 0 selects the Gaussian shape
  auto demux_with = [](double peak, int order) {
    std::vector<ChannelSpec> channels;
    for (int n = 23; n <= 25; ++n) {
      Frequency c = itu_center_frequency(n);
      channels.push_back(make_channel(
          n, order > 0 ? make_flattop(c, 100.0, peak, order) : make_gaussian(c, 100.0, peak)));
    }
    return make_demux(DemuxTechnology::DG, std::move(channels));
  };

  DemuxSpec flat10 = demux_with(0.8, 10);
  DemuxSpec gauss = demux_with(0.8, 0);

  bool ok = true;
  for (SplittingMode mode : {SplittingMode::Deterministic, SplittingMode::Statistical}) {
    SweepRequest req;
    req.mode = mode;
    req.channel_a = mode == SplittingMode::Statistical ? 24 : 23;
    req.channel_b = 25;
    auto v_flat = sweep_fom(flat10, req, kPump, det);
    auto v_gauss = sweep_fom(gauss, req, kPump, det);
    for (std::size_t k = 0; k < v_flat.size(); ++k) {
      if (v_flat[k].v_max < v_gauss[k].v_max) ok = false;  // (a)
    }
    for (auto* sweep : {&v_flat, &v_gauss}) {
      for (std::size_t k = 0; k + 1 < sweep->size(); ++k) {
        if (!((*sweep)[k].v_max > (*sweep)[k + 1].v_max)) ok = false;  // (c)
      }
    }
  }

  DemuxSpec bright_gauss = demux_with(0.9, 0);
  DemuxSpec dim_flat = demux_with(0.6, 10);
  SweepRequest req;
  req.mode = SplittingMode::Deterministic;
  req.channel_a = 23;
  req.channel_b = 25;
  auto b_gauss = sweep_fom(bright_gauss, req, kPump, det);
  auto b_flat = sweep_fom(dim_flat, req, kPump, det);
  for (std::size_t k = 0; k < b_gauss.size(); ++k) {
    if (!(b_gauss[k].brightness_cps > b_flat[k].brightness_cps)) ok = false;  // (b)
  }

  report(8,
         "orderings: flat-top(10) vmax >= Gaussian; bright Gaussian beats dim flat-top; "
         "vmax strictly falls with p",
         ok);
  CHECK(ok);
}

TEST_CASE("criterion 9") {
  auto gauss_a = make_gaussian(itu_center_frequency(23), 100.0, 1.0);
  auto gauss_b = make_gaussian(itu_center_frequency(25), 100.0, 1.0);
  auto rect_a = make_rectangle(itu_center_frequency(23), 100.0, 1.0);
  auto rect_b = make_rectangle(itu_center_frequency(25), 100.0, 1.0);

  bool ok = true;
  struct Case {
    const TransmissionCurve* a;
    const TransmissionCurve* b;
  };
  for (Case c : {Case{&gauss_a, &gauss_b}, Case{&rect_a, &rect_b}}) {
    auto sweep = detuning_sweep(*c.a, *c.b, kPump, 50.0, 101);
    double step = 100.0 / 100.0;
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < sweep.size(); ++k) {
      if (sweep[k].i2_thz > sweep[argmax].i2_thz) argmax = k;
    }
    if (std::abs(sweep[argmax].detuning_ghz) > step + 1e-12) ok = false;
  }
  report(9, "detuning sweep of symmetric pairs peaks at 0 GHz within one grid step", ok);
  CHECK(ok);
}

TEST_CASE("criterion 10") {
  fs::path dir = fs::temp_directory_path() / "wdmpairlab_acceptance";
  fs::create_directories(dir);
  fs::path config = dir / "repeat.json";
  {
    std::ofstream out(config, std::ios::trunc);
    out << R"({
  "demux": {"technology": "DG", "channels": [
    {"itu": 23, "shape": "gaussian", "peak": 0.8},
    {"itu": 25, "shape": "gaussian", "peak": 0.8}
  ]},
  "source": {"pump_thz": 384.8, "p_inband": 0.05},
  "detectors": {"signal": {"dead_time_us": 0, "efficiency": 0.1}},
  "analysis": {"signal_channel": 23, "idler_channel": 25},
  "montecarlo": {"mode": "deterministic", "n_gates": 200000, "seed": 31415}
})";
  }
  fs::path out_a = dir / "run_a.csv";
  fs::path out_b = dir / "run_b.csv";
  std::ostringstream sink_out, sink_err;
  int status_a = run_command({"montecarlo", "--config", config.string(), "--out", out_a.string()},
                             sink_out, sink_err);
  int status_b = run_command({"montecarlo", "--config", config.string(), "--out", out_b.string()},
                             sink_out, sink_err);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  std::string text_a = slurp(out_a);
  bool ok = status_a == 0 && status_b == 0 && !text_a.empty() && text_a == slurp(out_b);
  report(10, "two montecarlo invocations with one config and seed are byte-identical", ok);
  CHECK(ok);
}
