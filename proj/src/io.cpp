#include "wdmpair/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

namespace wdmpair {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

const json& require_key(const json& doc, const char* key, const char* where) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw std::invalid_argument(std::string("config_error: missing \"") + key + "\" in " + where);
  }
  return *it;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("io_error: cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("io_error: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

TransmissionCurve load_filter_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io_error: cannot open filter CSV " + path.string());

  std::string line;
  bool have_header = false;
  bool db_units = false;
  std::vector<TabPoint> points;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (!have_header) {
      if (text == "frequency_thz,transmission") {
        db_units = false;
      } else if (text == "frequency_thz,transmission_db") {
        db_units = true;
      } else {
        throw std::invalid_argument("filter_csv_error: unknown header \"" + text +
                                    "\" (expected frequency_thz,transmission[_db])");
      }
      have_header = true;
      continue;
    }
    auto cells = split(text, ',');
    if (cells.size() != 2) {
      throw std::invalid_argument("filter_csv_error: line " + std::to_string(lineno) +
                                  " does not have two columns");
    }
    try {
      double f = std::stod(trim(cells[0]));
      double t = std::stod(trim(cells[1]));
      if (db_units) t = std::pow(10.0, t / 10.0);
      points.push_back({f, t});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("filter_csv_error: line " + std::to_string(lineno) +
                                  " is not numeric");
    }
  }
  if (!have_header) throw std::invalid_argument("filter_csv_error: missing header line");
  return make_tabulated(std::move(points));  // validates count, order, range
}

namespace {

TransmissionCurve curve_from_json(const json& jc, int itu, const fs::path& base_dir) {
  std::string shape = jc.value("shape", "gaussian");
  Frequency center =
      jc.contains("center_thz") ? thz(jc["center_thz"].get<double>()) : itu_center_frequency(itu);
  double peak = jc.value("peak", 1.0);
  if (shape == "gaussian") {
    return make_gaussian(center, jc.value("fwhm_ghz", 100.0), peak);
  }
  if (shape == "flattop" || shape == "flat_top") {
    return make_flattop(center, jc.value("fwhm_ghz", 100.0), peak, jc.value("order", 4));
  }
  if (shape == "rectangle") {
    return make_rectangle(center, jc.value("width_ghz", 100.0), peak);
  }
  if (shape == "tabulated") {
    fs::path csv = require_key(jc, "csv", "channel").get<std::string>();
    if (csv.is_relative()) csv = base_dir / csv;
    return load_filter_csv(csv);
  }
  throw std::invalid_argument("config_error: unknown channel shape \"" + shape + "\"");
}

DetectorSpec detector_from_json(const json& jd) {
  return make_detector(jd.value("trigger_rate_hz", 2e6), jd.value("gate_width_ns", 20.0),
                       jd.value("dark_rate_cps", 500.0), jd.value("dead_time_us", 10.0),
                       require_key(jd, "efficiency", "detector").get<double>());
}

}  // namespace

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("io_error: cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config_error: " + std::string(e.what()));
  }

  ExperimentConfig cfg;
  cfg.digest = fnv1a64(doc.dump());
  fs::path base_dir = path.parent_path();

  const json& jd = require_key(doc, "demux", "config");
  DemuxTechnology tech = technology_from_string(jd.value("technology", "DG"));
  double tol = jd.value("centering_tolerance_ghz", 1.0);
  std::vector<ChannelSpec> channels;
  for (const json& jc : require_key(jd, "channels", "demux")) {
    int itu = require_key(jc, "itu", "channel").get<int>();
    std::optional<Frequency> center;
    if (jc.contains("center_thz")) center = thz(jc["center_thz"].get<double>());
    channels.push_back(make_channel(itu, curve_from_json(jc, itu, base_dir), center, tol));
  }
  DelayTableNs delays;
  if (jd.contains("delays_ns")) {
    for (const auto& [key, value] : jd["delays_ns"].items()) {
      delays[channel_pair_from_string(key)] =
          value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
    }
  } else {
    for (const auto& entry : builtin_delay_table()) {
      if (entry.tech == tech) delays[entry.pair] = entry.delay_ns;
    }
  }
  cfg.demux = make_demux(tech, std::move(channels), jd.value("grid_spacing_ghz", 100.0), tol,
                         std::move(delays));

  const json& js = require_key(doc, "source", "config");
  cfg.source = make_source(thz(require_key(js, "pump_thz", "source").get<double>()),
                           require_key(js, "p_inband", "source").get<double>());

  const json& jdet = require_key(doc, "detectors", "config");
  cfg.det_s = detector_from_json(require_key(jdet, "signal", "detectors"));
  cfg.det_i = jdet.contains("idler") ? detector_from_json(jdet["idler"]) : cfg.det_s;

  cfg.coupling_efficiency = doc.value("coupling_efficiency", 1.0);
  if (cfg.coupling_efficiency < 0.0 || cfg.coupling_efficiency > 1.0) {
    throw std::invalid_argument("config_error: coupling_efficiency must be in [0, 1]");
  }

  if (doc.contains("analysis")) {
    const json& ja = doc["analysis"];
    if (ja.contains("signal_channel")) cfg.analysis.signal = ja["signal_channel"].get<int>();
    if (ja.contains("idler_channel")) cfg.analysis.idler = ja["idler_channel"].get<int>();
    if (ja.contains("statistical_channel")) {
      cfg.analysis.statistical = ja["statistical_channel"].get<int>();
    }
  }

  if (doc.contains("sweep")) {
    const json& jw = doc["sweep"];
    cfg.sweep.p_min = jw.value("p_min", kSweepPMin);
    cfg.sweep.p_max = jw.value("p_max", kSweepPMax);
    cfg.sweep.points = jw.value("points", 18);
    cfg.sweep.log_spacing = jw.value("log_spacing", false);
    if (jw.contains("modes")) {
      cfg.sweep.modes.clear();
      for (const json& jm : jw["modes"]) {
        cfg.sweep.modes.push_back(splitting_mode_from_string(jm.get<std::string>()));
      }
    }
  }

  if (doc.contains("montecarlo")) {
    const json& jm = doc["montecarlo"];
    if (jm.contains("mode")) cfg.mc.mode = splitting_mode_from_string(jm["mode"].get<std::string>());
    cfg.mc.n_gates = jm.value("n_gates", std::uint64_t{1'000'000});
    cfg.mc.seed = jm.value("seed", std::uint64_t{1});
    cfg.mc.batch_gates = jm.value("batch_gates", std::uint64_t{65536});
    if (jm.contains("window_thz")) {
      const json& jwin = jm["window_thz"];
      if (!jwin.is_array() || jwin.size() != 2) {
        throw std::invalid_argument("config_error: window_thz must be [lo, hi]");
      }
      cfg.mc.window = FrequencyInterval{jwin[0].get<double>(), jwin[1].get<double>()};
    }
  }
  return cfg;
}

namespace {

const ChannelSpec& need_channel(const ExperimentConfig& cfg, const std::optional<int>& id,
                                const char* role) {
  if (!id) {
    throw std::invalid_argument(std::string("config_error: analysis.") + role +
                                "_channel is required for this run");
  }
  const ChannelSpec* ch = cfg.demux.find_channel(*id);
  if (ch == nullptr) {
    throw std::invalid_argument("unknown_channel: " + std::to_string(*id) +
                                " is not in the demux");
  }
  return *ch;
}

FrequencyInterval hull(std::initializer_list<FrequencyInterval> intervals) {
  FrequencyInterval out{1e300, -1e300};
  for (const auto& iv : intervals) {
    out.lo_thz = std::min(out.lo_thz, iv.lo_thz);
    out.hi_thz = std::max(out.hi_thz, iv.hi_thz);
  }
  return out;
}

FrequencyInterval reflect(const FrequencyInterval& iv, Frequency pump) {
  return {pump.thz - iv.hi_thz, pump.thz - iv.lo_thz};
}

}  // namespace

McConfig build_mc_config(const ExperimentConfig& cfg) {
  McConfig mc;
  mc.pump = cfg.source.pump;
  mc.p_inband = cfg.source.p_inband;
  mc.mode = cfg.mc.mode;
  mc.det_s = cfg.det_s;
  mc.det_i = cfg.det_i;
  mc.n_gates = cfg.mc.n_gates;
  mc.seed = cfg.mc.seed;
  mc.batch_gates = cfg.mc.batch_gates;

  if (mc.mode == SplittingMode::Statistical) {
    const ChannelSpec& shared = need_channel(cfg, cfg.analysis.statistical, "statistical");
    NormalizedCurve shape = normalize_shape(shared.curve);
    mc.shape_s = shape.shape;
    mc.shape_i = shape.shape;
    mc.eta_s = shape.peak * cfg.coupling_efficiency * cfg.det_s.efficiency;
    mc.eta_i = shape.peak * cfg.coupling_efficiency * cfg.det_i.efficiency;
  } else {
    const ChannelSpec& ch_s = need_channel(cfg, cfg.analysis.signal, "signal");
    const ChannelSpec& ch_i = need_channel(cfg, cfg.analysis.idler, "idler");
    NormalizedCurve shape_s = normalize_shape(ch_s.curve);
    NormalizedCurve shape_i = normalize_shape(ch_i.curve);
    mc.shape_s = shape_s.shape;
    mc.shape_i = shape_i.shape;
    mc.eta_s = shape_s.peak * cfg.coupling_efficiency * cfg.det_s.efficiency;
    mc.eta_i = shape_i.peak * cfg.coupling_efficiency * cfg.det_i.efficiency;
  }

  if (cfg.mc.window) {
    mc.window = *cfg.mc.window;
  } else {
    FrequencyInterval sup_s = curve_support(mc.shape_s);
    FrequencyInterval sup_i = curve_support(mc.shape_i);
    mc.window = hull({sup_s, sup_i, reflect(sup_s, mc.pump), reflect(sup_i, mc.pump)});
  }
  return mc;
}

namespace {

void provenance(std::ostringstream& os, const ExperimentConfig& cfg, bool with_seed) {
  os << "# " << kToolVersion << "\n";
  char digest[32];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(cfg.digest));
  os << "# config_digest=" << digest << "\n";
  if (with_seed) os << "# seed=" << cfg.mc.seed << "\n";
}

}  // namespace

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<FomPoint>& points) {
  std::ostringstream os;
  provenance(os, cfg, false);
  os << "p,mode,p_tc,p_ac,vmax,brightness_cps,entanglable\n";
  for (const auto& pt : points) {
    os << format_double(pt.p_inband) << ',' << to_string(pt.mode) << ','
       << format_double(pt.p_tc) << ',' << format_double(pt.p_ac) << ','
       << format_double(pt.v_max) << ',' << format_double(pt.brightness_cps) << ','
       << (pt.entanglable ? '1' : '0') << "\n";
  }
  return os.str();
}

std::string montecarlo_csv(const ExperimentConfig& cfg, const McConfig& mc, const RunStats& stats) {
  std::ostringstream os;
  provenance(os, cfg, true);
  os << "# mode=" << to_string(mc.mode) << "\n";
  os << "# gates=" << stats.gates_run << "\n";

  double i1 = integral_i1(mc.shape_s);
  double i2 = integral_i2(mc.shape_s, mc.mode == SplittingMode::Statistical ? mc.shape_s : mc.shape_i,
                          mc.pump);
  double ratio = std::min(1.0, i2 / i1);
  SourceSpec src{mc.pump, mc.p_inband};
  CoincidenceProbs model = forward_model(src, {mc.eta_s}, {mc.eta_i}, ratio, mc.mode,
                                         dark_prob_per_gate(mc.det_s),
                                         dark_prob_per_gate(mc.det_i));

  os << "quantity,count,rate,std_error,model,delta_sigma\n";
  auto row = [&os](const char* name, std::uint64_t count, RateEstimate est, double model_rate,
                   std::uint64_t trials) {
    os << name << ',' << count << ',' << format_double(est.value) << ','
       << format_double(est.std_error) << ',' << format_double(model_rate) << ',';
    double sigma = std::sqrt(model_rate * (1.0 - model_rate) / static_cast<double>(trials));
    if (sigma > 0.0) os << format_double((est.value - model_rate) / sigma);
    os << "\n";
  };
  row("singles_s", stats.singles_s, stats.p_single_s(), model.p_single_s, stats.gates_run);
  row("singles_i", stats.singles_i, stats.p_single_i(), model.p_single_i, stats.gates_run);
  row("coincidences", stats.coincidences, stats.p_coincidence(), model.p_tc + model.p_ac,
      stats.gates_run);
  row("delayed_coincidences", stats.delayed_coincidences, stats.p_delayed(), model.p_ac,
      stats.delayed_pairs);

  // live-gate fractions are reported without a sigma comparison; the analytic
  // dead-time correction is a 5%-level approximation, not a binomial estimate
  auto live_row = [&os, &stats](const char* name, std::uint64_t count) {
    double rate = static_cast<double>(count) / static_cast<double>(stats.gates_run);
    os << name << ',' << count << ',' << format_double(rate) << ",,,\n";
  };
  live_row("live_gates_s", stats.live_gates_s);
  live_row("live_gates_i", stats.live_gates_i);

  try {
    RatioEstimate est = estimate_ratio(stats);
    double model_ratio = model.p_ac / model.p_tc;
    os << "ratio_ac_tc,," << format_double(est.ratio_ac_tc) << ','
       << format_double(est.std_error) << ',' << format_double(model_ratio) << ',';
    if (est.std_error > 0.0) {
      os << format_double((est.ratio_ac_tc - model_ratio) / est.std_error);
    }
    os << "\n";
    double p_hat = invert_p(est.ratio_ac_tc, i1, i2, mc.mode);
    double p_sigma = invert_p(est.std_error, i1, i2, mc.mode);
    os << "p_inband,," << format_double(p_hat) << ',' << format_double(p_sigma) << ','
       << format_double(mc.p_inband) << ',';
    if (p_sigma > 0.0) os << format_double((p_hat - mc.p_inband) / p_sigma);
    os << "\n";
  } catch (const std::domain_error&) {
    os << "ratio_ac_tc,,,,,\n";
    os << "p_inband,,,,,\n";
  }
  return os.str();
}

std::string detuning_csv(const ExperimentConfig& cfg, double half_range_ghz,
                         const std::vector<DetuningPoint>& points) {
  std::ostringstream os;
  provenance(os, cfg, false);
  os << "# half_range_ghz=" << format_double(half_range_ghz) << "\n";
  os << "detuning_ghz,i2_thz\n";
  for (const auto& pt : points) {
    os << format_double(pt.detuning_ghz) << ',' << format_double(pt.i2_thz) << "\n";
  }
  return os.str();
}

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!have_header && !line.empty() && line[0] == '#') {
      out.comments.push_back(line);
      continue;
    }
    if (!have_header) {
      out.header = split(line, ',');
      have_header = true;
      continue;
    }
    out.rows.push_back(split(line, ','));
  }
  if (!have_header) throw std::invalid_argument("csv_error: no header line");
  return out;
}

std::string delay_table_to_json(const std::vector<DelayEntry>& table) {
  json arr = json::array();
  for (const auto& entry : table) {
    json je;
    je["technology"] = to_string(entry.tech);
    je["shape"] = to_string(entry.shape);
    je["pair"] = to_string(entry.pair);
    je["delay_ns"] = entry.delay_ns ? json(*entry.delay_ns) : json(nullptr);
    arr.push_back(je);
  }
  return arr.dump(2) + "\n";
}

std::vector<DelayEntry> delay_table_from_json(const std::string& text) {
  json arr = json::parse(text);
  std::vector<DelayEntry> table;
  for (const json& je : arr) {
    DelayEntry entry;
    entry.tech = technology_from_string(je.at("technology").get<std::string>());
    entry.shape = shape_tag_from_string(je.at("shape").get<std::string>());
    entry.pair = channel_pair_from_string(je.at("pair").get<std::string>());
    if (!je.at("delay_ns").is_null()) entry.delay_ns = je["delay_ns"].get<double>();
    table.push_back(entry);
  }
  return table;
}

namespace {

std::uint64_t parse_seed(const std::string& text, const char* origin) {
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw std::invalid_argument(std::string("seed_error: ") + origin +
                                " is not an unsigned integer: " + text);
  }
  return v;
}

int run_integrals(int ch_a, int ch_b, std::optional<double> pump_thz, const std::string& shape,
                  double fwhm_ghz, double peak, int order, std::ostream& out) {
  auto build = [&](int itu) -> TransmissionCurve {
    Frequency center = itu_center_frequency(itu);
    if (shape == "gaussian") return make_gaussian(center, fwhm_ghz, peak);
    if (shape == "flattop" || shape == "flat_top") return make_flattop(center, fwhm_ghz, peak, order);
    if (shape == "rectangle") return make_rectangle(center, fwhm_ghz, peak);
    throw std::invalid_argument("argument_error: unknown shape \"" + shape + "\"");
  };
  TransmissionCurve curve_a = build(ch_a);
  TransmissionCurve curve_b = build(ch_b);
  if (pump_thz && !(*pump_thz > 0.0)) {
    throw std::invalid_argument("argument_error: --pump must be positive");
  }
  Frequency pump =
      pump_thz ? thz(*pump_thz) : itu_center_frequency(ch_a) + itu_center_frequency(ch_b);
  double i1_a = integral_i1(curve_a);
  double i1_b = integral_i1(curve_b);
  double i2 = integral_i2(curve_a, curve_b, pump);
  out << "pump_thz=" << format_double(pump.thz) << "\n";
  out << "I1_a_thz=" << format_double(i1_a) << "\n";
  out << "I1_b_thz=" << format_double(i1_b) << "\n";
  out << "I2_thz=" << format_double(i2) << "\n";
  out << "I2_over_I1=" << format_double(i2 / i1_a) << "\n";
  return 0;
}

SweepRequest sweep_request_for_mode(const ExperimentConfig& cfg, SplittingMode mode) {
  SweepRequest req;
  req.mode = mode;
  if (mode == SplittingMode::Statistical) {
    req.channel_a = need_channel(cfg, cfg.analysis.statistical, "statistical").itu_number;
    req.channel_b = req.channel_a;
  } else {
    req.channel_a = need_channel(cfg, cfg.analysis.signal, "signal").itu_number;
    req.channel_b = need_channel(cfg, cfg.analysis.idler, "idler").itu_number;
  }
  req.p_min = cfg.sweep.p_min;
  req.p_max = cfg.sweep.p_max;
  req.points = cfg.sweep.points;
  req.log_spacing = cfg.sweep.log_spacing;
  return req;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"photon-pair distribution over DWDM filters: overlap integrals, figure-of-merit "
               "sweeps, an event-level Monte Carlo, and delay/allocation planning"};
  app.name("wdmpairlab");
  app.require_subcommand(1);

  // integrals
  auto* cmd_integrals =
      app.add_subcommand("integrals", "filter overlap integrals for a channel pair");
  int ch_a = 0, ch_b = 0;
  double pump_thz = 0.0;
  std::string int_shape = "gaussian";
  double int_fwhm = 100.0, int_peak = 1.0;
  int int_order = 4;
  cmd_integrals->add_option("--channel-a", ch_a, "ITU channel feeding the signal arm")->required();
  cmd_integrals->add_option("--channel-b", ch_b, "ITU channel feeding the idler arm")->required();
  auto* pump_opt = cmd_integrals->add_option("--pump", pump_thz,
                                             "pump frequency in THz (default: sum of centers)");
  cmd_integrals->add_option("--shape", int_shape, "gaussian | flattop | rectangle");
  cmd_integrals->add_option("--fwhm-ghz", int_fwhm, "channel width in GHz");
  cmd_integrals->add_option("--peak", int_peak, "peak transmission");
  cmd_integrals->add_option("--order", int_order, "flat-top order");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "figure-of-merit sweep over p, per mode");
  std::string sweep_config, sweep_out;
  cmd_sweep->add_option("--config", sweep_config, "experiment config JSON")->required();
  cmd_sweep->add_option("--out", sweep_out, "output CSV path")->required();

  // montecarlo
  auto* cmd_mc = app.add_subcommand("montecarlo", "event-level simulation vs the analytic model");
  std::string mc_config, mc_out;
  std::uint64_t mc_seed_flag = 0;
  cmd_mc->add_option("--config", mc_config, "experiment config JSON")->required();
  cmd_mc->add_option("--out", mc_out, "output CSV path")->required();
  auto* mc_seed_opt = cmd_mc->add_option("--seed", mc_seed_flag,
                                         "seed override (flag > WDMPAIRLAB_SEED > config)");

  // detuning
  auto* cmd_detuning = app.add_subcommand("detuning", "overlap integral vs pump detuning");
  std::string det_config, det_out;
  double det_range = 50.0;
  int det_points = 101;
  cmd_detuning->add_option("--config", det_config, "experiment config JSON")->required();
  cmd_detuning->add_option("--range", det_range, "half range in GHz")->required();
  cmd_detuning->add_option("--points", det_points, "odd number of sweep points");
  cmd_detuning->add_option("--out", det_out, "output CSV path")->required();

  // delay-plan
  auto* cmd_plan = app.add_subcommand("delay-plan", "retuning schedule for channel pairs");
  std::string plan_filter, plan_shape = "flat_top", plan_pairs, plan_out;
  double plan_gate_ns = 20.0, line_min = 0.0, line_max = 25.0, line_res = 0.5;
  cmd_plan->add_option("--filter", plan_filter, "DTF | AWG | DG")->required();
  cmd_plan->add_option("--shape", plan_shape, "flat_top | gaussian");
  cmd_plan->add_option("--pairs", plan_pairs, "comma-separated channel pairs, e.g. 23-25,22-26")
      ->required();
  cmd_plan->add_option("--gate-width-ns", plan_gate_ns, "detector gate width in ns");
  cmd_plan->add_option("--line-min-ns", line_min, "delay line lower bound");
  cmd_plan->add_option("--line-max-ns", line_max, "delay line upper bound");
  cmd_plan->add_option("--line-resolution-ns", line_res, "delay line resolution");
  cmd_plan->add_option("--out", plan_out, "output JSON path (default: stdout)");

  // allocate
  auto* cmd_alloc = app.add_subcommand("allocate", "assign channel pairs to user pairs");
  int alloc_requests = 0;
  std::string alloc_pump = "auto", alloc_channels = "21-27", alloc_filter = "DG", alloc_out;
  cmd_alloc->add_option("--requests", alloc_requests, "number of user pairs")->required();
  cmd_alloc->add_option("--pump", alloc_pump, "fixed pump in THz, or \"auto\" for one per pair");
  cmd_alloc->add_option("--channels", alloc_channels, "inclusive ITU channel range, e.g. 21-27");
  cmd_alloc->add_option("--filter", alloc_filter, "technology used for delay settings");
  cmd_alloc->add_option("--out", alloc_out, "output JSON path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << nlohmann::json{{"error", std::string("argument_error: ") + e.what()}}.dump() << "\n";
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (*cmd_integrals) {
      std::optional<double> pump;
      if (pump_opt->count() > 0) pump = pump_thz;
      return run_integrals(ch_a, ch_b, pump, int_shape, int_fwhm, int_peak, int_order, out);
    }

    if (*cmd_sweep) {
      ExperimentConfig cfg = load_config(sweep_config);
      std::vector<FomPoint> points;
      for (SplittingMode mode : cfg.sweep.modes) {
        auto part = sweep_fom(cfg.demux, sweep_request_for_mode(cfg, mode), cfg.source.pump,
                              cfg.det_s, cfg.coupling_efficiency);
        points.insert(points.end(), part.begin(), part.end());
      }
      write_file_atomic(sweep_out, sweep_csv(cfg, points));
      out << "wrote " << sweep_out << " (" << points.size() << " rows)\n";
      return 0;
    }

    if (*cmd_mc) {
      ExperimentConfig cfg = load_config(mc_config);
      if (const char* env = std::getenv("WDMPAIRLAB_SEED")) {
        cfg.mc.seed = parse_seed(env, "WDMPAIRLAB_SEED");
      }
      if (mc_seed_opt->count() > 0) cfg.mc.seed = mc_seed_flag;
      McConfig mc = build_mc_config(cfg);
      RunStats stats = run_mc(mc);
      write_file_atomic(mc_out, montecarlo_csv(cfg, mc, stats));
      out << "wrote " << mc_out << " (" << stats.gates_run << " gates)\n";
      return 0;
    }

    if (*cmd_detuning) {
      ExperimentConfig cfg = load_config(det_config);
      const ChannelSpec& ch_s = need_channel(cfg, cfg.analysis.signal, "signal");
      const ChannelSpec& ch_i = need_channel(cfg, cfg.analysis.idler, "idler");
      auto points = detuning_sweep(ch_s.curve, ch_i.curve, cfg.source.pump, det_range, det_points);
      write_file_atomic(det_out, detuning_csv(cfg, det_range, points));
      out << "wrote " << det_out << " (" << points.size() << " rows)\n";
      return 0;
    }

    if (*cmd_plan) {
      DemuxTechnology tech = technology_from_string(plan_filter);
      FilterShapeTag shape = shape_tag_from_string(plan_shape);
      DelayLine line = make_delay_line(line_min, line_max, line_res);
      std::vector<ChannelPair> pairs;
      for (const auto& token : split(plan_pairs, ',')) {
        pairs.push_back(channel_pair_from_string(trim(token)));
      }
      auto plan = retune_plan(pairs, builtin_delay_table(), tech, shape, line, plan_gate_ns);
      nlohmann::json jplan;
      jplan["tool"] = kToolVersion;
      jplan["technology"] = to_string(tech);
      jplan["shape"] = to_string(shape);
      jplan["delay_line"] = {{"min_ns", line.min_ns},
                             {"max_ns", line.max_ns},
                             {"resolution_ns", line.resolution_ns}};
      jplan["steps"] = nlohmann::json::array();
      for (const auto& step : plan) {
        jplan["steps"].push_back({{"pair", to_string(step.pair)},
                                  {"pump_thz", step.pump.pump.thz},
                                  {"pump_wavelength_nm", step.pump.wavelength_nm},
                                  {"delayed_arm", to_string(step.setting.delayed_arm)},
                                  {"delay_ns", step.setting.delay_ns},
                                  {"scan",
                                   {{"start_ns", step.scan_start_ns},
                                    {"stop_ns", step.scan_stop_ns},
                                    {"step_ns", step.scan_step_ns}}}});
      }
      std::string text = jplan.dump(2) + "\n";
      if (!plan_out.empty()) {
        write_file_atomic(plan_out, text);
        out << "wrote " << plan_out << "\n";
      } else {
        out << text;
      }
      return 0;
    }

    if (*cmd_alloc) {
      if (alloc_requests < 0) throw std::invalid_argument("argument_error: --requests must be >= 0");
      ChannelPair range = channel_pair_from_string(alloc_channels);
      DemuxTechnology tech = technology_from_string(alloc_filter);
      std::vector<ChannelSpec> channels;
      for (int n = range.lo; n <= range.hi; ++n) {
        channels.push_back(make_channel(n, make_gaussian(itu_center_frequency(n), 100.0, 1.0)));
      }
      DelayTableNs delays;
      for (const auto& entry : builtin_delay_table()) {
        if (entry.tech == tech) delays[entry.pair] = entry.delay_ns;
      }
      DemuxSpec demux = make_demux(tech, std::move(channels), 100.0, 1.0, std::move(delays));
      std::optional<Frequency> pump_fixed;
      if (alloc_pump != "auto") pump_fixed = thz(std::stod(alloc_pump));
      std::vector<UserPair> requests;
      for (int k = 1; k <= alloc_requests; ++k) {
        requests.push_back({"A" + std::to_string(k), "B" + std::to_string(k)});
      }
      AllocationPlan plan = allocate(requests, demux, pump_fixed);
      nlohmann::json jplan;
      jplan["tool"] = kToolVersion;
      jplan["simultaneous"] = plan.simultaneous;
      jplan["requires_tunable_pump"] = plan.requires_tunable_pump;
      jplan["entries"] = nlohmann::json::array();
      for (const auto& entry : plan.entries) {
        nlohmann::json je;
        je["users"] = {entry.users.user_a, entry.users.user_b};
        je["channels"] = to_string(entry.pair);
        je["pump_thz"] = entry.pump.pump.thz;
        je["pump_wavelength_nm"] = entry.pump.wavelength_nm;
        je["mode"] = to_string(entry.mode);
        je["delay"] = entry.delay ? nlohmann::json{{"delayed_arm", to_string(entry.delay->delayed_arm)},
                                                   {"delay_ns", entry.delay->delay_ns}}
                                  : nlohmann::json(nullptr);
        jplan["entries"].push_back(je);
      }
      std::string text = jplan.dump(2) + "\n";
      if (!alloc_out.empty()) {
        write_file_atomic(alloc_out, text);
        out << "wrote " << alloc_out << "\n";
      } else {
        out << text;
      }
      return 0;
    }

    err << nlohmann::json{{"error", "argument_error: no subcommand"}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace wdmpair
