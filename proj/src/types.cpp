#include "wdmpair/types.hpp"

#include <stdexcept>

namespace wdmpair {

std::string to_string(SplittingMode mode) {
  return mode == SplittingMode::Deterministic ? "deterministic" : "statistical";
}

SplittingMode splitting_mode_from_string(const std::string& s) {
  if (s == "deterministic") return SplittingMode::Deterministic;
  if (s == "statistical") return SplittingMode::Statistical;
  throw std::invalid_argument("unknown splitting mode: " + s);
}

std::string to_string(DemuxTechnology tech) {
  switch (tech) {
    case DemuxTechnology::DTF: return "DTF";
    case DemuxTechnology::AWG: return "AWG";
    case DemuxTechnology::DG: return "DG";
  }
  return "?";
}

DemuxTechnology technology_from_string(const std::string& s) {
  if (s == "DTF" || s == "dtf") return DemuxTechnology::DTF;
  if (s == "AWG" || s == "awg") return DemuxTechnology::AWG;
  if (s == "DG" || s == "dg") return DemuxTechnology::DG;
  throw std::invalid_argument("unknown demux technology: " + s);
}

std::string to_string(ChannelPair pair) {
  return std::to_string(pair.lo) + "-" + std::to_string(pair.hi);
}

ChannelPair channel_pair_from_string(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size()) {
    throw std::invalid_argument("channel pair must look like \"23-25\", got: " + s);
  }
  int a = std::stoi(s.substr(0, dash));
  int b = std::stoi(s.substr(dash + 1));
  return {a, b};
}

}  // namespace wdmpair
