#pragma once

// Versioned binary state files.
//
//   bytes 0..7    magic "P14STATE"
//   bytes 8..11   format version, uint32 little-endian
//   bytes 12..19  header length H, uint64 little-endian
//   next H bytes  JSON header: format_version, label, grid, two_s, two_I,
//                 components, representation, time, amplitude_count
//   remainder     amplitude_count pairs (re, im) of little-endian IEEE-754
//                 binary64, in WaveFunction layout order

#include "p14/evolution.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

namespace p14 {

inline constexpr std::uint32_t kStateFormatVersion = 1;

class StateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json label_to_json(const IrrepLabel& label);
IrrepLabel label_from_json(const nlohmann::json& j);

nlohmann::ordered_json grid_to_json(const MomentumGrid& grid);
MomentumGrid grid_from_json(const nlohmann::json& j);

struct StateFile {
  IrrepLabel label;
  double time = 0.0;
  WaveFunction psi;
};

void write_state(std::ostream& os, const StateFile& state);
StateFile read_state(std::istream& is);

void write_state_file(const std::filesystem::path& path, const StateFile& state);
StateFile read_state_file(const std::filesystem::path& path);

}  // namespace p14
