#pragma once

// Run configuration for the evolve and spectrum commands.
//
// JSON schema (unknown keys are rejected at every level):
//   class            "I" | "II" | "III"                       required
//   kappa            number > 0                   class I,   required
//   eta              number > 0                   class III, required
//   s                half-integer, default 0      classes I and II
//   I                half-integer, default 0      class I
//   l0               half-integer, default 0      class III
//   l1               [re, im], default [0, 0]     class III
//   grid             { spatial: [{direction?, points, extent}, ...],
//                      mass: {points, extent} }                required
//   packet           { kind: "position" | "momentum" (default position),
//                      center: [..], width: [..], momentum: [..],
//                      block: "particle" | "antiparticle" | "both",
//                      component: int, noise: number >= 0 }   required
//                    arrays have one entry per grid axis, mass axis last;
//                    width is required, the others default to the grid
//                    center and zero momentum
//   times            [number, ...]            required for evolve
//   policy           "project-out" | "reject", default project-out
//   reject_tolerance number >= 0, default 0
//   seed             non-negative integer, default 0
//   bins             integer >= 1             required for spectrum
//   m_range          [lower, upper], optional

#include "p14/evolution.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace p14::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PacketConfig {
  enum class Kind { Position, Momentum };
  enum class Block { Particle, Antiparticle, Both };

  Kind kind = Kind::Position;
  std::vector<double> center;
  std::vector<double> width;
  std::vector<double> momentum;
  Block block = Block::Particle;
  int component = 0;
  double noise = 0.0;
};

struct RunConfig {
  IrrepLabel label;
  MomentumGrid grid;
  PacketConfig packet;
  std::vector<double> times;
  SubthresholdPolicy policy = SubthresholdPolicy::ProjectOut;
  double reject_tolerance = 0.0;
  std::uint64_t seed = 0;
  std::optional<MassBins> bins;

  PropagatorSpec propagator() const { return {label, policy, reject_tolerance}; }
  /// Internal (s, I) content carried by the state.
  std::pair<HalfInteger, HalfInteger> internal_spins() const;
};

enum class Command { Evolve, Spectrum };

RunConfig parse_run_config(const nlohmann::json& j, Command command);
RunConfig load_run_config(const std::filesystem::path& path, Command command);

/// Normalized echo of the effective configuration.
nlohmann::ordered_json to_json(const RunConfig& config);

/// Unit-norm initial state in the momentum representation.
WaveFunction build_initial_state(const RunConfig& config);

}  // namespace p14::cli
