#pragma once

// Free propagation of variable-mass states under the Foldy-form equations
//   i d/dt psi = beta * E(p, p4) psi,  beta = diag(+1, -1),
// with E^2 = |p|^2 + p4^2 + kappa^2 (class I), |p|^2 + p4^2 (class II),
// |p|^2 + p4^2 - eta^2 (class III).

#include "p14/wavefunction.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace p14 {

class UnsupportedEquation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ThresholdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SubthresholdPolicy { ProjectOut, Reject };

struct PropagatorSpec {
  IrrepLabel label;
  SubthresholdPolicy policy = SubthresholdPolicy::ProjectOut;
  /// Under Reject, evanescent weight above this raises ThresholdError.
  double reject_tolerance = 0.0;
};

struct DispersionValue {
  bool evanescent = false;
  double energy = 0.0;      // E >= 0 for propagating modes
  double decay_rate = 0.0;  // sqrt(-radicand) for evanescent modes
};

/// Throws UnsupportedEquation for class IV.
DispersionValue dispersion(double spatial_p2, double p4, const PropagatorSpec& spec);
DispersionValue dispersion(const Eigen::VectorXd& p, double p4, const PropagatorSpec& spec);

struct Propagated {
  WaveFunction state;
  double truncated_norm = 0.0;  // class III weight removed from evanescent modes
};

/// Multiplies every momentum mode by exp(-i beta E t). Does not mutate psi.
Propagated propagate(const WaveFunction& psi, double t, const PropagatorSpec& spec);

struct FilterResult {
  WaveFunction state;
  double removed_norm = 0.0;
};

/// Zeroes modes with |p|^2 + p4^2 < eta^2. The result is not renormalized.
FilterResult subthreshold_filter(const WaveFunction& psi, double eta);

struct Observables {
  double norm = 0.0;
  std::vector<double> position_mean;  // one entry per grid axis, mass axis last
  double energy_mean = 0.0;           // <E>, evanescent modes contribute zero
  double p4_mean = 0.0;
};

/// Throws DegenerateState for a zero state.
Observables observables(const WaveFunction& psi, const PropagatorSpec& spec);

struct MassBins {
  std::size_t count = 64;
  std::optional<double> lower;  // defaults to the smallest mass on the grid
  std::optional<double> upper;  // defaults to the largest
};

/// Probability density over the observable mass.
///
/// m = sqrt(p4^2 + kappa^2) (class I), |p4| (class II). For class III,
/// evanescent modes go to truncated_norm and the remaining ones are binned by
/// the signed mass sgn(p4^2 - eta^2) sqrt(|p4^2 - eta^2|).
struct MassSpectrum {
  std::vector<double> edges;    // count + 1
  std::vector<double> density;  // count
  double truncated_norm = 0.0;
  double outside_norm = 0.0;  // weight outside [lower, upper]
  double input_norm = 0.0;

  double bin_width() const { return edges.size() > 1 ? edges[1] - edges[0] : 0.0; }
  double integral() const;
};

/// Weights are divided by the input norm^2, so density integrates to
/// 1 - truncated_norm - outside_norm.
MassSpectrum mass_spectrum(const WaveFunction& psi, const PropagatorSpec& spec, const MassBins& bins);

/// Per-mode mass for the spectrum; nullopt for class III evanescent modes.
std::optional<double> observable_mass(double spatial_p2, double p4, const PropagatorSpec& spec);

}  // namespace p14
