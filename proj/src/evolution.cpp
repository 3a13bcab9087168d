#include "p14/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace p14 {

namespace {

void require_momentum(const WaveFunction& psi, const char* op) {
  if (psi.representation() != Representation::Momentum) {
    throw RepresentationError(std::string(op) + " expects a momentum-representation state");
  }
}

// Probability per lattice point summed over blocks and components.
Eigen::ArrayXd point_density(const WaveFunction& psi) {
  const auto n = static_cast<Eigen::Index>(psi.grid().size());
  Eigen::ArrayXd density = Eigen::ArrayXd::Zero(n);
  for (int b = 0; b < WaveFunction::kBlocks; ++b) {
    for (int c = 0; c < psi.components(); ++c) density += psi.channel(b, c).array().abs2();
  }
  return density;
}

double sum_of(const Eigen::ArrayXd& a) {
  return pairwise_sum(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())));
}

}  // namespace

DispersionValue dispersion(double spatial_p2, double p4, const PropagatorSpec& spec) {
  const double base = spatial_p2 + p4 * p4;
  return std::visit(
      [&](const auto& l) -> DispersionValue {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ClassI>) {
          return {false, std::sqrt(base + l.kappa * l.kappa), 0.0};
        } else if constexpr (std::is_same_v<T, ClassII>) {
          return {false, std::sqrt(base), 0.0};
        } else if constexpr (std::is_same_v<T, ClassIII>) {
          const double radicand = base - l.eta * l.eta;
          if (radicand < 0.0) return {true, 0.0, std::sqrt(-radicand)};
          return {false, std::sqrt(radicand), 0.0};
        } else {
          throw UnsupportedEquation("class IV has no propagation equation");
        }
      },
      spec.label);
}

DispersionValue dispersion(const Eigen::VectorXd& p, double p4, const PropagatorSpec& spec) {
  return dispersion(p.squaredNorm(), p4, spec);
}

FilterResult subthreshold_filter(const WaveFunction& psi, double eta) {
  require_momentum(psi, "subthreshold_filter");
  const MomentumGrid& grid = psi.grid();
  const Eigen::ArrayXd radius2 = grid.spatial_p2() + grid.mass_momenta().square();
  const double eta2 = eta * eta;

  FilterResult out{psi, 0.0};
  Eigen::ArrayXd removed = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (int b = 0; b < WaveFunction::kBlocks; ++b) {
    for (int c = 0; c < psi.components(); ++c) {
      auto ch = out.state.channel(b, c);
      for (Eigen::Index k = 0; k < ch.size(); ++k) {
        if (radius2[k] < eta2) {
          removed[k] += std::norm(ch[k]);
          ch[k] = 0.0;
        }
      }
    }
  }
  out.removed_norm = sum_of(removed);
  return out;
}

Propagated propagate(const WaveFunction& psi, double t, const PropagatorSpec& spec) {
  require_momentum(psi, "propagate");
  if (class_of(spec.label) == RepClass::IV) throw UnsupportedEquation("class IV has no propagation equation");

  Propagated out{psi, 0.0};
  if (const auto* c3 = std::get_if<ClassIII>(&spec.label)) {
    FilterResult filtered = subthreshold_filter(psi, c3->eta);
    if (spec.policy == SubthresholdPolicy::Reject && filtered.removed_norm > spec.reject_tolerance) {
      throw ThresholdError("evanescent modes carry weight " + std::to_string(filtered.removed_norm) +
                           " under reject policy");
    }
    out.state = std::move(filtered.state);
    out.truncated_norm = filtered.removed_norm;
  }
  if (t == 0.0) return out;

  const MomentumGrid& grid = psi.grid();
  const Eigen::ArrayXd& p2 = grid.spatial_p2();
  const Eigen::ArrayXd& p4 = grid.mass_momenta();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::ArrayXcd particle(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const DispersionValue d = dispersion(p2[k], p4[k], spec);
    const double phase = d.evanescent ? 0.0 : d.energy * t;
    particle[k] = std::complex<double>(std::cos(phase), -std::sin(phase));
  }
  const Eigen::ArrayXcd antiparticle = particle.conjugate();
  for (int c = 0; c < psi.components(); ++c) {
    out.state.channel(0, c).array() *= particle;
    out.state.channel(1, c).array() *= antiparticle;
  }
  return out;
}

Observables observables(const WaveFunction& psi, const PropagatorSpec& spec) {
  const WaveFunction pos = psi.representation() == Representation::Position ? psi : to_position(psi);
  const WaveFunction mom = psi.representation() == Representation::Momentum ? psi : to_momentum(psi);
  const MomentumGrid& grid = psi.grid();

  Observables obs;
  const double norm2 = psi.norm_squared();
  if (!(norm2 > 0.0)) throw DegenerateState("observables of a zero state are undefined");
  obs.norm = std::sqrt(norm2);

  const Eigen::ArrayXd xdens = point_density(pos);
  for (std::size_t a = 0; a < grid.rank(); ++a) {
    obs.position_mean.push_back(sum_of(grid.axis_positions(a) * xdens) / norm2);
  }

  const Eigen::ArrayXd pdens = point_density(mom);
  Eigen::ArrayXd energy(pdens.size());
  const Eigen::ArrayXd& p2 = grid.spatial_p2();
  const Eigen::ArrayXd& p4 = grid.mass_momenta();
  for (Eigen::Index k = 0; k < energy.size(); ++k) {
    const DispersionValue d = dispersion(p2[k], p4[k], spec);
    energy[k] = d.evanescent ? 0.0 : d.energy;
  }
  obs.energy_mean = sum_of(energy * pdens) / norm2;
  obs.p4_mean = sum_of(p4 * pdens) / norm2;
  return obs;
}

std::optional<double> observable_mass(double spatial_p2, double p4, const PropagatorSpec& spec) {
  return std::visit(
      [&](const auto& l) -> std::optional<double> {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ClassI>) {
          return std::sqrt(p4 * p4 + l.kappa * l.kappa);
        } else if constexpr (std::is_same_v<T, ClassII>) {
          return std::abs(p4);
        } else if constexpr (std::is_same_v<T, ClassIII>) {
          const double eta2 = l.eta * l.eta;
          if (spatial_p2 + p4 * p4 < eta2) return std::nullopt;
          const double m2 = p4 * p4 - eta2;
          return std::copysign(std::sqrt(std::abs(m2)), m2);
        } else {
          throw UnsupportedEquation("class IV has no mass spectrum");
        }
      },
      spec.label);
}

double MassSpectrum::integral() const {
  std::vector<double> w(density.size());
  const double dm = bin_width();
  for (std::size_t k = 0; k < density.size(); ++k) w[k] = density[k] * dm;
  return pairwise_sum(w);
}

MassSpectrum mass_spectrum(const WaveFunction& psi, const PropagatorSpec& spec, const MassBins& bins) {
  require_momentum(psi, "mass_spectrum");
  if (class_of(spec.label) == RepClass::IV) throw UnsupportedEquation("class IV has no mass spectrum");
  if (bins.count == 0) throw std::domain_error("mass spectrum needs at least one bin");

  const MomentumGrid& grid = psi.grid();
  const Eigen::ArrayXd& p2 = grid.spatial_p2();
  const Eigen::ArrayXd& p4 = grid.mass_momenta();
  const auto n = static_cast<Eigen::Index>(grid.size());

  std::vector<std::optional<double>> mass(static_cast<std::size_t>(n));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index k = 0; k < n; ++k) {
    mass[k] = observable_mass(p2[k], p4[k], spec);
    if (mass[k]) {
      lo = std::min(lo, *mass[k]);
      hi = std::max(hi, *mass[k]);
    }
  }
  if (bins.lower) lo = *bins.lower;
  if (bins.upper) hi = *bins.upper;
  if (!std::isfinite(lo) || !std::isfinite(hi)) lo = hi = 0.0;
  if (hi < lo) throw std::domain_error("mass range upper bound below lower bound");
  if (hi == lo) hi = lo + 1.0;

  MassSpectrum spec_out;
  spec_out.input_norm = psi.norm();
  const double norm2 = psi.norm_squared();
  if (!(norm2 > 0.0)) throw DegenerateState("mass spectrum of a zero state is undefined");

  const std::size_t count = bins.count;
  const double width = (hi - lo) / static_cast<double>(count);
  spec_out.edges.resize(count + 1);
  for (std::size_t b = 0; b <= count; ++b) spec_out.edges[b] = lo + width * static_cast<double>(b);
  spec_out.edges[count] = hi;

  const Eigen::ArrayXd dens = point_density(psi);
  std::vector<std::vector<double>> per_bin(count);
  std::vector<double> truncated;
  std::vector<double> outside;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = dens[k];
    if (!mass[k]) {
      truncated.push_back(w);
      continue;
    }
    const double m = *mass[k];
    if (m < lo || m > hi) {
      outside.push_back(w);
      continue;
    }
    auto b = static_cast<std::size_t>(std::floor((m - lo) / width));
    b = std::min(b, count - 1);
    per_bin[b].push_back(w);
  }
  spec_out.density.resize(count);
  for (std::size_t b = 0; b < count; ++b) spec_out.density[b] = pairwise_sum(per_bin[b]) / norm2 / width;
  spec_out.truncated_norm = pairwise_sum(truncated) / norm2;
  spec_out.outside_norm = pairwise_sum(outside) / norm2;
  return spec_out;
}

}  // namespace p14
