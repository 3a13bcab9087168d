#pragma once

#include "p14/grid.hpp"
#include "p14/irreps.hpp"

#include <complex>
#include <span>
#include <stdexcept>

namespace p14 {

enum class Representation { Position, Momentum };

class RepresentationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Pairwise (cascade) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);
/// sum |z|^2 with pairwise reduction.
double pairwise_norm2(std::span<const std::complex<double>> values);

/// Amplitudes over (beta block, internal component, lattice point).
///
/// Layout: blocks outermost (beta = +1 first), then (s3, I3) components with
/// I3 fastest, then the grid in its row-major order. Stored amplitudes carry
/// the cell weight, so norm^2 = sum |a|^2 in either representation.
class WaveFunction {
 public:
  static constexpr int kBlocks = 2;

  WaveFunction(MomentumGrid grid, HalfInteger s, HalfInteger isospin, Representation rep);

  const MomentumGrid& grid() const { return grid_; }
  HalfInteger spin() const { return s_; }
  HalfInteger isospin() const { return isospin_; }
  int components() const { return s_.multiplicity() * isospin_.multiplicity(); }
  Representation representation() const { return rep_; }
  void set_representation(Representation rep) { rep_ = rep; }

  Eigen::VectorXcd& data() { return data_; }
  const Eigen::VectorXcd& data() const { return data_; }

  /// Index of (block, component, point) in data().
  Eigen::Index offset(int block, int component, std::size_t point = 0) const;

  auto channel(int block, int component) {
    return data_.segment(offset(block, component), static_cast<Eigen::Index>(grid_.size()));
  }
  auto channel(int block, int component) const {
    return data_.segment(offset(block, component), static_cast<Eigen::Index>(grid_.size()));
  }

  double norm_squared() const;
  double norm() const;

 private:
  MomentumGrid grid_;
  HalfInteger s_;
  HalfInteger isospin_;
  Representation rep_;
  Eigen::VectorXcd data_;
};

/// Unitary per-axis DFT, forward kernel exp(-i p x), 1/sqrt(n) on each axis.
WaveFunction to_momentum(const WaveFunction& psi);
WaveFunction to_position(const WaveFunction& psi);

}  // namespace p14
