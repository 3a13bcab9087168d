#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace p14 {

/// One lattice axis. Directions 1..3 are spatial, 4 is the mass coordinate x4.
struct AxisSpec {
  int direction = 0;
  std::size_t points = 0;
  double extent = 0.0;
};

/// Periodic tensor-product lattice: 1..3 spatial axes followed by the mass axis.
///
/// Positions are x_j = j * dx on [0, L). Momenta use the standard transform
/// layout: index k maps to 2 pi k / L for k < n/2 and 2 pi (k - n) / L above.
/// Flat indices are row-major with the mass axis fastest.
class MomentumGrid {
 public:
  /// Throws std::domain_error on counts that are not powers of two >= 2,
  /// nonpositive extents, or spatial directions that are not strictly
  /// increasing within 1..3.
  MomentumGrid(std::vector<AxisSpec> spatial, AxisSpec mass);

  std::size_t rank() const { return axes_.size(); }
  std::size_t spatial_rank() const { return axes_.size() - 1; }
  std::size_t size() const { return size_; }

  const std::vector<AxisSpec>& axes() const { return axes_; }
  const AxisSpec& axis(std::size_t a) const { return axes_[a]; }
  const AxisSpec& mass_axis() const { return axes_.back(); }
  std::size_t stride(std::size_t a) const { return strides_[a]; }

  double dx(std::size_t a) const;
  double dp(std::size_t a) const;
  double position(std::size_t a, std::size_t j) const;
  double momentum(std::size_t a, std::size_t k) const;
  double center(std::size_t a) const { return 0.5 * axes_[a].extent; }

  /// Multi-index component along axis a of a flat index.
  std::size_t coordinate(std::size_t flat, std::size_t a) const { return (flat / strides_[a]) % axes_[a].points; }

  /// Per mode: |p|^2 over the spatial axes, and p4.
  const Eigen::ArrayXd& spatial_p2() const { return spatial_p2_; }
  const Eigen::ArrayXd& mass_momenta() const { return p4_; }

  /// Per mode momentum along axis a.
  Eigen::ArrayXd axis_momenta(std::size_t a) const;
  /// Per point position along axis a.
  Eigen::ArrayXd axis_positions(std::size_t a) const;

  friend bool operator==(const MomentumGrid& a, const MomentumGrid& b);

 private:
  std::vector<AxisSpec> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  Eigen::ArrayXd spatial_p2_;
  Eigen::ArrayXd p4_;
};

/// Assigns directions 1, 2, 3 in order to spatial axes whose direction is 0.
MomentumGrid make_grid(std::vector<AxisSpec> spatial, AxisSpec mass);

}  // namespace p14
