#include "p14/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace p14 {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_axis(const AxisSpec& a) {
  if (!is_power_of_two(a.points)) {
    throw std::domain_error("axis point count must be a power of two >= 2, got " + std::to_string(a.points));
  }
  if (!(a.extent > 0.0) || !std::isfinite(a.extent)) throw std::domain_error("axis extent must be positive");
}

}  // namespace

MomentumGrid::MomentumGrid(std::vector<AxisSpec> spatial, AxisSpec mass) {
  if (spatial.empty() || spatial.size() > 3) throw std::domain_error("grid needs 1..3 spatial axes");
  int last = 0;
  for (const AxisSpec& a : spatial) {
    check_axis(a);
    if (a.direction <= last || a.direction > 3) {
      throw std::domain_error("spatial directions must be strictly increasing within 1..3");
    }
    last = a.direction;
  }
  mass.direction = 4;
  check_axis(mass);

  axes_ = std::move(spatial);
  axes_.push_back(mass);
  strides_.assign(axes_.size(), 1);
  for (std::size_t a = axes_.size() - 1; a-- > 0;) strides_[a] = strides_[a + 1] * axes_[a + 1].points;
  size_ = strides_[0] * axes_[0].points;

  spatial_p2_ = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(size_));
  for (std::size_t a = 0; a < spatial_rank(); ++a) spatial_p2_ += axis_momenta(a).square();
  p4_ = axis_momenta(rank() - 1);
}

double MomentumGrid::dx(std::size_t a) const { return axes_[a].extent / static_cast<double>(axes_[a].points); }

double MomentumGrid::dp(std::size_t a) const { return 2.0 * std::numbers::pi / axes_[a].extent; }

double MomentumGrid::position(std::size_t a, std::size_t j) const { return static_cast<double>(j) * dx(a); }

double MomentumGrid::momentum(std::size_t a, std::size_t k) const {
  const auto n = static_cast<long long>(axes_[a].points);
  const auto kk = static_cast<long long>(k);
  const long long freq = kk < n / 2 ? kk : kk - n;
  return static_cast<double>(freq) * dp(a);
}

Eigen::ArrayXd MomentumGrid::axis_momenta(std::size_t a) const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(size_));
  for (std::size_t f = 0; f < size_; ++f) out[static_cast<Eigen::Index>(f)] = momentum(a, coordinate(f, a));
  return out;
}

Eigen::ArrayXd MomentumGrid::axis_positions(std::size_t a) const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(size_));
  for (std::size_t f = 0; f < size_; ++f) out[static_cast<Eigen::Index>(f)] = position(a, coordinate(f, a));
  return out;
}

bool operator==(const MomentumGrid& a, const MomentumGrid& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (std::size_t k = 0; k < a.axes_.size(); ++k) {
    const AxisSpec& x = a.axes_[k];
    const AxisSpec& y = b.axes_[k];
    if (x.direction != y.direction || x.points != y.points || x.extent != y.extent) return false;
  }
  return true;
}

MomentumGrid make_grid(std::vector<AxisSpec> spatial, AxisSpec mass) {
  int next = 1;
  for (AxisSpec& a : spatial) {
    if (a.direction == 0) a.direction = next;
    next = a.direction + 1;
  }
  return MomentumGrid(std::move(spatial), mass);
}

}  // namespace p14
