#include "p14/wavefunction.hpp"

#include <cmath>
#include <unsupported/Eigen/FFT>
#include <vector>

namespace p14 {

namespace {

constexpr std::size_t kPairwiseBlock = 64;

template <typename T, typename F>
double cascade(std::span<const T> v, F&& term) {
  if (v.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (const T& x : v) s += term(x);
    return s;
  }
  const std::size_t half = v.size() / 2;
  return cascade(v.first(half), term) + cascade(v.subspan(half), term);
}

enum class Direction { Forward, Inverse };

void transform(Eigen::VectorXcd& data, const MomentumGrid& grid, Direction dir) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const std::size_t total = static_cast<std::size_t>(data.size());
  std::vector<std::complex<double>> line;
  std::vector<std::complex<double>> out;

  for (std::size_t a = 0; a < grid.rank(); ++a) {
    const std::size_t n = grid.axis(a).points;
    const std::size_t stride = grid.stride(a);
    const std::size_t span = n * stride;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    line.resize(n);
    for (std::size_t base = 0; base < total; base += span) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t start = base + inner;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[static_cast<Eigen::Index>(start + k * stride)];
        if (dir == Direction::Forward) fft.fwd(out, line);
        else fft.inv(out, line);
        for (std::size_t k = 0; k < n; ++k) data[static_cast<Eigen::Index>(start + k * stride)] = scale * out[k];
      }
    }
  }
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return cascade(values, [](double x) { return x; });
}

double pairwise_norm2(std::span<const std::complex<double>> values) {
  return cascade(values, [](const std::complex<double>& z) { return std::norm(z); });
}

WaveFunction::WaveFunction(MomentumGrid grid, HalfInteger s, HalfInteger isospin, Representation rep)
    : grid_(std::move(grid)), s_(s), isospin_(isospin), rep_(rep) {
  data_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(kBlocks * components() * grid_.size()));
}

Eigen::Index WaveFunction::offset(int block, int component, std::size_t point) const {
  if (block < 0 || block >= kBlocks || component < 0 || component >= components() || point >= grid_.size()) {
    throw std::out_of_range("wavefunction index out of range");
  }
  return static_cast<Eigen::Index>((static_cast<std::size_t>(block * components() + component)) * grid_.size() +
                                   point);
}

double WaveFunction::norm_squared() const {
  return pairwise_norm2(std::span<const std::complex<double>>(data_.data(), static_cast<std::size_t>(data_.size())));
}

double WaveFunction::norm() const { return std::sqrt(norm_squared()); }

WaveFunction to_momentum(const WaveFunction& psi) {
  if (psi.representation() != Representation::Position) {
    throw RepresentationError("to_momentum expects a position-representation state");
  }
  WaveFunction out = psi;
  transform(out.data(), out.grid(), Direction::Forward);
  out.set_representation(Representation::Momentum);
  return out;
}

WaveFunction to_position(const WaveFunction& psi) {
  if (psi.representation() != Representation::Momentum) {
    throw RepresentationError("to_position expects a momentum-representation state");
  }
  WaveFunction out = psi;
  transform(out.data(), out.grid(), Direction::Inverse);
  out.set_representation(Representation::Position);
  return out;
}

}  // namespace p14
