#pragma once

// Matrix realizations of the inhomogeneous De Sitter algebra P(1,4):
// metric, five-index epsilon, bracket table, and the invariants P^2, V, W.

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace p14 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Momentum eigenvalues p_0..p_4 (lower index), natural units.
using FiveMomentum = Eigen::Matrix<double, 5, 1>;

inline constexpr int kDim = 5;
inline constexpr int kGeneratorCount = 15;
inline constexpr int kRotationCount = 10;

/// Diagonal metric (+1, -1, -1, -1, -1). Throws std::domain_error outside 0..4.
int metric(int mu, int nu);

/// Levi-Civita symbol with eps(0,1,2,3,4) = +1. Raising all five indices
/// leaves the values unchanged since det g = +1.
int epsilon5(int mu, int nu, int alpha, int beta, int gamma);

/// One of P_0..P_4 or M_{mu nu} with mu < nu.
///
/// Index order: P0..P4 are 0..4, then M01 M02 M03 M04 M12 M13 M14 M23 M24 M34
/// are 5..14.
class GeneratorId {
 public:
  static GeneratorId translation(int mu);
  static GeneratorId rotation(int mu, int nu);
  static GeneratorId from_index(int index);

  bool is_translation() const { return nu_ < 0; }
  int mu() const { return mu_; }
  int nu() const { return nu_; }
  int index() const;
  std::string name() const;

  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
  friend std::strong_ordering operator<=>(const GeneratorId& a, const GeneratorId& b) {
    return a.index() <=> b.index();
  }

 private:
  GeneratorId(int mu, int nu) : mu_(mu), nu_(nu) {}
  int mu_;
  int nu_;
};

const std::array<GeneratorId, kGeneratorCount>& all_generators();

/// Index of M_{mu nu} (mu < nu) within the ten rotations, 0..9.
int rotation_slot(int mu, int nu);

/// Integer combination sum_k c_k X_k. Brackets are stored as i times one of these.
struct Combination {
  std::array<int, kGeneratorCount> coeff{};

  bool is_zero() const;
  int operator[](GeneratorId id) const { return coeff[id.index()]; }
  Combination& add(GeneratorId id, int c);
  Combination& operator+=(const Combination& o);
  Combination& operator-=(const Combination& o);
  Combination operator-() const;
  Combination operator*(int s) const;
  friend bool operator==(const Combination&, const Combination&) = default;
  std::string to_string() const;
};

/// [a, b] = i * bracket(a, b), with
///   [M_mn, M_rs] = i(g_nr M_ms - g_mr M_ns - g_ns M_mr + g_ms M_nr),
///   [M_mn, P_r]  = i(g_nr P_m - g_mr P_n),
///   [P_m, P_n]   = 0.
Combination bracket(GeneratorId a, GeneratorId b);

using StructureTable = std::array<std::array<Combination, kGeneratorCount>, kGeneratorCount>;

/// Full antisymmetric bracket table, computed once.
const StructureTable& structure_constants();

/// Number of generator triples (of the 455) whose cyclic bracket sum is nonzero.
int symbolic_jacobi_failures();

/// A map from each generator to a square matrix of common dimension.
class MatrixRealization {
 public:
  explicit MatrixRealization(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  const Matrix& operator[](GeneratorId id) const { return entries_[id.index()]; }

  /// Replaces one generator; throws std::domain_error on size mismatch.
  void set(GeneratorId id, Matrix m);

  const Matrix& P(int mu) const { return (*this)[GeneratorId::translation(mu)]; }
  /// M_{mu nu} for any ordered pair: -M_{nu mu} when mu > nu, zero when equal.
  Matrix M(int mu, int nu) const;

  /// i * sum_k c_k r[X_k].
  Matrix evaluate(const Combination& c) const;

 private:
  Eigen::Index dim_;
  std::array<Matrix, kGeneratorCount> entries_;
};

/// 6x6 realization: M_{mu nu} is the metric-compatible vector generator
/// (M_mn)^a_b = i(delta^a_m g_nb - delta^a_n g_mb) on the first five slots,
/// P_mu = E_{mu,5} is the affine translation column.
MatrixRealization build_affine_realization();

/// 4x4 spinor realization M_mn = (i/4)[gamma_m, gamma_n] with P = 0.
MatrixRealization build_spinor_realization();

/// Faithful realization on (affine) x (spinor), dim 24:
/// M = M_aff (x) 1 + 1 (x) M_spin, P = P_aff (x) 1.
MatrixRealization build_spinor_affine_realization();

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> commutator(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::domain_error("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

/// Max absolute entry; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

struct PairDeviation {
  GeneratorId a;
  GeneratorId b;
  double deviation;
};

struct RealizationReport {
  std::vector<PairDeviation> pairs;  // 105 entries, sorted by (a, b)
  double global_max = 0.0;
};

/// || [r[a], r[b]] - r[bracket(a,b)] ||_inf for every unordered pair a < b.
RealizationReport verify_realization(const MatrixRealization& r);

/// Max over the 455 triples of || [A,[B,C]] + [B,[C,A]] + [C,[A,B]] ||_inf.
double jacobi_residual(const MatrixRealization& r);

/// w_{mu nu} for fixed momentum eigenvalues p.
struct FrozenWTensor {
  FiveMomentum momentum;
  std::array<std::array<Matrix, kDim>, kDim> upper;  // w^{mu nu}
  std::array<std::array<Matrix, kDim>, kDim> lower;  // w_{mu nu}

  const Matrix& operator()(int mu, int nu) const { return lower[mu][nu]; }
};

/// w^{mn} = -1/2 eps^{mnabc} M_ab p_c; lowered with the metric.
FrozenWTensor frozen_w(const MatrixRealization& r, const FiveMomentum& p);

double casimir_P2(const FiveMomentum& p);

/// V = -1/4 M_mn w^mn.
Matrix casimir_V(const MatrixRealization& r, const FrozenWTensor& w);
Matrix casimir_V(const MatrixRealization& r, const FiveMomentum& p);

/// W = 1/2 w_mn w^mn.
Matrix casimir_W(const FrozenWTensor& w);
Matrix casimir_W(const MatrixRealization& r, const FiveMomentum& p);

/// Basis of the stabilizer of p inside the rotations: columns are real
/// coefficient vectors over the ten M_{mu nu} in rotation_slot order.
Eigen::MatrixXd little_algebra(const FiveMomentum& p);

/// sum_slot coeff[slot] * M(slot).
Matrix rotation_combination(const MatrixRealization& r, const Eigen::VectorXd& coeff);

struct CentralityReport {
  int little_algebra_dim = 0;
  double v_residual = 0.0;  // max_X || [V, X] ||_inf
  double w_residual = 0.0;
};

CentralityReport casimir_centrality(const MatrixRealization& r, const FiveMomentum& p);

}  // namespace p14
