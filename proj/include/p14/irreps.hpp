#pragma once

// Representation classes of P(1,4) and their little-group content.

#include "p14/algebra.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace p14 {

/// Non-negative half-integer stored as twice its value.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static HalfInteger from_twice(int twice);
  /// Throws std::domain_error unless 2*value is a non-negative integer.
  static HalfInteger from_double(double value);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr int multiplicity() const { return twice_ + 1; }
  constexpr double casimir() const { return value() * (value() + 1.0); }
  std::string to_string() const;

  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Thrown when a Casimir that should be scalar is not.
class ReducibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RepClass { I, II, III, IV };

std::string to_string(RepClass c);

struct ClassI {
  double kappa;
  HalfInteger s;
  HalfInteger isospin;
};
struct ClassII {
  HalfInteger s;
};
struct ClassIII {
  double eta;
  HalfInteger l0;
  Complex l1;
};
struct ClassIV {};

using IrrepLabel = std::variant<ClassI, ClassII, ClassIII, ClassIV>;

RepClass class_of(const IrrepLabel& label);

inline constexpr double kDefaultClassifyTol = 1e-9;

/// The tolerance is scaled by max(1, ||p||_inf^2) before use.
RepClass classify(double p2, const FiveMomentum& p, double tol = kDefaultClassifyTol);
inline RepClass classify(const FiveMomentum& p, double tol = kDefaultClassifyTol) {
  return classify(casimir_P2(p), p, tol);
}

using Triple = std::array<Matrix, 3>;

/// Spin-j matrices in the basis m = j, j-1, ..., -j.
Triple build_su2(HalfInteger j);
Triple build_su2(double j);

struct SpinIsospinRep {
  HalfInteger s;
  HalfInteger isospin;
  Eigen::Index dim = 0;
  Triple M;  // (M23, M31, M12) = A + B
  Triple R;  // (M14, M24, M34) = A - B
};

/// A = J(s) (x) 1, B = 1 (x) J(I); basis ordered (s3, I3) with I3 fastest.
SpinIsospinRep build_class1_rep(HalfInteger s, HalfInteger isospin);

/// S = (M + R)/2, I = (M - R)/2.
Matrix spin_casimir(const Triple& M, const Triple& R);
Matrix isospin_casimir(const Triple& M, const Triple& R);

/// Recovers (s, I) from the scalar values of S^2 and I^2; throws ReducibleInput
/// if either deviates from a multiple of identity by more than 1e-10.
std::pair<HalfInteger, HalfInteger> spin_isospin_eigen(const Triple& M, const Triple& R);
std::pair<HalfInteger, HalfInteger> spin_isospin_eigen(const SpinIsospinRep& rep);

/// Max residual of the so(4) brackets [M,M]=iM, [M,R]=iR, [R,R]=iM.
double so4_bracket_residual(const Triple& M, const Triple& R);

/// Spatial triples (M23, M31, M12) and (M14, M24, M34) of a realization.
Triple spatial_rotations(const MatrixRealization& r);
Triple mass_boosts(const MatrixRealization& r);

struct Class1IdentityReport {
  double kappa = 0.0;
  // ||(W/k^2 + 2V/k) - f S^2|| and ||(W/k^2 - 2V/k) - f I^2|| for f = 1, 4.
  std::array<double, 2> spin_deviation{};
  std::array<double, 2> isospin_deviation{};
  std::optional<int> factor;  // f that closes both to 1e-10

  static constexpr std::array<int, 2> kFactors{1, 4};
};

Class1IdentityReport check_class1_casimir_identity(const MatrixRealization& r, double kappa);

struct LittleGroupP3 {
  double lambda = 0.0;
  Triple translations;  // P'_i = M_0i + lambda M_i4
  Triple rotations;     // M_i
  double closure_residual = 0.0;   // max ||[P'_i,P'_j] - i(lambda^2-1) M_ij||
  double abelian_residual = 0.0;   // max ||[P'_i,P'_j]||
  double covariance_residual = 0.0;  // max ||[M_i,P'_j] - i eps_ijk P'_k||
};

LittleGroupP3 class2_little_group(const MatrixRealization& r, double lambda);

/// s with M^2 = s(s+1) 1; throws ReducibleInput if M^2 is not scalar.
HalfInteger class2_spin_invariant(const Triple& M);

struct LorentzBlock {
  Triple M;  // (M23, M31, M12)
  Triple N;  // (M01, M02, M03)
};

LorentzBlock extract_lorentz_block(const MatrixRealization& r);

/// Max residual of the o(1,3) brackets [M,M]=iM, [M,N]=iN, [N,N]=-iM.
double lorentz_bracket_residual(const LorentzBlock& b);

struct Class3Invariants {
  Matrix V;  // sign * eta * M.N
  Matrix W;  // eta^2 (N^2 - M^2)
};

Class3Invariants class3_invariants(const LorentzBlock& b, double eta, int sign);

struct Class3IdentityReport {
  double eta = 0.0;
  int orientation = 1;  // frozen p = (0,0,0,0, orientation * eta)
  std::array<double, 2> v_deviation{};  // for formula sign +1, -1
  std::array<double, 2> w_deviation{};
  std::optional<int> matching_sign;  // the unique sign matching V and W, if any
};

/// Compares both formula signs against casimir_V / casimir_W of r.
Class3IdentityReport check_class3_identity(const MatrixRealization& r, double eta, int orientation);

struct LabelVerdict {
  bool valid = false;
  std::string reason;
};

LabelVerdict validate_class3_label(double eta, double l0, Complex l1);

}  // namespace p14
