#include "p14/irreps.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace p14 {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kScalarTol = 1e-10;

int levi_civita3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i + 1) % 3 == j) ? 1 : -1;
}

Matrix square_sum(const Triple& t) { return t[0] * t[0] + t[1] * t[1] + t[2] * t[2]; }

// Max residual of [X_i, Y_j] = i * sign * eps_ijk Z_k over all i, j.
double triple_bracket_residual(const Triple& x, const Triple& y, const Triple& z, double sign) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Matrix expected = Matrix::Zero(x[i].rows(), x[i].cols());
      for (int k = 0; k < 3; ++k) {
        const int e = levi_civita3(i, j, k);
        if (e != 0) expected += (sign * e) * kI * z[k];
      }
      worst = std::max(worst, max_abs(commutator(x[i], y[j]) - expected));
    }
  }
  return worst;
}

// Scalar value c with ||m - c*1|| < kScalarTol, else ReducibleInput.
double scalar_value(const Matrix& m, const char* what) {
  const double c = m.trace().real() / static_cast<double>(m.rows());
  if (max_abs(m - c * Matrix::Identity(m.rows(), m.cols())) > kScalarTol) {
    throw ReducibleInput(std::string("reducible input: ") + what + " is not a multiple of identity");
  }
  return c;
}

HalfInteger spin_from_casimir(double c, const char* what) {
  const double x = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(c, 0.0)));
  const double twice = std::round(2.0 * x);
  if (c < -kScalarTol || std::abs(2.0 * x - twice) > 1e-8) {
    throw ReducibleInput(std::string("reducible input: ") + what + " eigenvalue is not j(j+1)");
  }
  return HalfInteger::from_twice(static_cast<int>(twice));
}

}  // namespace

HalfInteger HalfInteger::from_twice(int twice) {
  if (twice < 0) throw std::domain_error("half-integer must be non-negative");
  return HalfInteger(twice);
}

HalfInteger HalfInteger::from_double(double value) {
  const double twice = 2.0 * value;
  if (!std::isfinite(value) || value < 0.0 || twice != std::round(twice)) {
    throw std::domain_error("not a non-negative half-integer: " + std::to_string(value));
  }
  return HalfInteger(static_cast<int>(twice));
}

std::string HalfInteger::to_string() const {
  if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

std::string to_string(RepClass c) {
  switch (c) {
    case RepClass::I: return "ClassI";
    case RepClass::II: return "ClassII";
    case RepClass::III: return "ClassIII";
    case RepClass::IV: return "ClassIV";
  }
  return "unknown";
}

RepClass class_of(const IrrepLabel& label) {
  return std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ClassI>) return RepClass::I;
        else if constexpr (std::is_same_v<T, ClassII>) return RepClass::II;
        else if constexpr (std::is_same_v<T, ClassIII>) return RepClass::III;
        else return RepClass::IV;
      },
      label);
}

RepClass classify(double p2, const FiveMomentum& p, double tol) {
  const double norm = p.cwiseAbs().maxCoeff();
  const double scaled = tol * std::max(1.0, norm * norm);
  if (norm < scaled) return RepClass::IV;
  if (p2 > scaled) return RepClass::I;
  if (p2 < -scaled) return RepClass::III;
  return RepClass::II;
}

Triple build_su2(HalfInteger j) {
  const int n = j.multiplicity();
  const double jj = j.value();
  Matrix raise = Matrix::Zero(n, n);
  Matrix j3 = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = jj - k;
    j3(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
  }
  const Matrix lower = raise.adjoint();
  return {Matrix(0.5 * (raise + lower)), Matrix(-0.5 * kI * (raise - lower)), j3};
}

Triple build_su2(double j) { return build_su2(HalfInteger::from_double(j)); }

SpinIsospinRep build_class1_rep(HalfInteger s, HalfInteger isospin) {
  const Triple a = build_su2(s);
  const Triple b = build_su2(isospin);
  const Matrix id_s = Matrix::Identity(s.multiplicity(), s.multiplicity());
  const Matrix id_i = Matrix::Identity(isospin.multiplicity(), isospin.multiplicity());
  SpinIsospinRep rep;
  rep.s = s;
  rep.isospin = isospin;
  rep.dim = static_cast<Eigen::Index>(s.multiplicity()) * isospin.multiplicity();
  for (int i = 0; i < 3; ++i) {
    const Matrix ai = Eigen::kroneckerProduct(a[i], id_i);
    const Matrix bi = Eigen::kroneckerProduct(id_s, b[i]);
    rep.M[i] = ai + bi;
    rep.R[i] = ai - bi;
  }
  return rep;
}

Matrix spin_casimir(const Triple& M, const Triple& R) {
  return 0.25 * square_sum({Matrix(M[0] + R[0]), Matrix(M[1] + R[1]), Matrix(M[2] + R[2])});
}

Matrix isospin_casimir(const Triple& M, const Triple& R) {
  return 0.25 * square_sum({Matrix(M[0] - R[0]), Matrix(M[1] - R[1]), Matrix(M[2] - R[2])});
}

std::pair<HalfInteger, HalfInteger> spin_isospin_eigen(const Triple& M, const Triple& R) {
  const double s2 = scalar_value(spin_casimir(M, R), "S^2");
  const double i2 = scalar_value(isospin_casimir(M, R), "I^2");
  return {spin_from_casimir(s2, "S^2"), spin_from_casimir(i2, "I^2")};
}

std::pair<HalfInteger, HalfInteger> spin_isospin_eigen(const SpinIsospinRep& rep) {
  return spin_isospin_eigen(rep.M, rep.R);
}

double so4_bracket_residual(const Triple& M, const Triple& R) {
  return std::max({triple_bracket_residual(M, M, M, 1.0), triple_bracket_residual(M, R, R, 1.0),
                   triple_bracket_residual(R, R, M, 1.0)});
}

Triple spatial_rotations(const MatrixRealization& r) { return {r.M(2, 3), r.M(3, 1), r.M(1, 2)}; }

Triple mass_boosts(const MatrixRealization& r) { return {r.M(1, 4), r.M(2, 4), r.M(3, 4)}; }

Class1IdentityReport check_class1_casimir_identity(const MatrixRealization& r, double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
  FiveMomentum p = FiveMomentum::Zero();
  p[0] = kappa;
  const FrozenWTensor w = frozen_w(r, p);
  const Matrix v = casimir_V(r, w);
  const Matrix ww = casimir_W(w);
  const Matrix spin_lhs = ww / (kappa * kappa) + 2.0 * v / kappa;
  const Matrix iso_lhs = ww / (kappa * kappa) - 2.0 * v / kappa;

  const Triple m = spatial_rotations(r);
  const Triple rr = mass_boosts(r);
  const Matrix s2 = spin_casimir(m, rr);
  const Matrix i2 = isospin_casimir(m, rr);

  Class1IdentityReport report;
  report.kappa = kappa;
  for (std::size_t k = 0; k < Class1IdentityReport::kFactors.size(); ++k) {
    const double f = Class1IdentityReport::kFactors[k];
    report.spin_deviation[k] = max_abs(spin_lhs - f * s2);
    report.isospin_deviation[k] = max_abs(iso_lhs - f * i2);
    if (!report.factor && report.spin_deviation[k] < kScalarTol && report.isospin_deviation[k] < kScalarTol) {
      report.factor = Class1IdentityReport::kFactors[k];
    }
  }
  return report;
}

LittleGroupP3 class2_little_group(const MatrixRealization& r, double lambda) {
  LittleGroupP3 lg;
  lg.lambda = lambda;
  lg.rotations = spatial_rotations(r);
  for (int i = 0; i < 3; ++i) lg.translations[i] = r.M(0, i + 1) + lambda * r.M(i + 1, 4);

  const Complex factor = kI * (lambda * lambda - 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Matrix c = commutator(lg.translations[i], lg.translations[j]);
      lg.abelian_residual = std::max(lg.abelian_residual, max_abs(c));
      lg.closure_residual = std::max(lg.closure_residual, max_abs(c - factor * r.M(i + 1, j + 1)));
    }
  }
  lg.covariance_residual = triple_bracket_residual(lg.rotations, lg.translations, lg.translations, 1.0);
  return lg;
}

HalfInteger class2_spin_invariant(const Triple& M) {
  return spin_from_casimir(scalar_value(square_sum(M), "M^2"), "M^2");
}

LorentzBlock extract_lorentz_block(const MatrixRealization& r) {
  return {spatial_rotations(r), {r.M(0, 1), r.M(0, 2), r.M(0, 3)}};
}

double lorentz_bracket_residual(const LorentzBlock& b) {
  return std::max({triple_bracket_residual(b.M, b.M, b.M, 1.0), triple_bracket_residual(b.M, b.N, b.N, 1.0),
                   triple_bracket_residual(b.N, b.N, b.M, -1.0)});
}

Class3Invariants class3_invariants(const LorentzBlock& b, double eta, int sign) {
  if (sign != 1 && sign != -1) throw std::domain_error("sign must be +1 or -1");
  const Matrix mn = b.M[0] * b.N[0] + b.M[1] * b.N[1] + b.M[2] * b.N[2];
  return {Matrix((sign * eta) * mn), Matrix((eta * eta) * (square_sum(b.N) - square_sum(b.M)))};
}

Class3IdentityReport check_class3_identity(const MatrixRealization& r, double eta, int orientation) {
  if (orientation != 1 && orientation != -1) throw std::domain_error("orientation must be +1 or -1");
  FiveMomentum p = FiveMomentum::Zero();
  p[4] = orientation * eta;
  const FrozenWTensor w = frozen_w(r, p);
  const Matrix v = casimir_V(r, w);
  const Matrix ww = casimir_W(w);
  const LorentzBlock block = extract_lorentz_block(r);

  Class3IdentityReport report;
  report.eta = eta;
  report.orientation = orientation;
  int matches = 0;
  int last = 0;
  for (int k = 0; k < 2; ++k) {
    const int sign = k == 0 ? 1 : -1;
    const Class3Invariants inv = class3_invariants(block, eta, sign);
    report.v_deviation[k] = max_abs(v - inv.V);
    report.w_deviation[k] = max_abs(ww - inv.W);
    if (report.v_deviation[k] < kScalarTol && report.w_deviation[k] < kScalarTol) {
      ++matches;
      last = sign;
    }
  }
  if (matches == 1) report.matching_sign = last;
  return report;
}

LabelVerdict validate_class3_label(double eta, double l0, Complex l1) {
  if (!std::isfinite(eta) || eta == 0.0) return {false, "eta must be real and nonzero"};
  if (!std::isfinite(l1.real()) || !std::isfinite(l1.imag())) return {false, "l1 must be finite"};
  HalfInteger l0h;
  try {
    l0h = HalfInteger::from_double(l0);
  } catch (const std::domain_error&) {
    return {false, "l0 must be a non-negative half-integer"};
  }
  if (l0h.twice() == 0) {
    if (l1.imag() != 0.0) return {false, "l1 must be real for l0 = 0"};
    if (l1.real() < -1.0 || l1.real() > 1.0) return {false, "l1 must satisfy -1 <= l1 <= 1 for l0 = 0"};
    return {true, ""};
  }
  if (l1.real() != 0.0) return {false, "l1 must be imaginary for l0 >= 1/2"};
  return {true, ""};
}

}  // namespace p14
