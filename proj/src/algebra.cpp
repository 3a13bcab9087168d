#include "p14/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

namespace p14 {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_index(int mu) {
  if (mu < 0 || mu >= kDim) {
    throw std::domain_error("index out of range 0..4: " + std::to_string(mu));
  }
}

constexpr int g(int mu) { return mu == 0 ? 1 : -1; }

constexpr std::array<std::array<int, kDim>, kDim> make_slots() {
  std::array<std::array<int, kDim>, kDim> slots{};
  int next = 0;
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = 0; nu < kDim; ++nu) slots[mu][nu] = -1;
  }
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = mu + 1; nu < kDim; ++nu) slots[mu][nu] = next++;
  }
  return slots;
}

constexpr auto kSlots = make_slots();

// Adds c * M_{a b} honoring antisymmetry.
void add_rotation(Combination& out, int a, int b, int c) {
  if (a == b || c == 0) return;
  if (a < b) {
    out.add(GeneratorId::rotation(a, b), c);
  } else {
    out.add(GeneratorId::rotation(b, a), -c);
  }
}

struct SignedPermutation {
  std::array<int, kDim> idx;
  int sign;
};

std::vector<SignedPermutation> permutations5() {
  std::vector<SignedPermutation> out;
  std::array<int, kDim> idx{0, 1, 2, 3, 4};
  do {
    out.push_back({idx, epsilon5(idx[0], idx[1], idx[2], idx[3], idx[4])});
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

}  // namespace

int metric(int mu, int nu) {
  check_index(mu);
  check_index(nu);
  return mu == nu ? g(mu) : 0;
}

int epsilon5(int mu, int nu, int alpha, int beta, int gamma) {
  const std::array<int, kDim> idx{mu, nu, alpha, beta, gamma};
  for (int v : idx) check_index(v);
  int sign = 1;
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

GeneratorId GeneratorId::translation(int mu) {
  check_index(mu);
  return GeneratorId(mu, -1);
}

GeneratorId GeneratorId::rotation(int mu, int nu) {
  check_index(mu);
  check_index(nu);
  if (mu >= nu) throw std::domain_error("rotation generator requires mu < nu");
  return GeneratorId(mu, nu);
}

GeneratorId GeneratorId::from_index(int index) {
  if (index < 0 || index >= kGeneratorCount) {
    throw std::domain_error("generator index out of range");
  }
  if (index < kDim) return translation(index);
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = mu + 1; nu < kDim; ++nu) {
      if (kSlots[mu][nu] == index - kDim) return rotation(mu, nu);
    }
  }
  throw std::logic_error("unreachable");
}

int GeneratorId::index() const { return is_translation() ? mu_ : kDim + kSlots[mu_][nu_]; }

std::string GeneratorId::name() const {
  if (is_translation()) return "P" + std::to_string(mu_);
  return "M" + std::to_string(mu_) + std::to_string(nu_);
}

const std::array<GeneratorId, kGeneratorCount>& all_generators() {
  static const auto gens = [] {
    std::vector<GeneratorId> v;
    for (int k = 0; k < kGeneratorCount; ++k) v.push_back(GeneratorId::from_index(k));
    std::array<GeneratorId, kGeneratorCount> out{
        v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13], v[14]};
    return out;
  }();
  return gens;
}

int rotation_slot(int mu, int nu) {
  check_index(mu);
  check_index(nu);
  if (mu >= nu) throw std::domain_error("rotation slot requires mu < nu");
  return kSlots[mu][nu];
}

bool Combination::is_zero() const {
  return std::all_of(coeff.begin(), coeff.end(), [](int c) { return c == 0; });
}

Combination& Combination::add(GeneratorId id, int c) {
  coeff[id.index()] += c;
  return *this;
}

Combination& Combination::operator+=(const Combination& o) {
  for (int k = 0; k < kGeneratorCount; ++k) coeff[k] += o.coeff[k];
  return *this;
}

Combination& Combination::operator-=(const Combination& o) {
  for (int k = 0; k < kGeneratorCount; ++k) coeff[k] -= o.coeff[k];
  return *this;
}

Combination Combination::operator-() const { return *this * -1; }

Combination Combination::operator*(int s) const {
  Combination out = *this;
  for (int& c : out.coeff) c *= s;
  return out;
}

std::string Combination::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < kGeneratorCount; ++k) {
    const int c = coeff[k];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    if (std::abs(c) != 1) os << std::abs(c) << "*";
    os << GeneratorId::from_index(k).name();
    first = false;
  }
  return first ? "0" : "i(" + os.str() + ")";
}

Combination bracket(GeneratorId a, GeneratorId b) {
  Combination out;
  if (a.is_translation() && b.is_translation()) return out;
  if (a.is_translation()) return -bracket(b, a);

  const int m = a.mu();
  const int n = a.nu();
  if (b.is_translation()) {
    const int r = b.mu();
    if (n == r) out.add(GeneratorId::translation(m), g(n));
    if (m == r) out.add(GeneratorId::translation(n), -g(m));
    return out;
  }
  const int r = b.mu();
  const int s = b.nu();
  if (n == r) add_rotation(out, m, s, g(n));
  if (m == r) add_rotation(out, n, s, -g(m));
  if (n == s) add_rotation(out, m, r, -g(n));
  if (m == s) add_rotation(out, n, r, g(m));
  return out;
}

const StructureTable& structure_constants() {
  static const StructureTable table = [] {
    StructureTable t;
    for (GeneratorId a : all_generators()) {
      for (GeneratorId b : all_generators()) t[a.index()][b.index()] = bracket(a, b);
    }
    return t;
  }();
  return table;
}

int symbolic_jacobi_failures() {
  const auto& table = structure_constants();
  // [A,[B,C]] = i * i * sum_k c_k(B,C) bracket(A, X_k); the common -1 drops out.
  auto nested = [&](int a, int b, int c) {
    Combination out;
    const Combination& inner = table[b][c];
    for (int k = 0; k < kGeneratorCount; ++k) {
      if (inner.coeff[k] != 0) out += table[a][k] * inner.coeff[k];
    }
    return out;
  };
  int failures = 0;
  for (int a = 0; a < kGeneratorCount; ++a) {
    for (int b = a + 1; b < kGeneratorCount; ++b) {
      for (int c = b + 1; c < kGeneratorCount; ++c) {
        Combination sum = nested(a, b, c);
        sum += nested(b, c, a);
        sum += nested(c, a, b);
        if (!sum.is_zero()) ++failures;
      }
    }
  }
  return failures;
}

MatrixRealization::MatrixRealization(Eigen::Index dim) : dim_(dim) {
  if (dim <= 0) throw std::domain_error("realization dimension must be positive");
  for (auto& m : entries_) m = Matrix::Zero(dim, dim);
}

void MatrixRealization::set(GeneratorId id, Matrix m) {
  if (m.rows() != dim_ || m.cols() != dim_) {
    throw std::domain_error("generator matrix size does not match realization dimension");
  }
  entries_[id.index()] = std::move(m);
}

Matrix MatrixRealization::M(int mu, int nu) const {
  check_index(mu);
  check_index(nu);
  if (mu == nu) return Matrix::Zero(dim_, dim_);
  if (mu < nu) return entries_[GeneratorId::rotation(mu, nu).index()];
  return -entries_[GeneratorId::rotation(nu, mu).index()];
}

Matrix MatrixRealization::evaluate(const Combination& c) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int k = 0; k < kGeneratorCount; ++k) {
    if (c.coeff[k] != 0) out += static_cast<double>(c.coeff[k]) * entries_[k];
  }
  return kI * out;
}

MatrixRealization build_affine_realization() {
  MatrixRealization r(6);
  for (int mu = 0; mu < kDim; ++mu) {
    Matrix p = Matrix::Zero(6, 6);
    p(mu, 5) = 1.0;
    r.set(GeneratorId::translation(mu), p);
  }
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = mu + 1; nu < kDim; ++nu) {
      Matrix m = Matrix::Zero(6, 6);
      m(mu, nu) += kI * static_cast<double>(g(nu));
      m(nu, mu) -= kI * static_cast<double>(g(mu));
      r.set(GeneratorId::rotation(mu, nu), m);
    }
  }
  return r;
}

MatrixRealization build_spinor_realization() {
  using M2 = Eigen::Matrix2cd;
  M2 id = M2::Identity();
  M2 zero = M2::Zero();
  M2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;

  auto block = [](const M2& a, const M2& b, const M2& c, const M2& d) {
    Eigen::Matrix4cd out;
    out << a, b, c, d;
    return out;
  };
  std::array<Eigen::Matrix4cd, kDim> gamma;
  gamma[0] = block(id, zero, zero, -id);
  gamma[1] = block(zero, sx, -sx, zero);
  gamma[2] = block(zero, sy, -sy, zero);
  gamma[3] = block(zero, sz, -sz, zero);
  const Eigen::Matrix4cd gamma5 = kI * gamma[0] * gamma[1] * gamma[2] * gamma[3];
  gamma[4] = kI * gamma5;  // squares to -1 as required by g_44

  MatrixRealization r(4);
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = mu + 1; nu < kDim; ++nu) {
      r.set(GeneratorId::rotation(mu, nu), Matrix(0.25 * kI * commutator(gamma[mu], gamma[nu])));
    }
  }
  return r;
}

MatrixRealization build_spinor_affine_realization() {
  const MatrixRealization affine = build_affine_realization();
  const MatrixRealization spinor = build_spinor_realization();
  const Matrix id_a = Matrix::Identity(affine.dim(), affine.dim());
  const Matrix id_s = Matrix::Identity(spinor.dim(), spinor.dim());
  MatrixRealization r(affine.dim() * spinor.dim());
  for (GeneratorId x : all_generators()) {
    Matrix m = Eigen::kroneckerProduct(affine[x], id_s);
    if (!x.is_translation()) m += Eigen::kroneckerProduct(id_a, spinor[x]);
    r.set(x, std::move(m));
  }
  return r;
}

RealizationReport verify_realization(const MatrixRealization& r) {
  const auto& table = structure_constants();
  RealizationReport report;
  report.pairs.reserve(kGeneratorCount * (kGeneratorCount - 1) / 2);
  for (int a = 0; a < kGeneratorCount; ++a) {
    for (int b = a + 1; b < kGeneratorCount; ++b) {
      const GeneratorId ga = GeneratorId::from_index(a);
      const GeneratorId gb = GeneratorId::from_index(b);
      const double dev = max_abs(commutator(r[ga], r[gb]) - r.evaluate(table[a][b]));
      report.pairs.push_back({ga, gb, dev});
      report.global_max = std::max(report.global_max, dev);
    }
  }
  return report;
}

double jacobi_residual(const MatrixRealization& r) {
  double worst = 0.0;
  std::array<Matrix, kGeneratorCount> x;
  for (int k = 0; k < kGeneratorCount; ++k) x[k] = r[GeneratorId::from_index(k)];
  for (int a = 0; a < kGeneratorCount; ++a) {
    for (int b = a + 1; b < kGeneratorCount; ++b) {
      for (int c = b + 1; c < kGeneratorCount; ++c) {
        const Matrix sum = commutator(x[a], commutator(x[b], x[c])) +
                           commutator(x[b], commutator(x[c], x[a])) +
                           commutator(x[c], commutator(x[a], x[b]));
        worst = std::max(worst, max_abs(sum));
      }
    }
  }
  return worst;
}

FrozenWTensor frozen_w(const MatrixRealization& r, const FiveMomentum& p) {
  static const std::vector<SignedPermutation> perms = permutations5();
  const Eigen::Index d = r.dim();

  std::array<std::array<Matrix, kDim>, kDim> rot;
  FrozenWTensor w;
  w.momentum = p;
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = 0; nu < kDim; ++nu) {
      rot[mu][nu] = r.M(mu, nu);
      w.upper[mu][nu] = Matrix::Zero(d, d);
    }
  }
  for (const auto& [idx, sign] : perms) {
    const double pc = p[idx[4]];
    if (pc == 0.0) continue;
    w.upper[idx[0]][idx[1]] += (-0.5 * sign * pc) * rot[idx[2]][idx[3]];
  }
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = 0; nu < kDim; ++nu) {
      w.lower[mu][nu] = static_cast<double>(g(mu) * g(nu)) * w.upper[mu][nu];
    }
  }
  return w;
}

double casimir_P2(const FiveMomentum& p) {
  double out = 0.0;
  for (int mu = 0; mu < kDim; ++mu) out += g(mu) * p[mu] * p[mu];
  return out;
}

Matrix casimir_V(const MatrixRealization& r, const FrozenWTensor& w) {
  Matrix v = Matrix::Zero(r.dim(), r.dim());
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = 0; nu < kDim; ++nu) {
      if (mu != nu) v += r.M(mu, nu) * w.upper[mu][nu];
    }
  }
  return -0.25 * v;
}

Matrix casimir_V(const MatrixRealization& r, const FiveMomentum& p) {
  return casimir_V(r, frozen_w(r, p));
}

Matrix casimir_W(const FrozenWTensor& w) {
  const Eigen::Index d = w.upper[0][0].rows();
  Matrix out = Matrix::Zero(d, d);
  for (int mu = 0; mu < kDim; ++mu) {
    for (int nu = 0; nu < kDim; ++nu) {
      if (mu != nu) out += w.lower[mu][nu] * w.upper[mu][nu];
    }
  }
  return 0.5 * out;
}

Matrix casimir_W(const MatrixRealization& r, const FiveMomentum& p) { return casimir_W(frozen_w(r, p)); }

Eigen::MatrixXd little_algebra(const FiveMomentum& p) {
  // Column slot(m,n) holds the momentum shift dp_rho = g_{n rho} p_m - g_{m rho} p_n.
  Eigen::MatrixXd action = Eigen::MatrixXd::Zero(kDim, kRotationCount);
  for (int m = 0; m < kDim; ++m) {
    for (int n = m + 1; n < kDim; ++n) {
      const int slot = kSlots[m][n];
      action(n, slot) += g(n) * p[m];
      action(m, slot) -= g(m) * p[n];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(action, Eigen::ComputeFullV);
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()[k] > tol) ++rank;
  }
  return svd.matrixV().rightCols(kRotationCount - rank);
}

Matrix rotation_combination(const MatrixRealization& r, const Eigen::VectorXd& coeff) {
  if (coeff.size() != kRotationCount) throw std::domain_error("expected ten rotation coefficients");
  Matrix out = Matrix::Zero(r.dim(), r.dim());
  for (int k = 0; k < kRotationCount; ++k) {
    if (coeff[k] != 0.0) out += coeff[k] * r[GeneratorId::from_index(kDim + k)];
  }
  return out;
}

CentralityReport casimir_centrality(const MatrixRealization& r, const FiveMomentum& p) {
  const FrozenWTensor w = frozen_w(r, p);
  const Matrix v = casimir_V(r, w);
  const Matrix ww = casimir_W(w);
  const Eigen::MatrixXd basis = little_algebra(p);
  CentralityReport report;
  report.little_algebra_dim = static_cast<int>(basis.cols());
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Matrix x = rotation_combination(r, basis.col(c));
    report.v_residual = std::max(report.v_residual, max_abs(commutator(v, x)));
    report.w_residual = std::max(report.w_residual, max_abs(commutator(ww, x)));
  }
  return report;
}

}  // namespace p14
