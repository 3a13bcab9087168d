#include "p14/algebra.hpp"
#include "p14/irreps.hpp"

#include <doctest.h>

#include <numbers>
#include <random>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

using namespace p14;

namespace {

const Complex kI{0.0, 1.0};

// Sign of a permutation from the determinant of its permutation matrix.
int epsilon_oracle(const std::array<int, 5>& idx) {
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  for (int r = 0; r < 5; ++r) m(r, idx[r]) = 1.0;
  return static_cast<int>(std::lround(m.determinant()));
}

// Plain triple-loop product, independent of Eigen's kernels.
Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

// w_{mn} by brute force over all 5^5 index tuples.
Matrix w_oracle(const MatrixRealization& r, const FiveMomentum& p, int m, int n) {
  const double gm = m == 0 ? 1.0 : -1.0;
  const double gn = n == 0 ? 1.0 : -1.0;
  Matrix upper = Matrix::Zero(r.dim(), r.dim());
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        const std::array<int, 5> idx{m, n, a, b, c};
        if (std::set<int>(idx.begin(), idx.end()).size() < 5) continue;
        upper += (-0.5 * epsilon_oracle(idx) * p[c]) * r.M(a, b);
      }
  return gm * gn * upper;
}

FiveMomentum random_momentum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  FiveMomentum p;
  for (int k = 0; k < 5; ++k) p[k] = u(rng);
  return p;
}

}  // namespace

TEST_CASE("metric signature") {
  CHECK(metric(0, 0) == 1);
  CHECK(metric(3, 3) == -1);
  CHECK(metric(4, 4) == -1);
  CHECK(metric(0, 1) == 0);
  CHECK_THROWS_AS(metric(5, 0), std::domain_error);
  CHECK_THROWS_AS(metric(0, -1), std::domain_error);

  Eigen::Matrix<double, 5, 5> g;
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) g(m, n) = metric(m, n);
  CHECK((g * g).isIdentity());
}

TEST_CASE("epsilon5 matches permutation-matrix determinant on every tuple") {
  CHECK(epsilon5(0, 1, 2, 3, 4) == 1);
  CHECK(epsilon5(1, 0, 2, 3, 4) == -1);
  CHECK(epsilon5(0, 0, 2, 3, 4) == 0);
  CHECK_THROWS_AS(epsilon5(0, 1, 2, 3, 5), std::domain_error);

  int total = 0;
  int mismatches = 0;
  std::array<int, 5> idx{};
  for (int t = 0; t < 3125; ++t) {
    int rest = t;
    for (int k = 4; k >= 0; --k) {
      idx[k] = rest % 5;
      rest /= 5;
    }
    const int e = epsilon5(idx[0], idx[1], idx[2], idx[3], idx[4]);
    total += std::abs(e);
    const bool repeated = std::set<int>(idx.begin(), idx.end()).size() < 5;
    const int expected = repeated ? 0 : epsilon_oracle(idx);
    if (e != expected) ++mismatches;
  }
  CHECK(total == 120);
  CHECK(mismatches == 0);
}

TEST_CASE("generator ids") {
  std::set<int> seen;
  std::set<std::string> names;
  for (GeneratorId id : all_generators()) {
    seen.insert(id.index());
    names.insert(id.name());
    CHECK(GeneratorId::from_index(id.index()) == id);
  }
  CHECK(seen.size() == 15);
  CHECK(names.size() == 15);
  CHECK(GeneratorId::rotation(1, 2).name() == "M12");
  CHECK(GeneratorId::translation(4).name() == "P4");
  CHECK_THROWS_AS(GeneratorId::rotation(2, 1), std::domain_error);
  CHECK_THROWS_AS(GeneratorId::rotation(3, 3), std::domain_error);
  CHECK_THROWS_AS(GeneratorId::translation(5), std::domain_error);
}

TEST_CASE("affine realization layout") {
  const MatrixRealization r = build_affine_realization();
  CHECK(r.dim() == 6);
  const Matrix& p0 = r.P(0);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      if (i == 0 && j == 5) CHECK(p0(i, j) != Complex(0.0));
      else CHECK(p0(i, j) == Complex(0.0));
    }
  for (GeneratorId id : all_generators()) CHECK(r[id].row(5).isZero());
  CHECK((r.M(2, 1) + r.M(1, 2)).isZero());
  CHECK(r.M(3, 3).isZero());
}

TEST_CASE("exp(theta i M12) rotates e1 into the (1,2) plane") {
  const MatrixRealization r = build_affine_realization();
  const Eigen::MatrixXd gen = (kI * r.M(1, 2)).real();
  CHECK((kI * r.M(1, 2)).imag().isZero());

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(6);
  e1[1] = 1.0;
  const Eigen::VectorXd quarter = (0.5 * std::numbers::pi * gen).exp() * e1;
  CHECK(std::abs(std::abs(quarter[2]) - 1.0) < 1e-12);
  CHECK(std::abs(quarter[1]) < 1e-12);

  for (double theta : {0.1, 0.7, 2.3, 4.0}) {
    const Eigen::VectorXd v = (theta * gen).exp() * e1;
    CHECK(std::abs(v[1] * v[1] + v[2] * v[2] - 1.0) < 1e-12);
    CHECK(std::abs(v[0]) + std::abs(v[3]) + std::abs(v[4]) + std::abs(v[5]) < 1e-14);
  }
}

TEST_CASE("commutator") {
  const MatrixRealization r = build_affine_realization();
  const Matrix id = Matrix::Identity(6, 6);
  CHECK(max_abs(commutator(id, r.M(0, 3))) == 0.0);
  CHECK(max_abs(commutator(r.P(1), r.P(2))) == 0.0);
  CHECK_THROWS_AS(commutator(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), std::domain_error);

  const Matrix explicit_c = naive_product(r.M(1, 2), r.P(1)) - naive_product(r.P(1), r.M(1, 2));
  CHECK(max_abs(explicit_c - kI * r.P(2)) < 1e-15);
  CHECK(max_abs(commutator(r.M(1, 2), r.P(1)) - explicit_c) < 1e-15);
}

TEST_CASE("structure constants") {
  const auto P = [](int m) { return GeneratorId::translation(m); };
  const auto M = [](int m, int n) { return GeneratorId::rotation(m, n); };

  CHECK(bracket(P(0), P(4)).is_zero());

  const Combination m01_p0 = bracket(M(0, 1), P(0));
  Combination expected;
  expected.add(P(1), -1);
  CHECK(m01_p0 == expected);

  const Combination m14_m24 = bracket(M(1, 4), M(2, 4));
  Combination expected2;
  expected2.add(M(1, 2), 1);
  CHECK(m14_m24 == expected2);
  CHECK(m14_m24.to_string() == "i(M12)");

  // Both against the affine commutator oracle.
  const MatrixRealization r = build_affine_realization();
  CHECK(max_abs(naive_product(r.M(0, 1), r.P(0)) - naive_product(r.P(0), r.M(0, 1)) + kI * r.P(1)) < 1e-15);
  CHECK(max_abs(naive_product(r.M(1, 4), r.M(2, 4)) - naive_product(r.M(2, 4), r.M(1, 4)) - kI * r.M(1, 2)) <
        1e-15);

  const auto& table = structure_constants();
  for (int a = 0; a < kGeneratorCount; ++a) {
    CHECK(table[a][a].is_zero());
    for (int b = 0; b < kGeneratorCount; ++b) CHECK(table[a][b] == -table[b][a]);
  }
}

TEST_CASE("Jacobi identity") {
  CHECK(symbolic_jacobi_failures() == 0);
  CHECK(jacobi_residual(build_affine_realization()) < 1e-10);
  CHECK(jacobi_residual(build_spinor_affine_realization()) < 1e-10);
}

TEST_CASE("verify_realization") {
  const RealizationReport rep = verify_realization(build_affine_realization());
  CHECK(rep.pairs.size() == 105);
  CHECK(rep.global_max < 1e-12);
  for (std::size_t k = 1; k < rep.pairs.size(); ++k) {
    const auto& a = rep.pairs[k - 1];
    const auto& b = rep.pairs[k];
    CHECK(std::pair(a.a.index(), a.b.index()) < std::pair(b.a.index(), b.b.index()));
  }

  CHECK(verify_realization(build_spinor_realization()).global_max < 1e-12);
  CHECK(verify_realization(build_spinor_affine_realization()).global_max < 1e-12);

  SUBCASE("corrupted M12 is reported on ([M12,P1])") {
    MatrixRealization r = build_affine_realization();
    r.set(GeneratorId::rotation(1, 2), Matrix::Zero(6, 6));
    const RealizationReport bad = verify_realization(r);
    CHECK(bad.global_max > 0.5);
    bool found = false;
    for (const auto& d : bad.pairs) {
      if (d.a == GeneratorId::translation(1) && d.b == GeneratorId::rotation(1, 2)) {
        found = true;
        CHECK(d.deviation > 0.5);
      }
    }
    CHECK(found);
  }

  SUBCASE("spin-isospin so(4) subset closes") {
    for (int ts = 0; ts <= 2; ++ts)
      for (int ti = 0; ti <= 2; ++ti) {
        const SpinIsospinRep rep = build_class1_rep(HalfInteger::from_twice(ts), HalfInteger::from_twice(ti));
        MatrixRealization r(rep.dim);
        r.set(GeneratorId::rotation(2, 3), rep.M[0]);
        r.set(GeneratorId::rotation(1, 3), -rep.M[1]);
        r.set(GeneratorId::rotation(1, 2), rep.M[2]);
        for (int i = 0; i < 3; ++i) r.set(GeneratorId::rotation(i + 1, 4), rep.R[i]);
        const std::set<std::string> subset{"M12", "M13", "M23", "M14", "M24", "M34"};
        double worst = 0.0;
        for (const auto& d : verify_realization(r).pairs) {
          if (subset.count(d.a.name()) && subset.count(d.b.name())) worst = std::max(worst, d.deviation);
        }
        CHECK(worst < 1e-12);
      }
  }
}

TEST_CASE("frozen w tensor") {
  const MatrixRealization r = build_affine_realization();

  const FrozenWTensor zero = frozen_w(r, FiveMomentum::Zero());
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) CHECK(zero(m, n).isZero());

  const double kappa = 2.0;
  const FrozenWTensor w = frozen_w(r, (FiveMomentum() << kappa, 0, 0, 0, 0).finished());
  for (int n = 0; n < 5; ++n) {
    CHECK(w(0, n).isZero());
    CHECK(w(n, 0).isZero());
  }
  CHECK(max_abs(w(1, 2) - w_oracle(r, w.momentum, 1, 2)) < 1e-14);
  // Frozen from the brute-force oracle: w_12 = -kappa M_34.
  CHECK(max_abs(w(1, 2) + kappa * r.M(3, 4)) < 1e-14);

  std::mt19937_64 rng(7);
  const MatrixRealization rs = build_spinor_affine_realization();
  for (int trial = 0; trial < 3; ++trial) {
    const FiveMomentum p = random_momentum(rng);
    const FrozenWTensor wr = frozen_w(rs, p);
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n) {
        CHECK(max_abs(wr(m, n) - w_oracle(rs, p, m, n)) < 1e-13);
        CHECK(max_abs(wr(m, n) + wr(n, m)) == 0.0);
      }
  }
}

TEST_CASE("casimir P2") {
  CHECK(casimir_P2((FiveMomentum() << 2, 0, 0, 0, 0).finished()) == 4.0);
  CHECK(casimir_P2((FiveMomentum() << 0, 0, 0, 0, 3).finished()) == -9.0);
  CHECK(casimir_P2((FiveMomentum() << 1.5, 0, 0, 1.5, 0).finished()) == 0.0);
}

TEST_CASE("V and W") {
  const MatrixRealization r = build_spinor_affine_realization();
  CHECK(casimir_V(r, FiveMomentum::Zero()).isZero(0.0));
  CHECK(casimir_W(r, FiveMomentum::Zero()).isZero(0.0));

  const MatrixRealization affine = build_affine_realization();
  const FiveMomentum rest = (FiveMomentum() << 1, 0, 0, 0, 0).finished();
  const Matrix v = casimir_V(affine, rest);
  const Matrix w = casimir_W(affine, rest);
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      CHECK(max_abs(commutator(v, affine.M(i, j))) < 1e-10);
      CHECK(max_abs(commutator(w, affine.M(i, j))) < 1e-10);
    }
}

TEST_CASE("little algebra and centrality") {
  const std::array<FiveMomentum, 3> frames{(FiveMomentum() << 1, 0, 0, 0, 0).finished(),
                                           (FiveMomentum() << 1, 0, 0, 0, 1).finished(),
                                           (FiveMomentum() << 0, 0, 0, 0, 1).finished()};
  const MatrixRealization r = build_spinor_affine_realization();
  for (const FiveMomentum& p : frames) {
    const Eigen::MatrixXd basis = little_algebra(p);
    CHECK(basis.cols() == 6);
    const CentralityReport c = casimir_centrality(r, p);
    CHECK(c.v_residual < 1e-10);
    CHECK(c.w_residual < 1e-10);
  }

  // The rest frame stabilizer is spanned by M_ij with i, j in 1..4.
  const Eigen::MatrixXd rest = little_algebra(frames[0]);
  for (int m = 0; m < 5; ++m)
    for (int n = m + 1; n < 5; ++n) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(10);
      e[rotation_slot(m, n)] = 1.0;
      const double residue = (e - rest * (rest.transpose() * e)).norm();
      if (m == 0) CHECK(residue > 0.5);
      else CHECK(residue < 1e-12);
    }

  SUBCASE("random momenta") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
      const FiveMomentum p = random_momentum(rng);
      const CentralityReport c = casimir_centrality(r, p);
      CHECK(c.little_algebra_dim == 6);
      CHECK(c.v_residual < 1e-10);
      CHECK(c.w_residual < 1e-10);
    }
  }

  // A non-stabilizing generator generally fails to commute with W.
  const Matrix w = casimir_W(r, frames[0]);
  CHECK(max_abs(commutator(w, r.M(0, 1))) > 1e-3);
}
