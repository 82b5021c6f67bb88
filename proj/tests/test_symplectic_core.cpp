#include <gtest/gtest.h>

#include "ginfo/fisher_rao.hpp"
#include "ginfo/random_matrices.hpp"
#include "ginfo/symplectic_core.hpp"
#include "oracles.hpp"

using namespace ginfo;

namespace {

constexpr auto kInterleaved = PhaseSpaceOrdering::ModeInterleaved;

TEST(SymplecticForm, InterleavedTwoModeLayout) {
  const auto w = build_symplectic_form(2, kInterleaved);
  EXPECT_EQ(w.matrix, oracle::interleaved_form(2));
}

TEST(SymplecticForm, BlockLayoutIsZeroIdentityBlocks) {
  const auto w = build_symplectic_form(3, PhaseSpaceOrdering::BlockXP).matrix;
  Matrix expected = Matrix::Zero(6, 6);
  expected.block(0, 3, 3, 3) = Matrix::Identity(3, 3);
  expected.block(3, 0, 3, 3) = -Matrix::Identity(3, 3);
  EXPECT_EQ(w, expected);
}

TEST(SymplecticForm, PartyBlockLayoutRepeatsPerParty) {
  const auto w = build_symplectic_form(4, PhaseSpaceOrdering::PartyBlockXP).matrix;
  const auto party = build_symplectic_form(2, PhaseSpaceOrdering::BlockXP).matrix;
  EXPECT_EQ(Matrix(w.block(0, 0, 4, 4)), party);
  EXPECT_EQ(Matrix(w.block(4, 4, 4, 4)), party);
  EXPECT_EQ(w.block(0, 4, 4, 4).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SymplecticForm, RejectsNonAntisymmetricAndSingular) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(SymplecticForm::from_matrix(m, kInterleaved), Error);
  try {
    SymplecticForm::from_matrix(Matrix::Zero(2, 2), kInterleaved);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularForm);
  }
}

TEST(Ordering, ReorderRoundTripIsExact) {
  Rng rng(11);
  for (int modes : {1, 2, 4}) {
    const Matrix m = random_spd(2 * modes, rng);
    for (auto to : {PhaseSpaceOrdering::BlockXP, PhaseSpaceOrdering::PartyBlockXP}) {
      if (to == PhaseSpaceOrdering::PartyBlockXP && modes % 2) continue;
      EXPECT_EQ(reorder(reorder(m, kInterleaved, to), to, kInterleaved), m);
    }
  }
}

TEST(Ordering, CoordinateIndexMatchesPermutation) {
  const int modes = 4;
  for (auto o : {kInterleaved, PhaseSpaceOrdering::BlockXP, PhaseSpaceOrdering::PartyBlockXP}) {
    const Matrix p = ordering_permutation(o, modes);
    for (int k = 0; k < modes; ++k) {
      const auto idx = coordinate_index(o, modes, k);
      EXPECT_EQ(p(idx.x, 2 * k), 1.0);
      EXPECT_EQ(p(idx.p, 2 * k + 1), 1.0);
    }
  }
}

TEST(Ordering, ParseNamesRoundTrip) {
  for (auto o : {kInterleaved, PhaseSpaceOrdering::BlockXP, PhaseSpaceOrdering::PartyBlockXP})
    EXPECT_EQ(parse_ordering(to_string(o)), o);
  EXPECT_THROW(parse_ordering("nonsense"), Error);
}

TEST(Covariance, RejectsAsymmetricAndIndefinite) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_THROW(CovarianceMatrix::make(m, kInterleaved), Error);
  Matrix n = Matrix::Identity(2, 2);
  n(1, 1) = -1.0;
  EXPECT_THROW(CovarianceMatrix::make(n, kInterleaved), Error);
  EXPECT_THROW(CovarianceMatrix::make(Matrix::Identity(3, 3), kInterleaved), Error);
}

TEST(Spectrum, VacuumHasUnitInvariants) {
  for (int modes : {1, 2, 4}) {
    const auto s = symplectic_spectrum(CovarianceMatrix::make(0.5 * Matrix::Identity(2 * modes, 2 * modes), kInterleaved),
                                       build_symplectic_form(modes, kInterleaved));
    ASSERT_EQ(static_cast<int>(s.values.size()), modes);
    for (double v : s.values) EXPECT_NEAR(v, 1.0, 1e-14);
  }
}

TEST(Spectrum, ThermalStateScalesWithOccupation) {
  const auto s = symplectic_spectrum(CovarianceMatrix::make(1.5 * Matrix::Identity(2, 2), kInterleaved),
                                     build_symplectic_form(1, kInterleaved));
  EXPECT_NEAR(s.values[0], 3.0, 1e-13);
}

TEST(Spectrum, AgreesWithHermitianRoute) {
  Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const int modes = 1 + i % 4;
    const Matrix m = random_spd(2 * modes, rng);
    const auto lib = symplectic_spectrum(CovarianceMatrix::make(m, kInterleaved), build_symplectic_form(modes, kInterleaved));
    const auto ref = oracle::symplectic_invariants(m, oracle::interleaved_form(modes));
    for (int k = 0; k < modes; ++k) EXPECT_NEAR(lib.values[k], ref[k], 1e-10 * std::max(1.0, ref[k]));
  }
}

TEST(Spectrum, IndependentOfOrderingTag) {
  Rng rng(13);
  const auto sigma = random_physical_cvm(2, rng);
  const auto a = symplectic_spectrum(sigma, build_symplectic_form(2, kInterleaved));
  const auto b = symplectic_spectrum(sigma.reordered(PhaseSpaceOrdering::BlockXP),
                                     build_symplectic_form(2, PhaseSpaceOrdering::BlockXP));
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-12);
}

TEST(Spectrum, WilliamsonInvarianceUnderSymplecticCongruence) {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const int modes = i % 2 ? 4 : 2;
    const auto omega = build_symplectic_form(modes, kInterleaved);
    const auto sigma = CovarianceMatrix::make(random_spd(2 * modes, rng), kInterleaved);
    const Matrix s = random_symplectic(modes, rng);
    EXPECT_LT((s * omega.matrix * s.transpose() - omega.matrix).cwiseAbs().maxCoeff(), 1e-12);
    const auto a = symplectic_spectrum(sigma, omega).values;
    const auto b = symplectic_spectrum(congruence_apply(s, sigma), omega).values;
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-8);
  }
}

TEST(Rsup, PhysicalStatesPassSqueezedBelowVacuumFails) {
  Rng rng(15);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(rsup_check(random_physical_cvm(2, rng), build_symplectic_form(2, kInterleaved)).valid);
  Matrix m = 0.5 * Matrix::Identity(2, 2);
  m(0, 0) = 0.2;
  m(1, 1) = 0.5;
  const auto r = rsup_check(CovarianceMatrix::make(m, kInterleaved), build_symplectic_form(1, kInterleaved));
  EXPECT_FALSE(r.valid);
  EXPECT_NEAR(r.min_invariant, 2.0 * std::sqrt(0.1), 1e-13);
}

TEST(Rsup, SqueezedVacuumIsOnTheBoundary) {
  Matrix m(2, 2);
  m << 0.5 * std::exp(1.2), 0.0, 0.0, 0.5 * std::exp(-1.2);
  const auto r = rsup_check(CovarianceMatrix::make(m, kInterleaved), build_symplectic_form(1, kInterleaved));
  EXPECT_TRUE(r.valid);
  EXPECT_NEAR(r.min_invariant, 1.0, 1e-12);
}

TEST(Congruence, RejectsSingularTransform) {
  const auto sigma = CovarianceMatrix::make(Matrix::Identity(2, 2), kInterleaved);
  try {
    congruence_apply(Matrix::Zero(2, 2), sigma);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTransform);
  }
}

TEST(Congruence, FormTransformsAndKeepsHbar) {
  Rng rng(16);
  const auto omega = build_symplectic_form(2, kInterleaved);
  const Matrix s = random_invertible(4, rng);
  const auto w = congruence_form(s, omega, 1.25);
  EXPECT_LT((w.matrix - s * omega.matrix * s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(w.hbar_effective, 1.25);
  EXPECT_EQ(congruence_form(s, omega).hbar_effective, 1.0);
}

TEST(SquareRoot, AgreesWithDenmanBeavers) {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const Matrix m = random_spd(4 + 4 * (i % 2), rng);
    EXPECT_LT((matrix_sqrt_spd(m) - oracle::sqrt_denman_beavers(m)).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((matrix_inv_sqrt_spd(m) * matrix_sqrt_spd(m) - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(SquareRoot, RepeatedEigenvaluesAreFine) {
  const Matrix m = 4.0 * Matrix::Identity(4, 4);
  EXPECT_LT((matrix_sqrt_spd(m) - 2.0 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GeneralizedEigenvalues, AgreeWithCholeskyRoute) {
  Rng rng(18);
  for (int i = 0; i < 30; ++i) {
    const Index dim = i % 2 ? 8 : 4;
    const Matrix a = random_spd(dim, rng), b = random_spd(dim, rng);
    const auto lib = generalized_eigenvalues(a, b);
    const auto ref = oracle::generalized_eigenvalues(a, b);
    for (std::size_t k = 0; k < lib.size(); ++k) EXPECT_NEAR(lib[k], ref[k], 1e-10 * ref[k]);
  }
}

TEST(GeneralizedEigenvalues, ScaledPairGivesConstant) {
  Rng rng(19);
  const Matrix a = random_spd(4, rng);
  for (double l : generalized_eigenvalues(a, Matrix(2.0 * a))) EXPECT_NEAR(l, 2.0, 1e-12);
}

}  // namespace
