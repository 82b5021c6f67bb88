#include <gtest/gtest.h>

#include <cstdlib>

#include "ginfo/fisher_rao.hpp"
#include "ginfo/nc_toymodel.hpp"
#include "oracles.hpp"

using namespace ginfo;

namespace {

struct Case {
  double m, n;
};
constexpr Case kFigures[] = {{0.125, 0.125}, {0.25, 0.25}, {0.0625, 0.0625}};

TEST(ToyConfig, Validation) {
  EXPECT_THROW(ToyModelConfig::make(0.8, 0.8), Error);
  EXPECT_THROW(ToyModelConfig::make(0.1, 0.1, 2.0, 2.0), Error);
  EXPECT_THROW(ToyModelConfig::make(std::nan(""), 0.1), Error);
  EXPECT_NO_THROW(ToyModelConfig::make(0.1, 0.1, 0.5, 0.5));
}

TEST(ToyConfig, RadiusAndScale) {
  const auto c = ToyModelConfig::make(0.3, 0.4);
  EXPECT_DOUBLE_EQ(c.radius(), 0.5);
  EXPECT_DOUBLE_EQ(c.b(), 3.0);
}

TEST(ToyState, MatchesReferenceLayout) {
  for (auto [m, n] : kFigures) EXPECT_LT((toy_cvm(ToyModelConfig::make(m, n)).matrix() - oracle::toy_sigma(m, n)).cwiseAbs().maxCoeff(), 1e-15);
  const auto asym = toy_cvm(ToyModelConfig::make(0.3, -0.2)).matrix();
  EXPECT_LT((asym - oracle::toy_sigma(0.3, -0.2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ToyState, UndeformedInvariantsAreDegenerate) {
  for (auto [m, n] : kFigures) {
    const auto c = ToyModelConfig::make(m, n);
    const auto s = symplectic_spectrum(toy_cvm(c), toy_symplectic_form());
    const double expected = (1.0 + c.radius()) * std::sqrt(c.b());
    ASSERT_EQ(s.values.size(), 4u);
    for (double v : s.values) EXPECT_NEAR(v, expected, 1e-9);
    for (double v : oracle::symplectic_invariants(toy_cvm(c).matrix(), toy_symplectic_form().matrix)) EXPECT_NEAR(v, expected, 1e-9);
  }
}

TEST(ToyState, UndeformedTransposeSpectrum) {
  for (auto [m, n] : kFigures) {
    const auto c = ToyModelConfig::make(m, n);
    const auto s = deformed_pt_spectrum(c);
    const double r = c.radius(), b = c.b();
    EXPECT_NEAR(s.invariants[0], b * (1 - r), 1e-9);
    EXPECT_NEAR(s.invariants[1], b * (1 - r), 1e-9);
    EXPECT_NEAR(s.invariants[2], b * (1 + r), 1e-9);
    EXPECT_NEAR(s.invariants[3], b * (1 + r), 1e-9);
    EXPECT_NEAR(s.min_invariant, 1 + r, 1e-9);
    EXPECT_GT(s.min_invariant, 1.0);
  }
}

TEST(BoppShift, StructureAndDeformedForm) {
  for (double t : {0.0, 0.3, 0.9})
    for (double e : {0.0, 0.2, 0.7}) {
      const auto c = ToyModelConfig::make(0.1, 0.1, t, e);
      const auto shift = bopp_shift(c);
      EXPECT_LT((shift.s - oracle::toy_shift(t, e)).cwiseAbs().maxCoeff(), 1e-15);
      EXPECT_LT((shift.omega_tilde.matrix - oracle::toy_deformed_form(t, e)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_NEAR(party_shift(t, e).determinant(), c.shift_det_party(), 1e-14);
      EXPECT_DOUBLE_EQ(shift.omega_tilde.hbar_effective, c.hbar_e());
    }
}

TEST(BoppShift, IdentityWithoutDeformation) {
  EXPECT_EQ(bopp_shift(ToyModelConfig::make(0.1, 0.1)).s, Matrix::Identity(8, 8));
}

TEST(BoppShift, PreservesInformationDistance) {
  const auto a = ToyModelConfig::make(0.125, 0.125, 0.4, 0.3);
  const auto b = ToyModelConfig::make(0.2, -0.1, 0.4, 0.3);
  const Matrix s = bopp_shift(a).s;
  const Matrix sa = toy_cvm(a).matrix(), sb = toy_cvm(b).matrix();
  EXPECT_NEAR(fr_distance(Matrix(s * sa * s.transpose()), Matrix(s * sb * s.transpose())), fr_distance(sa, sb), 1e-10);
}

TEST(DeformedSpectrum, MatchesReferenceOnFigureGrids) {
  for (auto [m, n] : kFigures)
    for (double t : {0.05, 0.3, 0.6, 0.95})
      for (double e : {0.0, 0.4}) {
        const double lib = deformed_pt_spectrum(ToyModelConfig::make(m, n, t, e)).min_invariant;
        EXPECT_NEAR(lib, oracle::toy_min_pt_invariant(m, n, t, e), 1e-10);
      }
}

TEST(DeformedSpectrum, PartyChoiceDoesNotMatter) {
  const auto c = ToyModelConfig::make(0.125, 0.125, 0.6, 0.2);
  const auto shift = bopp_shift(c);
  const auto shifted = congruence_apply(shift.s, toy_cvm(c));
  const double a = symplectic_spectrum(partial_transpose(shifted, Party::A, kToySplit), shift.omega_tilde).min();
  EXPECT_NEAR(a, deformed_pt_spectrum(c).min_invariant, 1e-10);
}

TEST(DeformedSpectrum, ThetaEtaSymmetry) {
  for (auto [m, n] : kFigures)
    for (int k = 1; k <= 20; ++k) {
      const double t = k / 21.0;
      EXPECT_NEAR(separability_margin(ToyModelConfig::make(m, n, t, 0.0)), separability_margin(ToyModelConfig::make(m, n, 0.0, t)),
                  1e-9);
    }
}

TEST(DeformedSpectrum, ContinuousAlongTheta) {
  const auto grid = open_unit_grid(99);
  const auto r = theta_sweep(ToyModelConfig::make(0.125, 0.125), grid);
  for (std::size_t i = 2; i < r.rows.size(); ++i) {
    const double d1 = std::abs(r.rows[i].min_invariant - r.rows[i - 1].min_invariant);
    const double d0 = std::abs(r.rows[i - 1].min_invariant - r.rows[i - 2].min_invariant);
    EXPECT_LT(d1, 3.0 * d0 + 1e-3);
  }
}

TEST(Figures, FirstPresetHasOneCrossing) {
  const auto r = figure_sweep(1, 99);
  EXPECT_GE(r.rows.front().min_invariant, 1.0);
  EXPECT_LT(r.rows.back().min_invariant, 1.0);
  ASSERT_EQ(r.crossings.size(), 1u);
  EXPECT_NEAR(r.crossings[0], oracle::toy_crossing(0.125, 0.125, 0.01, 0.99), 1e-6);
}

TEST(Figures, ThirdPresetCrossesEarlier) {
  const auto r1 = figure_sweep(1, 99), r3 = figure_sweep(3, 99);
  ASSERT_EQ(r3.crossings.size(), 1u);
  ASSERT_EQ(r1.crossings.size(), 1u);
  EXPECT_LT(r3.crossings[0], r1.crossings[0]);
  EXPECT_NEAR(r3.crossings[0], oracle::toy_crossing(0.0625, 0.0625, 0.01, 0.99), 1e-6);
}

TEST(Figures, CrossingRowsPointPastTheRoot) {
  const auto r = figure_sweep(1, 99);
  ASSERT_EQ(r.crossing_rows.size(), 1u);
  const auto i = r.crossing_rows[0];
  EXPECT_LT(r.rows[i - 1].theta, r.crossings[0]);
  EXPECT_GE(r.rows[i].theta, r.crossings[0]);
}

TEST(Figures, PresetTable) {
  EXPECT_DOUBLE_EQ(figure_preset(2).m, 0.25);
  EXPECT_DOUBLE_EQ(figure_preset(3).n, 0.0625);
  EXPECT_THROW(figure_preset(4), Error);
}

TEST(Sweep, ThreadCountDoesNotChangeTheTable) {
  const auto base = ToyModelConfig::make(0.125, 0.125);
  const auto grid = open_unit_grid(40);
  setenv("GINFO_NUM_THREADS", "1", 1);
  const auto serial = theta_sweep(base, grid);
  setenv("GINFO_NUM_THREADS", "7", 1);
  const auto parallel = theta_sweep(base, grid);
  unsetenv("GINFO_NUM_THREADS");
  ASSERT_EQ(serial.rows.size(), parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) EXPECT_EQ(serial.rows[i].min_invariant, parallel.rows[i].min_invariant);
  EXPECT_EQ(serial.crossings, parallel.crossings);
}

TEST(Sweep, GridIsSortedAndValidated) {
  const auto r = theta_sweep(ToyModelConfig::make(0.1, 0.1), {0.7, 0.2, 0.5});
  EXPECT_EQ(r.rows[0].theta, 0.2);
  EXPECT_EQ(r.rows[2].theta, 0.7);
  EXPECT_THROW(theta_sweep(ToyModelConfig::make(0.1, 0.1), {0.0, 0.5}), Error);
  EXPECT_THROW(open_unit_grid(0), Error);
}

TEST(ClosedForm, ChiIsTheFourthRootAtZeroEta) {
  for (auto [m, n] : kFigures)
    for (double t : {0.1, 0.5, 0.9}) {
      const auto c = ToyModelConfig::make(m, n, t, 0.0);
      EXPECT_NEAR(lambda_s_closed_form(c).lambda_s[3], chi_function(t, c.radius()), 1e-12);
      const auto d = ToyModelConfig::make(m, n, 0.0, t);
      EXPECT_NEAR(lambda_s_closed_form(d).lambda_s[3], chi_function(t, d.radius()), 1e-12);
    }
}

TEST(ClosedForm, ExtremesAgreeWithoutDeformation) {
  const auto c = ToyModelConfig::make(0.125, 0.125);
  const auto d = closed_form_deviation(c);
  ASSERT_TRUE(d.closed_form.has_value());
  EXPECT_NEAR(d.closed_invariants.front(), d.oracle_invariants.front(), 1e-12);
  EXPECT_NEAR(d.closed_invariants.back(), d.oracle_invariants.back(), 1e-12);
}

TEST(ClosedForm, ReportCoversEveryGridPoint) {
  for (auto [m, n] : kFigures)
    for (double t : open_unit_grid(20)) {
      const auto d = closed_form_deviation(ToyModelConfig::make(m, n, t, 0.0));
      EXPECT_EQ(d.oracle_invariants.size(), 4u);
      if (d.closed_form) {
        EXPECT_EQ(d.closed_invariants.size(), 4u);
        EXPECT_TRUE(std::isfinite(d.max_relative_deviation));
      } else {
        EXPECT_FALSE(d.failure.empty());
      }
    }
}

}  // namespace
