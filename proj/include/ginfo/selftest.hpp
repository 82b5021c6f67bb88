#pragma once

// Seeded property batteries over every module, plus the closed-form
// deviation report for the toy model.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ginfo/fisher_rao.hpp"
#include "ginfo/gaussian_state.hpp"
#include "ginfo/nc_oscillator.hpp"
#include "ginfo/nc_toymodel.hpp"
#include "ginfo/random_matrices.hpp"
#include "ginfo/symplectic_core.hpp"

namespace ginfo {

struct PropertyResult {
  std::string module;
  std::string name;
  int cases = 0;
  int failures = 0;
  int skipped = 0;
  double worst = 0.0;  // largest observed error measure
  double tolerance = 0.0;
  std::string first_error;
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  std::vector<ClosedFormDeviation> lambda_s_report;

  bool ok() const {
    for (const auto& p : properties)
      if (p.failures) return false;
    return true;
  }
};

/// Outcome of one case: an error measure, or nothing to skip the case.
using CaseFn = std::function<std::optional<double>(Rng&, int)>;

inline PropertyResult run_property(std::string module, std::string name, int cases, double tol, std::uint64_t seed,
                                   const CaseFn& fn) {
  PropertyResult r{std::move(module), std::move(name), 0, 0, 0, 0.0, tol, {}};
  Rng rng(seed);
  for (int i = 0; i < cases; ++i) {
    try {
      const auto err = fn(rng, i);
      if (!err) {
        ++r.skipped;
        continue;
      }
      ++r.cases;
      r.worst = std::max(r.worst, *err);
      if (!(*err <= tol)) ++r.failures;
    } catch (const std::exception& e) {
      ++r.cases;
      ++r.failures;
      if (r.first_error.empty()) r.first_error = e.what();
    }
  }
  return r;
}

namespace detail {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double bool_error(bool ok) { return ok ? 0.0 : 1.0; }

}  // namespace detail

inline std::vector<PropertyResult> symplectic_core_properties(std::uint64_t seed, int n) {
  std::vector<PropertyResult> out;
  const auto io = PhaseSpaceOrdering::ModeInterleaved;
  out.push_back(run_property("symplectic_core", "williamson-invariance", n, 1e-8, seed + 1, [&](Rng& rng, int i) {
    const int modes = i % 2 ? 4 : 2;
    const auto sigma = CovarianceMatrix::make(random_spd(2 * modes, rng), io);
    const auto omega = build_symplectic_form(modes, io);
    const auto before = symplectic_spectrum(sigma, omega).values;
    const auto after = symplectic_spectrum(congruence_apply(random_symplectic(modes, rng), sigma), omega).values;
    return std::optional(detail::max_abs_diff(before, after) / std::max(1.0, before.back()));
  }));
  out.push_back(run_property("symplectic_core", "fr-congruence-isometry", n, 1e-10, seed + 2, [&](Rng& rng, int i) {
    const Index dim = i % 2 ? 8 : 4;
    const Matrix s1 = random_spd(dim, rng), s2 = random_spd(dim, rng), t = random_invertible(dim, rng);
    return std::optional(std::abs(fr_distance(t * s1 * t.transpose(), t * s2 * t.transpose()) - fr_distance(s1, s2)));
  }));
  out.push_back(run_property("symplectic_core", "ordering-round-trip", n, 1e-15, seed + 3, [&](Rng& rng, int i) {
    const int modes = 2 * (1 + i % 2);
    const Matrix m = random_spd(2 * modes, rng);
    const Matrix back = reorder(reorder(m, io, PhaseSpaceOrdering::BlockXP), PhaseSpaceOrdering::BlockXP,
                                PhaseSpaceOrdering::PartyBlockXP);
    return std::optional((reorder(back, PhaseSpaceOrdering::PartyBlockXP, io) - m).cwiseAbs().maxCoeff());
  }));
  out.push_back(run_property("symplectic_core", "physical-states-satisfy-rsup", n, 0.0, seed + 4, [&](Rng& rng, int i) {
    const int modes = 1 + i % 4;
    const auto sigma = random_physical_cvm(modes, rng);
    return std::optional(detail::bool_error(rsup_check(sigma, build_symplectic_form(modes, io)).valid));
  }));
  return out;
}

inline std::vector<PropertyResult> gaussian_state_properties(std::uint64_t seed, int n) {
  std::vector<PropertyResult> out;
  const auto io = PhaseSpaceOrdering::ModeInterleaved;
  const auto omega2 = build_symplectic_form(2, io);
  out.push_back(run_property("gaussian_state", "partial-transpose-involution", n, 0.0, seed + 11, [&](Rng& rng, int) {
    const auto s = random_physical_cvm(2, rng);
    const auto twice = partial_transpose(partial_transpose(s, Party::B, {1, 1}), Party::B, {1, 1});
    return std::optional((twice.matrix() - s.matrix()).cwiseAbs().maxCoeff());
  }));
  out.push_back(run_property("gaussian_state", "mirror-reflection-invariants", n, 1e-10, seed + 12, [&](Rng& rng, int) {
    const auto s = CovarianceMatrix::make(random_spd(4, rng), io);
    const auto a = simon_criterion(s);
    const auto b = simon_criterion(partial_transpose(s, Party::B, {1, 1}));
    return std::optional(std::max({std::abs(a.delta1 - b.delta1), std::abs(a.delta2 - b.delta2),
                                   std::abs(a.tau_v - b.tau_v), std::abs(a.delta12 + b.delta12)}));
  }));
  out.push_back(run_property("gaussian_state", "local-invariants-agree-with-ppt", n, 0.0, seed + 13, [&](Rng& rng, int) {
    const auto s = random_physical_cvm(2, rng);
    const auto ppt = ppt_separable(s, omega2, Party::B, {1, 1});
    if (std::abs(ppt.margin) < 1e-6) return std::optional<double>{};
    return std::optional(detail::bool_error(simon_criterion(s).separable() == ppt.separable));
  }));
  out.push_back(run_property("gaussian_state", "explicit-region-agrees-with-rsup", n, 0.0, seed + 14, [&](Rng& rng, int) {
    const auto p = random_canonical_params(rng);
    const auto r = rsup_check(canonical_two_mode_cvm(p), omega2);
    if (std::abs(r.min_invariant - 1.0) < 1e-6) return std::optional<double>{};
    try {
      return std::optional(detail::bool_error(theta_quantum_contains(p) == r.valid));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoundaryIndeterminate) return std::optional<double>{};
      throw;
    }
  }));
  return out;
}

inline std::vector<PropertyResult> fisher_rao_properties(std::uint64_t seed, int n) {
  std::vector<PropertyResult> out;
  out.push_back(run_property("fisher_rao", "closed-form-metric-vs-trace-formula", n, 1e-6, seed + 21, [&](Rng& rng, int) {
    const auto p = random_canonical_params(rng, 0.6, 2.0, 0.8);
    const std::array<double, 4> t{p.a, p.b, p.c, p.d};
    const auto num = fisher_metric_numeric(canonical_two_mode_family(), t);
    const auto cf = fisher_metric_two_mode(p);
    return std::optional((num.matrix - cf.matrix).cwiseAbs().maxCoeff() / std::max(1.0, cf.matrix.cwiseAbs().maxCoeff()));
  }));
  out.push_back(run_property("fisher_rao", "metric-determinant-identity", n, 1e-9, seed + 22, [&](Rng& rng, int) {
    const auto p = random_canonical_params(rng, 0.6, 2.0, 0.8);
    const double num = fisher_metric_two_mode(p).matrix.determinant();
    return std::optional(std::abs(num - fisher_det_two_mode(p)) / std::max(1.0, std::abs(num)));
  }));
  out.push_back(run_property("fisher_rao", "two-parameter-metric-spectrum", n, 1e-12, seed + 23, [&](Rng& rng, int) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const NcTwoParamPoint pt{u(rng), u(rng)};
    const auto g = nc_two_param_metric(pt);
    const Matrix d = g.q.transpose() * g.g * g.q;
    const double scale = std::max(1.0, std::abs(g.lambda_plus));
    return std::optional(std::max({std::abs(d(0, 1)), std::abs(d(1, 0)), std::abs(d(0, 0) - g.lambda_plus),
                                   std::abs(d(1, 1) - g.lambda_minus)}) / scale);
  }));
  out.push_back(run_property("fisher_rao", "square-root-routes", n, 1e-9, seed + 24, [&](Rng& rng, int) {
    const auto p = random_canonical_params(rng);
    Matrix s;
    try {
      s = canonical_sqrt_closed_form(p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateSpectrum) return std::optional<double>{};
      throw;
    }
    const Matrix m = canonical_two_mode_matrix(p);
    return std::optional(std::max((s - matrix_sqrt_spd(m)).cwiseAbs().maxCoeff(), (s * s - m).cwiseAbs().maxCoeff()));
  }));
  out.push_back(run_property("fisher_rao", "explicit-distance-vs-generalized-eigenvalues", n, 1e-9, seed + 25,
                             [&](Rng& rng, int) {
                               const auto p = random_canonical_params(rng);
                               const auto p0 = random_canonical_params(rng);
                               ExplicitDistance e;
                               try {
                                 e = fr_distance_explicit(p, p0);
                               } catch (const Error& err) {
                                 if (err.kind() == ErrorKind::DegenerateSpectrum) return std::optional<double>{};
                                 throw;
                               }
                               const double ref = fr_distance(canonical_two_mode_matrix(p), canonical_two_mode_matrix(p0));
                               return std::optional(std::abs(e.distance_half - ref));
                             }));
  return out;
}

inline OscillatorParams random_oscillator(Rng& rng) {
  std::uniform_real_distribution<double> mass(0.5, 2.0), freq(0.5, 2.5), nc(0.0, 0.8);
  return {mass(rng), mass(rng), freq(rng), freq(rng), nc(rng), nc(rng), 1.0};
}

inline std::vector<PropertyResult> nc_oscillator_properties(std::uint64_t seed, int n) {
  std::vector<PropertyResult> out;
  out.push_back(run_property("nc_oscillator", "mode-frequencies-vs-eigenvalues", n, 1e-8, seed + 31, [&](Rng& rng, int) {
    const auto e = equivalent_hamiltonian(random_oscillator(rng));
    return std::optional(mode_spectrum(e.params).numeric_deviation);
  }));
  out.push_back(run_property("nc_oscillator", "left-eigenvector-residual", n, 1e-8, seed + 32, [&](Rng& rng, int) {
    const auto p = random_oscillator(rng);
    if (p.theta == 0.0 && p.eta == 0.0) return std::optional<double>{};
    const auto e = equivalent_hamiltonian(p);
    const auto ks = kappa_set(e.params, mode_spectrum(e.params));
    return std::optional(std::max(ks.residual[0], ks.residual[1]));
  }));
  out.push_back(run_property("nc_oscillator", "half-inverse-wigner-form-is-covariance", n, 1e-10, seed + 33,
                             [&](Rng& rng, int) {
                               const auto p = random_oscillator(rng);
                               const auto sol = solve_ground_state(p);
                               const Matrix g = wigner_quadratic_form(sol.lambda, p.hbar);
                               const Matrix v = reorder(Matrix(0.5 * g.inverse()), PhaseSpaceOrdering::BlockXP,
                                                        PhaseSpaceOrdering::ModeInterleaved);
                               return std::optional((v - ground_state_cvm(sol.lambda, p.hbar).matrix()).cwiseAbs().maxCoeff());
                             }));
  out.push_back(run_property("nc_oscillator", "separability-triangle", n, 0.0, seed + 34, [&](Rng& rng, int i) {
    auto p = random_oscillator(rng);
    if (i % 3 == 0) {
      p.m2 = p.m1;
      p.w2 = p.w1;
    }
    const auto sol = solve_ground_state(p);
    const auto v = separability_condition(p);
    const auto cvm = ground_state_cvm(sol.lambda, p.hbar);
    const auto ppt = ppt_separable(CovarianceMatrix::make(cvm.matrix() / p.hbar, cvm.ordering()),
                                   build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved), Party::B, {1, 1});
    if (!v.separable && std::abs(v.lambda12c) < 1e-6) return std::optional<double>{};
    return std::optional(detail::bool_error(v.separable == v.frequency_condition && v.separable == ppt.separable));
  }));
  out.push_back(run_property("nc_oscillator", "commutative-limit-continuity", n, 1e-6, seed + 35, [&](Rng& rng, int) {
    auto p = random_oscillator(rng);
    const double scale = 1e-8;
    p.theta *= scale;
    p.eta *= scale;
    return std::optional(std::abs(solve_ground_state(p).lambda.L12c));
  }));
  return out;
}

inline std::vector<PropertyResult> nc_toymodel_properties(std::uint64_t seed, int n) {
  std::vector<PropertyResult> out;
  auto random_cfg = [](Rng& rng) {
    std::uniform_real_distribution<double> mn(0.0, 0.45), nc(0.0, 1.0);
    return ToyModelConfig::make(mn(rng), mn(rng), nc(rng), nc(rng));
  };
  out.push_back(run_property("nc_toymodel", "bopp-shift-preserves-spectrum", n, 1e-9, seed + 41, [&](Rng& rng, int) {
    const auto c = random_cfg(rng);
    const auto sh = bopp_shift(c);
    const auto before = symplectic_spectrum(toy_cvm(c), toy_symplectic_form()).values;
    const auto after = symplectic_spectrum(congruence_apply(sh.s, toy_cvm(c)), sh.omega_tilde).values;
    return std::optional(detail::max_abs_diff(before, after));
  }));
  out.push_back(run_property("nc_toymodel", "theta-eta-margin-symmetry", n, 1e-9, seed + 42, [&](Rng& rng, int) {
    const auto c = random_cfg(rng);
    return std::optional(std::abs(separability_margin(c.with_deformation(c.theta, 0.0)) -
                                  separability_margin(c.with_deformation(0.0, c.theta))));
  }));
  out.push_back(run_property("nc_toymodel", "bopp-shift-fr-isometry", n, 1e-10, seed + 43, [&](Rng& rng, int) {
    const auto c1 = random_cfg(rng);
    const auto c2 = ToyModelConfig::make(c1.n, c1.m * 0.5, c1.theta, c1.eta);
    const Matrix s = bopp_shift(c1).s;
    const Matrix a = toy_cvm(c1).matrix(), b = toy_cvm(c2).matrix();
    return std::optional(std::abs(fr_distance(s * a * s.transpose(), s * b * s.transpose()) - fr_distance(a, b)));
  }));
  out.push_back(run_property("nc_toymodel", "party-swap-symmetry", n, 1e-9, seed + 44, [&](Rng& rng, int) {
    const auto c = random_cfg(rng);
    Matrix swap = Matrix::Zero(8, 8);
    swap.block(0, 4, 4, 4) = Matrix::Identity(4, 4);
    swap.block(4, 0, 4, 4) = Matrix::Identity(4, 4);
    const auto sigma = toy_cvm(c);
    const auto swapped = CovarianceMatrix::make(swap * sigma.matrix() * swap.transpose(), kToyOrdering);
    const auto omega = toy_symplectic_form();
    return std::optional(detail::max_abs_diff(symplectic_spectrum(sigma, omega).values,
                                              symplectic_spectrum(swapped, omega).values));
  }));
  out.push_back(run_property("nc_toymodel", "margin-continuity-in-theta", 3, 0.0, seed + 45, [&](Rng&, int k) {
    const auto f = figure_preset(k + 1);
    const auto sweep = theta_sweep(ToyModelConfig::make(f.m, f.n), open_unit_grid(99));
    // Slopes between neighbours may not jump by more than 10x the median slope.
    std::vector<double> slopes;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) slopes.push_back(std::abs(sweep.rows[i].margin - sweep.rows[i - 1].margin));
    std::vector<double> sorted = slopes;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double worst = *std::max_element(slopes.begin(), slopes.end());
    return std::optional(detail::bool_error(worst <= 10.0 * median + 1e-12));
  }));
  return out;
}

/// Deviation of the closed-form invariants from the numerical spectrum at every
/// point of the three figure grids.
inline std::vector<ClosedFormDeviation> lambda_s_report(int grid_size = 99) {
  std::vector<ClosedFormDeviation> out;
  for (int k = 1; k <= 3; ++k) {
    const auto f = figure_preset(k);
    for (double t : open_unit_grid(grid_size)) out.push_back(closed_form_deviation(ToyModelConfig::make(f.m, f.n, t, 0.0)));
  }
  return out;
}

inline SelftestReport run_selftest(std::uint64_t seed = 20240611, int cases = 50) {
  SelftestReport r;
  r.seed = seed;
  for (auto* battery : {&symplectic_core_properties, &gaussian_state_properties, &fisher_rao_properties,
                        &nc_oscillator_properties, &nc_toymodel_properties})
    for (auto& p : battery(seed, cases)) r.properties.push_back(std::move(p));
  r.lambda_s_report = lambda_s_report();
  return r;
}

}  // namespace ginfo
