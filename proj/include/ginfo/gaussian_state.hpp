#pragma once

// Two-mode Gaussian states: canonical parametrization, the explicit parameter
// regions of physical and separable states, partial transposition and the
// local-invariant (Simon) separability test.

#include <cmath>
#include <optional>

#include "ginfo/symplectic_core.hpp"

namespace ginfo {

/// Entries of the canonical two-mode covariance matrix
///   [[a, 0, c, 0], [0, a, 0, d], [c, 0, b, 0], [0, d, 0, b]]
/// laid out (x1, p1, x2, p2).
struct CanonicalTwoModeParams {
  double a = 0.5;
  double b = 0.5;
  double c = 0.0;
  double d = 0.0;
};

inline Matrix canonical_two_mode_matrix(const CanonicalTwoModeParams& p) {
  Matrix m(4, 4);
  // clang-format off
  m << p.a, 0.0, p.c, 0.0,
       0.0, p.a, 0.0, p.d,
       p.c, 0.0, p.b, 0.0,
       0.0, p.d, 0.0, p.b;
  // clang-format on
  return m;
}

inline CovarianceMatrix canonical_two_mode_cvm(const CanonicalTwoModeParams& p,
                                               const NumericPolicy& pol = default_policy) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) fail(ErrorKind::InvalidArgument, "canonical parameters need a > 0 and b > 0");
  return CovarianceMatrix::make(canonical_two_mode_matrix(p), PhaseSpaceOrdering::ModeInterleaved, pol);
}

// ---------------------------------------------------------------------------
// Explicit parameter regions
// ---------------------------------------------------------------------------

struct ThetaRegionParams {
  double nu0;      // a / b
  double delta0;   // 4ab
  double delta1;   // δ0 − ν0
  double delta2;   // δ0 − 1/ν0
  double delta3;   // (√δ0 + 1/√δ0)² − (√ν0 + 1/√ν0)²
  double Delta0;   // c² + ¼δ0(δ0 − 4c²)(δ3 − 4c²)
  std::optional<double> delta_plus;   // absent when Δ0 < 0
  std::optional<double> delta_minus;
};

inline ThetaRegionParams theta_region_params(const CanonicalTwoModeParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) fail(ErrorKind::InvalidArgument, "region parameters need a > 0 and b > 0");
  ThetaRegionParams r{};
  r.nu0 = p.a / p.b;
  r.delta0 = 4.0 * p.a * p.b;
  r.delta1 = r.delta0 - r.nu0;
  r.delta2 = r.delta0 - 1.0 / r.nu0;
  const double s0 = std::sqrt(r.delta0) + 1.0 / std::sqrt(r.delta0);
  const double sn = std::sqrt(r.nu0) + 1.0 / std::sqrt(r.nu0);
  r.delta3 = s0 * s0 - sn * sn;
  const double c2 = p.c * p.c;
  const double denom = r.delta0 - 4.0 * c2;
  if (std::abs(denom) <= 1e-14 * std::max(1.0, r.delta0))
    fail(ErrorKind::BoundaryIndeterminate, "δ0 = 4c², δ± undefined");
  r.Delta0 = c2 + 0.25 * r.delta0 * denom * (r.delta3 - 4.0 * c2);
  if (r.Delta0 >= 0.0) {
    const double root = std::sqrt(r.Delta0);
    r.delta_plus = (-p.c + root) / denom;
    r.delta_minus = (-p.c - root) / denom;
  }
  return r;
}

/// Membership in the displayed region of physical (uncertainty-respecting)
/// canonical states. The branches a > b and a < b use δ1 and δ2; for a = b
/// they coincide and the δ1 branch is used.
inline bool theta_quantum_contains(const CanonicalTwoModeParams& p) {
  const auto r = theta_region_params(p);
  if (!(p.a > 0.5) || !(p.b > 0.5)) return false;
  if (!r.delta_plus) return false;
  const double c2 = p.c * p.c;
  const bool c_ok = (p.b <= p.a) ? (c2 < r.delta1 / 4.0) : (c2 < r.delta2 / 4.0);
  return c_ok && *r.delta_minus <= p.d && p.d <= *r.delta_plus;
}

/// Membership in the displayed region of separable canonical states.
/// c = 0 falls outside both displayed branches (strict inequalities).
inline bool theta_separable_contains(const CanonicalTwoModeParams& p) {
  const auto r = theta_region_params(p);
  if (!(p.a > 0.5) || !(p.b > 0.5)) return false;
  if (!r.delta_plus || !(r.delta3 > 0.0)) return false;
  const double root3 = std::sqrt(r.delta3);
  const double two_c = 2.0 * p.c;
  if (-root3 < two_c && two_c < 0.0) return *r.delta_minus <= p.d && p.d <= -*r.delta_minus;
  if (0.0 < two_c && two_c < root3) return -*r.delta_plus <= p.d && p.d <= *r.delta_plus;
  return false;
}

// ---------------------------------------------------------------------------
// Partial transposition
// ---------------------------------------------------------------------------

enum class Party { A, B };

/// Modes [0, modes_a) belong to A, the rest to B.
struct BipartiteSplit {
  int modes_a = 1;
  int modes_b = 1;

  int total() const { return modes_a + modes_b; }
};

/// Diagonal ±1 matrix flipping the momenta of `party`.
inline Matrix partial_transpose_operator(PhaseSpaceOrdering o, const BipartiteSplit& split, Party party) {
  if (split.modes_a < 1 || split.modes_b < 1) fail(ErrorKind::InvalidArgument, "each party needs at least one mode");
  if (o == PhaseSpaceOrdering::PartyBlockXP && split.modes_a != split.modes_b)
    fail(ErrorKind::InvalidArgument, "PartyBlockXP requires equal parties");
  const int n = split.total();
  Vector diag = Vector::Ones(2 * n);
  const int first = party == Party::A ? 0 : split.modes_a;
  const int last = party == Party::A ? split.modes_a : n;
  for (int k = first; k < last; ++k) diag[coordinate_index(o, n, k).p] = -1.0;
  return diag.asDiagonal();
}

/// ΛΣΛᵀ with Λ flipping the chosen party's momenta. Applying it twice returns Σ.
inline CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma, Party party, const BipartiteSplit& split,
                                          const NumericPolicy& pol = default_policy) {
  if (split.total() != sigma.modes())
    fail(ErrorKind::InvalidArgument, "party split does not match the covariance size");
  const Matrix lam = partial_transpose_operator(sigma.ordering(), split, party);
  return CovarianceMatrix::make(lam * sigma.matrix() * lam, sigma.ordering(), pol);
}

struct PptResult {
  bool separable;
  double margin;  // min invariant of the transposed state minus one
};

/// Separable iff the partially transposed state is still a bona fide
/// covariance matrix with respect to Ω (boundary counts as separable).
inline PptResult ppt_separable(const CovarianceMatrix& sigma, const SymplecticForm& omega, Party party,
                               const BipartiteSplit& split, const NumericPolicy& pol = default_policy) {
  const auto pt = partial_transpose(sigma, party, split, pol);
  const double lo = symplectic_spectrum(pt, omega, pol).min();
  return {lo >= 1.0 - pol.rsup, lo - 1.0};
}

// ---------------------------------------------------------------------------
// Local invariants
// ---------------------------------------------------------------------------

struct SimonInvariants {
  double delta1 = 0.0;       // det V11
  double delta2 = 0.0;       // det V22
  double delta12 = 0.0;      // det V12
  double delta_total = 0.0;  // det V
  double tau_v = 0.0;        // Tr(V11 J V12 J V22 J V12ᵀ J)
  double ps = 0.0;
  double hbar = 1.0;

  /// Ps ≥ 0, with a relative slack so that pure product states land on the boundary.
  bool separable(double tol = 1e-10) const {
    const double scale = std::max({1.0, std::abs(delta1 * delta2), std::abs(tau_v)});
    return ps >= -tol * scale;
  }
};

/// Block invariants of a two-mode covariance matrix and
///   Ps = Δ1Δ2 + (ħ²/4 − |Δ12|)² − τ_v − ħ²(Δ1 + Δ2)/4.
inline SimonInvariants simon_criterion(const CovarianceMatrix& sigma, double hbar = 1.0) {
  if (sigma.modes() != 2) fail(ErrorKind::InvalidArgument, "local invariants need a 4x4 covariance matrix");
  if (!(hbar > 0.0)) fail(ErrorKind::InvalidArgument, "hbar must be positive");
  const Matrix v = reorder(sigma.matrix(), sigma.ordering(), PhaseSpaceOrdering::ModeInterleaved);
  const Matrix v11 = v.block(0, 0, 2, 2);
  const Matrix v12 = v.block(0, 2, 2, 2);
  const Matrix v22 = v.block(2, 2, 2, 2);
  const Matrix j = mode_symplectic_block();

  SimonInvariants s;
  s.hbar = hbar;
  s.delta1 = v11.determinant();
  s.delta2 = v22.determinant();
  s.delta12 = v12.determinant();
  s.delta_total = v.determinant();
  s.tau_v = (v11 * j * v12 * j * v22 * j * v12.transpose() * j).trace();
  const double h2 = hbar * hbar;
  const double t = h2 / 4.0 - std::abs(s.delta12);
  s.ps = s.delta1 * s.delta2 + t * t - s.tau_v - h2 * (s.delta1 + s.delta2) / 4.0;
  return s;
}

}  // namespace ginfo
