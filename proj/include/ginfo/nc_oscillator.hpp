#pragma once

// Two-mode anisotropic oscillator on a noncommutative phase space: Bopp-shift
// map to a commutative Hamiltonian, normal-mode spectrum, ground state and its
// covariance matrix.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "ginfo/fisher_rao.hpp"
#include "ginfo/gaussian_state.hpp"
#include "ginfo/symplectic_core.hpp"

namespace ginfo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

struct OscillatorParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double w1 = 1.0;  // frequencies in the deformed frame
  double w2 = 1.0;
  double theta = 0.0;
  double eta = 0.0;
  double hbar = 1.0;

  /// θη / (4ħ²)
  double deformation() const { return theta * eta / (4.0 * hbar * hbar); }
};

inline void validate(const OscillatorParams& p) {
  if (!(p.m1 > 0.0) || !(p.m2 > 0.0)) fail(ErrorKind::InvalidArgument, "masses must be positive");
  if (!(p.w1 > 0.0) || !(p.w2 > 0.0)) fail(ErrorKind::InvalidArgument, "frequencies must be positive");
  if (!(p.theta >= 0.0) || !(p.eta >= 0.0)) fail(ErrorKind::InvalidArgument, "theta and eta must be non-negative");
  if (!(p.hbar > 0.0)) fail(ErrorKind::InvalidArgument, "hbar must be positive");
  const double k = p.deformation();
  if (std::abs(k - 1.0) < 1e-12) fail(ErrorKind::SingularDarboux, "theta*eta = 4 hbar^2");
  if (!(k < 1.0)) fail(ErrorKind::InvalidArgument, "theta*eta / (4 hbar^2) must be < 1");
}

/// ħ(1 + θη/(4ħ²))
inline double hbar_effective(const OscillatorParams& p) { return p.hbar * (1.0 + p.deformation()); }

/// Bopp shift in (x1, p1, x2, p2): [[I, −ΠJ/(2ħ)], [ΠJ/(2ħ), I]], Π = diag(θ, η).
/// Deformed coordinates = Υ · commutative coordinates.
inline Matrix darboux_matrix(const OscillatorParams& p) {
  validate(p);
  const Matrix j = mode_symplectic_block();
  Matrix pi = Matrix::Zero(2, 2);
  pi(0, 0) = p.theta;
  pi(1, 1) = p.eta;
  Matrix u = Matrix::Identity(4, 4);
  u.block(0, 2, 2, 2) = -pi * j / (2.0 * p.hbar);
  u.block(2, 0, 2, 2) = pi * j / (2.0 * p.hbar);
  return u;
}

/// [[J, Π/ħ_e], [−Π/ħ_e, J]] in (x1, p1, x2, p2).
inline Matrix deformed_symplectic_matrix(const OscillatorParams& p) {
  validate(p);
  const double he = hbar_effective(p);
  Matrix pi = Matrix::Zero(2, 2);
  pi(0, 0) = p.theta;
  pi(1, 1) = p.eta;
  Matrix jt = Matrix::Zero(4, 4);
  jt.block(0, 0, 2, 2) = mode_symplectic_block();
  jt.block(2, 2, 2, 2) = mode_symplectic_block();
  jt.block(0, 2, 2, 2) = pi / he;
  jt.block(2, 0, 2, 2) = -pi / he;
  return jt;
}

/// diag(m1ω̃1², 1/m1, m2ω̃2², 1/m2) in (x1, p1, x2, p2).
inline Matrix nc_hamiltonian_matrix(const OscillatorParams& p) {
  validate(p);
  Vector d(4);
  d << p.m1 * p.w1 * p.w1, 1.0 / p.m1, p.m2 * p.w2 * p.w2, 1.0 / p.m2;
  return d.asDiagonal();
}

struct EquivalentParams {
  double mu1, mu2;
  double alpha1, alpha2;
  double nu1, nu2;
  double omega1, omega2;  // sqrt(α_j / μ_j)
  double hbar;
};

inline EquivalentParams equivalent_params(const OscillatorParams& p) {
  validate(p);
  const double h2 = p.hbar * p.hbar;
  EquivalentParams e{};
  e.mu1 = 1.0 / (1.0 / p.m1 + p.m2 * p.w2 * p.w2 * p.theta * p.theta / (4.0 * h2));
  e.mu2 = 1.0 / (1.0 / p.m2 + p.m1 * p.w1 * p.w1 * p.theta * p.theta / (4.0 * h2));
  e.alpha1 = p.m1 * p.w1 * p.w1 + p.eta * p.eta / (4.0 * h2 * p.m2);
  e.alpha2 = p.m2 * p.w2 * p.w2 + p.eta * p.eta / (4.0 * h2 * p.m1);
  e.nu1 = (p.eta + p.m1 * p.m2 * p.w2 * p.w2 * p.theta) / (4.0 * p.m1 * p.hbar);
  e.nu2 = (p.eta + p.m1 * p.m2 * p.w1 * p.w1 * p.theta) / (4.0 * p.m2 * p.hbar);
  e.omega1 = std::sqrt(e.alpha1 / e.mu1);
  e.omega2 = std::sqrt(e.alpha2 / e.mu2);
  e.hbar = p.hbar;
  return e;
}

/// Block form of the commutative Hamiltonian matrix in (x1, p1, x2, p2).
inline Matrix assemble_hamiltonian(const EquivalentParams& e) {
  Matrix h(4, 4);
  // clang-format off
  h << e.alpha1,           0.0,            0.0,  -2.0 * e.nu2,
       0.0,        1.0 / e.mu1,   2.0 * e.nu1,            0.0,
       0.0,        2.0 * e.nu1,      e.alpha2,            0.0,
       -2.0 * e.nu2,        0.0,           0.0,    1.0 / e.mu2;
  // clang-format on
  return h;
}

struct EquivalentHamiltonian {
  Matrix h;                  // ΥᵀH_ncΥ, (x1, p1, x2, p2)
  EquivalentParams params;
  double closed_form_deviation;  // max |H − assembled closed form|
};

inline EquivalentHamiltonian equivalent_hamiltonian(const OscillatorParams& p, double tol = 1e-10) {
  const Matrix u = darboux_matrix(p);
  const Matrix h = u.transpose() * nc_hamiltonian_matrix(p) * u;
  EquivalentHamiltonian out{h, equivalent_params(p), 0.0};
  const Matrix hc = assemble_hamiltonian(out.params);
  out.closed_form_deviation = (h - hc).cwiseAbs().maxCoeff();
  if (out.closed_form_deviation > tol * std::max(1.0, h.cwiseAbs().maxCoeff()))
    fail(ErrorKind::Domain, "closed-form Hamiltonian blocks disagree with the transformed matrix");
  return out;
}

/// diag(J2, J2)
inline Matrix interleaved_j() { return build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved).matrix; }

struct ModeSpectrum {
  double lambda1;  // ≤ lambda2
  double lambda2;
  double Delta;
  double D;
  double numeric_deviation;  // vs the imaginary parts of eig(J·H)
};

/// D² as the three-term sum.
inline double discriminant_squared(const EquivalentParams& e) {
  const double w1 = e.omega1, w2 = e.omega2;
  const double cross = std::sqrt(e.mu1 / e.mu2) * w1 * e.nu1 + std::sqrt(e.mu2 / e.mu1) * w2 * e.nu2;
  return (w1 * w1 - w2 * w2) * (w1 * w1 - w2 * w2) + 16.0 * e.nu1 * e.nu2 * (w1 - w2) * (w1 - w2) + 16.0 * cross * cross;
}

inline ModeSpectrum mode_spectrum(const EquivalentParams& e, double tol = 1e-8) {
  ModeSpectrum s{};
  s.Delta = e.omega1 * e.omega1 + e.omega2 * e.omega2 + 8.0 * e.nu1 * e.nu2;
  const double d2 = discriminant_squared(e);
  s.D = std::sqrt(std::max(0.0, d2));
  if (s.D <= 1e-12) fail(ErrorKind::DegenerateSpectrum, "discriminant vanishes: degenerate normal modes");
  if (s.Delta - s.D <= 0.0) fail(ErrorKind::Domain, "non-positive squared mode frequency");
  s.lambda1 = std::sqrt((s.Delta - s.D) / 2.0);
  s.lambda2 = std::sqrt((s.Delta + s.D) / 2.0);

  Eigen::EigenSolver<Matrix> es(interleaved_j() * assemble_hamiltonian(e), false);
  std::vector<double> im;
  for (Index i = 0; i < 4; ++i) im.push_back(std::abs(es.eigenvalues()[i].imag()));
  std::sort(im.begin(), im.end());
  s.numeric_deviation = std::max({std::abs(im[0] - s.lambda1), std::abs(im[1] - s.lambda1),
                                  std::abs(im[2] - s.lambda2), std::abs(im[3] - s.lambda2)});
  if (s.numeric_deviation > tol * std::max(1.0, s.lambda2))
    fail(ErrorKind::Domain, "closed-form mode frequencies disagree with eig(JH)");
  return s;
}

/// Real coefficients of the left eigenvectors χ_j = (iκ_{j,1}, κ_{j,2}, κ_{j,3}, iκ_{j,4}),
/// χ_j (J·H) = −iλ_j χ_j.
struct KappaSet {
  std::array<std::array<double, 4>, 2> kappa{};
  std::array<double, 2> k{};         // normalization magnitudes, taken real positive
  std::array<double, 2> lambda{};
  std::array<double, 2> residual{};  // ‖χ_j JH + iλ_j χ_j‖∞ relative to ‖χ_j‖∞
};

inline std::array<double, 4> kappa_components(const EquivalentParams& e, double l) {
  const double mu1 = e.mu1, mu2 = e.mu2, n1 = e.nu1, n2 = e.nu2;
  const double w1s = e.omega1 * e.omega1, w2s = e.omega2 * e.omega2, l2 = l * l;
  return {-2.0 * mu1 * l * (mu1 * n1 * w1s + mu2 * n2 * w2s),
          2.0 * (mu2 * n2 * w2s - 4.0 * mu1 * n1 * n1 * n2 + mu1 * n1 * l2),
          mu1 * (4.0 * mu1 * n1 * n1 * w1s - mu2 * w1s * w2s + mu2 * w2s * l2),
          -mu1 * l * (w1s + 4.0 * n1 * n2 - l2)};
}

inline Eigen::RowVector4cd left_eigenvector(const std::array<double, 4>& kap) {
  const Complex i(0.0, 1.0);
  return Eigen::RowVector4cd(i * kap[0], kap[1], kap[2], i * kap[3]);
}

inline KappaSet kappa_set(const EquivalentParams& e, const ModeSpectrum& s, double tol = 1e-8) {
  KappaSet ks;
  ks.lambda = {s.lambda1, s.lambda2};
  const ComplexMatrix jh = (interleaved_j() * assemble_hamiltonian(e)).cast<Complex>();
  for (int j = 0; j < 2; ++j) {
    ks.kappa[j] = kappa_components(e, ks.lambda[j]);
    const auto& q = ks.kappa[j];
    const double norm = q[2] * q[3] - q[0] * q[1];
    if (!(norm > 0.0)) fail(ErrorKind::NormalizationFailure, "κ3κ4 − κ1κ2 ≤ 0 for mode " + std::to_string(j + 1));
    ks.k[j] = 1.0 / std::sqrt(2.0 * norm);

    const Eigen::RowVector4cd chi = left_eigenvector(q);
    const double size = chi.cwiseAbs().maxCoeff();
    ks.residual[j] = (chi * jh + Complex(0.0, ks.lambda[j]) * chi).cwiseAbs().maxCoeff() / size;
    if (ks.residual[j] > tol * std::max(1.0, ks.lambda[j]))
      fail(ErrorKind::NormalizationFailure, "κ vector is not a left eigenvector for mode " + std::to_string(j + 1));
  }
  return ks;
}

/// Λ₁₁, Λ₂₂ real; Λ₁₂ = iΛ₁₂c.
struct GroundStateLambda {
  double L11r = 1.0;
  double L22r = 1.0;
  double L12c = 0.0;

  double delta_lambda() const { return L11r * L22r + L12c * L12c; }
};

enum class LambdaRoute { ClosedForm, NumericEigenvectors };

inline std::string to_string(LambdaRoute r) {
  return r == LambdaRoute::ClosedForm ? "closed-form" : "numeric-eigenvectors";
}

namespace detail {

/// (i/ħ) U_p⁻¹ U_x with rows χ_j split into x and p parts. Checks that
/// Λ₁₁, Λ₂₂ are real, Λ₁₂ imaginary and Λ symmetric.
inline GroundStateLambda lambda_from_rows(const std::array<Eigen::RowVector4cd, 2>& chi, double hbar, double tol) {
  ComplexMatrix ux(2, 2), up(2, 2);
  for (int j = 0; j < 2; ++j) {
    ux(j, 0) = chi[j](0);
    ux(j, 1) = chi[j](2);
    up(j, 0) = chi[j](1);
    up(j, 1) = chi[j](3);
  }
  const double scale = std::max(up.cwiseAbs().maxCoeff(), 1e-300);
  if (std::abs(up.determinant()) <= 1e-12 * scale * scale)
    fail(ErrorKind::NonNormalizable, "U_p is singular");
  const ComplexMatrix lam = Complex(0.0, 1.0 / hbar) * up.partialPivLu().solve(ux);
  const double mag = std::max(1.0, lam.cwiseAbs().maxCoeff());
  const double off = std::max({std::abs(lam(0, 0).imag()), std::abs(lam(1, 1).imag()), std::abs(lam(0, 1).real()),
                               std::abs(lam(1, 0).real()), std::abs(lam(0, 1) - lam(1, 0))});
  if (off > tol * mag) fail(ErrorKind::InconsistentLambda, "Λ lacks the real-diagonal / imaginary-offdiagonal structure");
  GroundStateLambda g{lam(0, 0).real(), lam(1, 1).real(), 0.5 * (lam(0, 1).imag() + lam(1, 0).imag())};
  if (!(g.L11r > 0.0) || !(g.L22r > 0.0)) fail(ErrorKind::NonNormalizable, "Re Λ is not positive");
  return g;
}

}  // namespace detail

/// Closed-form ratios of κ products, cross-checked against the matrix route.
inline GroundStateLambda ground_state_lambda(const KappaSet& ks, double hbar, double tol = 1e-9) {
  const auto& a = ks.kappa[0];
  const auto& b = ks.kappa[1];
  const double den = hbar * (a[1] * b[3] - b[1] * a[3]);
  const double scale = std::max({std::abs(a[1] * b[3]), std::abs(b[1] * a[3]), 1e-300});
  if (std::abs(den) <= 1e-12 * hbar * scale) fail(ErrorKind::NonNormalizable, "U_p is singular");
  GroundStateLambda g{(a[3] * b[0] - b[3] * a[0]) / den, (a[1] * b[2] - b[1] * a[2]) / den,
                      (b[3] * a[2] - a[3] * b[2]) / den};
  const GroundStateLambda m = detail::lambda_from_rows({left_eigenvector(a), left_eigenvector(b)}, hbar, tol);
  const double mag = std::max({1.0, std::abs(m.L11r), std::abs(m.L22r), std::abs(m.L12c)});
  const double dev = std::max({std::abs(g.L11r - m.L11r), std::abs(g.L22r - m.L22r), std::abs(g.L12c - m.L12c)});
  if (dev > tol * mag) fail(ErrorKind::InconsistentLambda, "closed-form Λ disagrees with (i/ħ)U_p⁻¹U_x");
  if (!(g.L11r > 0.0) || !(g.L22r > 0.0)) fail(ErrorKind::NonNormalizable, "Re Λ is not positive");
  return g;
}

/// Λ from numerically computed left eigenvectors of J·H for the eigenvalues
/// −iλ_j. Works where the κ polynomials vanish identically (ν = 0).
inline GroundStateLambda ground_state_lambda_numeric(const Matrix& h, double hbar, double tol = 1e-9) {
  const Matrix jh = interleaved_j() * h;
  Eigen::ComplexEigenSolver<ComplexMatrix> es(jh.transpose().cast<Complex>());
  if (es.info() != Eigen::Success) fail(ErrorKind::Domain, "eigen-solver failed on (JH)ᵀ");
  std::array<Eigen::RowVector4cd, 2> rows;
  int found = 0;
  std::vector<std::pair<double, Index>> neg;
  for (Index i = 0; i < 4; ++i)
    if (es.eigenvalues()[i].imag() < 0.0) neg.emplace_back(-es.eigenvalues()[i].imag(), i);
  if (neg.size() != 2) fail(ErrorKind::DegenerateSpectrum, "J·H does not have two eigenvalues with Im < 0");
  std::sort(neg.begin(), neg.end());
  for (const auto& [l, idx] : neg) rows[found++] = es.eigenvectors().col(idx).transpose();
  return detail::lambda_from_rows(rows, hbar, tol);
}

/// Ground-state Λ of the oscillator, with the route that produced it.
struct GroundStateSolution {
  EquivalentHamiltonian hamiltonian;
  ModeSpectrum spectrum;
  GroundStateLambda lambda;
  LambdaRoute route;
};

inline GroundStateSolution solve_ground_state(const OscillatorParams& p) {
  auto eh = equivalent_hamiltonian(p);
  const auto spec = mode_spectrum(eh.params);
  try {
    const auto ks = kappa_set(eh.params, spec);
    const auto lam = ground_state_lambda(ks, p.hbar);
    return {std::move(eh), spec, lam, LambdaRoute::ClosedForm};
  } catch (const Error& e) {
    // Near the commutative limit the κ components cancel and the consistency check trips.
    if (e.kind() != ErrorKind::NormalizationFailure && e.kind() != ErrorKind::NonNormalizable &&
        e.kind() != ErrorKind::InconsistentLambda)
      throw;
  }
  const auto lam = ground_state_lambda_numeric(eh.h, p.hbar);
  return {std::move(eh), spec, lam, LambdaRoute::NumericEigenvectors};
}

inline void validate(const GroundStateLambda& l, double hbar) {
  if (!(hbar > 0.0)) fail(ErrorKind::InvalidArgument, "hbar must be positive");
  if (!(l.L11r > 0.0) || !(l.L22r > 0.0)) fail(ErrorKind::NonNormalizable, "Re Λ is not positive");
}

/// (ħ/2)[[σ11, σ12], [σ12ᵀ, σ22]] in (x1, p1, x2, p2).
inline CovarianceMatrix ground_state_cvm(const GroundStateLambda& l, double hbar) {
  validate(l, hbar);
  const double dl = l.delta_lambda();
  Matrix v = Matrix::Zero(4, 4);
  v(0, 0) = 1.0 / (hbar * l.L11r);
  v(1, 1) = hbar * dl / l.L22r;
  v(2, 2) = 1.0 / (hbar * l.L22r);
  v(3, 3) = hbar * dl / l.L11r;
  v(0, 3) = v(3, 0) = -l.L12c / l.L11r;
  v(1, 2) = v(2, 1) = -l.L12c / l.L22r;
  v *= hbar / 2.0;
  if (!(min_eigenvalue_symmetric(v) > 0.0)) fail(ErrorKind::InconsistentLambda, "ground-state covariance is not positive definite");
  return CovarianceMatrix::make(std::move(v), PhaseSpaceOrdering::ModeInterleaved);
}

/// G with W ∝ exp(−XᵀGX), X = (x1, x2, p1, p2).
inline Matrix wigner_quadratic_form(const GroundStateLambda& l, double hbar) {
  validate(l, hbar);
  Matrix lr = Matrix::Zero(2, 2), lc = Matrix::Zero(2, 2), lr_inv = Matrix::Zero(2, 2);
  lr(0, 0) = l.L11r;
  lr(1, 1) = l.L22r;
  lr_inv(0, 0) = 1.0 / l.L11r;
  lr_inv(1, 1) = 1.0 / l.L22r;
  lc(0, 1) = lc(1, 0) = l.L12c;
  Matrix g(4, 4);
  g.block(0, 0, 2, 2) = lr + lc * lr_inv * lc.transpose();
  g.block(0, 2, 2, 2) = lc * lr_inv / hbar;
  g.block(2, 0, 2, 2) = lr_inv * lc.transpose() / hbar;
  g.block(2, 2, 2, 2) = lr_inv / (hbar * hbar);
  return g;
}

/// Normal-form point (a, c) of the ground state; ħ/2 is the vacuum scale.
inline NcTwoParamPoint nc_two_param_point_from_lambda(const GroundStateLambda& l, double hbar) {
  validate(l, hbar);
  const double ratio = l.L12c * l.L12c / (l.L11r * l.L22r);
  return {0.5 * hbar * std::sqrt(1.0 + ratio), 0.5 * hbar * l.L12c / std::sqrt(l.L11r * l.L22r)};
}

// ---------------------------------------------------------------------------
// Separability
// ---------------------------------------------------------------------------

struct FrequencyConditionSides {
  double lhs;
  double rhs;
  double relative_gap;  // |lhs − rhs| / max(|lhs|, |rhs|, tiny)
};

/// Both sides of the frequency relation equivalent to Λ₁₂c = 0.
inline FrequencyConditionSides frequency_condition(const OscillatorParams& p) {
  validate(p);
  const double m12 = p.m1 * p.m2, h2 = p.hbar * p.hbar, t = p.theta, e = p.eta;
  auto side = [&](double wa, double wb) {
    const double mid = e / m12 + wb * wb * t;
    return (4.0 * h2 / m12 + wa * wa * t * t) * mid * mid * (e * e / m12 + 4.0 * h2 * wa * wa);
  };
  FrequencyConditionSides s{side(p.w1, p.w2), side(p.w2, p.w1), 0.0};
  const double scale = std::max({std::abs(s.lhs), std::abs(s.rhs), 1e-300});
  s.relative_gap = std::abs(s.lhs - s.rhs) / scale;
  return s;
}

struct SeparabilityVerdict {
  bool separable;            // |Λ₁₂c| < tolerance
  bool frequency_condition;  // relative gap below its tolerance
  double lhs_rhs_gap;        // relative
  double lambda12c;
  LambdaRoute route;
};

inline SeparabilityVerdict separability_condition(const OscillatorParams& p, double lambda_tol = 1e-10,
                                                  double gap_tol = 1e-9) {
  const auto sol = solve_ground_state(p);
  const auto sides = frequency_condition(p);
  return {std::abs(sol.lambda.L12c) < lambda_tol, sides.relative_gap < gap_tol, sides.relative_gap, sol.lambda.L12c,
          sol.route};
}

}  // namespace ginfo
