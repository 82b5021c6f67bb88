#pragma once

// Dense small-matrix kernels for Gaussian phase-space work: symplectic forms,
// phase-space orderings, symplectic (Williamson) spectra, congruences, SPD
// square roots and generalized eigenvalues.
//
// Conventions
//   * Symplectic invariants are the moduli of the eigenvalues of 2iΩ⁻¹Σ, so the
//     vacuum Σ = I/2 has invariants exactly 1 and the uncertainty principle
//     reads "min invariant ≥ 1".
//   * Deformed forms Ω̃ = SΩSᵀ carry their own scale; no separate ħ is applied.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ginfo/error.hpp"
#include "ginfo/numeric_policy.hpp"

namespace ginfo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Layout of the phase-space vector.
///   ModeInterleaved: (x1, p1, x2, p2, ...)
///   BlockXP:         (q1, ..., qn, p1, ..., pn)
///   PartyBlockXP:    two equal parties, each laid out BlockXP and stored
///                    contiguously: (x1ᴬ, x2ᴬ, p1ᴬ, p2ᴬ, x1ᴮ, x2ᴮ, p1ᴮ, p2ᴮ).
enum class PhaseSpaceOrdering { ModeInterleaved, BlockXP, PartyBlockXP };

inline std::string to_string(PhaseSpaceOrdering o) {
  switch (o) {
    case PhaseSpaceOrdering::ModeInterleaved: return "ModeInterleaved";
    case PhaseSpaceOrdering::BlockXP: return "BlockXP";
    case PhaseSpaceOrdering::PartyBlockXP: return "PartyBlockXP";
  }
  return "?";
}

inline PhaseSpaceOrdering parse_ordering(const std::string& s) {
  if (s == "ModeInterleaved") return PhaseSpaceOrdering::ModeInterleaved;
  if (s == "BlockXP") return PhaseSpaceOrdering::BlockXP;
  if (s == "PartyBlockXP") return PhaseSpaceOrdering::PartyBlockXP;
  fail(ErrorKind::InvalidArgument, "unknown phase-space ordering '" + s + "'");
}

struct CoordinateIndex {
  Index x;
  Index p;
};

/// Position of x_k and p_k (k zero-based) inside a 2n vector in the given ordering.
inline CoordinateIndex coordinate_index(PhaseSpaceOrdering o, int modes, int k) {
  if (modes < 1) fail(ErrorKind::InvalidArgument, "mode count must be >= 1");
  if (k < 0 || k >= modes) fail(ErrorKind::InvalidArgument, "mode index out of range");
  switch (o) {
    case PhaseSpaceOrdering::ModeInterleaved: return {2 * k, 2 * k + 1};
    case PhaseSpaceOrdering::BlockXP: return {k, modes + k};
    case PhaseSpaceOrdering::PartyBlockXP: {
      if (modes % 2 != 0) fail(ErrorKind::InvalidArgument, "PartyBlockXP needs an even mode count");
      const int half = modes / 2;
      const int party = k / half;
      const int local = k % half;
      const Index base = static_cast<Index>(party) * 2 * half;
      return {base + local, base + half + local};
    }
  }
  fail(ErrorKind::InvalidArgument, "bad ordering");
}

/// Permutation P with v_ordering = P · v_interleaved. P is orthogonal, so P⁻¹ = Pᵀ.
inline Matrix ordering_permutation(PhaseSpaceOrdering o, int modes) {
  const Index dim = 2 * static_cast<Index>(modes);
  Matrix p = Matrix::Zero(dim, dim);
  for (int k = 0; k < modes; ++k) {
    const auto idx = coordinate_index(o, modes, k);
    p(idx.x, 2 * k) = 1.0;
    p(idx.p, 2 * k + 1) = 1.0;
  }
  return p;
}

inline int mode_count_of(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0)
    fail(ErrorKind::InvalidArgument, "phase-space matrix must be square with even, nonzero size");
  return static_cast<int>(m.rows() / 2);
}

/// Conjugates `m` by the permutation taking `from` to `to`.
inline Matrix reorder(const Matrix& m, PhaseSpaceOrdering from, PhaseSpaceOrdering to) {
  const int n = mode_count_of(m);
  if (from == to) return m;
  const Matrix pf = ordering_permutation(from, n);
  const Matrix pt = ordering_permutation(to, n);
  const Matrix q = pt * pf.transpose();
  return q * m * q.transpose();
}

inline bool is_symmetric(const Matrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

inline double min_eigenvalue_symmetric(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline Matrix mode_symplectic_block() {
  Matrix j(2, 2);
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

// ---------------------------------------------------------------------------
// SymplecticForm
// ---------------------------------------------------------------------------

struct SymplecticForm {
  Matrix matrix;
  PhaseSpaceOrdering ordering = PhaseSpaceOrdering::ModeInterleaved;
  double hbar_effective = 1.0;

  int modes() const { return static_cast<int>(matrix.rows() / 2); }

  /// Wraps an arbitrary antisymmetric invertible matrix.
  static SymplecticForm from_matrix(Matrix m, PhaseSpaceOrdering o, double hbar_effective = 1.0,
                                    const NumericPolicy& pol = default_policy) {
    mode_count_of(m);
    if ((m + m.transpose()).cwiseAbs().maxCoeff() > pol.symmetry * std::max(1.0, m.cwiseAbs().maxCoeff()))
      fail(ErrorKind::InvalidArgument, "symplectic form must be antisymmetric");
    if (std::abs(m.determinant()) < pol.singular_det) fail(ErrorKind::SingularForm, "|det Ω| below threshold");
    if (!(hbar_effective > 0.0)) fail(ErrorKind::InvalidArgument, "hbar_effective must be positive");
    return SymplecticForm{std::move(m), o, hbar_effective};
  }
};

/// Undeformed form: diag(J₂, …, J₂) interleaved, [[0, I],[−I, 0]] block.
inline SymplecticForm build_symplectic_form(int modes, PhaseSpaceOrdering o) {
  if (modes < 1) fail(ErrorKind::InvalidArgument, "mode count must be >= 1");
  const Index dim = 2 * static_cast<Index>(modes);
  Matrix interleaved = Matrix::Zero(dim, dim);
  for (int k = 0; k < modes; ++k) interleaved.block<2, 2>(2 * k, 2 * k) = mode_symplectic_block();
  const Matrix p = ordering_permutation(o, modes);
  return SymplecticForm{p * interleaved * p.transpose(), o, 1.0};
}

// ---------------------------------------------------------------------------
// CovarianceMatrix
// ---------------------------------------------------------------------------

/// Symmetric positive-definite 2n×2n matrix tagged with its ordering.
class CovarianceMatrix {
 public:
  static CovarianceMatrix make(Matrix m, PhaseSpaceOrdering o, const NumericPolicy& pol = default_policy) {
    mode_count_of(m);
    if (!is_symmetric(m, pol.symmetry)) fail(ErrorKind::Domain, "covariance matrix is not symmetric");
    Matrix sym = 0.5 * (m + m.transpose());
    const double lo = min_eigenvalue_symmetric(sym);
    if (!(lo > pol.spd)) fail(ErrorKind::Domain, "covariance matrix is not positive definite (min eigenvalue " + std::to_string(lo) + ")");
    return CovarianceMatrix(std::move(sym), o);
  }

  const Matrix& matrix() const noexcept { return m_; }
  PhaseSpaceOrdering ordering() const noexcept { return ordering_; }
  int modes() const noexcept { return static_cast<int>(m_.rows() / 2); }
  Index dim() const noexcept { return m_.rows(); }

  CovarianceMatrix reordered(PhaseSpaceOrdering target) const {
    return CovarianceMatrix(reorder(m_, ordering_, target), target);
  }

 private:
  CovarianceMatrix(Matrix m, PhaseSpaceOrdering o) : m_(std::move(m)), ordering_(o) {}

  Matrix m_;
  PhaseSpaceOrdering ordering_;
};

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct SymplecticSpectrum {
  std::vector<double> values;  // ascending, one per mode

  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

/// Moduli of the eigenvalue pairs of 2iΩ⁻¹Σ. Σ is brought into Ω's ordering first.
inline SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& sigma, const SymplecticForm& omega,
                                              const NumericPolicy& pol = default_policy) {
  if (sigma.dim() != omega.matrix.rows())
    fail(ErrorKind::InvalidArgument, "covariance and symplectic form differ in size");
  const Matrix s = reorder(sigma.matrix(), sigma.ordering(), omega.ordering);
  if (std::abs(omega.matrix.determinant()) < pol.singular_det) fail(ErrorKind::SingularForm, "|det Ω| below threshold");

  const Matrix a = omega.matrix.partialPivLu().solve(s);
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::Domain, "eigen-solver failed on Ω⁻¹Σ");

  const auto& ev = es.eigenvalues();
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(ev.size()));
  double scale = 0.0;
  for (Index i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev[i]));
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i].real()) > 1e3 * pol.pairing * std::max(1.0, scale))
      fail(ErrorKind::Domain, "Ω⁻¹Σ has an eigenvalue off the imaginary axis");
    moduli.push_back(2.0 * std::abs(ev[i].imag()));
  }
  std::sort(moduli.begin(), moduli.end());

  SymplecticSpectrum out;
  for (std::size_t i = 0; i + 1 < moduli.size(); i += 2) {
    const double lo = moduli[i], hi = moduli[i + 1];
    if (hi - lo > pol.pairing * std::max(1.0, hi))
      fail(ErrorKind::Domain, "unpaired eigenvalues of 2iΩ⁻¹Σ (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
    out.values.push_back(0.5 * (lo + hi));
  }
  return out;
}

struct RsupResult {
  bool valid;
  double min_invariant;
};

/// Robertson–Schrödinger check: valid iff the smallest invariant is ≥ 1.
inline RsupResult rsup_check(const CovarianceMatrix& sigma, const SymplecticForm& omega,
                             const NumericPolicy& pol = default_policy) {
  const auto spec = symplectic_spectrum(sigma, omega, pol);
  return {spec.min() >= 1.0 - pol.rsup, spec.min()};
}

// ---------------------------------------------------------------------------
// Congruence
// ---------------------------------------------------------------------------

inline void require_invertible(const Matrix& s, Index dim, const NumericPolicy& pol) {
  if (s.rows() != dim || s.cols() != dim) fail(ErrorKind::InvalidArgument, "transform has the wrong size");
  if (std::abs(s.determinant()) <= pol.transform_det) fail(ErrorKind::InvalidTransform, "transform is singular");
}

/// SΣSᵀ, keeping Σ's ordering tag (S is expressed in that ordering).
inline CovarianceMatrix congruence_apply(const Matrix& s, const CovarianceMatrix& sigma,
                                         const NumericPolicy& pol = default_policy) {
  require_invertible(s, sigma.dim(), pol);
  return CovarianceMatrix::make(s * sigma.matrix() * s.transpose(), sigma.ordering(), pol);
}

/// SΩSᵀ. The effective ħ is kept from Ω unless supplied.
inline SymplecticForm congruence_form(const Matrix& s, const SymplecticForm& omega,
                                      std::optional<double> hbar_effective = std::nullopt,
                                      const NumericPolicy& pol = default_policy) {
  require_invertible(s, omega.matrix.rows(), pol);
  Matrix m = s * omega.matrix * s.transpose();
  m = (0.5 * (m - m.transpose())).eval();
  return SymplecticForm::from_matrix(std::move(m), omega.ordering, hbar_effective.value_or(omega.hbar_effective), pol);
}

// ---------------------------------------------------------------------------
// SPD square roots and generalized eigenvalues
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Matrix> spd_eigen(const Matrix& m, const NumericPolicy& pol) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::InvalidArgument, "matrix must be square");
  if (!is_symmetric(m, pol.symmetry)) fail(ErrorKind::Domain, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) fail(ErrorKind::Domain, "symmetric eigen-solver failed");
  if (!(es.eigenvalues().minCoeff() > pol.spd)) fail(ErrorKind::Domain, "matrix is not positive definite");
  return es;
}

inline Matrix spectral_function(const Eigen::SelfAdjointEigenSolver<Matrix>& es, double (*f)(double)) {
  const Vector d = es.eigenvalues().unaryExpr(f);
  Matrix r = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace detail

/// Symmetric positive-definite square root via eigen-decomposition; repeated eigenvalues are fine.
inline Matrix matrix_sqrt_spd(const Matrix& m, const NumericPolicy& pol = default_policy) {
  return detail::spectral_function(detail::spd_eigen(m, pol), [](double x) { return std::sqrt(x); });
}

inline Matrix matrix_inv_sqrt_spd(const Matrix& m, const NumericPolicy& pol = default_policy) {
  return detail::spectral_function(detail::spd_eigen(m, pol), [](double x) { return 1.0 / std::sqrt(x); });
}

/// Solutions λ of det(Σ₂ − λΣ₁) = 0, i.e. eigenvalues of Σ₁^{-1/2} Σ₂ Σ₁^{-1/2}, ascending.
inline std::vector<double> generalized_eigenvalues(const Matrix& sigma1, const Matrix& sigma2,
                                                   const NumericPolicy& pol = default_policy) {
  if (sigma1.rows() != sigma2.rows() || sigma1.cols() != sigma2.cols())
    fail(ErrorKind::InvalidArgument, "matrices differ in size");
  detail::spd_eigen(sigma2, pol);
  const Matrix w = matrix_inv_sqrt_spd(sigma1, pol);
  Matrix m = w * sigma2 * w;
  m = (0.5 * (m + m.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  if (!(out.front() > 0.0)) fail(ErrorKind::Domain, "non-positive generalized eigenvalue");
  return out;
}

inline std::vector<double> generalized_eigenvalues(const CovarianceMatrix& sigma1, const CovarianceMatrix& sigma2,
                                                   const NumericPolicy& pol = default_policy) {
  return generalized_eigenvalues(sigma1.matrix(), reorder(sigma2.matrix(), sigma2.ordering(), sigma1.ordering()), pol);
}

}  // namespace ginfo
