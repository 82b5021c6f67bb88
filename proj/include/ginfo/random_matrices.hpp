#pragma once

// Seeded random matrices for property checks.

#include <cmath>
#include <random>

#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include "ginfo/gaussian_state.hpp"
#include "ginfo/symplectic_core.hpp"

namespace ginfo {

using Rng = std::mt19937_64;

inline Matrix random_gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline Matrix random_orthogonal(Index dim, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian_matrix(dim, dim, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

/// U diag(s) Vᵀ with singular values log-uniform in [1/√cond, √cond].
inline Matrix random_invertible(Index dim, Rng& rng, double cond = 10.0) {
  std::uniform_real_distribution<double> ud(-0.5 * std::log(cond), 0.5 * std::log(cond));
  Vector s(dim);
  for (Index i = 0; i < dim; ++i) s[i] = std::exp(ud(rng));
  return random_orthogonal(dim, rng) * s.asDiagonal() * random_orthogonal(dim, rng).transpose();
}

/// Q diag(λ) Qᵀ with eigenvalues log-uniform in [lo, hi].
inline Matrix random_spd(Index dim, Rng& rng, double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> ud(std::log(lo), std::log(hi));
  Vector l(dim);
  for (Index i = 0; i < dim; ++i) l[i] = std::exp(ud(rng));
  const Matrix q = random_orthogonal(dim, rng);
  Matrix m = q * l.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

/// exp(ΩK) with K symmetric, so SΩSᵀ = Ω. `strength` scales K.
inline Matrix random_symplectic(int modes, Rng& rng, PhaseSpaceOrdering o = PhaseSpaceOrdering::ModeInterleaved,
                                double strength = 0.5) {
  const Index dim = 2 * static_cast<Index>(modes);
  Matrix k = random_gaussian_matrix(dim, dim, rng);
  k = (0.5 * strength * (k + k.transpose()) / std::sqrt(static_cast<double>(dim))).eval();
  const Matrix omega = build_symplectic_form(modes, o).matrix;
  return Matrix(omega * k).exp();
}

/// ½ S diag(ν) Sᵀ with every symplectic eigenvalue ν ≥ 1: a physical state.
inline CovarianceMatrix random_physical_cvm(int modes, Rng& rng,
                                            PhaseSpaceOrdering o = PhaseSpaceOrdering::ModeInterleaved,
                                            double max_nu = 3.0) {
  std::uniform_real_distribution<double> ud(1.0, max_nu);
  const Index dim = 2 * static_cast<Index>(modes);
  Vector d(dim);
  for (int k = 0; k < modes; ++k) {
    const double nu = ud(rng);
    const auto idx = coordinate_index(o, modes, k);
    d[idx.x] = nu;
    d[idx.p] = nu;
  }
  const Matrix s = random_symplectic(modes, rng, o);
  return CovarianceMatrix::make(0.5 * s * d.asDiagonal() * s.transpose(), o);
}

/// Canonical parameters with a, b in [lo, hi] and |c|, |d| < √(ab) so the
/// matrix is positive definite. No uncertainty constraint is imposed.
inline CanonicalTwoModeParams random_canonical_params(Rng& rng, double lo = 0.6, double hi = 2.0,
                                                      double corr = 0.9) {
  std::uniform_real_distribution<double> ab(lo, hi), u(-corr, corr);
  CanonicalTwoModeParams p;
  p.a = ab(rng);
  p.b = ab(rng);
  const double s = std::sqrt(p.a * p.b);
  p.c = u(rng) * s;
  p.d = u(rng) * s;
  return p;
}

}  // namespace ginfo
