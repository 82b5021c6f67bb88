#pragma once

// Fisher–Rao geometry of zero-mean Gaussian families.
//
//   g_{μν} = ½ Tr[Σ⁻¹ ∂_μΣ Σ⁻¹ ∂_νΣ]
//   d(Σ₁, Σ₂) = sqrt(½ Σ_j log² λ_j),  λ_j generalized eigenvalues of (Σ₁, Σ₂)

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ginfo/gaussian_state.hpp"
#include "ginfo/symplectic_core.hpp"

namespace ginfo {

struct FisherMetric {
  Matrix matrix;
  std::vector<std::string> parameter_names;
  std::vector<double> point;
};

/// θ ↦ Σ(θ).
using CovarianceFamily = std::function<Matrix(std::span<const double>)>;

namespace detail {

inline Matrix spd_inverse_checked(const Matrix& m, const char* where) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Domain, std::string("covariance not positive definite at ") + where);
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

inline Matrix central_difference(const CovarianceFamily& family, std::span<const double> theta, std::size_t k, double h) {
  std::vector<double> plus(theta.begin(), theta.end());
  std::vector<double> minus(theta.begin(), theta.end());
  plus[k] += h;
  minus[k] -= h;
  const Matrix sp = family(plus);
  const Matrix sm = family(minus);
  spd_inverse_checked(sp, "stencil point");
  spd_inverse_checked(sm, "stencil point");
  return (sp - sm) / (2.0 * h);
}

}  // namespace detail

/// Trace formula fed with central differences of Σ(θ). With `richardson`, each
/// derivative is refined as (4 D(h/2) − D(h)) / 3.
inline FisherMetric fisher_metric_numeric(const CovarianceFamily& family, std::span<const double> theta,
                                          double h = 1e-5, bool richardson = false,
                                          std::vector<std::string> names = {}) {
  if (!(h >= 1e-7 && h <= 1e-3)) fail(ErrorKind::InvalidArgument, "finite-difference step must lie in [1e-7, 1e-3]");
  const std::size_t m = theta.size();
  if (m == 0) fail(ErrorKind::InvalidArgument, "empty parameter point");
  const Matrix sinv = detail::spd_inverse_checked(family(theta), "base point");

  std::vector<Matrix> a;  // Σ⁻¹ ∂_kΣ
  a.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    Matrix d = detail::central_difference(family, theta, k, h);
    if (richardson) d = (4.0 * detail::central_difference(family, theta, k, 0.5 * h) - d) / 3.0;
    a.push_back(sinv * d);
  }
  Matrix g(static_cast<Index>(m), static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double v = 0.5 * (a[i] * a[j]).trace();
      g(static_cast<Index>(i), static_cast<Index>(j)) = v;
      g(static_cast<Index>(j), static_cast<Index>(i)) = v;
    }
  if (names.empty())
    for (std::size_t k = 0; k < m; ++k) names.push_back("theta" + std::to_string(k));
  return {std::move(g), std::move(names), std::vector<double>(theta.begin(), theta.end())};
}

inline CovarianceFamily canonical_two_mode_family() {
  return [](std::span<const double> t) { return canonical_two_mode_matrix({t[0], t[1], t[2], t[3]}); };
}

inline void require_nonsingular_two_mode(const CanonicalTwoModeParams& p) {
  if (!(p.a * p.b - p.c * p.c > 0.0) || !(p.a * p.b - p.d * p.d > 0.0))
    fail(ErrorKind::SingularState, "need ab - c² > 0 and ab - d² > 0");
}

/// Closed-form metric of the canonical family in the coordinates (a, b, c, d).
inline FisherMetric fisher_metric_two_mode(const CanonicalTwoModeParams& p) {
  require_nonsingular_two_mode(p);
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  const double c2 = c * c, d2 = d * d;
  const double dc = a * b - c2, dd = a * b - d2;
  const double ds = dc * dd;
  const double skew = (c2 - d2) * (c2 - d2);

  Matrix g = Matrix::Zero(4, 4);
  g(0, 0) = b * b / ds * (1.0 + skew / (2.0 * ds));
  // (c²+d²)/(2Δ)·[1 + ab(c²−d²)²/((c²+d²)Δ)], expanded so c = d = 0 is finite
  g(0, 1) = (c2 + d2) / (2.0 * ds) + a * b * skew / (2.0 * ds * ds);
  g(0, 2) = -b * c / (dc * dc);
  g(0, 3) = -b * d / (dd * dd);
  g(1, 1) = a * a / ds * (1.0 + skew / (2.0 * ds));
  g(1, 2) = -a * c / (dc * dc);
  g(1, 3) = -a * d / (dd * dd);
  g(2, 2) = (a * b + c2) / (dc * dc);
  g(2, 3) = 0.0;
  g(3, 3) = (a * b + d2) / (dd * dd);
  g.triangularView<Eigen::StrictlyLower>() = g.transpose().triangularView<Eigen::StrictlyLower>();
  return {std::move(g), {"a", "b", "c", "d"}, {a, b, c, d}};
}

/// [4a²b² − (c² + d²)²] / (4 Δ_Σ³)
inline double fisher_det_two_mode(const CanonicalTwoModeParams& p) {
  require_nonsingular_two_mode(p);
  const double ds = (p.a * p.b - p.c * p.c) * (p.a * p.b - p.d * p.d);
  const double s = p.c * p.c + p.d * p.d;
  return (4.0 * p.a * p.a * p.b * p.b - s * s) / (4.0 * ds * ds * ds);
}

/// Pure-state (d = −c) determinant: general formula vs the reduced expression
/// (ab + c²)/(ab − c²). They differ by (ab − c²)⁻⁴; both are reported.
struct PureStateDetReport {
  double from_general_formula;
  double reduced_expression;
  double ratio;  // general / reduced
};

inline PureStateDetReport pure_state_det_report(double a, double b, double c) {
  const double general = fisher_det_two_mode({a, b, c, -c});
  const double reduced = (a * b + c * c) / (a * b - c * c);
  return {general, reduced, general / reduced};
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

enum class DistanceConvention {
  Half,           // sqrt(½ Σ log² λ)
  HalfDimension,  // sqrt((dim/2) Σ log² λ)
};

inline double distance_from_eigenvalues(std::span<const double> lambdas, DistanceConvention conv) {
  double s = 0.0;
  for (double l : lambdas) s += std::log(l) * std::log(l);
  const double prefactor = conv == DistanceConvention::Half ? 0.5 : 0.5 * static_cast<double>(lambdas.size());
  return std::sqrt(prefactor * s);
}

inline double fr_distance(const Matrix& s1, const Matrix& s2, DistanceConvention conv = DistanceConvention::Half,
                          const NumericPolicy& pol = default_policy) {
  const auto ev = generalized_eigenvalues(s1, s2, pol);
  return distance_from_eigenvalues(ev, conv);
}

inline double fr_distance(const CovarianceMatrix& s1, const CovarianceMatrix& s2,
                          DistanceConvention conv = DistanceConvention::Half,
                          const NumericPolicy& pol = default_policy) {
  const auto ev = generalized_eigenvalues(s1, s2, pol);
  return distance_from_eigenvalues(ev, conv);
}

/// Element-wise construction of Σ^{1/2}, Σ^{-1/2} and Σ_M = Σ^{-1/2} Σ₀ Σ^{-1/2}
/// for canonical two-mode states.
struct ExplicitDistance {
  double distance_half;       // ½ prefactor
  double distance_dimension;  // dim/2 prefactor (dim = 4)
  std::array<double, 4> sigma_eigenvalues;  // λ_{c−}, λ_{c+}, λ_{d−}, λ_{d+}
  std::array<double, 4> lambda_m;           // λ_{M1+}, λ_{M1−}, λ_{M2+}, λ_{M2−}
  Matrix sigma_s;
  Matrix sigma_s_inv;
  Matrix sigma_m;
};

/// Closed-form symmetric square root of the canonical matrix. Fails where the
/// element formulas divide by zero: repeated eigenvalues inside the (1,3) or
/// (2,4) block, and the c = 0, a > b (resp. d = 0, a < b) corner.
inline Matrix canonical_sqrt_closed_form(const CanonicalTwoModeParams& p, std::array<double, 4>* eigenvalues = nullptr,
                                         double gap_tol = 1e-10) {
  require_nonsingular_two_mode(p);
  if (!(p.a > 0.0) || !(p.b > 0.0)) fail(ErrorKind::Domain, "canonical matrix is not positive definite");
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  const double amb = a - b;
  // Block eigenvalue gaps; l1 and l3 from the block determinants to avoid cancellation.
  const double qc = std::hypot(amb, 2.0 * c), qd = std::hypot(amb, 2.0 * d);
  const double l2 = 0.5 * (a + b + qc), l4 = 0.5 * (a + b + qd);
  const double l1 = (a * b - c * c) / l2, l3 = (a * b - d * d) / l4;
  if (eigenvalues) *eigenvalues = {l1, l2, l3, l4};

  const double den13 = amb > 0.0 ? -4.0 * c * c / (amb + qc) : amb - qc;
  const double den24 = amb < 0.0 ? 4.0 * d * d / (qd - amb) : amb + qd;
  if (qc < gap_tol || std::abs(den13) < gap_tol)
    fail(ErrorKind::DegenerateSpectrum, "closed-form square root undefined in the (x1, x2) block");
  if (qd < gap_tol || std::abs(den24) < gap_tol)
    fail(ErrorKind::DegenerateSpectrum, "closed-form square root undefined in the (p1, p2) block");

  // 2c²/den13 and 2d²/den24, rewritten without the small denominators.
  const double corr13 = -0.5 * (amb + qc);
  const double corr24 = 0.5 * (qd - amb);
  const double tsc = std::sqrt(l1) + std::sqrt(l2);
  const double tsd = std::sqrt(l3) + std::sqrt(l4);
  const double s11 = 0.5 * (tsc + amb / tsc);
  const double s13 = c / tsc;
  const double s22 = std::sqrt(l4) - corr24 / tsd;
  const double s24 = d / tsd;
  const double s33 = std::sqrt(l2) + corr13 / tsc;
  const double s44 = 0.5 * (tsd - amb / tsd);

  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s11;
  s(0, 2) = s(2, 0) = s13;
  s(1, 1) = s22;
  s(1, 3) = s(3, 1) = s24;
  s(2, 2) = s33;
  s(3, 3) = s44;
  return s;
}

inline ExplicitDistance fr_distance_explicit(const CanonicalTwoModeParams& p, const CanonicalTwoModeParams& p0) {
  canonical_two_mode_cvm(p0);
  ExplicitDistance out{};
  out.sigma_s = canonical_sqrt_closed_form(p, &out.sigma_eigenvalues);
  const Matrix& s = out.sigma_s;

  const double d13 = s(0, 0) * s(2, 2) - s(0, 2) * s(0, 2);
  const double d24 = s(1, 1) * s(3, 3) - s(1, 3) * s(1, 3);
  Matrix inv = Matrix::Zero(4, 4);
  inv(0, 0) = s(2, 2) / d13;
  inv(0, 2) = inv(2, 0) = -s(0, 2) / d13;
  inv(2, 2) = s(0, 0) / d13;
  inv(1, 1) = s(3, 3) / d24;
  inv(1, 3) = inv(3, 1) = -s(1, 3) / d24;
  inv(3, 3) = s(1, 1) / d24;
  out.sigma_s_inv = inv;

  const double a0 = p0.a, b0 = p0.b, c0 = p0.c, dd0 = p0.d;
  const double s11 = s(0, 0), s13 = s(0, 2), s33 = s(2, 2);
  const double s22 = s(1, 1), s24 = s(1, 3), s44 = s(3, 3);
  const double k13 = 1.0 / (d13 * d13), k24 = 1.0 / (d24 * d24);
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = k13 * (a0 * s33 * s33 + b0 * s13 * s13 - 2.0 * c0 * s13 * s33);
  m(0, 2) = m(2, 0) = k13 * (-a0 * s13 * s33 - b0 * s11 * s13 + c0 * (s13 * s13 + s11 * s33));
  m(2, 2) = k13 * (a0 * s13 * s13 + b0 * s11 * s11 - 2.0 * c0 * s11 * s13);
  m(1, 1) = k24 * (a0 * s44 * s44 + b0 * s24 * s24 - 2.0 * dd0 * s24 * s44);
  m(1, 3) = m(3, 1) = k24 * (-a0 * s24 * s44 - b0 * s22 * s24 + dd0 * (s24 * s24 + s22 * s44));
  m(3, 3) = k24 * (a0 * s24 * s24 + b0 * s22 * s22 - 2.0 * dd0 * s22 * s24);
  out.sigma_m = m;

  auto pair = [](double tr, double det) {
    const double r = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return std::array<double, 2>{0.5 * (tr + r), 0.5 * (tr - r)};
  };
  const auto l13 = pair(m(0, 0) + m(2, 2), m(0, 0) * m(2, 2) - m(0, 2) * m(0, 2));
  const auto l24 = pair(m(1, 1) + m(3, 3), m(1, 1) * m(3, 3) - m(1, 3) * m(1, 3));
  out.lambda_m = {l13[0], l13[1], l24[0], l24[1]};
  for (double l : out.lambda_m)
    if (!(l > 0.0)) fail(ErrorKind::Domain, "non-positive eigenvalue of Σ_M");
  out.distance_half = distance_from_eigenvalues(out.lambda_m, DistanceConvention::Half);
  out.distance_dimension = distance_from_eigenvalues(out.lambda_m, DistanceConvention::HalfDimension);
  return out;
}

// ---------------------------------------------------------------------------
// Two-parameter metric of the deformed oscillator state
// ---------------------------------------------------------------------------

/// Normal-form parameters (a, c) of the deformed oscillator ground state.
struct NcTwoParamPoint {
  double a = 0.5;
  double c = 0.0;
};

struct NcTwoParamMetric {
  Matrix g;            // 2x2
  double lambda_plus;  // +2/(a² + c²)
  double lambda_minus;
  Matrix q;            // orthogonal, QᵀgQ = diag(λ+, λ−)
  double a_prime;
  double c_prime;
  bool riemannian;     // false: the printed metric is indefinite
};

inline NcTwoParamMetric nc_two_param_metric(const NcTwoParamPoint& pt) {
  const double r2 = pt.a * pt.a + pt.c * pt.c;
  if (!(r2 > 1e-14)) fail(ErrorKind::InvalidArgument, "(a, c) must be nonzero");
  const double r4 = r2 * r2;
  NcTwoParamMetric out;
  out.g = Matrix(2, 2);
  const double diag = 2.0 * (pt.a * pt.a - pt.c * pt.c) / r4;
  const double off = 4.0 * pt.a * pt.c / r4;
  out.g << diag, off, off, -diag;
  out.lambda_plus = 2.0 / r2;
  out.lambda_minus = -2.0 / r2;
  const double r = std::sqrt(r2);
  out.q = Matrix(2, 2);
  out.q << pt.a / r, -pt.c / r, pt.c / r, pt.a / r;
  out.a_prime = (pt.a * pt.a - pt.c * pt.c) / r;
  out.c_prime = 2.0 * pt.a * pt.c / r;
  out.riemannian = false;
  return out;
}

/// [[aI, cσz], [cσz, aI]] in (x1, p1, x2, p2). The lower-right block is taken
/// as +aI so the matrix is positive definite.
inline CovarianceMatrix nc_normal_form_cvm(const NcTwoParamPoint& pt, const NumericPolicy& pol = default_policy) {
  return CovarianceMatrix::make(canonical_two_mode_matrix({pt.a, pt.a, pt.c, -pt.c}), PhaseSpaceOrdering::ModeInterleaved, pol);
}

// ---------------------------------------------------------------------------
// Regularized volume
// ---------------------------------------------------------------------------

struct RegularizerConfig {
  double kappa = 1.0;
  int power = 4;
};

/// Υ(Σ) = exp(−Tr[adj Σ]/κ) · log(1 + (det Σ)^m)
inline double regularizer(const Matrix& sigma, const RegularizerConfig& cfg) {
  if (!(cfg.kappa > 0.0)) fail(ErrorKind::InvalidArgument, "kappa must be positive");
  if (cfg.power < 1) fail(ErrorKind::InvalidArgument, "regularizer power must be a positive integer");
  const double det = sigma.determinant();
  const double tr_adj = det * sigma.inverse().trace();
  return std::exp(-tr_adj / cfg.kappa) * std::log1p(std::pow(det, cfg.power));
}

struct ParameterBox {
  std::array<double, 4> lo{0.5, 0.5, -1.0, -1.0};  // (a, b, c, d)
  std::array<double, 4> hi{2.0, 2.0, 1.0, 1.0};

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < 4; ++k) v *= hi[k] - lo[k];
    return v;
  }
};

enum class VolumeRegion { Quantum, Separable, Entangled };

/// Oracle: spectra of the state and its partial transpose. Explicit: the displayed region formulas.
enum class MembershipRule { Oracle, Explicit };

using MembershipPredicate = std::function<bool(const CanonicalTwoModeParams&)>;

inline MembershipPredicate region_predicate(VolumeRegion region, MembershipRule rule = MembershipRule::Oracle) {
  auto quantum = [rule](const CanonicalTwoModeParams& p) {
    if (rule == MembershipRule::Explicit) {
      try {
        return theta_quantum_contains(p);
      } catch (const Error&) {
        return false;
      }
    }
    const Matrix m = canonical_two_mode_matrix(p);
    if (!(min_eigenvalue_symmetric(m) > default_policy.spd)) return false;
    const auto cvm = CovarianceMatrix::make(m, PhaseSpaceOrdering::ModeInterleaved);
    return rsup_check(cvm, build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved)).valid;
  };
  auto separable = [rule, quantum](const CanonicalTwoModeParams& p) {
    if (!quantum(p)) return false;
    if (rule == MembershipRule::Explicit) {
      try {
        return theta_separable_contains(p);
      } catch (const Error&) {
        return false;
      }
    }
    const auto cvm = canonical_two_mode_cvm(p);
    return ppt_separable(cvm, build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved), Party::B, {1, 1}).separable;
  };
  switch (region) {
    case VolumeRegion::Quantum: return quantum;
    case VolumeRegion::Separable: return separable;
    case VolumeRegion::Entangled:
      return [quantum, separable](const CanonicalTwoModeParams& p) { return quantum(p) && !separable(p); };
  }
  fail(ErrorKind::InvalidArgument, "unknown region");
}

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t members = 0;
  bool zero_measure = false;  // no sample landed in the region
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Monte-Carlo estimate of ∫ Υ(Σ(θ)) sqrt(det g(θ)) dθ over box ∩ region.
/// Samples are drawn from independent substreams of `seed`, one per block of
/// `kBlock` samples, so a prefix of a longer run reproduces a shorter run.
inline VolumeEstimate regularized_volume(const ParameterBox& box, const MembershipPredicate& member,
                                         const RegularizerConfig& reg, std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) fail(ErrorKind::InvalidArgument, "at least 1000 samples are required");
  for (std::size_t k = 0; k < 4; ++k)
    if (!(box.hi[k] > box.lo[k])) fail(ErrorKind::InvalidArgument, "degenerate parameter box");
  constexpr std::size_t kBlock = 1024;

  double sum = 0.0, sum_sq = 0.0;
  std::size_t members = 0;
  std::mt19937_64 rng;
  for (std::size_t i = 0; i < samples; ++i) {
    if (i % kBlock == 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(i / kBlock)};
      rng.seed(seq);
    }
    CanonicalTwoModeParams p;
    std::array<double, 4> u{};
    for (std::size_t k = 0; k < 4; ++k) u[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit_uniform(rng);
    p = {u[0], u[1], u[2], u[3]};
    const bool nonsingular = p.a * p.b - p.c * p.c > 0.0 && p.a * p.b - p.d * p.d > 0.0;
    if (!nonsingular || !member(p)) continue;
    const double detg = fisher_det_two_mode(p);
    if (!(detg > 0.0)) continue;
    const double f = regularizer(canonical_two_mode_matrix(p), reg) * std::sqrt(detg);
    sum += f;
    sum_sq += f * f;
    ++members;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  VolumeEstimate est;
  est.samples = samples;
  est.members = members;
  est.volume = box.volume() * mean;
  est.std_error = box.volume() * std::sqrt(var / n);
  est.zero_measure = members == 0;
  return est;
}

inline VolumeEstimate regularized_volume(const ParameterBox& box, VolumeRegion region, const RegularizerConfig& reg,
                                         std::size_t samples, std::uint64_t seed,
                                         MembershipRule rule = MembershipRule::Oracle) {
  return regularized_volume(box, region_predicate(region, rule), reg, samples, seed);
}

}  // namespace ginfo
