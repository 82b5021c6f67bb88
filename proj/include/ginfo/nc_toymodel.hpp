#pragma once

// Symmetric pure bipartite state of two two-mode parties, deformed by a
// Bopp-shift congruence. Separability is read off the partially transposed
// spectrum against the deformed symplectic form.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ginfo/gaussian_state.hpp"
#include "ginfo/symplectic_core.hpp"

namespace ginfo {

inline constexpr PhaseSpaceOrdering kToyOrdering = PhaseSpaceOrdering::PartyBlockXP;
inline constexpr BipartiteSplit kToySplit{2, 2};

struct ToyModelConfig {
  double m = 0.0;
  double n = 0.0;
  double theta = 0.0;
  double eta = 0.0;

  double radius() const { return std::hypot(m, n); }
  double b() const { return (1.0 + radius()) / (1.0 - radius()); }
  double hbar_e() const { return 1.0 + theta * eta / 4.0; }
  /// (1 − θη/4)², the determinant of one party's shift.
  double shift_det_party() const { return (1.0 - theta * eta / 4.0) * (1.0 - theta * eta / 4.0); }

  static ToyModelConfig make(double m, double n, double theta = 0.0, double eta = 0.0) {
    ToyModelConfig c{m, n, theta, eta};
    if (!std::isfinite(m) || !std::isfinite(n) || !std::isfinite(theta) || !std::isfinite(eta))
      fail(ErrorKind::InvalidConfig, "toy-model parameters must be finite");
    if (!(c.radius() < 1.0)) fail(ErrorKind::InvalidConfig, "need sqrt(m² + n²) < 1");
    if (std::abs(1.0 - theta * eta / 4.0) < 1e-12) fail(ErrorKind::SingularShift, "theta*eta = 4");
    return c;
  }

  ToyModelConfig with_deformation(double t, double e) const { return make(m, n, t, e); }
};

inline Matrix pauli_z() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

/// (b/2)[[I, γᵀ], [γ, I]], γ = [[nI, mσz], [mσz, −nI]], each party laid out (x1, x2, p1, p2).
inline CovarianceMatrix toy_cvm(const ToyModelConfig& cfg) {
  const auto c = ToyModelConfig::make(cfg.m, cfg.n, cfg.theta, cfg.eta);
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix gamma(4, 4);
  gamma << c.n * i2, c.m * pauli_z(), c.m * pauli_z(), -c.n * i2;
  Matrix s = Matrix::Identity(8, 8);
  s.block(0, 4, 4, 4) = gamma.transpose();
  s.block(4, 0, 4, 4) = gamma;
  return CovarianceMatrix::make(0.5 * c.b() * s, kToyOrdering);
}

inline SymplecticForm toy_symplectic_form() { return build_symplectic_form(4, kToyOrdering); }

struct BoppShift {
  Matrix s;                     // diag(S_A, S_B)
  SymplecticForm omega_tilde;   // SΩSᵀ
};

/// One party's shift [[I, −(θ/2)J], [(η/2)J, I]] with J = [[0, 1], [−1, 0]].
inline Matrix party_shift(double theta, double eta) {
  const Matrix j = mode_symplectic_block();
  Matrix s = Matrix::Identity(4, 4);
  s.block(0, 2, 2, 2) = -0.5 * theta * j;
  s.block(2, 0, 2, 2) = 0.5 * eta * j;
  return s;
}

inline BoppShift bopp_shift(const ToyModelConfig& cfg) {
  const auto c = ToyModelConfig::make(cfg.m, cfg.n, cfg.theta, cfg.eta);
  Matrix s = Matrix::Zero(8, 8);
  const Matrix sa = party_shift(c.theta, c.eta);
  s.block(0, 0, 4, 4) = sa;
  s.block(4, 4, 4, 4) = sa;
  return {s, congruence_form(s, toy_symplectic_form(), c.hbar_e())};
}

struct DeformedSpectrum {
  std::vector<double> invariants;  // ascending
  double min_invariant;
};

/// Spectrum of 2iΩ̃⁻¹Σ̃′ with Σ̃′ the partial transpose (party B) of SΣSᵀ.
inline DeformedSpectrum deformed_pt_spectrum(const ToyModelConfig& cfg) {
  const auto shift = bopp_shift(cfg);
  const auto shifted = congruence_apply(shift.s, toy_cvm(cfg));
  const auto pt = partial_transpose(shifted, Party::B, kToySplit);
  auto spec = symplectic_spectrum(pt, shift.omega_tilde);
  return {spec.values, spec.min()};
}

/// min invariant − 1; negative means entangled.
inline double separability_margin(const ToyModelConfig& cfg) { return deformed_pt_spectrum(cfg).min_invariant - 1.0; }

// ---------------------------------------------------------------------------
// Closed-form invariants, kept as a cross-check only
// ---------------------------------------------------------------------------

struct LambdaSClosedForm {
  double lambda_s10 = 0.0;
  double lambda_s11 = 0.0;
  double lambda_s12 = 0.0;
  double lambda_s14 = 0.0;
  std::array<double, 4> lambda_s{};  // λ_s1..4
  std::array<double, 4> sigma_s{};   // sqrt(λ_sj)
};

/// Coefficient formulas taken as displayed, including the suspicious 4⁴ term.
inline LambdaSClosedForm lambda_s_closed_form(const ToyModelConfig& cfg) {
  const auto c = ToyModelConfig::make(cfg.m, cfg.n, cfg.theta, cfg.eta);
  const double t = c.theta, e = c.eta, he = c.hbar_e(), he2 = he * he, he4 = he2 * he2;
  const double r2 = c.radius() * c.radius();
  const double dsa = c.shift_det_party();
  const double ds = dsa * dsa;
  const double sum2 = (t + e) * (t + e);
  const double m2 = c.m * c.m, n2 = c.n * c.n;

  LambdaSClosedForm out;
  out.lambda_s10 = (t * t + he2) * (e * e + he2) / ds + (t * e + he2) * r2 / dsa;
  out.lambda_s11 = he4 / (ds * ds) * (sum2 + 4.0 * dsa * r2);
  const double inner = 1.0 + 0.5 * (t * t + e * e) * (t * e + 3.0 * he2) +
                       t * t * e * e / std::pow(4.0, 4) * (30.0 + (4.0 + t * e / 4.0) * (4.0 + t * e / 4.0));
  out.lambda_s12 = he4 / (4.0 * ds * ds) *
                   (16.0 * t * e * ds * (m2 * m2 + n2 * n2) + 16.0 * dsa * inner * r2 + 2.0 * t * e * dsa * m2 * n2 +
                    8.0 * sum2 * (t * t + he2) * (e * e + he2));
  out.lambda_s14 = -sum2 * he4 / (4.0 * ds * ds * ds) * (sum2 + 4.0 * dsa * r2);

  auto root = [&](double x, const char* branch) {
    if (x < 0.0)
      fail(ErrorKind::Domain, std::string("negative argument under the square root in ") + branch +
                                  " (m=" + std::to_string(c.m) + ", n=" + std::to_string(c.n) +
                                  ", theta=" + std::to_string(t) + ", eta=" + std::to_string(e) + ")");
    return std::sqrt(x);
  };
  const double s11 = root(out.lambda_s11, "lambda_s11");
  if (!(s11 > 0.0)) fail(ErrorKind::Domain, "lambda_s11 vanishes; the closed form divides by zero");
  const double corr = out.lambda_s14 / (4.0 * s11);
  const double minus = root(out.lambda_s12 - corr, "lambda_s1/lambda_s2");
  const double plus = root(out.lambda_s12 + corr, "lambda_s3/lambda_s4");
  out.lambda_s = {out.lambda_s10 + 0.5 * s11 + 0.5 * minus, out.lambda_s10 + 0.5 * s11 - 0.5 * minus,
                  out.lambda_s10 - 0.5 * s11 + 0.5 * plus, out.lambda_s10 - 0.5 * s11 - 0.5 * plus};
  for (std::size_t j = 0; j < 4; ++j) out.sigma_s[j] = root(out.lambda_s[j], "sigma_s");
  return out;
}

/// (1 + θ² + R²) − ½√(θ² + 4R²) − ⅛√(32(2 + 3θ²)R² + θ²(32(1 + θ²) − √(θ² + 4R²)))
inline double chi_function(double theta, double radius) {
  const double t2 = theta * theta, r2 = radius * radius;
  const double q = std::sqrt(t2 + 4.0 * r2);
  const double arg = 32.0 * (2.0 + 3.0 * t2) * r2 + t2 * (32.0 * (1.0 + t2) - q);
  if (arg < 0.0) fail(ErrorKind::Domain, "negative argument under the square root in chi");
  return (1.0 + t2 + r2) - 0.5 * q - 0.125 * std::sqrt(arg);
}

struct ClosedFormDeviation {
  double theta = 0.0;
  double eta = 0.0;
  std::optional<LambdaSClosedForm> closed_form;  // empty when a branch failed
  std::string failure;
  std::vector<double> closed_invariants;  // b·σ_sj, ascending
  std::vector<double> oracle_invariants;  // ascending
  double max_relative_deviation = 0.0;
  double min_relative_deviation = 0.0;  // on the smallest invariant
};

/// Compares b·σ_sj with the numerical spectrum at one point.
inline ClosedFormDeviation closed_form_deviation(const ToyModelConfig& cfg) {
  ClosedFormDeviation d;
  d.theta = cfg.theta;
  d.eta = cfg.eta;
  d.oracle_invariants = deformed_pt_spectrum(cfg).invariants;
  try {
    d.closed_form = lambda_s_closed_form(cfg);
  } catch (const Error& e) {
    d.failure = e.what();
    d.max_relative_deviation = std::numeric_limits<double>::infinity();
    d.min_relative_deviation = std::numeric_limits<double>::infinity();
    return d;
  }
  for (double s : d.closed_form->sigma_s) d.closed_invariants.push_back(cfg.b() * s);
  std::sort(d.closed_invariants.begin(), d.closed_invariants.end());
  for (std::size_t j = 0; j < 4; ++j) {
    const double rel = std::abs(d.closed_invariants[j] - d.oracle_invariants[j]) / d.oracle_invariants[j];
    d.max_relative_deviation = std::max(d.max_relative_deviation, rel);
    if (j == 0) d.min_relative_deviation = rel;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
  double theta;
  double min_invariant;
  double margin;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // sorted by θ
  std::vector<double> crossings;       // bisection roots of the margin
  std::vector<std::size_t> crossing_rows;  // index of the first row past each crossing
};

/// Worker count: hardware concurrency, capped by GINFO_NUM_THREADS when set.
inline unsigned sweep_thread_count(std::size_t work) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GINFO_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work)));
}

/// Root of the margin along θ (η fixed) on [lo, hi], assuming a sign change.
inline double bisect_crossing(const ToyModelConfig& base, double lo, double hi, double tol = 1e-6) {
  double flo = separability_margin(base.with_deformation(lo, base.eta));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = separability_margin(base.with_deformation(mid, base.eta));
    if ((fm >= 0.0) == (flo >= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Margin along θ at fixed η. Grid points are evaluated in parallel; the table
/// is the same for any thread count.
inline SweepResult theta_sweep(const ToyModelConfig& base, std::vector<double> grid, double bisect_tol = 1e-6) {
  for (double t : grid)
    if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::InvalidArgument, "sweep grid must lie in (0, 1)");
  std::sort(grid.begin(), grid.end());
  SweepResult out;
  out.rows.resize(grid.size());

  const unsigned workers = sweep_thread_count(grid.size());
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < grid.size(); i += workers) {
            const double mi = deformed_pt_spectrum(base.with_deformation(grid[i], base.eta)).min_invariant;
            out.rows[i] = {grid[i], mi, mi - 1.0};
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if ((out.rows[i - 1].margin >= 0.0) != (out.rows[i].margin >= 0.0)) {
      out.crossings.push_back(bisect_crossing(base, out.rows[i - 1].theta, out.rows[i].theta, bisect_tol));
      out.crossing_rows.push_back(i);
    }
  }
  return out;
}

/// k/(size+1) for k = 1..size.
inline std::vector<double> open_unit_grid(int size) {
  if (size < 1) fail(ErrorKind::InvalidArgument, "grid size must be positive");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(size));
  for (int k = 1; k <= size; ++k) g.push_back(static_cast<double>(k) / (size + 1));
  return g;
}

struct FigurePreset {
  int index;
  double m;
  double n;
};

inline FigurePreset figure_preset(int k) {
  switch (k) {
    case 1: return {1, 0.125, 0.125};
    case 2: return {2, 0.25, 0.25};
    case 3: return {3, 0.0625, 0.0625};
    default: fail(ErrorKind::InvalidArgument, "figure index must be 1, 2 or 3");
  }
}

inline SweepResult figure_sweep(int k, int grid_size, double eta = 0.0) {
  const auto f = figure_preset(k);
  return theta_sweep(ToyModelConfig::make(f.m, f.n, 0.0, eta), open_unit_grid(grid_size));
}

}  // namespace ginfo
