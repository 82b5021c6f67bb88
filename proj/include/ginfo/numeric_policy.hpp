#pragma once

namespace ginfo {

/// Tolerances shared by every module. Pass a modified copy to override per call.
struct NumericPolicy {
  double symmetry = 1e-12;       // |M - Mᵀ| for symmetric inputs
  double spd = 1e-12;            // minimum eigenvalue for positive definiteness
  double equality = 1e-10;       // generic equality checks
  double pairing = 1e-9;         // pairing of ±iν eigenvalues
  double rsup = 1e-10;           // slack on the min-invariant ≥ 1 threshold
  double singular_det = 1e-14;   // |det Ω| below this is singular
  double transform_det = 1e-12;  // |det S| below this is singular
  double lambda_zero = 1e-10;    // |Λ12c| below this counts as zero
};

inline constexpr NumericPolicy default_policy{};

}  // namespace ginfo
