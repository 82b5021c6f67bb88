// Walks through the library on the two-party toy state and the coupled oscillator.

#include <cstdio>

#include "ginfo/ginfo.hpp"

using namespace ginfo;

int main() {
  const auto cfg = ToyModelConfig::make(0.125, 0.125);
  std::printf("toy state m = %.4f, n = %.4f, R = %.4f, b = %.4f\n", cfg.m, cfg.n, cfg.radius(), cfg.b());

  const auto spectrum = symplectic_spectrum(toy_cvm(cfg), toy_symplectic_form());
  std::printf("symplectic invariants:");
  for (double v : spectrum.values) std::printf(" %.6f", v);
  std::printf("\n");

  std::printf("\n%8s %14s %10s\n", "theta", "min invariant", "verdict");
  for (double theta : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
    const double lo = deformed_pt_spectrum(cfg.with_deformation(theta, 0.0)).min_invariant;
    std::printf("%8.2f %14.6f %10s\n", theta, lo, lo >= 1.0 ? "separable" : "entangled");
  }
  const auto sweep = figure_sweep(1, 99);
  if (!sweep.crossings.empty()) std::printf("entanglement sets in at theta = %.6f\n", sweep.crossings.front());

  const OscillatorParams osc{1.0, 1.0, 1.0, 2.0, 0.3, 0.2, 1.0};
  const auto ground = solve_ground_state(osc);
  std::printf("\noscillator ground state: L11 = %.6f, L22 = %.6f, L12 = %.6f (%s route)\n", ground.lambda.L11r,
              ground.lambda.L22r, ground.lambda.L12c, to_string(ground.route).c_str());
  const auto cvm = ground_state_cvm(ground.lambda, osc.hbar);
  const auto ppt = ppt_separable(cvm, build_symplectic_form(2, PhaseSpaceOrdering::ModeInterleaved), Party::B, {1, 1});
  std::printf("transpose margin %.6f -> %s\n", ppt.margin, ppt.separable ? "separable" : "entangled");

  const auto a = canonical_two_mode_cvm({1.0, 1.0, 0.3, -0.3});
  const auto b = canonical_two_mode_cvm({1.2, 0.9, 0.0, 0.0});
  std::printf("\ninformation distance between two canonical states: %.6f\n", fr_distance(a, b));
  return 0;
}
