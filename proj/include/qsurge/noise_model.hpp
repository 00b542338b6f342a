#pragma once

namespace qsurge {

// Where noise channels are placed when a circuit is built.
//   CircuitLevel: depolarizing noise after every gate and idle slot, flip
//                 noise after resets and before measurements; crossing gates
//                 and entangled-link preps use p_link instead of p_loc.
//   Phenomenological: one depolarizing channel per data qubit per round plus
//                 a flip before every measurement; no gate or idle noise.
//   InterfaceOnly: p_loc forced to zero, so only crossing / link channels
//                 remain.
enum class Placement { CircuitLevel, Phenomenological, InterfaceOnly };

struct NoiseParams {
  double p_loc = 1e-3;
  double p_link = 1e-3;
  Placement mode = Placement::CircuitLevel;

  double local() const { return mode == Placement::InterfaceOnly ? 0.0 : p_loc; }
  double link() const { return p_link; }
};

inline NoiseParams uniform_noise(double p, Placement mode = Placement::CircuitLevel) {
  return NoiseParams{p, p, mode};
}

// Elevated-link profile: local noise pinned at 0.1%, link noise free.
inline NoiseParams elevated_link_noise(double p_link, Placement mode = Placement::CircuitLevel) {
  return NoiseParams{1e-3, p_link, mode};
}

// Fidelity of a Bell pair subjected to two-qubit depolarizing noise of
// strength p: the identity survives with 1-p and 3 of the 15 non-identity
// Paulis act trivially on the pair.
inline double pair_fidelity(double p) { return 1.0 - 0.8 * p; }
inline double link_error_for_fidelity(double f) { return (1.0 - f) / 0.8; }

}  // namespace qsurge
