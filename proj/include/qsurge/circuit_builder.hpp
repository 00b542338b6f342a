#pragma once

#include <cstdint>
#include <vector>

#include "circuit.hpp"
#include "geometry.hpp"
#include "noise_model.hpp"
#include "schedule.hpp"

namespace qsurge {

// The four experiments the harness knows how to assemble.
//   PatchMemory:  one d x d patch, Z-basis memory.
//   Benchmark:    the d x 2d code run as one monolithic patch; seam plaquettes
//                 are measured by a single left-owned ancilla whose gates into
//                 the right half are crossing gates. Z-basis memory.
//   MergedMemory: the d x 2d code with the seam measured by two-ancilla
//                 gadgets (one crossing gate each). Z-basis memory.
//   BellPrep:     |0>|0> on two patches, merge for a window of rounds (the
//                 fresh seam checks measure X1X2), split, then one noiseless
//                 closing round and noiseless XX / ZZ product measurements
//                 read out both Bell correlations.
enum class Experiment : uint8_t { PatchMemory, Benchmark, MergedMemory, BellPrep };

// Direct: crossing two-qubit gates are applied as gates. Teleported: every
// crossing gate is consumed from a fresh entangled pair with link noise; the
// Pauli byproducts are folded into the detectors, not corrected in-circuit.
enum class InterfaceVariant : uint8_t { Direct, Teleported };

// BellPrep only: how the merge window measures the seam. Bell uses the
// two-ancilla gadgets (one crossing gate each); Benchmark measures the seam
// plaquettes monolithically with single left-owned ancillas (2d-1 crossing
// gates per round). Memory experiments select this via Experiment instead.
enum class Protocol : uint8_t { Bell, Benchmark };

struct BuildOptions {
  int d = 3;
  int parity = 0;
  Experiment experiment = Experiment::BellPrep;
  SeqPolicy policy = SeqPolicy::Alternate;
  InterfaceVariant variant = InterfaceVariant::Direct;
  Protocol protocol = Protocol::Bell;
  int rounds = 0;         // memory experiments; 0 means d
  int merged_rounds = 0;  // BellPrep merge window; 0 means d
  int r_pre = 1, r_post = 1;
  // Diagnostic: the right module plays the opposite half-round, breaking the
  // reflection symmetry of the fault graph about the seam.
  bool asymmetric_right = false;
  NoiseParams noise{};
};

struct DetectorDef {
  std::vector<uint32_t> records;  // absolute record indices, ascending
  double x = 0, y = 0;
  int t = 0;
  int sector = 0;         // 0 = Z-type checks (primal), 1 = X-type (dual)
  uint8_t reference = 0;  // noiseless parity of the record set
};

struct ObservableDef {
  std::vector<uint32_t> records;
  uint8_t reference = 0;
};

struct BuiltCircuit {
  BuildOptions opts;
  Circuit circuit;
  uint32_t n_qubits = 0;
  uint32_t n_records = 0;
  uint32_t rounds_total = 0;
  uint32_t ebits = 0;  // entangled pairs consumed (Teleported variants)
  std::vector<DetectorDef> detectors;
  std::vector<ObservableDef> observables;
};

// Assembles the experiment, co-simulating it symbolically to express every
// measurement outcome as an affine function of fresh random coins. Each
// detector starts from a pivot record set fixed by the protocol; a GF(2)
// solve over a pool of nearby interface records then completes it to a
// deterministic (coin-free) parity and prunes it to an inclusion-minimal one.
// Throws std::runtime_error if any detector or observable cannot be made
// deterministic - that is a wiring bug, never something to paper over.
BuiltCircuit build_circuit(const BuildOptions&);

}  // namespace qsurge
