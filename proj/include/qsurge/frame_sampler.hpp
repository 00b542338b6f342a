#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "circuit_builder.hpp"

namespace qsurge {

// Pauli codes used throughout the sampler and the error-model builder:
// bit 0 = X component, bit 1 = Z component (so 1=X, 2=Z, 3=Y); a two-qubit
// Pauli packs the second qubit into bits 2-3. Code 0 is the identity.

// One independent fault location: a single target of DEPOLARIZE1 or
// {X,Y,Z}_ERROR, or one target pair of DEPOLARIZE2. Sites are numbered in
// instruction order, then target order within the instruction.
struct NoiseSite {
  Op op;
  double p;
  uint32_t q0 = 0, q1 = 0;   // q1 used by Depolarize2 only
  uint32_t instruction = 0;  // index into Circuit::instructions
  Tag tag = Tag::None;

  int n_codes() const {
    if (op == Op::Depolarize2) return 15;
    if (op == Op::Depolarize1) return 3;
    return 1;
  }
};

std::vector<NoiseSite> enumerate_sites(const Circuit&);

// Rebuilds the circuit so the chosen site fires the given Pauli with
// probability 1 (code 0 fires nothing). Other noise channels, and the
// remaining targets of the site's own instruction, keep their rates when
// keep_noise is set and are dropped otherwise.
Circuit inject_fault(const Circuit&, uint32_t site, uint8_t pauli, bool keep_noise = false);

// Detection-event signature of a deterministic fault set.
struct FaultSymptom {
  std::vector<uint32_t> detectors;  // ascending indices
  uint64_t observables = 0;         // bit k = observable k flips

  bool operator==(const FaultSymptom&) const = default;
};

// Bit-packed sample output. Shots are stored 64 to a word, detector-major:
// shot s of detector i is bit (s - first_shot) % 64 of
// dets[i * words() + (s - first_shot) / 64]. Unused tail lanes are zero, so
// equal batches are byte-equal. Every bit is a pure function of
// (seed, absolute shot index), never of threading or batch splits.
struct ShotBatch {
  uint64_t n_shots = 0;
  uint32_t n_detectors = 0;
  uint32_t n_observables = 0;
  uint64_t seed = 0;
  uint64_t first_shot = 0;  // absolute index of the first shot (64-aligned)
  std::vector<uint64_t> dets, obs;

  uint64_t words() const { return (n_shots + 63) / 64; }
  bool det(uint64_t shot, uint32_t i) const;
  bool obs_bit(uint64_t shot, uint32_t k) const;
  uint64_t detection_events() const;

  bool operator==(const ShotBatch&) const = default;

  // Packed export: "QSB1 <shots> <dets> <obs>\n" then one row per shot,
  // detectors packed LSB-first, observables starting on a fresh byte.
  void write_packed(std::ostream&) const;
  static ShotBatch read_packed(std::istream&);
  // One row per shot, 0/1 columns d0..d{n-1},o0..; small runs only.
  void write_csv(std::ostream&) const;
};

// Monte Carlo Pauli-frame sampler over the annotated circuit. The packed
// kernel advances 64 shots per pass and parallelizes over words with OpenMP;
// the scalar reference implementation walks one shot at a time and must stay
// bit-identical (both draw the same word-keyed counter-RNG stream).
class FrameSampler {
 public:
  explicit FrameSampler(const Circuit&);
  explicit FrameSampler(const BuiltCircuit& b) : FrameSampler(b.circuit) {}

  uint32_t n_qubits() const { return n_qubits_; }
  uint32_t n_records() const { return n_records_; }
  uint32_t n_detectors() const { return static_cast<uint32_t>(det_records_.size()); }
  uint32_t n_observables() const { return n_obs_; }
  size_t n_sites() const { return sites_.size(); }
  const NoiseSite& site(size_t i) const { return sites_[i]; }
  const std::vector<double>& detector_coords(uint32_t i) const { return det_coords_[i]; }
  const std::vector<uint32_t>& detector_records(uint32_t i) const { return det_records_[i]; }

  // first_shot must be 64-aligned; it offsets the RNG word keys so a long run
  // can be split across workers at word boundaries without changing a bit.
  ShotBatch sample(uint64_t shots, uint64_t seed, uint64_t first_shot = 0,
                   int threads = 0) const;
  ShotBatch sample_reference(uint64_t shots, uint64_t seed, uint64_t first_shot = 0) const;

  // Noise-free propagation of deterministic faults (site, pauli code).
  FaultSymptom symptom(uint32_t site, uint8_t pauli) const;
  FaultSymptom symptom(const std::vector<std::pair<uint32_t, uint8_t>>& faults) const;

  // Symptoms of every possible single fault, site-major: fixed-Pauli channels
  // contribute their one code, depolarizing channels codes 1..n_codes(), in
  // ascending order. 64 faults ride one pass of the packed kernel.
  std::vector<FaultSymptom> all_symptoms(int threads = 0) const;

 private:
  struct POp {
    uint8_t k;
    uint32_t a = 0, b = 0, c = 0;
  };
  struct Mpp {
    uint32_t record;
    std::vector<std::pair<uint32_t, PauliBasis>> terms;
  };
  struct SiteRate {
    double p, fire, log_q;  // fire = 1 - (1-p)^64
  };

  void run_word(uint64_t seed, uint64_t word, uint64_t* x, uint64_t* z, uint64_t* rec) const;
  void realize(uint32_t site, uint64_t seed, uint64_t word, uint64_t m[4]) const;

  uint32_t n_qubits_ = 0, n_records_ = 0, n_obs_ = 0;
  std::vector<POp> ops_;
  std::vector<Mpp> mpps_;
  std::vector<NoiseSite> sites_;
  std::vector<SiteRate> rates_;
  std::vector<std::vector<uint32_t>> det_records_, obs_records_;
  std::vector<std::vector<double>> det_coords_;
};

}  // namespace qsurge
