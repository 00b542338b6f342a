#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "frame_sampler.hpp"

namespace qsurge {

// One propagated fault class. Freshly extracted: a single (site, pauli-code)
// outcome of one noise channel. After merging, the class of all outcomes
// sharing the symptom; probabilities combine as p1(1-p2) + p2(1-p1) and
// `sources` accumulates every contributing (site, code).
struct FaultMechanism {
  double p = 0;
  std::vector<uint32_t> detectors;  // sorted detector ids
  uint64_t observables = 0;         // bit k set = logical observable k flips
  std::vector<std::pair<uint32_t, uint8_t>> sources;

  bool operator==(const FaultMechanism&) const = default;
};

struct DemDetector {
  double x = 0, y = 0, t = 0, sector = 0;  // sector 0 = Z-type check, 1 = X-type
};

struct DetectorErrorModel {
  std::vector<DemDetector> detectors;
  std::vector<FaultMechanism> mechanisms;  // unique symptoms, symptom-sorted

  void to_json(std::ostream&) const;
};

// Exhaustively propagates every single fault of the annotated circuit and
// merges equal-symptom classes. A fault that flips an observable but no
// detector makes the circuit distance zero: that throws, as does (with
// verify_determinism) any detector or observable whose noiseless parity is
// not a constant zero under an independent stabilizer replay.
DetectorErrorModel extract_dem(const Circuit&, int threads = 0, bool verify_determinism = false);

// The stabilizer replay behind verify_determinism, usable on its own.
void verify_deterministic_readout(const Circuit&);

enum class Sector : uint8_t { Primal, Dual };  // primal = Z-type checks

struct GraphEdge {
  uint32_t u = 0;  // local vertex index
  uint32_t v = 0;  // local vertex index, or kBoundary
  double p = 0;
  double weight = 0;  // -ln(p / (1 - p))
  uint64_t obs = 0;
};

struct MatchingGraph {
  static constexpr uint32_t kBoundary = UINT32_MAX;

  Sector sector = Sector::Primal;
  std::vector<uint32_t> det_ids;  // global detector id per local vertex
  std::vector<DemDetector> coords;
  std::vector<GraphEdge> edges;

  std::vector<uint32_t> degrees() const;  // incident edge counts, boundary included
  void to_edge_list(std::ostream&) const;
};

struct SplitGraphs {
  MatchingGraph primal, dual;
  // Mechanisms that could not be decomposed into existing 1- and 2-detector
  // edges; reported with provenance, never silently dropped.
  std::vector<FaultMechanism> suppressed;
};

// Splits the model into the two disconnected matching graphs. Each mechanism
// contributes its Z-type detectors (plus the observables that X-type faults
// flip) to the primal graph and its X-type detectors to the dual graph; a
// part with one detector becomes a boundary edge, with two a bulk edge, and
// larger parts are decomposed over already-present edges or else reported in
// `suppressed`. Mechanisms with p = 0 are dropped.
SplitGraphs split_graphlike(const DetectorErrorModel&);

// True iff every edge whose endpoints all have mirror images across the
// vertical plane x = interface_x is matched by a mirrored edge of equal
// probability and observable mask. Edges reaching vertices without a mirror
// image are outside the symmetric zone and are skipped.
bool graph_symmetry_check(const MatchingGraph&, double interface_x);

// Shape of the space-time diagonal edges (both endpoints real, y and t both
// changing): Parallel = one orientation everywhere, ZigZag = orientation
// alternating with the time layer, Mixed = anything else.
enum class DiagonalPattern : uint8_t { None, Parallel, ZigZag, Mixed };
DiagonalPattern diagonal_pattern(const MatchingGraph&);

}  // namespace qsurge
