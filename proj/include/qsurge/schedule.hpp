#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace qsurge {

// Each syndrome round runs the same slot structure:
//   S0: ancilla reset + Hadamard            (data idle)
//   S1..S4: local two-qubit gates           (CX for X plaquettes, CZ for Z)
//   S5: crossing CX of the seam gadgets     (merged rounds only; others idle)
//   S6: ancilla Hadamard + measurement      (data idle)
// Rounds come in two half-round variants A and B; the Alternate policy
// interleaves them, Repeat always plays A.

enum class HalfRound : uint8_t { A, B };
enum class SeqPolicy : uint8_t { Repeat, Alternate };

inline HalfRound half_round_for(SeqPolicy pol, int round_index) {
  return (pol == SeqPolicy::Alternate && (round_index & 1)) ? HalfRound::B : HalfRound::A;
}

// Corner -> slot (1..4), 0 where a map does not place a gate.
using SlotMap = std::array<int8_t, 4>;
// Permutation of slots 1..4; index 0 unused.
using SlotPerm = std::array<int8_t, 5>;

// Corner reflections of a slot map. The right module plays the east/west
// mirror of the left module's maps: the two patches are mirror images of each
// other, and the seam gadgets only close deterministically when the gate
// order is symmetric about the interface. Half-round B plays the north/south
// flip of half-round A everywhere: that keeps the hook direction of every
// plaquette safe while reversing the direction in which seam byproducts
// drift, which is what the alternating policy needs to restore the full
// interface distance.
SlotMap mirror_ew(const SlotMap&);
SlotMap flip_ns(const SlotMap&);

// Value form of the same flip on the reference maps below: B swaps slots
// 1<->3 and 2<->4 of every CX layer and 1<->2, 3<->4 of every CZ layer. The
// seam maps use the restriction of the same swaps to the slots they occupy.
inline constexpr SlotPerm kBulkSwapX{0, 3, 4, 1, 2};
inline constexpr SlotPerm kBulkSwapZ{0, 2, 1, 4, 3};

SlotMap apply_perm(const SlotPerm&, const SlotMap&);

struct InterfaceSchedule {
  SlotMap bulk_x{}, bulk_z{};  // left-module half-A maps
  // Seam gadget locals, one map per kind: a1 plays the west corners, a2 the
  // east, and mirrored corners share a slot. The lone weight-2 seam check
  // uses the same map restricted to its present corners.
  SlotMap seam_x{}, seam_z{};

  bool operator==(const InterfaceSchedule&) const = default;
};

SlotMap bulk_slots(const InterfaceSchedule&, StabKind, HalfRound, bool mirrored = false);
// side: 0 = a1 (west corners), 1 = a2 (east corners).
SlotMap seam_slots(const InterfaceSchedule&, StabKind, int side, HalfRound);

// Which reading absorbs the shared byproduct of each adjacent seam-check
// pair: bit 0 for pairs with the Z check north of the X check, bit 1 for the
// reverse. A set bit means the south reading absorbs it (the correlation
// drifts south). A sound schedule has both bits equal, and alternation must
// flip them; chains of interface faults otherwise drift along one diagonal
// and halve the interface distance.
uint8_t seam_drift(const InterfaceSchedule&, HalfRound);

// All seam completions of the reference bulk maps passing audit_schedule, in
// lexicographic order. The static constraints pin the seam maps up to
// chirality and the shared-pair order constraints pin the rest, so this has
// exactly one entry.
std::vector<InterfaceSchedule> enumerate_interface_schedules();

// The shipped schedule.
const InterfaceSchedule& frozen_schedule();

// Human-readable violations; empty when the schedule is sound. Shape checks
// (bulk maps are hook-safe permutations in both half-rounds, seam maps are
// east/west symmetric) plus layout audits on small reference layouts: no
// (slot, qubit) collisions, no shared-pair order violations, and the seam
// drift flips between half-rounds.
std::vector<std::string> audit_schedule(const InterfaceSchedule&);

// Ground-truth audits against one assembled merged round of a concrete
// layout. collision_count is the number of (slot, qubit) conflicts.
// order_violations counts pairs of opposite-kind stabilizer readings sharing
// two data qubits whose CX-vs-CZ order differs between the two qubits; every
// such pair scrambles both readings with a fresh coin instead of moving a
// byproduct onto exactly one of them.
int collision_count(const SurgeryLayout&, const InterfaceSchedule&, HalfRound);
int collision_count(const MergedLayout&, const InterfaceSchedule&, HalfRound);
int order_violations(const SurgeryLayout&, const InterfaceSchedule&, HalfRound);
int order_violations(const MergedLayout&, const InterfaceSchedule&, HalfRound);

}  // namespace qsurge
