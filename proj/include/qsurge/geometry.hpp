#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qsurge {

// Rotated surface-code geometry. Data qubits sit on integer coordinates,
// stabilizer plaquettes on half-integer centers; everything is stored in
// doubled coordinates so it stays integral (data even, centers odd).

enum class StabKind : uint8_t { X, Z };

struct Pt {
  int x2 = 0, y2 = 0;
  friend auto operator<=>(const Pt&, const Pt&) = default;
};

// Corner slots of a plaquette, looking at the grid with y increasing upward.
enum Corner : int { NW = 0, NE = 1, SW = 2, SE = 3 };

struct Plaquette {
  StabKind kind;
  Pt center;
  std::array<int32_t, 4> corner{-1, -1, -1, -1};  // data id per Corner, -1 if absent
  std::vector<uint32_t> support;                  // present data ids, ascending
  uint32_t ancilla = 0;
  bool seam = false;
  int module = 0;  // which half owns the ancilla (0 = left, 1 = right)

  int weight() const { return static_cast<int>(support.size()); }
};

// All stabilizer plaquettes of a rotated code block whose data qubits occupy
// x in [x_lo, x_hi], y in [y_lo, y_hi] on a grid of width grid_w
// (data id = y * grid_w + x). The checkerboard colors the center at
// (i + 0.5, j + 0.5) Z-type iff (i + j + parity) is even. Vertical block
// boundaries keep the Z-colored weight-2 checks, horizontal boundaries the
// X-colored ones, so the X logical runs vertically and the Z logical
// horizontally.
std::vector<Plaquette> rotated_block(int x_lo, int x_hi, int y_lo, int y_hi, int parity,
                                     int grid_w);

// Number of shared data qubits of two ascending supports.
int overlap(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);

// Pairs of opposite-kind plaquettes sharing an odd number of data qubits
// (a valid stabilizer set has none).
int commutation_violations(const std::vector<Plaquette>& plaqs);

// Single d x d patch: data ids y*d + x, one ancilla per plaquette.
struct PatchLayout {
  int d = 0, parity = 0;
  uint32_t n_data = 0, n_qubits = 0;
  std::vector<Plaquette> plaquettes;
  std::vector<uint32_t> logical_x;  // column x = 0
  std::vector<uint32_t> logical_z;  // row y = 0
};
PatchLayout make_patch_layout(int d, int parity);

// Plain d x 2d memory (the merged code run as a monolithic patch). Seam
// plaquettes straddle the interface column x = d - 0.5; their single ancilla
// is owned by the left module, and every gate touching data at x >= d from a
// left-owned ancilla is a crossing gate.
struct MergedLayout {
  int d = 0, parity = 0;
  uint32_t n_data = 0, n_qubits = 0;
  std::vector<Plaquette> plaquettes;
  std::vector<uint32_t> logical_x;  // column x = 0
  std::vector<uint32_t> logical_z;  // row y = 0, full width
};
MergedLayout make_merged_layout(int d, int parity);

// Two d x d patches plus the seam machinery for lattice surgery. The right
// patch is the mirror image of the left (x -> 2d-1-x); a translated copy
// cannot be glued because the checkerboard only continues across the seam
// under reflection. Data ids live on the common 2d-wide grid. Each seam
// plaquette is measured by a two-ancilla gadget (a1 on the left, a2 on the
// right, one crossing CX between them); at Z-colored seam centers the gadget
// ancillas are the two facing weight-2 check ancillas, which the merged code
// absorbs into a weight-4 plaquette. The product of the fresh X-colored seam
// checks equals the adjacent-column pair X logical product, so merging
// measures X1X2 while the row Z logical product rides through untouched.
struct SeamGadget {
  uint32_t merged_index;  // index into SurgeryLayout::merged
  StabKind kind;
  uint32_t a1, a2;
  std::vector<uint32_t> left_support, right_support;  // data each side, ascending
};

struct SurgeryLayout {
  int d = 0, parity = 0;
  uint32_t n_data = 0, n_qubits = 0;
  std::vector<Plaquette> left, right;  // separate-phase stabilizers, facing w2 included
  std::vector<Plaquette> merged;       // merged-phase stabilizers (d x 2d code)
  std::vector<SeamGadget> gadgets;     // one per seam plaquette, sorted by y
  std::vector<uint32_t> logical_x_left, logical_z_left;    // column 0 / row 0 of left patch
  std::vector<uint32_t> logical_x_right, logical_z_right;  // column 2d-1 / right half of row 0
  std::vector<uint32_t> merged_logical_x;  // column x = 0
  std::vector<uint32_t> merged_logical_z;  // full row y = 0 (= product of patch Z logicals)
  std::vector<uint32_t> xx_support;        // Bell XX readout support = both far columns
  std::vector<uint32_t> zz_support;        // Bell ZZ readout support = full row y = 0
};
SurgeryLayout make_surgery_layout(int d, int parity);

}  // namespace qsurge
