#include "qsurge/geometry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qsurge {

namespace {

bool row_major_less(const Plaquette& a, const Plaquette& b) {
  if (a.center.y2 != b.center.y2) return a.center.y2 < b.center.y2;
  if (a.center.x2 != b.center.x2) return a.center.x2 < b.center.x2;
  return a.module < b.module;
}

std::vector<uint32_t> grid_row(int y, int x_lo, int x_hi, int grid_w) {
  std::vector<uint32_t> out;
  for (int x = x_lo; x <= x_hi; ++x) out.push_back(static_cast<uint32_t>(y * grid_w + x));
  return out;
}

std::vector<uint32_t> grid_col(int x, int y_lo, int y_hi, int grid_w) {
  std::vector<uint32_t> out;
  for (int y = y_lo; y <= y_hi; ++y) out.push_back(static_cast<uint32_t>(y * grid_w + x));
  return out;
}

}  // namespace

std::vector<Plaquette> rotated_block(int x_lo, int x_hi, int y_lo, int y_hi, int parity,
                                     int grid_w) {
  std::vector<Plaquette> out;
  for (int j = y_lo - 1; j <= y_hi; ++j) {
    for (int i = x_lo - 1; i <= x_hi; ++i) {
      Plaquette p;
      p.center = Pt{2 * i + 1, 2 * j + 1};
      p.kind = (((i + j + parity) % 2 + 2) % 2 == 0) ? StabKind::Z : StabKind::X;
      const std::array<std::pair<int, int>, 4> corners{{
          {i, j + 1},      // NW
          {i + 1, j + 1},  // NE
          {i, j},          // SW
          {i + 1, j},      // SE
      }};
      int present = 0;
      for (int c = 0; c < 4; ++c) {
        auto [x, y] = corners[c];
        if (x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi) {
          p.corner[c] = y * grid_w + x;
          p.support.push_back(static_cast<uint32_t>(y * grid_w + x));
          ++present;
        }
      }
      if (present < 2) continue;
      if (present == 2) {
        const bool vertical = (i == x_lo - 1 || i == x_hi);
        if (vertical ? p.kind != StabKind::Z : p.kind != StabKind::X) continue;
      }
      std::sort(p.support.begin(), p.support.end());
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(), row_major_less);
  return out;
}

int overlap(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  int n = 0;
  auto ia = a.begin();
  for (uint32_t q : b) {
    while (ia != a.end() && *ia < q) ++ia;
    if (ia != a.end() && *ia == q) ++n;
  }
  return n;
}

int commutation_violations(const std::vector<Plaquette>& plaqs) {
  int bad = 0;
  for (size_t i = 0; i < plaqs.size(); ++i)
    for (size_t j = i + 1; j < plaqs.size(); ++j)
      if (plaqs[i].kind != plaqs[j].kind && overlap(plaqs[i].support, plaqs[j].support) % 2 != 0)
        ++bad;
  return bad;
}

PatchLayout make_patch_layout(int d, int parity) {
  if (d < 2 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  PatchLayout lay;
  lay.d = d;
  lay.parity = parity;
  lay.n_data = static_cast<uint32_t>(d * d);
  lay.plaquettes = rotated_block(0, d - 1, 0, d - 1, parity, d);
  for (size_t k = 0; k < lay.plaquettes.size(); ++k)
    lay.plaquettes[k].ancilla = lay.n_data + static_cast<uint32_t>(k);
  lay.n_qubits = lay.n_data + static_cast<uint32_t>(lay.plaquettes.size());
  lay.logical_x = grid_col(0, 0, d - 1, d);
  lay.logical_z = grid_row(0, 0, d - 1, d);
  return lay;
}

MergedLayout make_merged_layout(int d, int parity) {
  if (d < 2 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  MergedLayout lay;
  lay.d = d;
  lay.parity = parity;
  lay.n_data = static_cast<uint32_t>(2 * d * d);
  lay.plaquettes = rotated_block(0, 2 * d - 1, 0, d - 1, parity, 2 * d);
  const int seam_x2 = 2 * d - 1;
  for (size_t k = 0; k < lay.plaquettes.size(); ++k) {
    auto& p = lay.plaquettes[k];
    p.ancilla = lay.n_data + static_cast<uint32_t>(k);
    p.seam = p.center.x2 == seam_x2;
    p.module = (p.seam || p.center.x2 < seam_x2) ? 0 : 1;
  }
  lay.n_qubits = lay.n_data + static_cast<uint32_t>(lay.plaquettes.size());
  lay.logical_x = grid_col(0, 0, d - 1, 2 * d);
  lay.logical_z = grid_row(0, 0, 2 * d - 1, 2 * d);
  return lay;
}

SurgeryLayout make_surgery_layout(int d, int parity) {
  if (d < 2 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");
  SurgeryLayout lay;
  lay.d = d;
  lay.parity = parity;
  const int w = 2 * d;
  const int seam_x2 = 2 * d - 1;
  lay.n_data = static_cast<uint32_t>(w * d);

  lay.left = rotated_block(0, d - 1, 0, d - 1, parity, w);
  lay.right = rotated_block(d, 2 * d - 1, 0, d - 1, parity, w);
  for (auto& p : lay.left) {
    p.module = 0;
    p.seam = p.center.x2 == seam_x2;
  }
  for (auto& p : lay.right) {
    p.module = 1;
    p.seam = p.center.x2 == seam_x2;
  }

  // One shared ancilla numbering across both patches, row-major by center with
  // the left module first where centers coincide (the facing weight-2 checks).
  std::vector<Plaquette*> all;
  for (auto& p : lay.left) all.push_back(&p);
  for (auto& p : lay.right) all.push_back(&p);
  std::sort(all.begin(), all.end(),
            [](const Plaquette* a, const Plaquette* b) { return row_major_less(*a, *b); });
  uint32_t next = lay.n_data;
  for (Plaquette* p : all) p->ancilla = next++;

  std::map<std::pair<Pt, int>, const Plaquette*> by_center;
  for (const auto& p : lay.left) by_center[{p.center, 0}] = &p;
  for (const auto& p : lay.right) by_center[{p.center, 1}] = &p;

  lay.merged = rotated_block(0, 2 * d - 1, 0, d - 1, parity, w);
  for (size_t k = 0; k < lay.merged.size(); ++k) {
    auto& p = lay.merged[k];
    if (p.center.x2 != seam_x2) {
      const int side = p.center.x2 < seam_x2 ? 0 : 1;
      const Plaquette* src = by_center.at({p.center, side});
      p.ancilla = src->ancilla;
      p.module = side;
      continue;
    }
    p.seam = true;
    p.module = 0;
    SeamGadget g;
    g.merged_index = static_cast<uint32_t>(k);
    g.kind = p.kind;
    for (uint32_t q : p.support)
      (static_cast<int>(q % w) < d ? g.left_support : g.right_support).push_back(q);
    if (p.kind == StabKind::Z) {
      // Reuse the facing weight-2 check ancillas as the gadget pair.
      g.a1 = by_center.at({p.center, 0})->ancilla;
      g.a2 = by_center.at({p.center, 1})->ancilla;
    } else {
      g.a1 = next++;
      g.a2 = next++;
    }
    p.ancilla = g.a1;
    lay.gadgets.push_back(std::move(g));
  }
  lay.n_qubits = next;

  lay.logical_x_left = grid_col(0, 0, d - 1, w);
  lay.logical_x_right = grid_col(2 * d - 1, 0, d - 1, w);
  lay.logical_z_left = grid_row(0, 0, d - 1, w);
  lay.logical_z_right = grid_row(0, d, 2 * d - 1, w);
  lay.merged_logical_x = grid_col(0, 0, d - 1, w);
  lay.merged_logical_z = grid_row(0, 0, 2 * d - 1, w);
  lay.xx_support = lay.logical_x_left;
  lay.xx_support.insert(lay.xx_support.end(), lay.logical_x_right.begin(),
                        lay.logical_x_right.end());
  std::sort(lay.xx_support.begin(), lay.xx_support.end());
  lay.zz_support = lay.merged_logical_z;
  return lay;
}

}  // namespace qsurge
