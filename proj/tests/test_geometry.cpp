#include <doctest.h>

#include <algorithm>
#include <map>
#include <qsurge/geometry.hpp>
#include <set>

using namespace qsurge;

namespace {

using Sup = std::vector<uint32_t>;

const Plaquette* find_at(const std::vector<Plaquette>& ps, int x2, int y2) {
  for (const auto& p : ps)
    if (p.center.x2 == x2 && p.center.y2 == y2) return &p;
  return nullptr;
}

bool commutes(const Sup& a, const Sup& b) { return overlap(a, b) % 2 == 0; }

}  // namespace

TEST_CASE("distance 3 patch matches the hand-checked table") {
  PatchLayout lay = make_patch_layout(3, 0);
  CHECK(lay.n_data == 9);
  CHECK(lay.plaquettes.size() == 8);
  CHECK(lay.n_qubits == 17);

  std::map<std::pair<int, int>, std::pair<StabKind, Sup>> expect{
      {{1, 1}, {StabKind::X, {0, 1, 3, 4}}},   {{3, 3}, {StabKind::X, {4, 5, 7, 8}}},
      {{-1, 3}, {StabKind::X, {3, 6}}},        {{5, 1}, {StabKind::X, {2, 5}}},
      {{3, 1}, {StabKind::Z, {1, 2, 4, 5}}},   {{1, 3}, {StabKind::Z, {3, 4, 6, 7}}},
      {{1, -1}, {StabKind::Z, {0, 1}}},        {{3, 5}, {StabKind::Z, {7, 8}}},
  };
  for (const auto& [center, want] : expect) {
    const Plaquette* p = find_at(lay.plaquettes, center.first, center.second);
    REQUIRE(p != nullptr);
    CHECK(p->kind == want.first);
    CHECK(p->support == want.second);
  }
  CHECK(lay.logical_x == Sup{0, 1, 2});
  CHECK(lay.logical_z == Sup{0, 3, 6});
}

TEST_CASE("patch invariants across distances and parities") {
  for (int d : {3, 5, 7, 9}) {
    for (int parity : {0, 1}) {
      CAPTURE(d);
      CAPTURE(parity);
      PatchLayout lay = make_patch_layout(d, parity);
      CHECK(static_cast<int>(lay.plaquettes.size()) == d * d - 1);
      int nx = 0;
      for (const auto& p : lay.plaquettes) {
        nx += p.kind == StabKind::X;
        CHECK((p.weight() == 2 || p.weight() == 4));
      }
      CHECK(nx == (d * d - 1) / 2);
      CHECK(commutation_violations(lay.plaquettes) == 0);
      for (const auto& p : lay.plaquettes) {
        if (p.kind == StabKind::Z) CHECK(commutes(p.support, lay.logical_x));
        if (p.kind == StabKind::X) CHECK(commutes(p.support, lay.logical_z));
      }
      CHECK(overlap(lay.logical_x, lay.logical_z) % 2 == 1);
      std::set<uint32_t> anc;
      for (const auto& p : lay.plaquettes) anc.insert(p.ancilla);
      CHECK(anc.size() == lay.plaquettes.size());
      CHECK(*anc.begin() == lay.n_data);
    }
  }
}

TEST_CASE("merged layout is the 2d-wide code with a d-plaquette seam") {
  for (int d : {3, 5, 7, 9}) {
    for (int parity : {0, 1}) {
      CAPTURE(d);
      CAPTURE(parity);
      MergedLayout lay = make_merged_layout(d, parity);
      CHECK(static_cast<int>(lay.plaquettes.size()) == 2 * d * d - 1);
      CHECK(commutation_violations(lay.plaquettes) == 0);

      std::vector<const Plaquette*> seam;
      for (const auto& p : lay.plaquettes)
        if (p.seam) seam.push_back(&p);
      CHECK(static_cast<int>(seam.size()) == d);
      int w2 = 0, w4 = 0, crossing_pairs = 0;
      for (const Plaquette* p : seam) {
        CHECK(p->module == 0);
        p->weight() == 2 ? ++w2 : ++w4;
        for (uint32_t q : p->support)
          crossing_pairs += static_cast<int>(q % (2 * d)) >= d;
      }
      CHECK(w2 == 1);
      CHECK(w4 == d - 1);
      CHECK(crossing_pairs == 2 * d - 1);
      // The lone weight-2 seam check sits at the bottom or top end depending
      // on the checkerboard parity.
      const Plaquette* end = nullptr;
      for (const Plaquette* p : seam)
        if (p->weight() == 2) end = p;
      REQUIRE(end != nullptr);
      CHECK(end->kind == StabKind::Z);
      CHECK(end->center.y2 == (parity == (d % 2) ? 2 * d - 1 : -1));
    }
  }
}

TEST_CASE("distance 3 surgery layout matches the hand-checked seam table") {
  SurgeryLayout lay = make_surgery_layout(3, 0);
  CHECK(lay.n_data == 18);
  CHECK(lay.left.size() == 8);
  CHECK(lay.right.size() == 8);
  CHECK(lay.merged.size() == 17);
  CHECK(lay.gadgets.size() == 3);
  CHECK(lay.n_qubits == 18 + 16 + 4);

  const Plaquette* lw2 = find_at(lay.left, 5, 1);
  const Plaquette* rw2 = find_at(lay.right, 5, 1);
  REQUIRE(lw2 != nullptr);
  REQUIRE(rw2 != nullptr);
  CHECK(lw2->kind == StabKind::X);
  CHECK(lw2->support == Sup{2, 8});
  CHECK(rw2->support == Sup{3, 9});
  CHECK(lw2->seam);
  CHECK(rw2->seam);

  // Seam plaquettes bottom to top: Z weight-2, X weight-4, Z weight-4.
  REQUIRE(lay.gadgets.size() == 3);
  const auto& g0 = lay.gadgets[0];
  const auto& g1 = lay.gadgets[1];
  const auto& g2 = lay.gadgets[2];
  CHECK(g0.kind == StabKind::Z);
  CHECK(lay.merged[g0.merged_index].support == Sup{2, 3});
  CHECK(g0.left_support == Sup{2});
  CHECK(g0.right_support == Sup{3});
  CHECK(g1.kind == StabKind::X);
  CHECK(lay.merged[g1.merged_index].support == Sup{2, 3, 8, 9});
  CHECK(g1.a1 == lw2->ancilla);
  CHECK(g1.a2 == rw2->ancilla);
  CHECK(g2.kind == StabKind::Z);
  CHECK(lay.merged[g2.merged_index].support == Sup{8, 9, 14, 15});
  CHECK(g2.left_support == Sup{8, 14});
  CHECK(g2.right_support == Sup{9, 15});

  CHECK(lay.xx_support == Sup{0, 1, 2, 3, 4, 5});
  CHECK(lay.zz_support == Sup{0, 5, 6, 11, 12, 17});
  CHECK(lay.merged_logical_z == Sup{0, 6, 12});
}

TEST_CASE("surgery invariants: mirror image, absorption, logical overlaps") {
  for (int d : {3, 5, 7, 9}) {
    for (int parity : {0, 1}) {
      CAPTURE(d);
      CAPTURE(parity);
      SurgeryLayout lay = make_surgery_layout(d, parity);
      const int w = 2 * d;

      // Right patch is the mirror image of the left patch.
      std::map<std::pair<int, int>, const Plaquette*> right_at;
      for (const auto& p : lay.right) right_at[{p.center.x2, p.center.y2}] = &p;
      for (const auto& p : lay.left) {
        const int mx2 = 2 * (2 * d - 1) - p.center.x2;
        auto it = right_at.find({mx2, p.center.y2});
        REQUIRE(it != right_at.end());
        CHECK(it->second->kind == p.kind);
        Sup mirrored;
        for (uint32_t q : p.support) {
          const int x = static_cast<int>(q % w), y = static_cast<int>(q / w);
          mirrored.push_back(static_cast<uint32_t>(y * w + (2 * d - 1 - x)));
        }
        std::sort(mirrored.begin(), mirrored.end());
        CHECK(it->second->support == mirrored);
      }

      // Each patch is internally valid; the merged code is valid; merging
      // absorbs the two facing weight-2 checks into the seam X plaquettes.
      CHECK(commutation_violations(lay.left) == 0);
      CHECK(commutation_violations(lay.right) == 0);
      CHECK(commutation_violations(lay.merged) == 0);
      for (const auto& g : lay.gadgets) {
        const Plaquette& p = lay.merged[g.merged_index];
        if (p.kind != StabKind::X) continue;
        const Plaquette* lw = find_at(lay.left, p.center.x2, p.center.y2);
        const Plaquette* rw = find_at(lay.right, p.center.x2, p.center.y2);
        REQUIRE(lw != nullptr);
        REQUIRE(rw != nullptr);
        Sup both = lw->support;
        both.insert(both.end(), rw->support.begin(), rw->support.end());
        std::sort(both.begin(), both.end());
        CHECK(p.support == both);
        CHECK(g.left_support == lw->support);
        CHECK(g.right_support == rw->support);
      }

      // Away from the seam the merged stabilizers are exactly the patch
      // stabilizers, ancilla ids included.
      std::map<std::pair<int, int>, const Plaquette*> patch_at;
      for (const auto& p : lay.left)
        if (!p.seam) patch_at[{p.center.x2, p.center.y2}] = &p;
      for (const auto& p : lay.right)
        if (!p.seam) patch_at[{p.center.x2, p.center.y2}] = &p;
      int bulk = 0;
      for (const auto& p : lay.merged) {
        if (p.seam) continue;
        ++bulk;
        auto it = patch_at.find({p.center.x2, p.center.y2});
        REQUIRE(it != patch_at.end());
        CHECK(it->second->kind == p.kind);
        CHECK(it->second->support == p.support);
        CHECK(it->second->ancilla == p.ancilla);
      }
      CHECK(bulk == 2 * d * d - 1 - d);

      // A translated (rather than mirrored) right patch cannot be glued: its
      // checkerboard is offset, and the seam plaquettes stop commuting.
      auto translated = rotated_block(d, 2 * d - 1, 0, d - 1, parity ^ 1, w);
      CHECK(commutation_violations(translated) == 0);  // fine on its own
      std::vector<Plaquette> glued;
      for (const auto& p : lay.left)
        if (!p.seam) glued.push_back(p);
      for (const auto& p : translated)
        if (p.center.x2 != 2 * d - 1) glued.push_back(p);
      for (const auto& g : lay.gadgets) glued.push_back(lay.merged[g.merged_index]);
      CHECK(commutation_violations(glued) > 0);

      // Logical representatives: patch logicals commute with their own
      // stabilizers; the XX readout row is the merged X logical, which
      // overlaps the merged Z logical on exactly one qubit and the two-column
      // ZZ readout support evenly.
      for (const auto& p : lay.left) {
        if (p.kind == StabKind::Z) CHECK(commutes(p.support, lay.logical_x_left));
        if (p.kind == StabKind::X) CHECK(commutes(p.support, lay.logical_z_left));
      }
      for (const auto& p : lay.right) {
        if (p.kind == StabKind::Z) CHECK(commutes(p.support, lay.logical_x_right));
        if (p.kind == StabKind::X) CHECK(commutes(p.support, lay.logical_z_right));
      }
      for (const auto& p : lay.merged) {
        if (p.kind == StabKind::Z) CHECK(commutes(p.support, lay.merged_logical_x));
        if (p.kind == StabKind::X) {
          CHECK(commutes(p.support, lay.merged_logical_z));
          CHECK(commutes(p.support, lay.zz_support));
        }
      }
      CHECK(overlap(lay.xx_support, lay.merged_logical_z) == 1);
      CHECK(overlap(lay.xx_support, lay.zz_support) == 2);
      CHECK(overlap(lay.xx_support, lay.logical_z_left) % 2 == 1);

      // The ZZ readout support equals the product of all Z stabilizers of the
      // merged code: every data qubit in between is covered an even number of
      // times.
      std::map<uint32_t, int> cover;
      for (const auto& p : lay.merged)
        if (p.kind == StabKind::Z)
          for (uint32_t q : p.support) ++cover[q];
      Sup odd_cover;
      for (const auto& [q, n] : cover)
        if (n % 2) odd_cover.push_back(q);
      CHECK(odd_cover == lay.zz_support);
    }
  }
}
