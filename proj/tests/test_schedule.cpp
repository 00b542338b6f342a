#include <doctest.h>

#include <qsurge/schedule.hpp>

using namespace qsurge;

TEST_CASE("half-round policy") {
  CHECK(half_round_for(SeqPolicy::Repeat, 0) == HalfRound::A);
  CHECK(half_round_for(SeqPolicy::Repeat, 1) == HalfRound::A);
  CHECK(half_round_for(SeqPolicy::Alternate, 0) == HalfRound::A);
  CHECK(half_round_for(SeqPolicy::Alternate, 1) == HalfRound::B);
  CHECK(half_round_for(SeqPolicy::Alternate, 2) == HalfRound::A);
}

TEST_CASE("corner reflections are involutions") {
  const SlotMap m{1, 3, 2, 4};
  CHECK(mirror_ew(mirror_ew(m)) == m);
  CHECK(flip_ns(flip_ns(m)) == m);
  CHECK(mirror_ew(flip_ns(m)) == flip_ns(mirror_ew(m)));
  CHECK(mirror_ew(m) != m);
}

TEST_CASE("half-round B equals the documented slot swaps") {
  const InterfaceSchedule& s = frozen_schedule();
  CHECK(bulk_slots(s, StabKind::X, HalfRound::B) == apply_perm(kBulkSwapX, s.bulk_x));
  CHECK(bulk_slots(s, StabKind::Z, HalfRound::B) == apply_perm(kBulkSwapZ, s.bulk_z));
  // The seam B-rule is the bulk swap restricted to the slots the gadgets use.
  CHECK(flip_ns(s.seam_x) == apply_perm(kBulkSwapX, s.seam_x));
  CHECK(flip_ns(s.seam_z) == apply_perm(kBulkSwapZ, s.seam_z));
  for (const SlotPerm* p : {&kBulkSwapX, &kBulkSwapZ})
    for (int i = 1; i <= 4; ++i) CHECK((*p)[(*p)[i]] == i);
}

TEST_CASE("seam maps are symmetric and sided") {
  const InterfaceSchedule& s = frozen_schedule();
  for (HalfRound hr : {HalfRound::A, HalfRound::B}) {
    for (StabKind k : {StabKind::X, StabKind::Z}) {
      const SlotMap a1 = seam_slots(s, k, 0, hr);
      const SlotMap a2 = seam_slots(s, k, 1, hr);
      CHECK(a1[NE] == 0);
      CHECK(a1[SE] == 0);
      CHECK(a2[NW] == 0);
      CHECK(a2[SW] == 0);
      CHECK(a1[NW] == a2[NE]);
      CHECK(a1[SW] == a2[SE]);
      CHECK(a1[NW] != a1[SW]);
      // Both locals precede the crossing slot.
      CHECK(a1[NW] <= 4);
      CHECK(a1[SW] <= 4);
    }
  }
}

TEST_CASE("seam completion of the reference bulk maps is unique") {
  auto all = enumerate_interface_schedules();
  REQUIRE(all.size() == 1);
  CHECK(all.front() == frozen_schedule());
}

TEST_CASE("frozen schedule passes the full audit") {
  CHECK(audit_schedule(frozen_schedule()).empty());
}

TEST_CASE("byproduct drift is coherent and flips with the half-round") {
  const InterfaceSchedule& s = frozen_schedule();
  const uint8_t a = seam_drift(s, HalfRound::A);
  const uint8_t b = seam_drift(s, HalfRound::B);
  CHECK((a == 0 || a == 3));
  CHECK(b == (a ^ 3));
}

TEST_CASE("no collisions or order violations on concrete layouts") {
  for (int d : {3, 5, 7}) {
    for (int parity : {0, 1}) {
      CAPTURE(d);
      CAPTURE(parity);
      SurgeryLayout sl = make_surgery_layout(d, parity);
      MergedLayout ml = make_merged_layout(d, parity);
      for (HalfRound hr : {HalfRound::A, HalfRound::B}) {
        CHECK(collision_count(sl, frozen_schedule(), hr) == 0);
        CHECK(collision_count(ml, frozen_schedule(), hr) == 0);
        CHECK(order_violations(sl, frozen_schedule(), hr) == 0);
        CHECK(order_violations(ml, frozen_schedule(), hr) == 0);
      }
    }
  }
}

TEST_CASE("the audits reject broken variants") {
  InterfaceSchedule s = frozen_schedule();
  // Opposite chirality: statically collision-free but order-inconsistent
  // against the flanking bulk checks.
  s.seam_x = {3, 3, 1, 1};
  s.seam_z = {2, 2, 1, 1};
  SurgeryLayout sl = make_surgery_layout(3, 0);
  CHECK(collision_count(sl, s, HalfRound::A) == 0);
  CHECK(order_violations(sl, s, HalfRound::A) > 0);
  CHECK(!audit_schedule(s).empty());
  // Slot clash with the flanks.
  s = frozen_schedule();
  s.seam_z = {2, 2, 3, 3};
  CHECK(collision_count(sl, s, HalfRound::A) > 0);
  // Hook through the logical: X map ends on a row instead of a column.
  s = frozen_schedule();
  s.bulk_x = {1, 2, 3, 4};
  CHECK(!audit_schedule(s).empty());
}
