#include "qsurge/schedule.hpp"

#include <algorithm>
#include <map>

namespace qsurge {

SlotMap mirror_ew(const SlotMap& m) { return {m[NE], m[NW], m[SE], m[SW]}; }
SlotMap flip_ns(const SlotMap& m) { return {m[SW], m[SE], m[NW], m[NE]}; }

SlotMap apply_perm(const SlotPerm& p, const SlotMap& m) {
  SlotMap out{};
  for (int c = 0; c < 4; ++c) out[c] = m[c] ? p[m[c]] : 0;
  return out;
}

SlotMap bulk_slots(const InterfaceSchedule& s, StabKind k, HalfRound hr, bool mirrored) {
  SlotMap m = k == StabKind::X ? s.bulk_x : s.bulk_z;
  if (hr == HalfRound::B) m = flip_ns(m);
  return mirrored ? mirror_ew(m) : m;
}

SlotMap seam_slots(const InterfaceSchedule& s, StabKind k, int side, HalfRound hr) {
  SlotMap m = k == StabKind::X ? s.seam_x : s.seam_z;
  if (hr == HalfRound::B) m = flip_ns(m);
  if (side == 0)
    m[NE] = m[SE] = 0;
  else
    m[NW] = m[SW] = 0;
  return m;
}

uint8_t seam_drift(const InterfaceSchedule& s, HalfRound hr) {
  SlotMap x = s.seam_x, z = s.seam_z;
  if (hr == HalfRound::B) {
    x = flip_ns(x);
    z = flip_ns(z);
  }
  uint8_t bits = 0;
  if (z[SW] < x[NW]) bits |= 1;  // Z north of X: CZ first, south (X) reading absorbs
  if (x[SW] < z[NW]) bits |= 2;  // X north of Z: CX first, south (Z) reading absorbs
  return bits;
}

namespace {

bool is_perm(const SlotMap& m) {
  std::array<bool, 5> seen{};
  for (int c = 0; c < 4; ++c) {
    if (m[c] < 1 || m[c] > 4 || seen[m[c]]) return false;
    seen[m[c]] = true;
  }
  return true;
}

int corner_at_slot(const SlotMap& m, int slot) {
  for (int c = 0; c < 4; ++c)
    if (m[c] == slot) return c;
  return -1;
}

bool same_column(int a, int b) {
  auto col = [](int c) { return (c == NW || c == SW) ? 0 : 1; };
  return col(a) == col(b);
}

bool same_row(int a, int b) {
  auto row = [](int c) { return (c == NW || c == NE) ? 0 : 1; };
  return row(a) == row(b);
}

// A fault on the ancilla between the slot-2 and slot-3 gates leaves a
// two-qubit error on the slot-{3,4} corners. It must lie across the
// direction of the matching logical: horizontal for X plaquettes (whose
// logical runs vertically), vertical for Z.
bool hook_safe(const SlotMap& m, StabKind k) {
  const int c3 = corner_at_slot(m, 3), c4 = corner_at_slot(m, 4);
  if (c3 < 0 || c4 < 0) return false;
  return k == StabKind::X ? same_row(c3, c4) : same_column(c3, c4);
}

// One stabilizer reading of an assembled merged round: the local couplings
// that feed a single measured value (both gadget ancillas feed one reading).
struct Reading {
  StabKind kind;
  std::vector<std::pair<uint32_t, int>> gates;  // (qubit, slot), ancillas included
  std::vector<std::pair<uint32_t, int>> data;   // data couplings only
};

void add_corner_gates(Reading& r, const Plaquette& p, const SlotMap& m, uint32_t anc) {
  for (int c = 0; c < 4; ++c) {
    if (m[c] <= 0 || p.corner[c] < 0) continue;
    const auto q = static_cast<uint32_t>(p.corner[c]);
    r.gates.push_back({q, m[c]});
    r.gates.push_back({anc, m[c]});
    r.data.push_back({q, m[c]});
  }
}

std::vector<Reading> merged_readings(const SurgeryLayout& lay, const InterfaceSchedule& s,
                                     HalfRound hr) {
  std::vector<Reading> out;
  std::vector<char> is_gadget(lay.merged.size(), 0);
  for (const auto& g : lay.gadgets) is_gadget[g.merged_index] = 1;
  for (size_t k = 0; k < lay.merged.size(); ++k) {
    const auto& p = lay.merged[k];
    if (is_gadget[k]) continue;
    Reading r{p.kind, {}, {}};
    add_corner_gates(r, p, bulk_slots(s, p.kind, hr, p.module == 1), p.ancilla);
    out.push_back(std::move(r));
  }
  for (const auto& g : lay.gadgets) {
    const auto& p = lay.merged[g.merged_index];
    Reading r{g.kind, {}, {}};
    add_corner_gates(r, p, seam_slots(s, g.kind, 0, hr), g.a1);
    add_corner_gates(r, p, seam_slots(s, g.kind, 1, hr), g.a2);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Reading> mono_readings(const MergedLayout& lay, const InterfaceSchedule& s,
                                   HalfRound hr) {
  std::vector<Reading> out;
  for (const auto& p : lay.plaquettes) {
    Reading r{p.kind, {}, {}};
    add_corner_gates(r, p, bulk_slots(s, p.kind, hr), p.ancilla);
    out.push_back(std::move(r));
  }
  return out;
}

int count_collisions(const std::vector<Reading>& readings) {
  std::array<std::vector<uint32_t>, 5> slots;
  for (const Reading& r : readings)
    for (const auto& [q, slot] : r.gates) slots[slot - 1].push_back(q);
  int bad = 0;
  for (auto& v : slots) {
    std::sort(v.begin(), v.end());
    for (size_t i = 1; i < v.size(); ++i) bad += v[i] == v[i - 1];
  }
  return bad;
}

int count_order_violations(const std::vector<Reading>& readings) {
  int bad = 0;
  for (size_t i = 0; i < readings.size(); ++i) {
    for (size_t j = i + 1; j < readings.size(); ++j) {
      if (readings[i].kind == readings[j].kind) continue;
      const Reading& rx = readings[i].kind == StabKind::X ? readings[i] : readings[j];
      const Reading& rz = readings[i].kind == StabKind::X ? readings[j] : readings[i];
      std::map<uint32_t, int> zslot;
      for (const auto& [q, slot] : rz.data) zslot[q] = slot;
      int first = -1;
      bool violated = false;
      for (const auto& [q, slot] : rx.data) {
        auto it = zslot.find(q);
        if (it == zslot.end()) continue;
        const int bit = slot < it->second ? 1 : 0;
        if (first < 0)
          first = bit;
        else if (bit != first)
          violated = true;
      }
      bad += violated;
    }
  }
  return bad;
}

}  // namespace

int collision_count(const SurgeryLayout& lay, const InterfaceSchedule& s, HalfRound hr) {
  return count_collisions(merged_readings(lay, s, hr));
}

int collision_count(const MergedLayout& lay, const InterfaceSchedule& s, HalfRound hr) {
  return count_collisions(mono_readings(lay, s, hr));
}

int order_violations(const SurgeryLayout& lay, const InterfaceSchedule& s, HalfRound hr) {
  return count_order_violations(merged_readings(lay, s, hr));
}

int order_violations(const MergedLayout& lay, const InterfaceSchedule& s, HalfRound hr) {
  return count_order_violations(mono_readings(lay, s, hr));
}

std::vector<std::string> audit_schedule(const InterfaceSchedule& s) {
  std::vector<std::string> bad;
  if (!is_perm(s.bulk_x) || !is_perm(s.bulk_z)) bad.push_back("bulk maps are not permutations");
  for (const SlotMap* m : {&s.seam_x, &s.seam_z}) {
    if ((*m)[NW] != (*m)[NE] || (*m)[SW] != (*m)[SE])
      bad.push_back("seam map is not symmetric about the interface");
    if ((*m)[NW] == (*m)[SW] || (*m)[NW] < 1 || (*m)[NW] > 4 || (*m)[SW] < 1 || (*m)[SW] > 4)
      bad.push_back("seam map rows must use two distinct slots");
  }
  if (!bad.empty()) return bad;
  for (HalfRound hr : {HalfRound::A, HalfRound::B}) {
    const char* h = hr == HalfRound::A ? "A" : "B";
    if (!hook_safe(bulk_slots(s, StabKind::X, hr), StabKind::X))
      bad.push_back(std::string("X hook unsafe in half-round ") + h);
    if (!hook_safe(bulk_slots(s, StabKind::Z, hr), StabKind::Z))
      bad.push_back(std::string("Z hook unsafe in half-round ") + h);
    const uint8_t drift = seam_drift(s, hr);
    if (drift != 0 && drift != 3)
      bad.push_back(std::string("seam drift incoherent in half-round ") + h);
    for (int d : {3, 5}) {
      for (int parity : {0, 1}) {
        const SurgeryLayout sl = make_surgery_layout(d, parity);
        const MergedLayout ml = make_merged_layout(d, parity);
        const std::string where = " (d=" + std::to_string(d) + ", parity=" +
                                  std::to_string(parity) + ", half-round " + h + ")";
        if (collision_count(sl, s, hr) != 0) bad.push_back("seam slot collision" + where);
        if (collision_count(ml, s, hr) != 0) bad.push_back("bulk slot collision" + where);
        if (order_violations(sl, s, hr) != 0) bad.push_back("seam order violation" + where);
        if (order_violations(ml, s, hr) != 0) bad.push_back("bulk order violation" + where);
      }
    }
  }
  if (seam_drift(s, HalfRound::A) == seam_drift(s, HalfRound::B))
    bad.push_back("seam drift does not flip between half-rounds");
  return bad;
}

std::vector<InterfaceSchedule> enumerate_interface_schedules() {
  std::vector<InterfaceSchedule> out;
  const InterfaceSchedule& ref = frozen_schedule();
  for (int8_t xn = 1; xn <= 4; ++xn)
    for (int8_t xs = 1; xs <= 4; ++xs)
      for (int8_t zn = 1; zn <= 4; ++zn)
        for (int8_t zs = 1; zs <= 4; ++zs) {
          if (xn == xs || zn == zs) continue;
          InterfaceSchedule cand{ref.bulk_x, ref.bulk_z, {xn, xn, xs, xs}, {zn, zn, zs, zs}};
          if (audit_schedule(cand).empty()) out.push_back(cand);
        }
  return out;
}

const InterfaceSchedule& frozen_schedule() {
  // Unique seam completion of the reference bulk maps: the slot statics on
  // the interface columns pin the unordered slot pairs and the shared-pair
  // order constraints against the flanking bulk checks pick the chirality.
  static const InterfaceSchedule s{
      /*bulk_x=*/{1, 2, 3, 4},
      /*bulk_z=*/{1, 3, 2, 4},
      /*seam_x=*/{1, 1, 3, 3},
      /*seam_z=*/{1, 1, 2, 2},
  };
  return s;
}

}  // namespace qsurge
