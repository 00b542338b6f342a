#include "qsurge/tableau.hpp"

#include <stdexcept>

namespace qsurge {

namespace {

// Phase exponent of i contributed by one qubit when multiplying Pauli
// (x1, z1) onto (x2, z2), following the standard tableau bookkeeping.
int g_phase(int x1, int z1, int x2, int z2) {
  if (!x1 && !z1) return 0;
  if (x1 && z1) return z2 - x2;            // Y
  if (x1) return z2 * (2 * x2 - 1);        // X
  return x2 * (1 - 2 * z2);                // Z
}

}  // namespace

SymbolicTableau::SymbolicTableau(uint32_t n, CoinMode mode, uint64_t seed)
    : n_(n), mode_(mode), rng_(seed) {
  rows_.resize(2 * n);
  const size_t words = (n + 63) / 64;
  for (uint32_t i = 0; i < 2 * n; ++i) {
    rows_[i].x.w.assign(words, 0);
    rows_[i].z.w.assign(words, 0);
  }
  for (uint32_t q = 0; q < n; ++q) {
    rows_[q].x.flip(q);       // destabilizer X_q
    rows_[n + q].z.flip(q);   // stabilizer Z_q (state |0...0>)
  }
}

void SymbolicTableau::h(uint32_t q) {
  for (auto& row : rows_) {
    const bool x = row.x.get(q), z = row.z.get(q);
    if (x && z) row.r ^= 1;
    if (x != z) {
      row.x.flip(q);
      row.z.flip(q);
    }
  }
}

void SymbolicTableau::cx(uint32_t c, uint32_t t) {
  for (auto& row : rows_) {
    const bool xc = row.x.get(c), zc = row.z.get(c);
    const bool xt = row.x.get(t), zt = row.z.get(t);
    if (xc && zt && (xt == zc)) row.r ^= 1;
    if (xc) row.x.flip(t);
    if (zt) row.z.flip(c);
  }
}

void SymbolicTableau::cz(uint32_t a, uint32_t b) {
  h(b);
  cx(a, b);
  h(b);
}

void SymbolicTableau::apply_pauli(uint32_t q, PauliBasis b) {
  for (auto& row : rows_) {
    const bool x = row.x.get(q), z = row.z.get(q);
    switch (b) {
      case PauliBasis::X: row.r ^= z; break;
      case PauliBasis::Z: row.r ^= x; break;
      case PauliBasis::Y: row.r ^= x != z; break;
    }
  }
}

void SymbolicTableau::cond_sign_flip(uint32_t q, bool on_x_content, const BitExpr& e) {
  for (auto& row : rows_) {
    const bool hit = on_x_content ? row.x.get(q) : row.z.get(q);
    if (!hit) continue;
    row.r ^= e.constant;
    row.coins.xor_with(e.coins);
  }
}

SymbolicTableau::Row SymbolicTableau::make_row(const std::vector<uint32_t>& qs,
                                               const std::vector<PauliBasis>& bs) const {
  Row row;
  const size_t words = (n_ + 63) / 64;
  row.x.w.assign(words, 0);
  row.z.w.assign(words, 0);
  for (size_t i = 0; i < qs.size(); ++i) {
    if (qs[i] >= n_) throw std::out_of_range("pauli product target out of range");
    if (bs[i] != PauliBasis::Z) row.x.flip(qs[i]);
    if (bs[i] != PauliBasis::X) row.z.flip(qs[i]);
  }
  return row;
}

bool SymbolicTableau::anticommutes(const Row& a, const Row& p) const {
  uint64_t acc = 0;
  for (size_t i = 0; i < a.x.w.size(); ++i)
    acc ^= (a.x.w[i] & p.z.w[i]) ^ (a.z.w[i] & p.x.w[i]);
  return __builtin_parityll(acc) != 0;
}

void SymbolicTableau::rowsum_into(Row& h, const Row& i) const {
  int phase = 2 * h.r + 2 * i.r;
  for (uint32_t q = 0; q < n_; ++q)
    phase += g_phase(i.x.get(q), i.z.get(q), h.x.get(q), h.z.get(q));
  phase = ((phase % 4) + 4) % 4;
  if (phase != 0 && phase != 2)
    throw std::logic_error("tableau row product is not a real Pauli");
  h.r = static_cast<uint8_t>(phase / 2);
  h.x.xor_with(i.x);
  h.z.xor_with(i.z);
  h.coins.xor_with(i.coins);
}

void SymbolicTableau::assert_valid(const char* where) const {
  for (uint32_t i = 0; i < n_; ++i)
    for (uint32_t j = 0; j < n_; ++j) {
      const bool sa = anticommutes(rows_[n_ + i], rows_[n_ + j]);
      const bool da = anticommutes(rows_[i], rows_[n_ + j]);
      if (sa || da != (i == j))
        throw std::logic_error(std::string("tableau invalid at ") + where + ": rows " +
                               std::to_string(i) + "," + std::to_string(j) +
                               (sa ? " stab-stab anticommute" : " destab-stab wrong"));
    }
}

BitExpr SymbolicTableau::fresh_outcome() {
  BitExpr e;
  if (mode_ == CoinMode::Symbolic) {
    e.coins.flip(ncoins_++);
  } else {
    ++ncoins_;
    e.constant = rng_.next_bit() ? 1 : 0;
  }
  return e;
}

BitExpr SymbolicTableau::measure_row(Row prow) {
  int p = -1;
  for (uint32_t i = n_; i < 2 * n_; ++i) {
    if (anticommutes(rows_[i], prow)) {
      p = static_cast<int>(i);
      break;
    }
  }
  if (p >= 0) {
    // The partner destabilizer is replaced wholesale below, so it is excluded
    // from the update (its product with row p is not a real Pauli anyway).
    for (uint32_t i = 0; i < 2 * n_; ++i)
      if (static_cast<int>(i) != p && i != static_cast<uint32_t>(p) - n_ &&
          anticommutes(rows_[i], prow))
        rowsum_into(rows_[i], rows_[static_cast<uint32_t>(p)]);
    rows_[static_cast<uint32_t>(p) - n_] = rows_[static_cast<uint32_t>(p)];
    BitExpr e = fresh_outcome();
    Row& stab = rows_[static_cast<uint32_t>(p)];
    stab = prow;
    stab.r ^= e.constant;
    stab.coins.xor_with(e.coins);
    return e;
  }
  // Deterministic: rebuild the measured operator from stabilizers selected by
  // the anticommuting destabilizers; the accumulated sign is the outcome.
  Row scratch;
  scratch.x.w.assign(prow.x.w.size(), 0);
  scratch.z.w.assign(prow.z.w.size(), 0);
  for (uint32_t i = 0; i < n_; ++i)
    if (anticommutes(rows_[i], prow)) rowsum_into(scratch, rows_[n_ + i]);
  if (!scratch.x.equal(prow.x) || !scratch.z.equal(prow.z))
    throw std::logic_error("deterministic measurement reconstruction failed");
  BitExpr e;
  e.constant = scratch.r ^ prow.r;
  e.coins = scratch.coins;
  e.coins.xor_with(prow.coins);
  return e;
}

uint32_t SymbolicTableau::mz(uint32_t q) {
  records_.push_back(measure_row(make_row({q}, {PauliBasis::Z})));
  return num_records() - 1;
}

uint32_t SymbolicTableau::mpp(const std::vector<uint32_t>& qs, const std::vector<PauliBasis>& bs) {
  if (qs.size() != bs.size()) throw std::invalid_argument("mpp targets/bases mismatch");
  Row prow = make_row({}, {});
  for (size_t i = 0; i < qs.size(); ++i) rowsum_into(prow, make_row({qs[i]}, {bs[i]}));
  records_.push_back(measure_row(std::move(prow)));
  return num_records() - 1;
}

void SymbolicTableau::reset(uint32_t q) {
  const BitExpr e = measure_row(make_row({q}, {PauliBasis::Z}));
  // Flip to |0> conditioned on the (possibly symbolic) outcome.
  cond_sign_flip(q, /*on_x_content=*/false, e);
}

void SymbolicTableau::run(const Circuit& c) {
  for (const auto& ins : c.instructions) {
    switch (ins.op) {
      case Op::H:
        for (uint32_t q : ins.targets) h(q);
        break;
      case Op::CX:
        for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) cx(ins.targets[i], ins.targets[i + 1]);
        break;
      case Op::CZ:
        for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) cz(ins.targets[i], ins.targets[i + 1]);
        break;
      case Op::R:
        for (uint32_t q : ins.targets) reset(q);
        break;
      case Op::M:
        for (uint32_t q : ins.targets) mz(q);
        break;
      case Op::MPP:
        mpp(ins.targets, ins.bases);
        break;
      case Op::CorrectX:
        cond_sign_flip(ins.targets.at(1), /*on_x_content=*/false, records_.at(ins.targets.at(0)));
        break;
      case Op::CorrectZ:
        cond_sign_flip(ins.targets.at(1), /*on_x_content=*/true, records_.at(ins.targets.at(0)));
        break;
      case Op::XError:
      case Op::YError:
      case Op::ZError:
        // Probability-1 channels are deterministic Paulis (the form injected
        // faults take); sub-unit channels stay out of the stabilizer picture.
        if (ins.args.at(0) >= 1.0)
          for (uint32_t q : ins.targets)
            apply_pauli(q, ins.op == Op::XError   ? PauliBasis::X
                           : ins.op == Op::ZError ? PauliBasis::Z
                                                  : PauliBasis::Y);
        break;
      default:
        break;  // noise, annotations
    }
  }
}

}  // namespace qsurge
