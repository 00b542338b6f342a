#pragma once

#include <cstdint>
#include <vector>

#include "circuit.hpp"
#include "rng.hpp"

namespace qsurge {

struct Bits {
  std::vector<uint64_t> w;

  void ensure(size_t nbits) {
    if (w.size() * 64 < nbits) w.resize((nbits + 63) / 64, 0);
  }
  bool get(size_t i) const { return i / 64 < w.size() && ((w[i / 64] >> (i % 64)) & 1) != 0; }
  void flip(size_t i) {
    ensure(i + 1);
    w[i / 64] ^= 1ull << (i % 64);
  }
  void xor_with(const Bits& o) {
    if (o.w.size() > w.size()) w.resize(o.w.size(), 0);
    for (size_t i = 0; i < o.w.size(); ++i) w[i] ^= o.w[i];
  }
  bool any() const {
    for (uint64_t v : w)
      if (v) return true;
    return false;
  }
  bool equal(const Bits& o) const {
    const size_t n = std::max(w.size(), o.w.size());
    for (size_t i = 0; i < n; ++i)
      if ((i < w.size() ? w[i] : 0) != (i < o.w.size() ? o.w[i] : 0)) return false;
    return true;
  }
  std::vector<uint32_t> set_bits() const {
    std::vector<uint32_t> out;
    for (size_t i = 0; i < w.size(); ++i)
      for (uint64_t v = w[i]; v; v &= v - 1)
        out.push_back(static_cast<uint32_t>(i * 64 + __builtin_ctzll(v)));
    return out;
  }
};

// Affine GF(2) function of the measurement coins: constant ^ (xor of coins).
struct BitExpr {
  uint8_t constant = 0;
  Bits coins;

  void xor_with(const BitExpr& o) {
    constant ^= o.constant;
    coins.xor_with(o.coins);
  }
  bool is_constant() const { return !coins.any(); }
  bool equal(const BitExpr& o) const { return constant == o.constant && coins.equal(o.coins); }
};

enum class CoinMode : uint8_t {
  Symbolic,  // every random outcome becomes a fresh coin variable
  Random,    // random outcomes are drawn from the seeded generator
};

// Stabilizer tableau with destabilizers whose generator signs are affine
// functions of the measurement coins. Every measurement returns the outcome
// as such a function, so any parity of recorded outcomes can be checked for
// determinism (coin-freedom) symbolically.
class SymbolicTableau {
 public:
  explicit SymbolicTableau(uint32_t n, CoinMode mode = CoinMode::Symbolic, uint64_t seed = 1);

  void h(uint32_t q);
  void cx(uint32_t c, uint32_t t);
  void cz(uint32_t a, uint32_t b);
  void reset(uint32_t q);
  uint32_t mz(uint32_t q);  // returns record index
  uint32_t mpp(const std::vector<uint32_t>& qs, const std::vector<PauliBasis>& bs);
  void apply_pauli(uint32_t q, PauliBasis b);

  // Runs gates, resets and measurements; skips noise channels, detectors,
  // observables and annotations. Classically controlled corrections are
  // applied conditioned on the recorded outcome expression.
  void run(const Circuit& c);

  void assert_valid(const char* where) const;  // debug: symplectic structure check

  const BitExpr& record(uint32_t i) const { return records_[i]; }
  uint32_t num_records() const { return static_cast<uint32_t>(records_.size()); }
  uint32_t num_coins() const { return ncoins_; }
  uint32_t num_qubits() const { return n_; }

 private:
  struct Row {
    Bits x, z;
    uint8_t r = 0;  // sign constant
    Bits coins;     // sign coin terms
  };

  Row make_row(const std::vector<uint32_t>& qs, const std::vector<PauliBasis>& bs) const;
  bool anticommutes(const Row& a, const Row& p) const;
  void rowsum_into(Row& h, const Row& i) const;
  BitExpr measure_row(Row prow);
  BitExpr fresh_outcome();
  void cond_sign_flip(uint32_t q, bool on_x_content, const BitExpr& e);

  uint32_t n_;
  CoinMode mode_;
  Xoshiro256ss rng_;
  uint32_t ncoins_ = 0;
  std::vector<Row> rows_;  // [0,n) destabilizers, [n,2n) stabilizers
  std::vector<BitExpr> records_;
};

}  // namespace qsurge
