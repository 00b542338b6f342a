#include "qsurge/circuit_builder.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "qsurge/tableau.hpp"

namespace qsurge {
namespace {

// Subset of `cols` whose GF(2) sum equals `target`, tracked through plain
// Gaussian elimination; insertion order biases solutions toward early columns.
std::optional<std::vector<size_t>> gauss_subset(const Bits& target,
                                                const std::vector<const Bits*>& cols) {
  std::vector<Bits> bvec, bsel;
  std::vector<uint32_t> lead;
  auto reduce = [&](Bits v, Bits sel) {
    for (size_t k = 0; k < bvec.size(); ++k)
      if (v.get(lead[k])) {
        v.xor_with(bvec[k]);
        sel.xor_with(bsel[k]);
      }
    return std::pair<Bits, Bits>(std::move(v), std::move(sel));
  };
  for (size_t j = 0; j < cols.size(); ++j) {
    Bits ej;
    ej.flip(j);
    auto [v, s] = reduce(*cols[j], std::move(ej));
    if (v.any()) {
      lead.push_back(v.set_bits().front());
      bvec.push_back(std::move(v));
      bsel.push_back(std::move(s));
    }
  }
  auto [rv, rs] = reduce(target, Bits{});
  if (rv.any()) return std::nullopt;
  std::vector<size_t> out;
  for (uint32_t b : rs.set_bits()) out.push_back(b);
  return out;
}

class CoinSolver {
 public:
  explicit CoinSolver(const SymbolicTableau& sym) : sym_(sym) {}

  // pivot plus an inclusion-minimal pool subset whose combined outcome is
  // coin-free; nullopt when the pool cannot cancel the pivot's randomness.
  std::optional<std::vector<uint32_t>> solve(const std::vector<uint32_t>& pivot,
                                             const std::vector<uint32_t>& pool) const {
    Bits target;
    for (uint32_t r : pivot) target.xor_with(sym_.record(r).coins);
    std::vector<uint32_t> chosen;
    if (target.any()) {
      std::vector<const Bits*> cols;
      cols.reserve(pool.size());
      for (uint32_t r : pool) cols.push_back(&sym_.record(r).coins);
      auto sol = gauss_subset(target, cols);
      if (!sol) return std::nullopt;
      for (size_t j : *sol) chosen.push_back(pool[j]);
      prune(target, chosen);
    }
    std::vector<uint32_t> out = pivot;
    out.insert(out.end(), chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void prune(const Bits& target, std::vector<uint32_t>& chosen) const {
    bool again = true;
    while (again && chosen.size() > 1) {
      again = false;
      for (size_t drop = 0; drop < chosen.size(); ++drop) {
        std::vector<const Bits*> cols;
        std::vector<uint32_t> rest;
        for (size_t j = 0; j < chosen.size(); ++j)
          if (j != drop) {
            cols.push_back(&sym_.record(chosen[j]).coins);
            rest.push_back(chosen[j]);
          }
        auto sol = gauss_subset(target, cols);
        if (sol && sol->size() < chosen.size()) {
          std::vector<uint32_t> next;
          for (size_t j : *sol) next.push_back(rest[j]);
          chosen = std::move(next);
          again = true;
          break;
        }
      }
    }
  }

  const SymbolicTableau& sym_;
};

struct RoundCfg {
  std::vector<const Plaquette*> bulk;
  const std::vector<SeamGadget>* gadgets = nullptr;
  std::vector<uint32_t> bulk_anc, gadget_anc;   // sorted
  std::vector<const Plaquette*> seam_bulk;      // seam plaquettes run as bulk
                                                // (benchmark-protocol merge)
  bool s5 = false;            // crossing slot present (gadget merged rounds)
  bool crossing_bulk = false;  // monolithic layout: right-half gates from seam
                               // ancillas are crossing gates
};

struct SlotPlan {
  std::vector<uint32_t> bcx, bcz;  // bulk locals, flattened pairs
  std::vector<uint32_t> lcx, lcz;  // gadget locals
  std::vector<uint32_t> xcx, xcz;  // crossing gates
  std::vector<std::array<uint32_t, 3>> macros;  // teleported crossing {anc, data, is_cz}
};

class Builder {
 public:
  explicit Builder(const BuildOptions& o) : o_(o) {
    if (o_.d < 3 || o_.d % 2 == 0) throw std::invalid_argument("d must be odd and >= 3");
    if (o_.parity != 0 && o_.parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    d_ = o_.d;
    rounds_ = o_.rounds > 0 ? o_.rounds : d_;
    merged_rounds_ = o_.merged_rounds > 0 ? o_.merged_rounds : d_;
    if (o_.experiment == Experiment::BellPrep && (o_.r_pre < 1 || o_.r_post < 1))
      throw std::invalid_argument("bell prep needs at least one separate round on each side");
    cl_ = o_.noise.mode == Placement::CircuitLevel;
    pheno_ = o_.noise.mode == Placement::Phenomenological;
    setup_layout();
    sym_ = std::make_unique<SymbolicTableau>(nq_, CoinMode::Symbolic);
    solver_ = std::make_unique<CoinSolver>(*sym_);
    final_rec_.assign(n_data_, -1);
  }

  BuiltCircuit run() {
    for (uint32_t q = 0; q < nq_; ++q)
      c_.emit(Op::QubitCoords, {q}, {coords_[q].first, coords_[q].second});
    init_data();
    switch (o_.experiment) {
      case Experiment::PatchMemory:
      case Experiment::Benchmark:
      case Experiment::MergedMemory:
        memory_flow();
        break;
      case Experiment::BellPrep:
        bell_flow();
        break;
    }
    if (!failures_.empty()) {
      std::string msg = "circuit build produced non-deterministic detectors:\n";
      for (const std::string& f : failures_) msg += f + "\n";
      throw std::runtime_error(msg);
    }
    c_.validate();
    if (sym_->num_records() != c_.num_measurements())
      throw std::logic_error("record bookkeeping out of sync with emitted circuit");
    BuiltCircuit b;
    b.opts = o_;
    b.circuit = std::move(c_);
    b.n_qubits = nq_;
    b.n_records = sym_->num_records();
    b.rounds_total =
        static_cast<uint32_t>(T_) + (o_.experiment == Experiment::BellPrep ? 1 : 0);
    b.ebits = ebits_;
    b.detectors = std::move(dets_);
    b.observables = std::move(obs_);
    return b;
  }

 private:
  // ---- setup -------------------------------------------------------------

  void setup_layout() {
    const bool tele = o_.variant == InterfaceVariant::Teleported;
    switch (o_.experiment) {
      case Experiment::PatchMemory: {
        patch_ = make_patch_layout(d_, o_.parity);
        n_data_ = patch_.n_data;
        nq_ = patch_.n_qubits;
        coords_.resize(nq_);
        for (uint32_t q = 0; q < n_data_; ++q)
          coords_[q] = {static_cast<double>(q % d_), static_cast<double>(q / d_)};
        for (const Plaquette& p : patch_.plaquettes) {
          coords_[p.ancilla] = center(p);
          main_.bulk.push_back(&p);
          main_.bulk_anc.push_back(p.ancilla);
        }
        std::sort(main_.bulk_anc.begin(), main_.bulk_anc.end());
        obs_records_ = patch_.logical_z;
        break;
      }
      case Experiment::Benchmark: {
        mono_ = make_merged_layout(d_, o_.parity);
        n_data_ = mono_.n_data;
        nq_ = mono_.n_qubits;
        coords_.resize(nq_);
        data_coords_wide();
        for (const Plaquette& p : mono_.plaquettes) {
          coords_[p.ancilla] = center(p);
          main_.bulk.push_back(&p);
          main_.bulk_anc.push_back(p.ancilla);
        }
        std::sort(main_.bulk_anc.begin(), main_.bulk_anc.end());
        main_.crossing_bulk = true;
        if (tele)
          for (const Plaquette& p : mono_.plaquettes)
            if (p.seam) alloc_cross_pairs(p);
        obs_records_ = mono_.logical_z;
        break;
      }
      case Experiment::MergedMemory:
      case Experiment::BellPrep: {
        surg_ = make_surgery_layout(d_, o_.parity);
        bench_ = o_.experiment == Experiment::BellPrep && o_.protocol == Protocol::Benchmark;
        // The gadget protocol mirrors the right module's maps; the benchmark
        // merge plays the monolithic-layout maps on both halves.
        mirror_right_ = !bench_;
        n_data_ = surg_.n_data;
        nq_ = surg_.n_qubits;
        coords_.resize(nq_);
        data_coords_wide();
        for (const Plaquette& p : surg_.left) coords_[p.ancilla] = center(p);
        for (const Plaquette& p : surg_.right) coords_[p.ancilla] = center(p);
        for (const SeamGadget& g : surg_.gadgets) {
          if (g.kind == StabKind::X) {
            const auto c = center(surg_.merged[g.merged_index]);
            coords_[g.a1] = {c.first - 0.25, c.second};
            coords_[g.a2] = {c.first + 0.25, c.second};
          }
          merged_.gadget_anc.push_back(g.a1);
          merged_.gadget_anc.push_back(g.a2);
        }
        std::sort(merged_.gadget_anc.begin(), merged_.gadget_anc.end());
        for (const Plaquette& p : surg_.merged)
          if (!p.seam) {
            merged_.bulk.push_back(&p);
            merged_.bulk_anc.push_back(p.ancilla);
          }
        std::sort(merged_.bulk_anc.begin(), merged_.bulk_anc.end());
        merged_.gadgets = &surg_.gadgets;
        merged_.s5 = true;
        if (bench_) {
          for (const Plaquette& p : surg_.merged) {
            bmerged_.bulk.push_back(&p);
            bmerged_.bulk_anc.push_back(p.ancilla);
            if (p.seam) bmerged_.seam_bulk.push_back(&p);
          }
          std::sort(bmerged_.bulk_anc.begin(), bmerged_.bulk_anc.end());
          bmerged_.crossing_bulk = true;
        }
        for (const Plaquette& p : surg_.left) {
          sep_.bulk.push_back(&p);
          sep_.bulk_anc.push_back(p.ancilla);
        }
        for (const Plaquette& p : surg_.right) {
          sep_.bulk.push_back(&p);
          sep_.bulk_anc.push_back(p.ancilla);
        }
        std::sort(sep_.bulk_anc.begin(), sep_.bulk_anc.end());
        for (const SeamGadget& g : surg_.gadgets)
          if (g.kind == StabKind::Z) {
            facing_.insert(g.a1);
            facing_.insert(g.a2);
          }
        if (tele && bench_) {
          for (const Plaquette* p : bmerged_.seam_bulk) alloc_cross_pairs(*p);
        } else if (tele) {
          for (const SeamGadget& g : surg_.gadgets) {
            const auto c = center(surg_.merged[g.merged_index]);
            gadget_b_.push_back(
                {alloc_qubit(c.first - 0.25, c.second - 0.25), alloc_qubit(c.first + 0.25, c.second - 0.25)});
          }
        }
        obs_records_ = surg_.merged_logical_z;
        break;
      }
    }
    data_.resize(n_data_);
    for (uint32_t q = 0; q < n_data_; ++q) data_[q] = q;
    T_ = o_.experiment == Experiment::BellPrep ? o_.r_pre + merged_rounds_ + o_.r_post : rounds_;
    // One extra slot: BellPrep appends a noiseless closing round at t = T_.
    gm1_.resize(T_ + 1);
    gm2_.resize(T_ + 1);
  }

  // Entangled-pair qubits backing the teleported variant of one crossing
  // bulk gate per seam plaquette corner on the remote half.
  void alloc_cross_pairs(const Plaquette& p) {
    for (int c = 0; c < 4; ++c) {
      if (p.corner[c] < 0) continue;
      const auto q = static_cast<uint32_t>(p.corner[c]);
      if (static_cast<int>(q % (2 * d_)) < d_) continue;
      const double mx = (center(p).first + coords_[q].first) / 2;
      const double my = (center(p).second + coords_[q].second) / 2;
      cross_b_[{p.ancilla, q}] = {alloc_qubit(mx - 0.25, my), alloc_qubit(mx + 0.25, my)};
    }
  }

  void data_coords_wide() {
    for (uint32_t q = 0; q < n_data_; ++q)
      coords_[q] = {static_cast<double>(q % (2 * d_)), static_cast<double>(q / (2 * d_))};
  }

  uint32_t alloc_qubit(double x, double y) {
    coords_.emplace_back(x, y);
    return nq_++;
  }

  static std::pair<double, double> center(const Plaquette& p) {
    return {p.center.x2 / 2.0, p.center.y2 / 2.0};
  }

  // ---- low-level emission ------------------------------------------------

  double lp() const { return quiet_ ? 0.0 : o_.noise.local(); }
  double lk() const { return quiet_ ? 0.0 : o_.noise.link(); }

  void pn(Op op, const std::vector<uint32_t>& targets, double p, Tag tag) {
    if (p > 0 && !targets.empty()) c_.emit(op, targets, {p}, tag);
  }

  void n1(const std::vector<uint32_t>& qs, Tag tag) {
    if (!pheno_) pn(Op::Depolarize1, qs, lp(), tag);
  }

  void n2(const std::vector<uint32_t>& pairs, double p, Tag tag) {
    if (!pheno_) pn(Op::Depolarize2, pairs, p, tag);
  }

  void u1(Op op, const std::vector<uint32_t>& qs, Tag tag = Tag::None) {
    if (qs.empty()) return;
    c_.emit(op, qs, {}, tag);
    for (uint32_t q : qs) {
      if (op == Op::H)
        sym_->h(q);
      else
        sym_->reset(q);
    }
  }

  void u2(Op op, const std::vector<uint32_t>& pairs, Tag tag) {
    if (pairs.empty()) return;
    c_.emit(op, pairs, {}, tag);
    for (size_t i = 0; i + 1 < pairs.size(); i += 2) {
      if (op == Op::CX)
        sym_->cx(pairs[i], pairs[i + 1]);
      else
        sym_->cz(pairs[i], pairs[i + 1]);
    }
  }

  uint32_t meas1(uint32_t q, int t) {
    c_.emit(Op::M, {q});
    const uint32_t idx = sym_->mz(q);
    rec_[{q, t}] = idx;
    return idx;
  }

  void meas(std::vector<uint32_t> qs, int t) {
    if (qs.empty()) return;
    std::sort(qs.begin(), qs.end());
    c_.emit(Op::M, qs);
    for (uint32_t q : qs) rec_[{q, t}] = sym_->mz(q);
  }

  void idle(const std::vector<uint32_t>& qs) {
    if (cl_) pn(Op::Depolarize1, qs, lp(), Tag::None);
  }

  void idle_rest(const RoundCfg& cfg, const std::set<uint32_t>& gated) {
    if (!cl_) return;
    std::vector<uint32_t> qs;
    for (uint32_t q : data_)
      if (!gated.count(q)) qs.push_back(q);
    for (uint32_t q : cfg.bulk_anc)
      if (!gated.count(q)) qs.push_back(q);
    for (uint32_t q : cfg.gadget_anc)
      if (!gated.count(q)) qs.push_back(q);
    std::sort(qs.begin(), qs.end());
    idle(qs);
  }

  void tick() { c_.emit(Op::Tick); }

  static std::vector<uint32_t> cat(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  // ---- round assembly ----------------------------------------------------

  std::array<SlotPlan, 7> make_plan(const RoundCfg& cfg, HalfRound hr) const {
    std::array<SlotPlan, 7> plan;
    for (const Plaquette* p : cfg.bulk) {
      HalfRound ph = hr;
      if (o_.asymmetric_right && p->module == 1)
        ph = hr == HalfRound::A ? HalfRound::B : HalfRound::A;
      const SlotMap m = bulk_slots(sched_, p->kind, ph, mirror_right_ && p->module == 1);
      for (int c = 0; c < 4; ++c) {
        if (p->corner[c] < 0) continue;
        const auto q = static_cast<uint32_t>(p->corner[c]);
        SlotPlan& sp = plan[m[c]];
        const bool cross =
            cfg.crossing_bulk && p->seam && static_cast<int>(q % (2 * d_)) >= d_;
        if (cross && o_.variant == InterfaceVariant::Teleported) {
          sp.macros.push_back({p->ancilla, q, p->kind == StabKind::Z ? 1u : 0u});
        } else if (cross) {
          auto& v = p->kind == StabKind::X ? sp.xcx : sp.xcz;
          v.push_back(p->ancilla);
          v.push_back(q);
        } else {
          auto& v = p->kind == StabKind::X ? sp.bcx : sp.bcz;
          v.push_back(p->ancilla);
          v.push_back(q);
        }
      }
    }
    if (cfg.gadgets) {
      for (const SeamGadget& g : *cfg.gadgets) {
        const Plaquette& mp = surg_.merged[g.merged_index];
        for (int side = 0; side < 2; ++side) {
          HalfRound sh = hr;
          if (o_.asymmetric_right && side == 1) sh = hr == HalfRound::A ? HalfRound::B : HalfRound::A;
          const SlotMap sm = seam_slots(sched_, g.kind, side, sh);
          const uint32_t anc = side ? g.a2 : g.a1;
          for (int c = 0; c < 4; ++c) {
            if (sm[c] <= 0 || mp.corner[c] < 0) continue;
            auto& v = g.kind == StabKind::X ? plan[sm[c]].lcx : plan[sm[c]].lcz;
            v.push_back(anc);
            v.push_back(static_cast<uint32_t>(mp.corner[c]));
          }
        }
        if (cfg.s5 && o_.variant == InterfaceVariant::Direct) {
          plan[5].xcx.push_back(g.a1);
          plan[5].xcx.push_back(g.a2);
        }
      }
    }
    return plan;
  }

  void emit_round(const RoundCfg& cfg, int t) {
    const HalfRound hr = half_round_for(o_.policy, t);
    const auto plan = make_plan(cfg, hr);
    if (pheno_ && !quiet_) pn(Op::Depolarize1, data_, o_.noise.p_loc, Tag::None);

    // S0
    u1(Op::R, cfg.bulk_anc, Tag::Bulk);
    u1(Op::R, cfg.gadget_anc, Tag::Interface);
    if (cl_) {
      pn(Op::XError, cfg.bulk_anc, lp(), Tag::Bulk);
      pn(Op::XError, cfg.gadget_anc, lp(), Tag::Interface);
    }
    u1(Op::H, cfg.bulk_anc, Tag::Bulk);
    u1(Op::H, cfg.gadget_anc, Tag::Interface);
    n1(cfg.bulk_anc, Tag::Bulk);
    n1(cfg.gadget_anc, Tag::Interface);
    idle(data_);
    tick();

    for (int s = 1; s <= 4; ++s) {
      const SlotPlan& sp = plan[s];
      u2(Op::CX, sp.bcx, Tag::Bulk);
      u2(Op::CZ, sp.bcz, Tag::Bulk);
      u2(Op::CX, sp.lcx, Tag::Interface);
      u2(Op::CZ, sp.lcz, Tag::Interface);
      u2(Op::CX, sp.xcx, Tag::Interface);
      u2(Op::CZ, sp.xcz, Tag::Interface);
      n2(cat(sp.bcx, sp.bcz), lp(), Tag::Bulk);
      n2(cat(sp.lcx, sp.lcz), lp(), Tag::Interface);
      n2(cat(sp.xcx, sp.xcz), lk(), Tag::Interface);
      std::set<uint32_t> gated;
      for (const auto* v : {&sp.bcx, &sp.bcz, &sp.lcx, &sp.lcz, &sp.xcx, &sp.xcz})
        gated.insert(v->begin(), v->end());
      for (const auto& m : sp.macros) remote_gate(m, t, gated);
      idle_rest(cfg, gated);
      tick();
    }

    if (cfg.s5) emit_s5(cfg, plan[5]);
    emit_s6(cfg, t);
  }

  void emit_s5(const RoundCfg& cfg, const SlotPlan& sp) {
    std::set<uint32_t> gated;
    if (o_.variant == InterfaceVariant::Direct) {
      u2(Op::CX, sp.xcx, Tag::Interface);
      n2(sp.xcx, lk(), Tag::Interface);
      gated.insert(sp.xcx.begin(), sp.xcx.end());
    } else {
      // Entangled pairs are prepared noiselessly, degraded by the link
      // channel, then Bell-coupled to the gadget ancillas.
      std::vector<uint32_t> bs, b1s, prep, couple;
      for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
        const auto [b1, b2] = gadget_b_[gi];
        bs.push_back(b1);
        bs.push_back(b2);
        b1s.push_back(b1);
        prep.push_back(b1);
        prep.push_back(b2);
        couple.push_back((*cfg.gadgets)[gi].a1);
        couple.push_back(b1);
        couple.push_back((*cfg.gadgets)[gi].a2);
        couple.push_back(b2);
      }
      u1(Op::R, bs, Tag::Teleport);
      u1(Op::H, b1s, Tag::Teleport);
      u2(Op::CX, prep, Tag::Teleport);
      n2(prep, lk(), Tag::Interface);
      u2(Op::CX, couple, Tag::Interface);
      n2(couple, lp(), Tag::Interface);
      gated.insert(bs.begin(), bs.end());
      for (uint32_t q : cfg.gadget_anc) gated.insert(q);
      ebits_ += static_cast<uint32_t>(cfg.gadgets->size());
    }
    idle_rest(cfg, gated);
    tick();
  }

  void emit_s6(const RoundCfg& cfg, int t) {
    const bool tele = o_.variant == InterfaceVariant::Teleported;
    std::vector<uint32_t> hI, mI = cfg.gadget_anc, mlist = cfg.bulk_anc;
    if (cfg.gadgets) {
      for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
        const SeamGadget& g = (*cfg.gadgets)[gi];
        hI.push_back(g.a1);
        if (tele) {
          hI.push_back(g.a2);
          mI.push_back(gadget_b_[gi][0]);
          mI.push_back(gadget_b_[gi][1]);
        }
      }
      std::sort(hI.begin(), hI.end());
      std::sort(mI.begin(), mI.end());
    }
    u1(Op::H, cfg.bulk_anc, Tag::Bulk);
    u1(Op::H, hI, Tag::Interface);
    n1(cfg.bulk_anc, Tag::Bulk);
    n1(hI, Tag::Interface);
    pn(Op::XError, cfg.bulk_anc, lp(), Tag::Bulk);
    pn(Op::XError, mI, lp(), Tag::Interface);
    mlist.insert(mlist.end(), mI.begin(), mI.end());
    meas(std::move(mlist), t);
    if (cfg.gadgets) {
      for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
        const SeamGadget& g = (*cfg.gadgets)[gi];
        for (uint32_t r : m1_set(g, gi, t)) gm1_[t].push_back(r);
        for (uint32_t r : m2_set(g, gi, t)) gm2_[t].push_back(r);
      }
    }
    for (const Plaquette* p : cfg.seam_bulk) gm1_[t].push_back(rget(p->ancilla, t));
    idle(data_);
    tick();
  }

  void remote_gate(const std::array<uint32_t, 3>& m, int t, std::set<uint32_t>& gated) {
    const uint32_t a = m[0], q = m[1];
    const bool cz = m[2] != 0;
    const auto [b1, b2] = cross_b_.at({a, q});
    u1(Op::R, {b1, b2}, Tag::Teleport);
    u1(Op::H, {b1}, Tag::Teleport);
    u2(Op::CX, {b1, b2}, Tag::Teleport);
    n2({b1, b2}, lk(), Tag::Interface);
    if (cz) {
      u1(Op::H, {q}, Tag::Interface);
      n1({q}, Tag::Interface);
    }
    u2(Op::CX, {a, b1}, Tag::Interface);
    n2({a, b1}, lp(), Tag::Interface);
    pn(Op::XError, {b1}, lp(), Tag::Interface);
    gm2_[t].push_back(meas1(b1, t));
    u2(Op::CX, {b2, q}, Tag::Interface);
    n2({b2, q}, lp(), Tag::Interface);
    u1(Op::H, {b2}, Tag::Interface);
    n1({b2}, Tag::Interface);
    pn(Op::XError, {b2}, lp(), Tag::Interface);
    gm2_[t].push_back(meas1(b2, t));
    if (cz) {
      u1(Op::H, {q}, Tag::Interface);
      n1({q}, Tag::Interface);
    }
    ++ebits_;
    gated.insert(a);
    gated.insert(q);
    gated.insert(b1);
    gated.insert(b2);
  }

  // ---- records and detector assembly ------------------------------------

  uint32_t rget(uint32_t q, int t) const {
    auto it = rec_.find({q, t});
    if (it == rec_.end()) throw std::logic_error("missing measurement record");
    return it->second;
  }

  std::vector<uint32_t> m1_set(const SeamGadget& g, size_t, int t) const {
    if (o_.variant == InterfaceVariant::Direct) return {rget(g.a1, t)};
    return {rget(g.a1, t), rget(g.a2, t)};
  }

  std::vector<uint32_t> m2_set(const SeamGadget& g, size_t gi, int t) const {
    if (o_.variant == InterfaceVariant::Direct) return {rget(g.a2, t)};
    return {rget(gadget_b_[gi][0], t), rget(gadget_b_[gi][1], t)};
  }

  // Seam stabilizer outcome records for round t: the monolithic ancilla under
  // the benchmark protocol, the gadget readings otherwise.
  std::vector<uint32_t> seam_reads(const SeamGadget& g, size_t gi, int t) const {
    if (bench_) return {rget(g.a1, t)};
    return m1_set(g, gi, t);
  }

  // Interface-adjacent records of the given rounds, byproduct halves first so
  // the solver's completions stay local.
  std::vector<uint32_t> pool_rounds(std::initializer_list<int> ts) const {
    const int n = static_cast<int>(gm1_.size());
    std::vector<uint32_t> out;
    for (int t : ts)
      if (t >= 0 && t < n) out.insert(out.end(), gm2_[t].begin(), gm2_[t].end());
    for (int t : ts)
      if (t >= 0 && t < n) out.insert(out.end(), gm1_[t].begin(), gm1_[t].end());
    return out;
  }

  std::vector<uint32_t> all_pool() const {
    std::vector<uint32_t> out;
    for (const auto& v : gm2_) out.insert(out.end(), v.begin(), v.end());
    for (const auto& v : gm1_) out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  void det(std::vector<uint32_t> pivot, std::vector<uint32_t> pool, double x, double y, int t,
           int sector) {
    std::sort(pivot.begin(), pivot.end());
    pivot.erase(std::unique(pivot.begin(), pivot.end()), pivot.end());
    std::set<uint32_t> in(pivot.begin(), pivot.end());
    std::vector<uint32_t> pl;
    for (uint32_t r : pool)
      if (in.insert(r).second) pl.push_back(r);
    auto sol = solver_->solve(pivot, pl);
    if (!sol) {
      failures_.push_back("detector at (" + std::to_string(x) + "," + std::to_string(y) +
                          ",t=" + std::to_string(t) + ") is not deterministic; " +
                          residual_report(pivot, pl));
      sol = pivot;  // placeholder so emission can continue and report every failure
    }
    DetectorDef dd;
    dd.records = std::move(*sol);
    dd.x = x;
    dd.y = y;
    dd.t = t;
    dd.sector = sector;
    for (uint32_t r : dd.records) dd.reference ^= sym_->record(r).constant;
    c_.emit(Op::Detector, dd.records, {x, y, static_cast<double>(t), static_cast<double>(sector)});
    dets_.push_back(std::move(dd));
  }

  // Which coins survive every pool completion, and which records carry them.
  std::string residual_report(const std::vector<uint32_t>& pivot,
                              const std::vector<uint32_t>& pool) const {
    Bits target;
    for (uint32_t r : pivot) target.xor_with(sym_->record(r).coins);
    std::set<uint32_t> skip(pivot.begin(), pivot.end());
    std::vector<uint32_t> wide;
    for (uint32_t r = 0; r < sym_->num_records(); ++r)
      if (!skip.count(r)) wide.push_back(r);
    (void)pool;
    std::string s = "residual coins vs full record span: {";
    // Reduce target by the whole record space to see if *any* completion exists.
    std::vector<const Bits*> cols;
    for (uint32_t r : wide) cols.push_back(&sym_->record(r).coins);
    auto sol = gauss_subset(target, cols);
    if (!sol) {
      s += "none cancels";
    } else {
      s += "solvable with records";
      for (size_t j : *sol) s += " " + std::to_string(wide[j]);
    }
    s += "}; pivot coins:";
    for (uint32_t c : target.set_bits()) {
      s += " c" + std::to_string(c) + "[in";
      int shown = 0;
      for (uint32_t r = 0; r < sym_->num_records() && shown < 6; ++r)
        if (sym_->record(r).coins.get(c)) {
          s += " r" + std::to_string(r);
          ++shown;
        }
      s += "]";
    }
    return s;
  }

  void det(std::vector<uint32_t> pivot, std::vector<uint32_t> pool, const Plaquette& p, int t) {
    const auto [x, y] = center(p);
    det(std::move(pivot), std::move(pool), x, y, t, p.kind == StabKind::Z ? 0 : 1);
  }

  void add_observable(uint32_t index, std::vector<uint32_t> pivot, std::vector<uint32_t> pool) {
    std::sort(pivot.begin(), pivot.end());
    std::set<uint32_t> in(pivot.begin(), pivot.end());
    std::vector<uint32_t> pl;
    for (uint32_t r : pool)
      if (in.insert(r).second) pl.push_back(r);
    auto sol = solver_->solve(pivot, pl);
    if (!sol) {
      // Widen to every record in the circuit before giving up.
      std::vector<uint32_t> wide;
      std::set<uint32_t> in2(pivot.begin(), pivot.end());
      for (uint32_t r = 0; r < sym_->num_records(); ++r)
        if (in2.insert(r).second) wide.push_back(r);
      sol = solver_->solve(pivot, wide);
    }
    if (!sol)
      throw std::runtime_error("observable " + std::to_string(index) + " is not deterministic");
    ObservableDef od;
    od.records = std::move(*sol);
    for (uint32_t r : od.records) od.reference ^= sym_->record(r).constant;
    c_.emit(Op::ObservableInclude, od.records, {static_cast<double>(index)});
    obs_.push_back(std::move(od));
  }

  void bulk_pair_dets(const RoundCfg& cfg, int t) {
    for (const Plaquette* p : cfg.bulk)
      det({rget(p->ancilla, t - 1), rget(p->ancilla, t)}, pool_rounds({t - 1, t}), *p, t);
  }

  void gadget_pair_dets(const RoundCfg& cfg, int t) {
    if (!cfg.gadgets) return;
    for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
      const SeamGadget& g = (*cfg.gadgets)[gi];
      std::vector<uint32_t> pivot = m1_set(g, gi, t - 1);
      for (uint32_t r : m1_set(g, gi, t)) pivot.push_back(r);
      det(std::move(pivot), pool_rounds({t - 1, t}), surg_.merged[g.merged_index], t);
    }
  }

  // ---- experiment flows --------------------------------------------------

  void init_data() {
    u1(Op::R, data_);
    if (cl_) pn(Op::XError, data_, lp(), Tag::None);
    tick();
  }

  void final_mz() {
    pn(Op::XError, data_, lp(), Tag::None);
    c_.emit(Op::M, data_);
    for (uint32_t q : data_) final_rec_[q] = static_cast<int64_t>(sym_->mz(q));
  }

  std::vector<uint32_t> finals(const std::vector<uint32_t>& qs) const {
    std::vector<uint32_t> out;
    for (uint32_t q : qs) {
      if (final_rec_[q] < 0) throw std::logic_error("missing data readout record");
      out.push_back(static_cast<uint32_t>(final_rec_[q]));
    }
    return out;
  }

  void closures(const RoundCfg& cfg, int last) {
    for (const Plaquette* p : cfg.bulk) {
      if (p->kind != StabKind::Z) continue;
      std::vector<uint32_t> pivot = finals(p->support);
      pivot.push_back(rget(p->ancilla, last));
      const auto [x, y] = center(*p);
      det(std::move(pivot), pool_rounds({last}), x, y, T_, 0);
    }
    if (cfg.gadgets) {
      for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
        const SeamGadget& g = (*cfg.gadgets)[gi];
        if (g.kind != StabKind::Z) continue;
        const Plaquette& mp = surg_.merged[g.merged_index];
        std::vector<uint32_t> pivot = finals(mp.support);
        for (uint32_t r : m1_set(g, gi, last)) pivot.push_back(r);
        const auto [x, y] = center(mp);
        det(std::move(pivot), pool_rounds({last}), x, y, T_, 0);
      }
    }
  }

  void memory_flow() {
    const RoundCfg& cfg = main_.bulk.empty() ? merged_ : main_;
    for (int t = 0; t < T_; ++t) {
      emit_round(cfg, t);
      if (t == 0) {
        for (const Plaquette* p : cfg.bulk)
          if (p->kind == StabKind::Z) det({rget(p->ancilla, 0)}, pool_rounds({0}), *p, 0);
        if (cfg.gadgets)
          for (size_t gi = 0; gi < cfg.gadgets->size(); ++gi) {
            const SeamGadget& g = (*cfg.gadgets)[gi];
            if (g.kind == StabKind::Z)
              det(m1_set(g, gi, 0), pool_rounds({0}), surg_.merged[g.merged_index], 0);
          }
      } else {
        bulk_pair_dets(cfg, t);
        gadget_pair_dets(cfg, t);
      }
    }
    final_mz();
    closures(cfg, T_ - 1);
    add_observable(0, finals(obs_records_), all_pool());
  }

  void bell_flow() {
    const int m0 = o_.r_pre;
    const int s0 = m0 + merged_rounds_;
    const RoundCfg& mcfg = bench_ ? bmerged_ : merged_;
    for (int t = 0; t < m0; ++t) {
      emit_round(sep_, t);
      if (t == 0) {
        for (const Plaquette* p : sep_.bulk)
          if (p->kind == StabKind::Z) det({rget(p->ancilla, 0)}, pool_rounds({0}), *p, 0);
      } else {
        bulk_pair_dets(sep_, t);
      }
    }
    for (int t = m0; t < s0; ++t) {
      emit_round(mcfg, t);
      if (t == m0) {
        for (const Plaquette* p : mcfg.bulk) {
          if (p->seam) continue;
          det({rget(p->ancilla, t - 1), rget(p->ancilla, t)}, pool_rounds({t - 1, t}), *p, t);
        }
        // Each facing weight-2 pair continues as the seam plaquette that
        // absorbs it; the fresh seam X checks jointly measure the X logical
        // product and get no detector of their own here.
        for (size_t gi = 0; gi < surg_.gadgets.size(); ++gi) {
          const SeamGadget& g = surg_.gadgets[gi];
          if (g.kind != StabKind::Z) continue;
          std::vector<uint32_t> pivot{rget(g.a1, m0 - 1), rget(g.a2, m0 - 1)};
          for (uint32_t r : seam_reads(g, gi, m0)) pivot.push_back(r);
          det(std::move(pivot), pool_rounds({m0}), surg_.merged[g.merged_index], m0);
        }
      } else {
        bulk_pair_dets(mcfg, t);
        gadget_pair_dets(mcfg, t);
      }
    }
    for (int t = s0; t < T_; ++t) {
      emit_round(sep_, t);
      if (t == s0) {
        for (const Plaquette* p : sep_.bulk) {
          if (facing_.count(p->ancilla)) continue;
          det({rget(p->ancilla, t - 1), rget(p->ancilla, t)}, pool_rounds({t - 1}), *p, t);
        }
        for (size_t gi = 0; gi < surg_.gadgets.size(); ++gi) {
          const SeamGadget& g = surg_.gadgets[gi];
          if (g.kind != StabKind::Z) continue;
          std::vector<uint32_t> pivot = seam_reads(g, gi, s0 - 1);
          pivot.push_back(rget(g.a1, s0));
          pivot.push_back(rget(g.a2, s0));
          det(std::move(pivot), pool_rounds({s0 - 1}), surg_.merged[g.merged_index], s0);
        }
      } else {
        bulk_pair_dets(sep_, t);
      }
    }
    // One noiseless closing round pins both check sectors before the product
    // readouts; without it, noise after a data qubit's last gate into the
    // opposite sector would flip a readout with no detector firing.
    quiet_ = true;
    emit_round(sep_, T_);
    bulk_pair_dets(sep_, T_);
    std::vector<PauliBasis> xb(surg_.xx_support.size(), PauliBasis::X);
    c_.emit_mpp(surg_.xx_support, xb);
    const uint32_t mxx = sym_->mpp(surg_.xx_support, xb);
    std::vector<PauliBasis> zb(surg_.zz_support.size(), PauliBasis::Z);
    c_.emit_mpp(surg_.zz_support, zb);
    const uint32_t mzz = sym_->mpp(surg_.zz_support, zb);
    add_observable(0, {mxx}, all_pool());
    add_observable(1, {mzz}, all_pool());
  }

  // ---- state -------------------------------------------------------------

  BuildOptions o_;
  int d_ = 0, rounds_ = 0, merged_rounds_ = 0, T_ = 0;
  bool cl_ = false, pheno_ = false;
  const InterfaceSchedule& sched_ = frozen_schedule();

  bool mirror_right_ = false;  // right module plays mirrored bulk maps
  bool bench_ = false;         // BellPrep merge runs the benchmark protocol
  bool quiet_ = false;         // noiseless closing round in progress
  PatchLayout patch_;
  MergedLayout mono_;
  SurgeryLayout surg_;
  RoundCfg main_;     // PatchMemory / Benchmark
  RoundCfg merged_;   // gadget-protocol merged rounds (MergedMemory, BellPrep)
  RoundCfg bmerged_;  // benchmark-protocol merged rounds (BellPrep)
  RoundCfg sep_;      // separate rounds (BellPrep)
  std::set<uint32_t> facing_;

  uint32_t n_data_ = 0, nq_ = 0, ebits_ = 0;
  std::vector<uint32_t> data_;
  std::vector<std::pair<double, double>> coords_;
  std::vector<std::array<uint32_t, 2>> gadget_b_;
  std::map<std::pair<uint32_t, uint32_t>, std::array<uint32_t, 2>> cross_b_;
  std::vector<uint32_t> obs_records_;

  std::unique_ptr<SymbolicTableau> sym_;
  std::unique_ptr<CoinSolver> solver_;
  Circuit c_;
  std::map<std::pair<uint32_t, int>, uint32_t> rec_;
  std::vector<int64_t> final_rec_;
  std::vector<std::vector<uint32_t>> gm1_, gm2_;  // per-round gadget records
  std::vector<DetectorDef> dets_;
  std::vector<ObservableDef> obs_;
  std::vector<std::string> failures_;
};

}  // namespace

BuiltCircuit build_circuit(const BuildOptions& o) { return Builder(o).run(); }

}  // namespace qsurge
