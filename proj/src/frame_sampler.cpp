#include "qsurge/frame_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsurge/rng.hpp"

namespace qsurge {

namespace {

enum K : uint8_t { kH, kCX, kCZ, kR, kM, kMpp, kNoise, kCorrX, kCorrZ };

constexpr uint64_t kNoiseSalt = 0x9d5f3a1c6b42e781ull;

uint8_t one_qubit_code(Op op) {
  switch (op) {
    case Op::XError: return 1;
    case Op::ZError: return 2;
    case Op::YError: return 3;
    default: return 0;  // Depolarize1 draws its code
  }
}

}  // namespace

std::vector<NoiseSite> enumerate_sites(const Circuit& c) {
  std::vector<NoiseSite> sites;
  for (uint32_t ii = 0; ii < c.instructions.size(); ++ii) {
    const Instruction& ins = c.instructions[ii];
    if (!is_noise(ins.op)) continue;
    const double p = ins.args.at(0);
    if (ins.op == Op::Depolarize2) {
      for (size_t t = 0; t + 1 < ins.targets.size(); t += 2)
        sites.push_back({ins.op, p, ins.targets[t], ins.targets[t + 1], ii, ins.tag});
    } else {
      for (uint32_t q : ins.targets) sites.push_back({ins.op, p, q, 0, ii, ins.tag});
    }
  }
  return sites;
}

Circuit inject_fault(const Circuit& c, uint32_t site, uint8_t pauli, bool keep_noise) {
  const std::vector<NoiseSite> sites = enumerate_sites(c);
  if (site >= sites.size()) throw std::out_of_range("inject_fault: no such noise site");
  const NoiseSite& s = sites[site];
  if (pauli > (s.op == Op::Depolarize2 ? 15 : 3))
    throw std::invalid_argument("inject_fault: pauli code out of range for this site");

  Circuit out;
  for (uint32_t ii = 0; ii < c.instructions.size(); ++ii) {
    const Instruction& ins = c.instructions[ii];
    if (!is_noise(ins.op)) {
      out.instructions.push_back(ins);
      continue;
    }
    if (ii != s.instruction) {
      if (keep_noise) out.instructions.push_back(ins);
      continue;
    }
    auto fire = [&](uint32_t q, uint8_t code) {
      if (!code) return;
      const Op op = code == 1 ? Op::XError : code == 2 ? Op::ZError : Op::YError;
      out.emit(op, {q}, {1.0}, ins.tag);
    };
    fire(s.q0, pauli & 3);
    if (s.op == Op::Depolarize2) fire(s.q1, (pauli >> 2) & 3);
    if (keep_noise) {
      Instruction rest = ins;
      auto& t = rest.targets;
      if (s.op == Op::Depolarize2) {
        for (size_t i = 0; i + 1 < t.size(); i += 2)
          if (t[i] == s.q0 && t[i + 1] == s.q1) {
            t.erase(t.begin() + i, t.begin() + i + 2);
            break;
          }
      } else {
        t.erase(std::find(t.begin(), t.end(), s.q0));
      }
      if (!t.empty()) out.instructions.push_back(std::move(rest));
    }
  }
  return out;
}

// ---- ShotBatch ------------------------------------------------------------

bool ShotBatch::det(uint64_t shot, uint32_t i) const {
  const uint64_t s = shot - first_shot;
  return (dets[i * words() + s / 64] >> (s % 64)) & 1;
}

bool ShotBatch::obs_bit(uint64_t shot, uint32_t k) const {
  const uint64_t s = shot - first_shot;
  return (obs[k * words() + s / 64] >> (s % 64)) & 1;
}

uint64_t ShotBatch::detection_events() const {
  uint64_t n = 0;
  for (uint64_t w : dets) n += static_cast<uint64_t>(__builtin_popcountll(w));
  return n;
}

void ShotBatch::write_packed(std::ostream& os) const {
  os << "QSB1 " << n_shots << ' ' << n_detectors << ' ' << n_observables << ' ' << seed << ' '
     << first_shot << '\n';
  const size_t db = (n_detectors + 7) / 8, ob = (n_observables + 7) / 8;
  std::string row(db + ob, '\0');
  for (uint64_t s = 0; s < n_shots; ++s) {
    std::memset(row.data(), 0, row.size());
    for (uint32_t i = 0; i < n_detectors; ++i)
      if (det(first_shot + s, i)) row[i / 8] |= static_cast<char>(1u << (i % 8));
    for (uint32_t k = 0; k < n_observables; ++k)
      if (obs_bit(first_shot + s, k)) row[db + k / 8] |= static_cast<char>(1u << (k % 8));
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

ShotBatch ShotBatch::read_packed(std::istream& is) {
  std::string magic;
  ShotBatch b;
  is >> magic >> b.n_shots >> b.n_detectors >> b.n_observables >> b.seed >> b.first_shot;
  if (magic != "QSB1" || !is) throw std::runtime_error("shot batch: bad header");
  is.ignore(1);  // newline
  const uint64_t W = b.words();
  b.dets.assign(static_cast<size_t>(b.n_detectors) * W, 0);
  b.obs.assign(static_cast<size_t>(b.n_observables) * W, 0);
  const size_t db = (b.n_detectors + 7) / 8, ob = (b.n_observables + 7) / 8;
  std::string row(db + ob, '\0');
  for (uint64_t s = 0; s < b.n_shots; ++s) {
    is.read(row.data(), static_cast<std::streamsize>(row.size()));
    if (!is) throw std::runtime_error("shot batch: truncated rows");
    for (uint32_t i = 0; i < b.n_detectors; ++i)
      if ((row[i / 8] >> (i % 8)) & 1) b.dets[i * W + s / 64] |= 1ull << (s % 64);
    for (uint32_t k = 0; k < b.n_observables; ++k)
      if ((row[db + k / 8] >> (k % 8)) & 1) b.obs[k * W + s / 64] |= 1ull << (s % 64);
  }
  return b;
}

void ShotBatch::write_csv(std::ostream& os) const {
  os << "shot";
  for (uint32_t i = 0; i < n_detectors; ++i) os << ",d" << i;
  for (uint32_t k = 0; k < n_observables; ++k) os << ",o" << k;
  os << '\n';
  for (uint64_t s = 0; s < n_shots; ++s) {
    os << first_shot + s;
    for (uint32_t i = 0; i < n_detectors; ++i) os << ',' << (det(first_shot + s, i) ? '1' : '0');
    for (uint32_t k = 0; k < n_observables; ++k)
      os << ',' << (obs_bit(first_shot + s, k) ? '1' : '0');
    os << '\n';
  }
}

// ---- FrameSampler ---------------------------------------------------------

FrameSampler::FrameSampler(const Circuit& c) {
  n_qubits_ = c.num_qubits();
  sites_ = enumerate_sites(c);
  rates_.reserve(sites_.size());
  for (const NoiseSite& s : sites_) {
    SiteRate r{};
    r.p = s.p;
    r.log_q = std::log1p(-std::min(s.p, 1.0));
    r.fire = -std::expm1(64.0 * r.log_q);
    rates_.push_back(r);
  }

  uint32_t rec = 0;
  std::vector<uint32_t> site_cursor(c.instructions.size() + 1, 0);
  {
    // per-instruction base into sites_ so ops can name their sites
    uint32_t acc = 0;
    for (uint32_t ii = 0; ii < c.instructions.size(); ++ii) {
      site_cursor[ii] = acc;
      const Instruction& ins = c.instructions[ii];
      if (is_noise(ins.op))
        acc += static_cast<uint32_t>(ins.op == Op::Depolarize2 ? ins.targets.size() / 2
                                                               : ins.targets.size());
    }
    site_cursor[c.instructions.size()] = acc;
  }

  for (uint32_t ii = 0; ii < c.instructions.size(); ++ii) {
    const Instruction& ins = c.instructions[ii];
    switch (ins.op) {
      case Op::H:
        for (uint32_t q : ins.targets) ops_.push_back({kH, q});
        break;
      case Op::CX:
      case Op::CZ:
        for (size_t i = 0; i + 1 < ins.targets.size(); i += 2)
          ops_.push_back(
              {ins.op == Op::CX ? uint8_t{kCX} : uint8_t{kCZ}, ins.targets[i], ins.targets[i + 1]});
        break;
      case Op::R:
        for (uint32_t q : ins.targets) ops_.push_back({kR, q});
        break;
      case Op::M:
        for (uint32_t q : ins.targets) ops_.push_back({kM, q, rec++});
        break;
      case Op::MPP: {
        Mpp m;
        m.record = rec++;
        for (size_t i = 0; i < ins.targets.size(); ++i)
          m.terms.emplace_back(ins.targets[i], ins.bases[i]);
        ops_.push_back({kMpp, static_cast<uint32_t>(mpps_.size())});
        mpps_.push_back(std::move(m));
        break;
      }
      case Op::Depolarize1:
      case Op::Depolarize2:
      case Op::XError:
      case Op::YError:
      case Op::ZError: {
        const uint32_t n = site_cursor[ii + 1] - site_cursor[ii];
        for (uint32_t k = 0; k < n; ++k) ops_.push_back({kNoise, site_cursor[ii] + k});
        break;
      }
      case Op::CorrectX:
        ops_.push_back({kCorrX, ins.targets.at(0), ins.targets.at(1)});
        break;
      case Op::CorrectZ:
        ops_.push_back({kCorrZ, ins.targets.at(0), ins.targets.at(1)});
        break;
      case Op::Detector:
        det_records_.push_back(ins.targets);
        det_coords_.push_back(ins.args);
        break;
      case Op::ObservableInclude: {
        const auto k = static_cast<uint32_t>(ins.args.at(0));
        if (k >= obs_records_.size()) obs_records_.resize(k + 1);
        obs_records_[k].insert(obs_records_[k].end(), ins.targets.begin(), ins.targets.end());
        break;
      }
      case Op::QubitCoords:
      case Op::Tick:
        break;
    }
  }
  n_records_ = rec;
  n_obs_ = static_cast<uint32_t>(obs_records_.size());
  for (const auto& d : det_records_)
    for (uint32_t r : d)
      if (r >= n_records_) throw std::runtime_error("detector references a future measurement");
}

void FrameSampler::realize(uint32_t site, uint64_t seed, uint64_t word, uint64_t m[4]) const {
  m[0] = m[1] = m[2] = m[3] = 0;
  const NoiseSite& s = sites_[site];
  const SiteRate& r = rates_[site];
  if (r.p <= 0) return;

  uint64_t ctr = 0;
  auto rnd = [&] { return hash4(seed ^ kNoiseSalt, site, word, ctr++); };

  uint64_t fired = 0;
  if (r.p >= 1) {
    fired = ~0ull;
  } else {
    const double u = u01(rnd());
    if (u >= r.fire) return;
    // First firing lane by the inverse CDF of the truncated geometric; the
    // conditioned uniform u / fire is recycled for it.
    const double v = u / r.fire;
    int lane = static_cast<int>(std::log1p(-v * r.fire) / r.log_q);
    if (lane > 63) lane = 63;
    fired |= 1ull << lane;
    // Remaining lanes are plain Bernoulli(p): geometric gap skipping.
    while (lane < 64) {
      const double g = std::log1p(-u01(rnd())) / r.log_q;
      if (g >= static_cast<double>(64 - lane)) break;
      lane += 1 + static_cast<int>(g);
      if (lane > 63) break;
      fired |= 1ull << lane;
    }
  }

  const uint8_t fixed = one_qubit_code(s.op);
  const uint64_t reject = s.op == Op::Depolarize2 ? 15 : 3;
  for (uint64_t rest = fired; rest;) {
    const int lane = __builtin_ctzll(rest);
    rest &= rest - 1;
    uint8_t code = fixed;
    if (!code) {
      uint64_t draw;
      do {
        draw = rnd() & reject;
      } while (draw == reject);
      code = static_cast<uint8_t>(draw + 1);
    }
    const uint64_t bit = 1ull << lane;
    if (code & 1) m[0] |= bit;
    if (code & 2) m[1] |= bit;
    if (code & 4) m[2] |= bit;
    if (code & 8) m[3] |= bit;
  }
}

void FrameSampler::run_word(uint64_t seed, uint64_t word, uint64_t* x, uint64_t* z,
                            uint64_t* rec) const {
  std::memset(x, 0, n_qubits_ * sizeof(uint64_t));
  std::memset(z, 0, n_qubits_ * sizeof(uint64_t));
  for (const POp& op : ops_) {
    switch (op.k) {
      case kH:
        std::swap(x[op.a], z[op.a]);
        break;
      case kCX:
        x[op.b] ^= x[op.a];
        z[op.a] ^= z[op.b];
        break;
      case kCZ:
        z[op.b] ^= x[op.a];
        z[op.a] ^= x[op.b];
        break;
      case kR:
        x[op.a] = z[op.a] = 0;
        break;
      case kM:
        rec[op.b] = x[op.a];
        z[op.a] = 0;
        break;
      case kMpp: {
        const Mpp& m = mpps_[op.a];
        uint64_t v = 0;
        for (const auto& [q, basis] : m.terms) {
          if (basis != PauliBasis::Z) v ^= z[q];  // X or Y reading flips on Z
          if (basis != PauliBasis::X) v ^= x[q];  // Z or Y reading flips on X
        }
        rec[m.record] = v;
        break;
      }
      case kNoise: {
        const NoiseSite& s = sites_[op.a];
        uint64_t m[4];
        realize(op.a, seed, word, m);
        x[s.q0] ^= m[0];
        z[s.q0] ^= m[1];
        if (s.op == Op::Depolarize2) {
          x[s.q1] ^= m[2];
          z[s.q1] ^= m[3];
        }
        break;
      }
      case kCorrX:
        x[op.b] ^= rec[op.a];
        break;
      case kCorrZ:
        z[op.b] ^= rec[op.a];
        break;
    }
  }
}

ShotBatch FrameSampler::sample(uint64_t shots, uint64_t seed, uint64_t first_shot,
                               int threads) const {
  if (first_shot % 64) throw std::invalid_argument("first_shot must be 64-aligned");
  ShotBatch b;
  b.n_shots = shots;
  b.n_detectors = n_detectors();
  b.n_observables = n_obs_;
  b.seed = seed;
  b.first_shot = first_shot;
  const uint64_t W = b.words();
  b.dets.assign(static_cast<size_t>(b.n_detectors) * W, 0);
  b.obs.assign(static_cast<size_t>(n_obs_) * W, 0);

  const auto body = [&](uint64_t w, uint64_t* x, uint64_t* z, uint64_t* rec) {
    run_word(seed, first_shot / 64 + w, x, z, rec);
    const uint64_t valid = shots - w * 64;
    const uint64_t mask = valid >= 64 ? ~0ull : (1ull << valid) - 1;
    for (uint32_t i = 0; i < b.n_detectors; ++i) {
      uint64_t d = 0;
      for (uint32_t r : det_records_[i]) d ^= rec[r];
      b.dets[i * W + w] = d & mask;
    }
    for (uint32_t k = 0; k < n_obs_; ++k) {
      uint64_t d = 0;
      for (uint32_t r : obs_records_[k]) d ^= rec[r];
      b.obs[k * W + w] = d & mask;
    }
  };

#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
  {
    std::vector<uint64_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
#pragma omp for schedule(static)
    for (int64_t w = 0; w < static_cast<int64_t>(W); ++w)
      body(static_cast<uint64_t>(w), x.data(), z.data(), rec.data());
  }
#else
  (void)threads;
  std::vector<uint64_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
  for (uint64_t w = 0; w < W; ++w) body(w, x.data(), z.data(), rec.data());
#endif
  return b;
}

ShotBatch FrameSampler::sample_reference(uint64_t shots, uint64_t seed,
                                         uint64_t first_shot) const {
  if (first_shot % 64) throw std::invalid_argument("first_shot must be 64-aligned");
  ShotBatch b;
  b.n_shots = shots;
  b.n_detectors = n_detectors();
  b.n_observables = n_obs_;
  b.seed = seed;
  b.first_shot = first_shot;
  const uint64_t W = b.words();
  b.dets.assign(static_cast<size_t>(b.n_detectors) * W, 0);
  b.obs.assign(static_cast<size_t>(n_obs_) * W, 0);

  std::vector<uint8_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
  for (uint64_t s = 0; s < shots; ++s) {
    const uint64_t g = first_shot + s;
    const uint64_t word = g / 64;
    const int lane = static_cast<int>(g % 64);
    std::fill(x.begin(), x.end(), uint8_t{0});
    std::fill(z.begin(), z.end(), uint8_t{0});
    for (const POp& op : ops_) {
      switch (op.k) {
        case kH:
          std::swap(x[op.a], z[op.a]);
          break;
        case kCX:
          x[op.b] ^= x[op.a];
          z[op.a] ^= z[op.b];
          break;
        case kCZ:
          z[op.b] ^= x[op.a];
          z[op.a] ^= x[op.b];
          break;
        case kR:
          x[op.a] = z[op.a] = 0;
          break;
        case kM:
          rec[op.b] = x[op.a];
          z[op.a] = 0;
          break;
        case kMpp: {
          const Mpp& m = mpps_[op.a];
          uint8_t v = 0;
          for (const auto& [q, basis] : m.terms) {
            if (basis != PauliBasis::Z) v ^= z[q];
            if (basis != PauliBasis::X) v ^= x[q];
          }
          rec[m.record] = v;
          break;
        }
        case kNoise: {
          const NoiseSite& st = sites_[op.a];
          uint64_t m[4];
          realize(op.a, seed, word, m);
          x[st.q0] ^= (m[0] >> lane) & 1;
          z[st.q0] ^= (m[1] >> lane) & 1;
          if (st.op == Op::Depolarize2) {
            x[st.q1] ^= (m[2] >> lane) & 1;
            z[st.q1] ^= (m[3] >> lane) & 1;
          }
          break;
        }
        case kCorrX:
          x[op.b] ^= rec[op.a];
          break;
        case kCorrZ:
          z[op.b] ^= rec[op.a];
          break;
      }
    }
    const uint64_t bit = 1ull << (s % 64);
    const uint64_t w = s / 64;
    for (uint32_t i = 0; i < b.n_detectors; ++i) {
      uint8_t d = 0;
      for (uint32_t r : det_records_[i]) d ^= rec[r];
      if (d) b.dets[i * W + w] |= bit;
    }
    for (uint32_t k = 0; k < n_obs_; ++k) {
      uint8_t d = 0;
      for (uint32_t r : obs_records_[k]) d ^= rec[r];
      if (d) b.obs[k * W + w] |= bit;
    }
  }
  return b;
}

FaultSymptom FrameSampler::symptom(uint32_t site, uint8_t pauli) const {
  return symptom(std::vector<std::pair<uint32_t, uint8_t>>{{site, pauli}});
}

std::vector<FaultSymptom> FrameSampler::all_symptoms(int threads) const {
  struct Fault {
    uint32_t site;
    uint8_t code;
  };
  std::vector<Fault> faults;
  for (uint32_t s = 0; s < sites_.size(); ++s) {
    const uint8_t fixed = one_qubit_code(sites_[s].op);
    const int n = sites_[s].n_codes();
    for (int c = 1; c <= n; ++c) faults.push_back({s, fixed ? fixed : static_cast<uint8_t>(c)});
  }
  std::vector<FaultSymptom> out(faults.size());
  const uint64_t nbatch = (faults.size() + 63) / 64;

  // One packed pass per 64 faults; lane l of batch b carries fault b*64+l.
  // Noise sites appear in ascending order along the op stream, and the batch
  // is site-sorted, so a single cursor finds each op's faults.
  const auto body = [&](uint64_t batch, uint64_t* x, uint64_t* z, uint64_t* rec) {
    const size_t base = batch * 64;
    const size_t cnt = std::min<size_t>(64, faults.size() - base);
    std::memset(x, 0, n_qubits_ * sizeof(uint64_t));
    std::memset(z, 0, n_qubits_ * sizeof(uint64_t));
    size_t cur = 0;
    for (const POp& op : ops_) {
      switch (op.k) {
        case kH:
          std::swap(x[op.a], z[op.a]);
          break;
        case kCX:
          x[op.b] ^= x[op.a];
          z[op.a] ^= z[op.b];
          break;
        case kCZ:
          z[op.b] ^= x[op.a];
          z[op.a] ^= x[op.b];
          break;
        case kR:
          x[op.a] = z[op.a] = 0;
          break;
        case kM:
          rec[op.b] = x[op.a];
          z[op.a] = 0;
          break;
        case kMpp: {
          const Mpp& m = mpps_[op.a];
          uint64_t v = 0;
          for (const auto& [q, basis] : m.terms) {
            if (basis != PauliBasis::Z) v ^= z[q];
            if (basis != PauliBasis::X) v ^= x[q];
          }
          rec[m.record] = v;
          break;
        }
        case kNoise: {
          const NoiseSite& st = sites_[op.a];
          while (cur < cnt && faults[base + cur].site < op.a) ++cur;
          for (size_t i = cur; i < cnt && faults[base + i].site == op.a; ++i) {
            const uint64_t bit = 1ull << i;
            const uint8_t code = faults[base + i].code;
            if (code & 1) x[st.q0] ^= bit;
            if (code & 2) z[st.q0] ^= bit;
            if (st.op == Op::Depolarize2) {
              if (code & 4) x[st.q1] ^= bit;
              if (code & 8) z[st.q1] ^= bit;
            }
          }
          break;
        }
        case kCorrX:
          x[op.b] ^= rec[op.a];
          break;
        case kCorrZ:
          z[op.b] ^= rec[op.a];
          break;
      }
    }
    for (uint32_t i = 0; i < det_records_.size(); ++i) {
      uint64_t d = 0;
      for (uint32_t r : det_records_[i]) d ^= rec[r];
      for (uint64_t v = d; v; v &= v - 1)
        out[base + __builtin_ctzll(v)].detectors.push_back(i);
    }
    for (uint32_t k = 0; k < n_obs_; ++k) {
      uint64_t d = 0;
      for (uint32_t r : obs_records_[k]) d ^= rec[r];
      for (uint64_t v = d; v; v &= v - 1) out[base + __builtin_ctzll(v)].observables |= 1ull << k;
    }
  };

#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
  {
    std::vector<uint64_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
#pragma omp for schedule(static)
    for (int64_t b = 0; b < static_cast<int64_t>(nbatch); ++b)
      body(static_cast<uint64_t>(b), x.data(), z.data(), rec.data());
  }
#else
  (void)threads;
  std::vector<uint64_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
  for (uint64_t b = 0; b < nbatch; ++b) body(b, x.data(), z.data(), rec.data());
#endif
  return out;
}

FaultSymptom FrameSampler::symptom(
    const std::vector<std::pair<uint32_t, uint8_t>>& faults) const {
  for (const auto& [site, code] : faults) {
    if (site >= sites_.size()) throw std::out_of_range("symptom: no such noise site");
    if (code > (sites_[site].op == Op::Depolarize2 ? 15 : 3))
      throw std::invalid_argument("symptom: pauli code out of range for this site");
  }
  std::vector<uint8_t> x(n_qubits_), z(n_qubits_), rec(n_records_);
  for (const POp& op : ops_) {
    switch (op.k) {
      case kH:
        std::swap(x[op.a], z[op.a]);
        break;
      case kCX:
        x[op.b] ^= x[op.a];
        z[op.a] ^= z[op.b];
        break;
      case kCZ:
        z[op.b] ^= x[op.a];
        z[op.a] ^= x[op.b];
        break;
      case kR:
        x[op.a] = z[op.a] = 0;
        break;
      case kM:
        rec[op.b] = x[op.a];
        z[op.a] = 0;
        break;
      case kMpp: {
        const Mpp& m = mpps_[op.a];
        uint8_t v = 0;
        for (const auto& [q, basis] : m.terms) {
          if (basis != PauliBasis::Z) v ^= z[q];
          if (basis != PauliBasis::X) v ^= x[q];
        }
        rec[m.record] = v;
        break;
      }
      case kNoise: {
        const NoiseSite& st = sites_[op.a];
        for (const auto& [site, code] : faults) {
          if (site != op.a) continue;
          x[st.q0] ^= code & 1;
          z[st.q0] ^= (code >> 1) & 1;
          if (st.op == Op::Depolarize2) {
            x[st.q1] ^= (code >> 2) & 1;
            z[st.q1] ^= (code >> 3) & 1;
          }
        }
        break;
      }
      case kCorrX:
        x[op.b] ^= rec[op.a];
        break;
      case kCorrZ:
        z[op.b] ^= rec[op.a];
        break;
    }
  }
  FaultSymptom out;
  for (uint32_t i = 0; i < det_records_.size(); ++i) {
    uint8_t d = 0;
    for (uint32_t r : det_records_[i]) d ^= rec[r];
    if (d) out.detectors.push_back(i);
  }
  for (uint32_t k = 0; k < n_obs_; ++k) {
    uint8_t d = 0;
    for (uint32_t r : obs_records_[k]) d ^= rec[r];
    if (d) out.observables |= 1ull << k;
  }
  return out;
}

}  // namespace qsurge
