#include <doctest.h>

#include <set>
#include <sstream>
#include <vector>

#include <qsurge/circuit_builder.hpp>
#include <qsurge/frame_sampler.hpp>
#include <qsurge/rng.hpp>

using namespace qsurge;

namespace {

BuiltCircuit bell_d3() {
  BuildOptions o;
  o.d = 3;
  o.experiment = Experiment::BellPrep;
  return build_circuit(o);
}

FaultSymptom sym_xor(const FaultSymptom& a, const FaultSymptom& b) {
  FaultSymptom out;
  std::set<uint32_t> s(a.detectors.begin(), a.detectors.end());
  for (uint32_t d : b.detectors) {
    if (!s.erase(d)) s.insert(d);
  }
  out.detectors.assign(s.begin(), s.end());
  out.observables = a.observables ^ b.observables;
  return out;
}

// Every shot of the batch must show exactly the symptom: detector i is
// all-ones over the valid lanes iff i is in the symptom, else all-zero.
void check_batch_is_symptom(const ShotBatch& b, const FaultSymptom& sym) {
  const std::set<uint32_t> want(sym.detectors.begin(), sym.detectors.end());
  for (uint32_t i = 0; i < b.n_detectors; ++i)
    for (uint64_t s = 0; s < b.n_shots; ++s) {
      if (b.det(s, i) != (want.count(i) != 0)) {
        INFO("detector ", i, " shot ", s);
        CHECK(b.det(s, i) == (want.count(i) != 0));
        return;
      }
    }
  for (uint32_t k = 0; k < b.n_observables; ++k)
    for (uint64_t s = 0; s < b.n_shots; ++s) {
      if (b.obs_bit(s, k) != (((sym.observables >> k) & 1) != 0)) {
        INFO("observable ", k, " shot ", s);
        CHECK(b.obs_bit(s, k) == (((sym.observables >> k) & 1) != 0));
        return;
      }
    }
}

int tick_of_instruction(const Circuit& c, uint32_t index) {
  int tick = 0;
  for (uint32_t i = 0; i < index; ++i)
    if (c.instructions[i].op == Op::Tick) tick++;
  return tick;
}

}  // namespace

TEST_CASE("noiseless circuits sample all-zero batches") {
  BuildOptions o;
  o.d = 3;
  o.experiment = Experiment::BellPrep;
  o.noise = uniform_noise(0.0);
  BuiltCircuit b = build_circuit(o);
  FrameSampler fs(b);
  CHECK(fs.n_sites() == 0);
  ShotBatch sb = fs.sample(1000, 123);
  CHECK(sb.detection_events() == 0);
  for (uint64_t w : sb.obs) CHECK(w == 0);
}

TEST_CASE("sampler sees the same detectors the builder declared") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);
  REQUIRE(fs.n_detectors() == b.detectors.size());
  CHECK(fs.n_observables() == b.observables.size());
  CHECK(fs.n_records() == b.n_records);
  for (uint32_t i = 0; i < fs.n_detectors(); ++i) {
    const auto& c = fs.detector_coords(i);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == b.detectors[i].x);
    CHECK(c[1] == b.detectors[i].y);
    CHECK(c[2] == b.detectors[i].t);
    CHECK(c[3] == b.detectors[i].sector);
  }
}

TEST_CASE("single x fault on a bulk data qubit flips exactly two checks") {
  BuildOptions o;
  o.d = 3;
  o.experiment = Experiment::PatchMemory;
  BuiltCircuit b = build_circuit(o);
  FrameSampler fs(b);

  // Data qubit 4 is the patch centre; its two Z neighbours are the bulk
  // plaquettes at (1.5,0.5) and (0.5,1.5). An X between round 0 and round 1
  // (the idle channel in the reset slot of round 1, tick 7) must flip their
  // round-1 comparisons and nothing else.
  int found = 0;
  for (uint32_t i = 0; i < fs.n_sites(); ++i) {
    const NoiseSite& s = fs.site(i);
    if (s.op != Op::Depolarize1 || s.q0 != 4) continue;
    if (tick_of_instruction(b.circuit, s.instruction) != 7) continue;
    found++;
    FaultSymptom sym = fs.symptom(i, 1);
    REQUIRE(sym.detectors.size() == 2);
    std::set<std::pair<double, double>> coords;
    for (uint32_t d : sym.detectors) {
      const auto& c = fs.detector_coords(d);
      coords.insert({c[0], c[1]});
      CHECK(c[2] == 1.0);  // both fire at the round-1 comparison
      CHECK(c[3] == 0.0);  // Z-type sector
    }
    CHECK(coords == std::set<std::pair<double, double>>{{1.5, 0.5}, {0.5, 1.5}});
    CHECK(sym.observables == 0);

    // The injected circuit reproduces the propagated symptom shot for shot.
    FrameSampler inj(inject_fault(b.circuit, i, 1));
    check_batch_is_symptom(inj.sample(100, 9), sym);
  }
  CHECK(found == 1);
}

TEST_CASE("z faults on seam readout ancillas stay confined to the seam") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);
  const std::set<uint32_t> anc{34, 35, 36, 37};  // the fresh gadget pairs
  int sites_seen = 0, nonempty = 0;
  for (uint32_t i = 0; i < fs.n_sites(); ++i) {
    const NoiseSite& s = fs.site(i);
    if (!anc.count(s.q0) || (s.op == Op::Depolarize2 && !anc.count(s.q1))) continue;
    sites_seen++;
    std::vector<uint8_t> z_codes =
        s.op == Op::Depolarize2 ? std::vector<uint8_t>{2, 8, 10} : std::vector<uint8_t>{2};
    for (uint8_t code : z_codes) {
      const FaultSymptom sym = fs.symptom(i, code);
      nonempty += !sym.detectors.empty();
      for (uint32_t d : sym.detectors) {
        INFO("site ", i, " code ", code);
        CHECK(fs.detector_coords(d)[0] == 2.5);
      }
    }
  }
  CHECK(sites_seen == 78);
  CHECK(nonempty == 54);
}

TEST_CASE("frame linearity: joint symptoms are xors of single-fault symptoms") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);

  // The crossing two-qubit channel of the first gadget, X on both halves.
  uint32_t crossing = UINT32_MAX;
  for (uint32_t i = 0; i < fs.n_sites(); ++i) {
    const NoiseSite& s = fs.site(i);
    if (s.op == Op::Depolarize2 && s.q0 == 34 && s.q1 == 35) {
      crossing = i;
      break;
    }
  }
  REQUIRE(crossing != UINT32_MAX);
  CHECK(fs.symptom(crossing, 5) == sym_xor(fs.symptom(crossing, 1), fs.symptom(crossing, 4)));

  Xoshiro256ss rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pick = [&] {
      const auto site = static_cast<uint32_t>(rng.next() % fs.n_sites());
      const int n = fs.site(site).n_codes();
      const auto code = static_cast<uint8_t>(1 + rng.next() % n);
      return std::pair<uint32_t, uint8_t>{site, code};
    };
    const auto f1 = pick(), f2 = pick();
    CHECK(fs.symptom({f1, f2}) == sym_xor(fs.symptom(f1.first, f1.second),
                                          fs.symptom(f2.first, f2.second)));
  }
}

TEST_CASE("fault injection rebuilds circuits faithfully") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);

  SUBCASE("identity injection is noiseless") {
    Circuit quiet = inject_fault(b.circuit, 0, 0);
    FrameSampler qs(quiet);
    CHECK(qs.n_sites() == 0);
    CHECK(qs.sample(256, 3).detection_events() == 0);
  }

  SUBCASE("a crossing-gate fault sampled from the injected circuit") {
    uint32_t crossing = UINT32_MAX;
    for (uint32_t i = 0; i < fs.n_sites(); ++i)
      if (fs.site(i).op == Op::Depolarize2 && fs.site(i).q0 == 34 && fs.site(i).q1 == 35)
        crossing = i;
    REQUIRE(crossing != UINT32_MAX);
    for (uint8_t code : {1, 4, 5, 10}) {
      FrameSampler inj(inject_fault(b.circuit, crossing, code));
      check_batch_is_symptom(inj.sample(70, 5), fs.symptom(crossing, code));
    }
  }

  SUBCASE("bad locations and codes are rejected") {
    CHECK_THROWS_AS((void)inject_fault(b.circuit, 1u << 30, 1), std::out_of_range);
    uint32_t one_qubit = UINT32_MAX;
    for (uint32_t i = 0; i < fs.n_sites(); ++i)
      if (fs.site(i).op != Op::Depolarize2) {
        one_qubit = i;
        break;
      }
    REQUIRE(one_qubit != UINT32_MAX);
    CHECK_THROWS_AS((void)inject_fault(b.circuit, one_qubit, 5), std::invalid_argument);
    CHECK_THROWS_AS((void)fs.symptom(1u << 30, 1), std::out_of_range);
  }
}

TEST_CASE("packed kernel, scalar reference and partitions all agree") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);
  const uint64_t seed = 41;

  const ShotBatch packed = fs.sample(200, seed);
  const ShotBatch ref = fs.sample_reference(200, seed);
  CHECK(packed == ref);

  // Same bits regardless of a 64-aligned split or the thread count.
  const ShotBatch lo = fs.sample(64, seed, 0);
  const ShotBatch hi = fs.sample(136, seed, 64);
  for (uint64_t s = 0; s < 200; ++s)
    for (uint32_t i = 0; i < packed.n_detectors; ++i) {
      const bool split = s < 64 ? lo.det(s, i) : hi.det(s, i);
      if (packed.det(s, i) != split) {
        INFO("shot ", s, " detector ", i);
        REQUIRE(packed.det(s, i) == split);
      }
    }
  CHECK(fs.sample(200, seed, 0, 1) == fs.sample(200, seed, 0, 3));
  CHECK(fs.sample(200, seed) == fs.sample(200, seed));

  CHECK_THROWS_AS((void)fs.sample(10, seed, 7), std::invalid_argument);
  CHECK_THROWS_AS((void)fs.sample_reference(10, seed, 7), std::invalid_argument);
}

TEST_CASE("detection rate at 0.1% is positive and small") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);
  const ShotBatch sb = fs.sample(100000, 17);
  const double rate =
      static_cast<double>(sb.detection_events()) /
      (static_cast<double>(sb.n_shots) * fs.n_detectors());
  CHECK(rate > 0.0);
  CHECK(rate < 0.05);
}

TEST_CASE("shot batches round-trip through packed and csv forms") {
  BuiltCircuit b = bell_d3();
  FrameSampler fs(b);
  const ShotBatch sb = fs.sample(100, 77, 64);

  std::stringstream bin;
  sb.write_packed(bin);
  CHECK(ShotBatch::read_packed(bin) == sb);

  std::stringstream csv;
  sb.write_csv(csv);
  std::string line;
  size_t lines = 0;
  while (std::getline(csv, line)) lines++;
  CHECK(lines == 101);  // header + one row per shot

  std::stringstream bad("QSBX 1 1 1 0 0\n");
  CHECK_THROWS_AS((void)ShotBatch::read_packed(bad), std::runtime_error);
}

TEST_CASE("detectors may not reference future measurements") {
  Circuit c;
  c.emit(Op::M, {0});
  c.emit(Op::Detector, {4}, {0, 0, 0, 0});
  CHECK_THROWS_AS((void)FrameSampler(c), std::runtime_error);
}
