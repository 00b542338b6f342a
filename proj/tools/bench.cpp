// Compares the bit-packed sampling kernel (single-threaded and OpenMP)
// against the scalar reference implementation on a d=7 merged-pair circuit.
// The packed and scalar paths must produce identical bits; the point of the
// benchmark is the throughput ratio.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <qsurge/circuit_builder.hpp>
#include <qsurge/frame_sampler.hpp>

using namespace qsurge;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Lane {
  const char* name;
  double shots_per_s;
};

}  // namespace

int main(int argc, char** argv) {
  int d = 7;
  uint64_t packed_shots = 1 << 16;
  uint64_t scalar_shots = 1 << 10;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-d" && i + 1 < argc)
      d = std::atoi(argv[++i]);
    else if (a == "-n" && i + 1 < argc)
      packed_shots = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::fprintf(stderr, "usage: %s [-d distance] [-n packed_shots]\n", argv[0]);
      return 2;
    }
  }

  BuildOptions o;
  o.d = d;
  o.experiment = Experiment::BellPrep;
  const BuiltCircuit b = build_circuit(o);
  const FrameSampler fs(b);
  std::printf("circuit: bell d=%d, %u qubits, %zu detectors, %zu noise sites\n", d,
              b.n_qubits, b.detectors.size(), static_cast<size_t>(fs.n_sites()));

  // Correctness gate before timing anything.
  const uint64_t check_shots = 192;
  if (!(fs.sample(check_shots, 7) == fs.sample_reference(check_shots, 7))) {
    std::fprintf(stderr, "FAIL: packed kernel disagrees with scalar reference\n");
    return 1;
  }
  std::printf("packed kernel matches scalar reference on %llu shots\n",
              static_cast<unsigned long long>(check_shots));

  Lane lanes[3];
  int n_lanes = 0;

  {
    auto t0 = Clock::now();
    const ShotBatch sb = fs.sample_reference(scalar_shots, 11);
    const double dt = seconds_since(t0);
    lanes[n_lanes++] = {"scalar reference", static_cast<double>(sb.n_shots) / dt};
  }
  {
    auto t0 = Clock::now();
    const ShotBatch sb = fs.sample(packed_shots, 11, 0, 1);
    const double dt = seconds_since(t0);
    lanes[n_lanes++] = {"packed, 1 thread", static_cast<double>(sb.n_shots) / dt};
  }
#ifdef _OPENMP
  {
    auto t0 = Clock::now();
    const ShotBatch sb = fs.sample(packed_shots, 11);
    const double dt = seconds_since(t0);
    static char label[64];
    std::snprintf(label, sizeof label, "packed, %d threads", omp_get_max_threads());
    lanes[n_lanes++] = {label, static_cast<double>(sb.n_shots) / dt};
  }
#endif

  std::printf("\n%-20s %14s %10s\n", "kernel", "shots/s", "speedup");
  for (int i = 0; i < n_lanes; ++i)
    std::printf("%-20s %14.0f %9.1fx\n", lanes[i].name, lanes[i].shots_per_s,
                lanes[i].shots_per_s / lanes[0].shots_per_s);
  return 0;
}
