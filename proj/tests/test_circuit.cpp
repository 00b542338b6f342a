#include <doctest.h>

#include <qsurge/circuit.hpp>
#include <qsurge/rng.hpp>

using namespace qsurge;

namespace {

Circuit sample_circuit() {
  Circuit c;
  c.emit(Op::QubitCoords, {0}, {0, 0});
  c.emit(Op::QubitCoords, {4}, {1.5, 0.5});
  c.emit(Op::R, {0, 1, 2, 3, 4});
  c.emit(Op::XError, {0, 1, 2, 3}, {0.001});
  c.emit(Op::H, {4}, {}, Tag::Bulk);
  c.emit(Op::Tick);
  c.emit(Op::CX, {4, 0, 1, 2});
  c.emit(Op::Depolarize2, {4, 0}, {0.01}, Tag::Interface);
  c.emit(Op::CZ, {3, 4});
  c.emit(Op::Depolarize1, {1, 2}, {0.001});
  c.emit(Op::H, {4});
  c.emit(Op::M, {4});
  c.emit(Op::Detector, {0}, {1.5, 0.5, 0, 1});
  c.emit(Op::CorrectX, {0, 2}, {}, Tag::Teleport);
  c.emit_mpp({0, 2}, {PauliBasis::X, PauliBasis::X});
  c.emit(Op::M, {0, 1, 2, 3});
  c.emit(Op::Detector, {1, 4}, {0.5, -0.5, 1, 0});
  c.emit(Op::ObservableInclude, {2, 5}, {0});
  return c;
}

}  // namespace

TEST_CASE("circuit text round trip is bit exact") {
  Circuit c = sample_circuit();
  c.validate();
  std::string text = c.to_text();
  Circuit back = Circuit::from_text(text);
  CHECK(back == c);
  CHECK(back.to_text() == text);
}

TEST_CASE("text form uses relative record references") {
  Circuit c = sample_circuit();
  std::string text = c.to_text();
  CHECK(text.find("DETECTOR(1.5, 0.5, 0, 1) rec[-1]\n") != std::string::npos);
  CHECK(text.find("MPP X0*X2\n") != std::string::npos);
  CHECK(text.find("CX rec[-1] 2 # tag=T\n") != std::string::npos);
  CHECK(text.find("OBSERVABLE_INCLUDE(0) rec[-4] rec[-1]\n") != std::string::npos);
  CHECK(text.find("DEPOLARIZE2(0.01) 4 0 # tag=I\n") != std::string::npos);
}

TEST_CASE("counts") {
  Circuit c = sample_circuit();
  CHECK(c.num_qubits() == 5);
  CHECK(c.num_measurements() == 6);
  CHECK(c.num_detectors() == 2);
  CHECK(c.num_observables() == 1);
}

TEST_CASE("parser accepts aliases, comments and blank lines") {
  Circuit c = Circuit::from_text(R"(
# header comment
  MZ 0 1
CNOT 1 0

DETECTOR(0, 0, 0, 0) rec[-2]
)");
  CHECK(c.instructions.size() == 3);
  CHECK(c.instructions[0].op == Op::M);
  CHECK(c.instructions[1].op == Op::CX);
  CHECK(c.instructions[2].targets == std::vector<uint32_t>{0});
}

TEST_CASE("validate rejects malformed circuits") {
  Circuit c;
  c.emit(Op::Depolarize1, {0}, {1.5});
  CHECK_THROWS(c.validate());

  Circuit c2;
  c2.emit(Op::CX, {0, 0});
  CHECK_THROWS(c2.validate());

  Circuit c3;
  c3.emit(Op::M, {0});
  c3.emit(Op::Detector, {1}, {0, 0, 0, 0});
  CHECK_THROWS(c3.validate());

  Circuit c4;
  c4.emit(Op::M, {0});
  c4.emit(Op::Detector, {0}, {0, 0, 0, 2});
  CHECK_THROWS(c4.validate());
}

TEST_CASE("parser rejects record lookback past start") {
  CHECK_THROWS(Circuit::from_text("M 0\nDETECTOR(0, 0, 0, 0) rec[-2]\n"));
}

TEST_CASE("counter rng is deterministic and roughly uniform") {
  CHECK(hash3(1, 2, 3) == hash3(1, 2, 3));
  CHECK(hash3(1, 2, 3) != hash3(1, 2, 4));
  CHECK(hash3(1, 2, 3) != hash3(2, 2, 3));
  double acc = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += u01(hash2(42, i));
  CHECK(acc / n == doctest::Approx(0.5).epsilon(0.02));

  Xoshiro256ss a(7), b(7), d(8);
  CHECK(a.next() == b.next());
  CHECK(a.next() != d.next());
}
