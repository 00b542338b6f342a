#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsurge {

enum class Op : uint8_t {
  QubitCoords,
  R,   // reset to |0>
  H,
  CX,
  CZ,
  M,    // Z-basis measurement, one record per target
  MPP,  // Pauli-product measurement, one record total
  Depolarize1,
  Depolarize2,
  XError,
  YError,
  ZError,
  Detector,
  ObservableInclude,
  Tick,
  CorrectX,  // classically controlled X: targets = {record, qubit}
  CorrectZ,  // classically controlled Z: targets = {record, qubit}
};

// Provenance tag for an instruction, serialized as a trailing `# tag=` comment
// that standard stabilizer tools ignore.
enum class Tag : uint8_t { None, Bulk, Interface, Teleport };

enum class PauliBasis : uint8_t { X = 0, Y = 1, Z = 2 };

struct Instruction {
  Op op;
  Tag tag = Tag::None;
  // Qubit ids for gates; absolute measurement-record indices for Detector /
  // ObservableInclude; {record, qubit} for CorrectX/CorrectZ.
  std::vector<uint32_t> targets;
  // Parenthesized arguments: coordinates for QubitCoords/Detector, probability
  // for noise ops, observable index for ObservableInclude.
  std::vector<double> args;
  // For MPP only: basis per target, aligned with `targets`.
  std::vector<PauliBasis> bases;

  bool operator==(const Instruction&) const = default;
};

// Number of measurement records this instruction appends.
inline uint32_t record_count(const Instruction& ins) {
  if (ins.op == Op::M) return static_cast<uint32_t>(ins.targets.size());
  if (ins.op == Op::MPP) return 1;
  return 0;
}

inline bool is_noise(Op op) {
  return op == Op::Depolarize1 || op == Op::Depolarize2 || op == Op::XError ||
         op == Op::YError || op == Op::ZError;
}

inline bool is_unitary(Op op) { return op == Op::H || op == Op::CX || op == Op::CZ; }

struct Circuit {
  std::vector<Instruction> instructions;

  Instruction& emit(Op op, std::vector<uint32_t> targets = {}, std::vector<double> args = {},
                    Tag tag = Tag::None);
  Instruction& emit_mpp(std::vector<uint32_t> targets, std::vector<PauliBasis> bases,
                        Tag tag = Tag::None);

  uint32_t num_qubits() const;
  uint32_t num_measurements() const;
  uint32_t num_detectors() const;
  uint32_t num_observables() const;  // max observable index + 1

  // Throws std::runtime_error on malformed content (record references out of
  // range, probabilities outside [0,1], odd pair-gate target counts, ...).
  void validate() const;

  std::string to_text() const;
  static Circuit from_text(const std::string& text);

  bool operator==(const Circuit&) const = default;
};

}  // namespace qsurge
