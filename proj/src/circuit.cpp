#include "qsurge/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsurge {

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::QubitCoords: return "QUBIT_COORDS";
    case Op::R: return "R";
    case Op::H: return "H";
    case Op::CX:
    case Op::CorrectX: return "CX";
    case Op::CZ:
    case Op::CorrectZ: return "CZ";
    case Op::M: return "M";
    case Op::MPP: return "MPP";
    case Op::Depolarize1: return "DEPOLARIZE1";
    case Op::Depolarize2: return "DEPOLARIZE2";
    case Op::XError: return "X_ERROR";
    case Op::YError: return "Y_ERROR";
    case Op::ZError: return "Z_ERROR";
    case Op::Detector: return "DETECTOR";
    case Op::ObservableInclude: return "OBSERVABLE_INCLUDE";
    case Op::Tick: return "TICK";
  }
  return "?";
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw std::runtime_error("circuit text line " + std::to_string(lineno) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

uint32_t parse_u32(const std::string& tok, int lineno) {
  uint32_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    fail(lineno, "bad integer target '" + tok + "'");
  return v;
}

// "rec[-k]" -> absolute index mseen - k.
uint32_t parse_rec(const std::string& tok, uint64_t mseen, int lineno) {
  if (tok.size() < 7 || tok.rfind("rec[-", 0) != 0 || tok.back() != ']')
    fail(lineno, "bad record target '" + tok + "'");
  uint64_t k = 0;
  auto res = std::from_chars(tok.data() + 5, tok.data() + tok.size() - 1, k);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() - 1 || k == 0)
    fail(lineno, "bad record target '" + tok + "'");
  if (k > mseen) fail(lineno, "record lookback " + tok + " precedes the first measurement");
  return static_cast<uint32_t>(mseen - k);
}

char tag_char(Tag t) {
  switch (t) {
    case Tag::Bulk: return 'B';
    case Tag::Interface: return 'I';
    case Tag::Teleport: return 'T';
    default: return '?';
  }
}

}  // namespace

Instruction& Circuit::emit(Op op, std::vector<uint32_t> targets, std::vector<double> args, Tag tag) {
  instructions.push_back(Instruction{op, tag, std::move(targets), std::move(args), {}});
  return instructions.back();
}

Instruction& Circuit::emit_mpp(std::vector<uint32_t> targets, std::vector<PauliBasis> bases, Tag tag) {
  instructions.push_back(Instruction{Op::MPP, tag, std::move(targets), {}, std::move(bases)});
  return instructions.back();
}

uint32_t Circuit::num_qubits() const {
  uint32_t n = 0;
  for (const auto& ins : instructions) {
    switch (ins.op) {
      case Op::Detector:
      case Op::ObservableInclude:
      case Op::Tick: break;
      case Op::CorrectX:
      case Op::CorrectZ:
        if (ins.targets.size() == 2) n = std::max(n, ins.targets[1] + 1);
        break;
      default:
        for (uint32_t q : ins.targets) n = std::max(n, q + 1);
    }
  }
  return n;
}

uint32_t Circuit::num_measurements() const {
  uint32_t n = 0;
  for (const auto& ins : instructions) n += record_count(ins);
  return n;
}

uint32_t Circuit::num_detectors() const {
  uint32_t n = 0;
  for (const auto& ins : instructions) n += ins.op == Op::Detector;
  return n;
}

uint32_t Circuit::num_observables() const {
  uint32_t n = 0;
  for (const auto& ins : instructions)
    if (ins.op == Op::ObservableInclude)
      n = std::max(n, static_cast<uint32_t>(ins.args.at(0)) + 1);
  return n;
}

void Circuit::validate() const {
  uint64_t mseen = 0;
  int idx = 0;
  for (const auto& ins : instructions) {
    ++idx;
    auto bad = [&](const std::string& msg) {
      throw std::runtime_error("instruction " + std::to_string(idx) + " (" + op_name(ins.op) +
                               "): " + msg);
    };
    if (ins.op != Op::MPP && !ins.bases.empty()) bad("bases on non-MPP instruction");
    switch (ins.op) {
      case Op::QubitCoords:
        if (ins.targets.size() != 1 || ins.args.size() < 2) bad("expected (x, y, ...) q");
        break;
      case Op::R:
      case Op::H:
      case Op::M: {
        if (ins.targets.empty()) bad("no targets");
        std::set<uint32_t> uniq(ins.targets.begin(), ins.targets.end());
        if (uniq.size() != ins.targets.size()) bad("duplicate targets");
        break;
      }
      case Op::CX:
      case Op::CZ:
      case Op::Depolarize2: {
        if (ins.targets.empty() || ins.targets.size() % 2 != 0) bad("expected qubit pairs");
        std::set<uint32_t> uniq(ins.targets.begin(), ins.targets.end());
        if (uniq.size() != ins.targets.size()) bad("duplicate targets");
        if (ins.op == Op::Depolarize2 && ins.args.size() != 1) bad("expected (p)");
        if (is_noise(ins.op) && (ins.args.at(0) < 0 || ins.args.at(0) > 1)) bad("p outside [0,1]");
        break;
      }
      case Op::Depolarize1:
      case Op::XError:
      case Op::YError:
      case Op::ZError: {
        if (ins.targets.empty() || ins.args.size() != 1) bad("expected (p) q ...");
        if (ins.args[0] < 0 || ins.args[0] > 1) bad("p outside [0,1]");
        std::set<uint32_t> uniq(ins.targets.begin(), ins.targets.end());
        if (uniq.size() != ins.targets.size()) bad("duplicate targets");
        break;
      }
      case Op::MPP: {
        if (ins.targets.empty() || ins.bases.size() != ins.targets.size())
          bad("bases/targets mismatch");
        std::set<uint32_t> uniq(ins.targets.begin(), ins.targets.end());
        if (uniq.size() != ins.targets.size()) bad("duplicate targets");
        break;
      }
      case Op::Detector:
        if (ins.args.size() != 4) bad("expected coords (x, y, t, sector)");
        if (ins.args[3] != 0 && ins.args[3] != 1) bad("sector must be 0 or 1");
        for (uint32_t r : ins.targets)
          if (r >= mseen) bad("record reference out of range");
        break;
      case Op::ObservableInclude:
        if (ins.args.size() != 1 || ins.args[0] < 0) bad("expected (observable_index)");
        for (uint32_t r : ins.targets)
          if (r >= mseen) bad("record reference out of range");
        break;
      case Op::CorrectX:
      case Op::CorrectZ:
        if (ins.targets.size() != 2) bad("expected rec[-k] qubit");
        if (ins.targets[0] >= mseen) bad("record reference out of range");
        break;
      case Op::Tick:
        if (!ins.targets.empty() || !ins.args.empty()) bad("TICK takes nothing");
        break;
    }
    mseen += record_count(ins);
  }
}

std::string Circuit::to_text() const {
  std::string out;
  uint64_t mseen = 0;
  for (const auto& ins : instructions) {
    out += op_name(ins.op);
    if (!ins.args.empty()) {
      out += '(';
      for (size_t i = 0; i < ins.args.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(ins.args[i]);
      }
      out += ')';
    }
    switch (ins.op) {
      case Op::Detector:
      case Op::ObservableInclude:
        for (uint32_t r : ins.targets) {
          out += " rec[-";
          out += std::to_string(mseen - r);
          out += ']';
        }
        break;
      case Op::CorrectX:
      case Op::CorrectZ:
        out += " rec[-";
        out += std::to_string(mseen - ins.targets.at(0));
        out += "] ";
        out += std::to_string(ins.targets.at(1));
        break;
      case Op::MPP:
        out += ' ';
        for (size_t i = 0; i < ins.targets.size(); ++i) {
          if (i) out += '*';
          out += "XYZ"[static_cast<int>(ins.bases[i])];
          out += std::to_string(ins.targets[i]);
        }
        break;
      default:
        for (uint32_t q : ins.targets) {
          out += ' ';
          out += std::to_string(q);
        }
    }
    if (ins.tag != Tag::None) {
      out += " # tag=";
      out += tag_char(ins.tag);
    }
    out += '\n';
    mseen += record_count(ins);
  }
  return out;
}

Circuit Circuit::from_text(const std::string& text) {
  Circuit c;
  uint64_t mseen = 0;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    Tag tag = Tag::None;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      const std::string comment = line.substr(hash + 1);
      if (auto tp = comment.find("tag="); tp != std::string::npos && tp + 4 < comment.size()) {
        switch (comment[tp + 4]) {
          case 'B': tag = Tag::Bulk; break;
          case 'I': tag = Tag::Interface; break;
          case 'T': tag = Tag::Teleport; break;
          default: break;
        }
      }
      line = line.substr(0, hash);
    }
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;
    size_t name_start = i;
    while (i < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
      ++i;
    std::string name = line.substr(name_start, i - name_start);
    std::vector<double> args;
    if (i < line.size() && line[i] == '(') {
      size_t close = line.find(')', i);
      if (close == std::string::npos) fail(lineno, "missing ')'");
      std::string argstr = line.substr(i + 1, close - i - 1);
      std::istringstream as(argstr);
      std::string piece;
      while (std::getline(as, piece, ',')) {
        char* end = nullptr;
        double v = std::strtod(piece.c_str(), &end);
        if (end == piece.c_str()) fail(lineno, "bad argument '" + piece + "'");
        args.push_back(v);
      }
      i = close + 1;
    }
    std::vector<std::string> toks = split_ws(line.substr(i));

    auto push = [&](Instruction ins) {
      mseen += record_count(ins);
      c.instructions.push_back(std::move(ins));
    };

    if (name == "TICK") {
      if (!toks.empty()) fail(lineno, "TICK takes no targets");
      push({Op::Tick, tag, {}, std::move(args), {}});
    } else if (name == "MPP") {
      if (toks.empty()) fail(lineno, "MPP needs a product");
      for (const auto& tok : toks) {
        Instruction ins{Op::MPP, tag, {}, args, {}};
        size_t p = 0;
        while (p < tok.size()) {
          PauliBasis b;
          switch (tok[p]) {
            case 'X': b = PauliBasis::X; break;
            case 'Y': b = PauliBasis::Y; break;
            case 'Z': b = PauliBasis::Z; break;
            default: fail(lineno, "bad Pauli in '" + tok + "'");
          }
          size_t q_start = ++p;
          while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
          if (p == q_start) fail(lineno, "missing qubit in '" + tok + "'");
          ins.bases.push_back(b);
          ins.targets.push_back(parse_u32(tok.substr(q_start, p - q_start), lineno));
          if (p < tok.size()) {
            if (tok[p] != '*') fail(lineno, "expected '*' in '" + tok + "'");
            ++p;
          }
        }
        push(std::move(ins));
      }
    } else if (name == "DETECTOR" || name == "OBSERVABLE_INCLUDE") {
      Instruction ins{name == "DETECTOR" ? Op::Detector : Op::ObservableInclude, tag, {},
                      std::move(args), {}};
      for (const auto& tok : toks) ins.targets.push_back(parse_rec(tok, mseen, lineno));
      push(std::move(ins));
    } else if ((name == "CX" || name == "CZ") && !toks.empty() && toks[0].rfind("rec[", 0) == 0) {
      if (toks.size() != 2) fail(lineno, "classically controlled gate needs rec[-k] qubit");
      Instruction ins{name == "CX" ? Op::CorrectX : Op::CorrectZ, tag, {}, std::move(args), {}};
      ins.targets.push_back(parse_rec(toks[0], mseen, lineno));
      ins.targets.push_back(parse_u32(toks[1], lineno));
      push(std::move(ins));
    } else {
      Op op;
      if (name == "QUBIT_COORDS") op = Op::QubitCoords;
      else if (name == "R" || name == "RZ") op = Op::R;
      else if (name == "H") op = Op::H;
      else if (name == "CX" || name == "CNOT") op = Op::CX;
      else if (name == "CZ") op = Op::CZ;
      else if (name == "M" || name == "MZ") op = Op::M;
      else if (name == "DEPOLARIZE1") op = Op::Depolarize1;
      else if (name == "DEPOLARIZE2") op = Op::Depolarize2;
      else if (name == "X_ERROR") op = Op::XError;
      else if (name == "Y_ERROR") op = Op::YError;
      else if (name == "Z_ERROR") op = Op::ZError;
      else fail(lineno, "unknown instruction '" + name + "'");
      Instruction ins{op, tag, {}, std::move(args), {}};
      for (const auto& tok : toks) ins.targets.push_back(parse_u32(tok, lineno));
      push(std::move(ins));
    }
  }
  return c;
}

}  // namespace qsurge
