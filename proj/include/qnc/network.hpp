// Copyright 2026 The qncsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qnc {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An edge was asked to carry more than its per-round unit capacity.
class CapacityExceededError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

/// Payload kind does not match the edge kind (qubit on a classical link or
/// bits on a quantum link).
class KindMismatchError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

/// A qubit reference reached a copy node; unknown quantum states cannot be
/// duplicated.
class NoCloningError : public NetworkError {
 public:
  using NetworkError::NetworkError;
};

/// Unit capacity per protocol round: one qubit or two classical bits, never both.
enum class EdgeKind { QuantumUnit, ClassicalUnit };

struct EdgeSpec {
  std::string from;
  std::string to;
  EdgeKind kind;
};

struct Topology {
  std::vector<std::string> nodes;
  std::vector<EdgeSpec> edges;

  const EdgeSpec* find_edge(const std::string& from, const std::string& to) const {
    for (const EdgeSpec& e : edges) {
      if (e.from == from && e.to == to) return &e;
    }
    return nullptr;
  }
};

/// The six-node butterfly: quantum direct links S1->R2 and S2->R1, classical
/// links into and out of the coding path S1,S2 -> C1 -> C2 -> R1,R2.
inline Topology build_butterfly() {
  Topology t;
  t.nodes = {"S1", "S2", "C1", "C2", "R1", "R2"};
  t.edges = {
      {"S1", "R2", EdgeKind::QuantumUnit},  {"S2", "R1", EdgeKind::QuantumUnit},
      {"S1", "C1", EdgeKind::ClassicalUnit}, {"S2", "C1", EdgeKind::ClassicalUnit},
      {"C1", "C2", EdgeKind::ClassicalUnit}, {"C2", "R1", EdgeKind::ClassicalUnit},
      {"C2", "R2", EdgeKind::ClassicalUnit},
  };
  return t;
}

/// All-classical variant used by the bit-level coding scheme: same shape,
/// direct links carry packets instead of photons.
inline Topology build_classical_butterfly() {
  Topology t = build_butterfly();
  for (EdgeSpec& e : t.edges) e.kind = EdgeKind::ClassicalUnit;
  return t;
}

/// Up to two ordered bits; bit(0) is the first bit written in the string form.
class BitString {
 public:
  BitString(std::initializer_list<int> bits) : length_(0), value_(0) {
    for (int b : bits) push(b);
  }

  explicit BitString(int single_bit) : BitString{single_bit} {}

  int length() const { return length_; }

  int bit(int i) const { return (value_ >> i) & 1; }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < length_; ++i) s.push_back(bit(i) ? '1' : '0');
    return s;
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.length_ == b.length_ && a.value_ == b.value_;
  }

 private:
  void push(int b) {
    if (length_ >= 2) throw std::invalid_argument("classical payloads carry at most 2 bits");
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
    value_ |= static_cast<unsigned>(b) << length_;
    ++length_;
  }

  int length_;
  unsigned value_;
};

/// Bitwise XOR of two equal-length bit strings (the coding operation at C1).
inline BitString xor_node(const BitString& a, const BitString& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("xor_node requires equal-length inputs");
  }
  BitString out{};
  if (a.length() == 1) out = BitString{a.bit(0) ^ b.bit(0)};
  if (a.length() == 2) out = BitString{a.bit(0) ^ b.bit(0), a.bit(1) ^ b.bit(1)};
  return out;
}

struct Payload {
  enum class Kind { Qubit, Classical };

  Kind kind;
  int qubit_id = -1;  // register/photon index for qubit payloads
  BitString bits{};

  static Payload qubit(int id) { return Payload{Kind::Qubit, id, BitString{}}; }
  static Payload classical(BitString b) { return Payload{Kind::Classical, -1, b}; }
};

/// Duplicates a classical packet (the operation at C2). Qubit payloads cannot
/// be duplicated.
inline std::pair<Payload, Payload> copy_node(const Payload& payload) {
  if (payload.kind == Payload::Kind::Qubit) {
    throw NoCloningError("cannot copy a qubit payload: unknown quantum states cannot be cloned");
  }
  return {payload, payload};
}

struct Message {
  Payload payload;
  EdgeSpec edge;
  int round = 0;
};

struct Violation {
  enum class Kind { CapacityExceeded, KindMismatch, NoCloning };

  Kind kind;
  int round;
  std::string where;
  std::string detail;
};

inline std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::CapacityExceeded: return "CapacityExceeded";
    case Violation::Kind::KindMismatch: return "KindMismatch";
    case Violation::Kind::NoCloning: return "NoCloning";
  }
  return "?";
}

/// Per-edge, per-round tally of carried qubits and bits.
class UsageLedger {
 public:
  /// Validates and records a message; returns the violation instead of
  /// recording when the message is not admissible.
  std::optional<Violation> try_record(const Message& msg) {
    const std::string where = msg.edge.from + "->" + msg.edge.to;
    Use& use = tally_[{msg.edge.from, msg.edge.to, msg.round}];
    if (msg.payload.kind == Payload::Kind::Qubit) {
      if (msg.edge.kind != EdgeKind::QuantumUnit) {
        return Violation{Violation::Kind::KindMismatch, msg.round, where,
                         "qubit payload on a classical edge"};
      }
      if (use.qubits + 1 > 1) {
        return Violation{Violation::Kind::CapacityExceeded, msg.round, where,
                         "more than one qubit in a round"};
      }
      use.qubits += 1;
    } else {
      if (msg.edge.kind != EdgeKind::ClassicalUnit) {
        return Violation{Violation::Kind::KindMismatch, msg.round, where,
                         "classical payload on a quantum edge"};
      }
      if (use.bits + msg.payload.bits.length() > 2) {
        return Violation{Violation::Kind::CapacityExceeded, msg.round, where,
                         "more than two classical bits in a round"};
      }
      use.bits += msg.payload.bits.length();
    }
    return std::nullopt;
  }

  int qubits_carried(const std::string& from, const std::string& to, int round) const {
    auto it = tally_.find({from, to, round});
    return it == tally_.end() ? 0 : it->second.qubits;
  }

  int bits_carried(const std::string& from, const std::string& to, int round) const {
    auto it = tally_.find({from, to, round});
    return it == tally_.end() ? 0 : it->second.bits;
  }

 private:
  struct Use {
    int qubits = 0;
    int bits = 0;
  };
  std::map<std::tuple<std::string, std::string, int>, Use> tally_;
};

/// Records the message or throws CapacityExceededError / KindMismatchError.
inline void send(UsageLedger& ledger, const Message& msg) {
  if (auto violation = ledger.try_record(msg)) {
    const std::string text = to_string(violation->kind) + " on " + violation->where +
                             " (round " + std::to_string(violation->round) + "): " +
                             violation->detail;
    if (violation->kind == Violation::Kind::CapacityExceeded) throw CapacityExceededError(text);
    throw KindMismatchError(text);
  }
}

struct NetworkEvent {
  enum class Type { Send, Xor, Copy };

  Type type;
  int round = 0;
  std::string from;  // sender node; the processing node for xor/copy
  std::string to;    // receiver node; empty for node-local events
  Payload payload;   // transmitted / produced payload

  static NetworkEvent send_event(int round, const EdgeSpec& edge, Payload p) {
    return NetworkEvent{Type::Send, round, edge.from, edge.to, std::move(p)};
  }
  static NetworkEvent xor_event(int round, std::string node, BitString out) {
    return NetworkEvent{Type::Xor, round, std::move(node), "", Payload::classical(out)};
  }
  static NetworkEvent copy_event(int round, std::string node, Payload p) {
    return NetworkEvent{Type::Copy, round, std::move(node), "", std::move(p)};
  }
};

/// Replays a transcript against a topology and collects every capacity, kind,
/// and cloning violation. Violations are data, not exceptions, so callers can
/// demonstrate exactly why an inadmissible routing fails.
inline std::vector<Violation> audit(const std::vector<NetworkEvent>& transcript,
                                    const Topology& topology) {
  std::vector<Violation> violations;
  UsageLedger ledger;
  for (const NetworkEvent& ev : transcript) {
    switch (ev.type) {
      case NetworkEvent::Type::Send: {
        const EdgeSpec* edge = topology.find_edge(ev.from, ev.to);
        if (edge == nullptr) {
          violations.push_back(Violation{Violation::Kind::KindMismatch, ev.round,
                                         ev.from + "->" + ev.to, "edge not in topology"});
          break;
        }
        if (auto v = ledger.try_record(Message{ev.payload, *edge, ev.round})) {
          violations.push_back(*v);
        }
        break;
      }
      case NetworkEvent::Type::Copy:
        if (ev.payload.kind == Payload::Kind::Qubit) {
          violations.push_back(Violation{Violation::Kind::NoCloning, ev.round, ev.from,
                                         "qubit payload routed into a copy node"});
        }
        break;
      case NetworkEvent::Type::Xor:
        break;  // bit-length constraints are enforced at construction
    }
  }
  return violations;
}

inline std::vector<Violation> audit(const std::vector<NetworkEvent>& transcript) {
  return audit(transcript, build_butterfly());
}

struct ClassicalRunResult {
  int at_r1;
  int at_r2;
  UsageLedger ledger;
  std::vector<NetworkEvent> transcript;
  Topology topology;
};

/// Bit-level network coding on the butterfly: direct edges carry the raw
/// bits, C1 emits the XOR, C2 copies it, and each receiver XOR-decodes its
/// direct bit with the coded one.
inline ClassicalRunResult classical_butterfly(int b1, int b2, int round = 0) {
  if ((b1 & ~1) != 0 || (b2 & ~1) != 0) {
    throw std::invalid_argument("classical_butterfly inputs must be single bits");
  }
  ClassicalRunResult result;
  result.topology = build_classical_butterfly();

  auto transmit = [&](const std::string& from, const std::string& to, BitString bits) {
    const EdgeSpec* edge = result.topology.find_edge(from, to);
    Message msg{Payload::classical(bits), *edge, round};
    send(result.ledger, msg);
    result.transcript.push_back(NetworkEvent::send_event(round, *edge, msg.payload));
  };

  transmit("S1", "R2", BitString{b1});
  transmit("S2", "R1", BitString{b2});
  transmit("S1", "C1", BitString{b1});
  transmit("S2", "C1", BitString{b2});

  const BitString coded = xor_node(BitString{b1}, BitString{b2});
  result.transcript.push_back(NetworkEvent::xor_event(round, "C1", coded));
  transmit("C1", "C2", coded);

  const auto copies = copy_node(Payload::classical(coded));
  result.transcript.push_back(NetworkEvent::copy_event(round, "C2", Payload::classical(coded)));
  transmit("C2", "R1", copies.first.bits);
  transmit("C2", "R2", copies.second.bits);

  // R1 holds b2 directly and decodes the stream injected at S1; R2 conversely.
  result.at_r1 = b2 ^ coded.bit(0);
  result.at_r2 = b1 ^ coded.bit(0);
  return result;
}

/// Line-oriented JSON export: one event per line with round, edge/node,
/// payload kind, and bits for classical payloads.
inline std::string to_jsonl(const std::vector<NetworkEvent>& transcript) {
  std::string out;
  for (const NetworkEvent& ev : transcript) {
    nlohmann::json j;
    j["round"] = ev.round;
    switch (ev.type) {
      case NetworkEvent::Type::Send:
        j["type"] = "send";
        j["from"] = ev.from;
        j["to"] = ev.to;
        break;
      case NetworkEvent::Type::Xor:
        j["type"] = "xor";
        j["node"] = ev.from;
        break;
      case NetworkEvent::Type::Copy:
        j["type"] = "copy";
        j["node"] = ev.from;
        break;
    }
    if (ev.payload.kind == Payload::Kind::Qubit) {
      j["payload"] = "qubit";
      j["qubit"] = ev.payload.qubit_id;
    } else {
      j["payload"] = "classical";
      j["bits"] = ev.payload.bits.to_string();
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace qnc
