// Copyright 2026 The cfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfqkd/error.hpp"

namespace cfqkd::protocols {

enum class ProtocolId { Noh09, ScQkd, GuoShi, Cascade, PingPong, Bb84Mod };

inline std::string to_string(ProtocolId p) {
  switch (p) {
    case ProtocolId::Noh09: return "noh09";
    case ProtocolId::ScQkd: return "scqkd";
    case ProtocolId::GuoShi: return "guoshi";
    case ProtocolId::Cascade: return "cascade";
    case ProtocolId::PingPong: return "pingpong";
    case ProtocolId::Bb84Mod: return "bb84mod";
  }
  return "?";
}

inline ProtocolId parse_protocol(const std::string& s) {
  for (auto p : {ProtocolId::Noh09, ProtocolId::ScQkd, ProtocolId::GuoShi, ProtocolId::Cascade,
                 ProtocolId::PingPong, ProtocolId::Bb84Mod})
    if (to_string(p) == s) return p;
  throw Error("unknown protocol '" + s + "'");
}

/// Photon polarization. Key-bit mapping: H and + carry 0, V and - carry 1.
enum class Polarization { H, V, Plus, Minus };

inline int key_bit(Polarization p) {
  return (p == Polarization::H || p == Polarization::Plus) ? 0 : 1;
}
inline bool rectilinear(Polarization p) { return p == Polarization::H || p == Polarization::V; }
inline Polarization orthogonal(Polarization p) {
  switch (p) {
    case Polarization::H: return Polarization::V;
    case Polarization::V: return Polarization::H;
    case Polarization::Plus: return Polarization::Minus;
    case Polarization::Minus: return Polarization::Plus;
  }
  return p;
}
inline std::string to_string(Polarization p) {
  switch (p) {
    case Polarization::H: return "H";
    case Polarization::V: return "V";
    case Polarization::Plus: return "+";
    case Polarization::Minus: return "-";
  }
  return "?";
}

enum class PartyAction {
  ReflectH,  // R_H: reflect H, block V
  ReflectV,
  ReflectPlus,
  ReflectMinus,
  Block,
  Reflect,
  PauliI,
  PauliZ,
};

/// Polarization reflected by an R_k action.
inline Polarization reflected(PartyAction a) {
  switch (a) {
    case PartyAction::ReflectH: return Polarization::H;
    case PartyAction::ReflectV: return Polarization::V;
    case PartyAction::ReflectPlus: return Polarization::Plus;
    case PartyAction::ReflectMinus: return Polarization::Minus;
    default: throw Error("action is not a polarization-selective reflection");
  }
}

inline PartyAction reflect_action(Polarization p) {
  switch (p) {
    case Polarization::H: return PartyAction::ReflectH;
    case Polarization::V: return PartyAction::ReflectV;
    case Polarization::Plus: return PartyAction::ReflectPlus;
    case Polarization::Minus: return PartyAction::ReflectMinus;
  }
  return PartyAction::ReflectH;
}

inline std::string to_string(PartyAction a) {
  switch (a) {
    case PartyAction::ReflectH: return "R_H";
    case PartyAction::ReflectV: return "R_V";
    case PartyAction::ReflectPlus: return "R_+";
    case PartyAction::ReflectMinus: return "R_-";
    case PartyAction::Block: return "block";
    case PartyAction::Reflect: return "reflect";
    case PartyAction::PauliI: return "I";
    case PartyAction::PauliZ: return "Z";
  }
  return "?";
}

enum class DetectorEvent {
  D1,           // Alice's dark port
  D2,           // Alice's bright port
  DB,           // Bob's blocking detector
  DA,           // Alice's blocking detector (SC-QKD, Guo-Shi)
  DoubleAlice,  // two photons at Alice's detectors (intercept-resend)
  None,         // no modelled detector clicks
};

inline constexpr std::array<DetectorEvent, 6> kAllEvents{
    DetectorEvent::D1, DetectorEvent::D2, DetectorEvent::DB,
    DetectorEvent::DA, DetectorEvent::DoubleAlice, DetectorEvent::None};

inline std::string to_string(DetectorEvent e) {
  switch (e) {
    case DetectorEvent::D1: return "D1";
    case DetectorEvent::D2: return "D2";
    case DetectorEvent::DB: return "DB";
    case DetectorEvent::DA: return "DA";
    case DetectorEvent::DoubleAlice: return "DoubleAlice";
    case DetectorEvent::None: return "None";
  }
  return "?";
}

inline std::size_t event_index(DetectorEvent e) { return static_cast<std::size_t>(e); }

/// Eve's per-round record: the probe outcome she observed and her guess.
struct EveRecord {
  std::string outcome;  // probe level label, or "intercept:<pol>" / "intercept:none"
  int guess = 0;        // Z_i
  bool intercepted = false;
};

struct RoundRecord {
  ProtocolId protocol = ProtocolId::Noh09;
  std::string alice_state;  // polarization label, or Alice's action in SC-QKD/Guo-Shi
  std::optional<PartyAction> alice_action;
  PartyAction bob_action = PartyAction::ReflectH;
  DetectorEvent event = DetectorEvent::None;
  std::optional<EveRecord> eve;
  bool sifted = false;

  int alice_bit = 0;           // X_i as Alice would record it
  int bob_bit = 0;             // bit Bob infers from his own action
  bool key_candidate = false;  // inputs define a key bit (e.g. dissimilar actions)
  bool blocked = false;        // a blocking detector faced nonzero photon amplitude
};

}  // namespace cfqkd::protocols
