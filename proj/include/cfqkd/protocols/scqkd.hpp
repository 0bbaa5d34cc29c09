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

#include <cmath>
#include <random>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/interferometer.hpp"
#include "cfqkd/protocols/noh09.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::protocols {

// SC-QKD and Guo-Shi use one fixed polarization H, so modes are {vac, H}
// and the probe is a qubit {e0, eH}.

inline qcore::Layout fixed_polarization_layout() {
  return qcore::Layout{qcore::fixed_polarization_mode(qcore::kModeA),
                       qcore::fixed_polarization_mode(qcore::kModeB), qcore::probe_qubit()};
}

/// (|0,H> + |H,0>)_AB / √2 (x) |e0>.
inline StateVector fixed_polarization_initial() {
  const auto layout = fixed_polarization_layout();
  const double r = 1.0 / std::sqrt(2.0);
  return r * StateVector::basis(layout, {"vac", "H", "e0"}) +
         r * StateVector::basis(layout, {"H", "vac", "e0"});
}

namespace detail {

inline void require_block_reflect(PartyAction a) {
  if (a != PartyAction::Block && a != PartyAction::Reflect)
    throw Error("expected block or reflect, got " + to_string(a));
}

inline bool noiseless_or_none(const EveStrategy& eve, StrategyKind alias) {
  if (eve.kind == StrategyKind::NoEve) return false;
  if (eve.kind == StrategyKind::Noiseless || eve.kind == alias) return true;
  throw Error("strategy " + attacks::to_string(eve.kind) + " does not apply here");
}

inline void fill_block_reflect_bits(RoundRecord& rec, PartyAction a, PartyAction b) {
  rec.alice_state = to_string(a);
  rec.alice_action = a;
  rec.bob_action = b;
  // (block, reflect) carries 0 and (reflect, block) carries 1.
  rec.alice_bit = a == PartyAction::Block ? 0 : 1;
  rec.bob_bit = b == PartyAction::Reflect ? 0 : 1;
  rec.key_candidate = a != b;
}

}  // namespace detail

namespace detail {

/// Two arms A and B of one H photon; Alice's block absorbs A into D_A,
/// Bob's block absorbs B into D_B, and Eve's attack/unattack pair brackets
/// Bob's intervention on B.
inline RoundOutcome block_reflect_evolve(PartyAction alice, PartyAction bob, bool attacked) {
  require_block_reflect(alice);
  require_block_reflect(bob);
  const std::vector<Complex> photon{0.0, 1.0};
  const CMatrix u = attacks::noiseless_unitary(2);

  BranchSet set(fixed_polarization_initial());
  if (alice == PartyAction::Block) set.block(qcore::kModeA, photon, DetectorEvent::DA);
  if (attacked) set.apply(u, {qcore::kModeB, qcore::kProbe});
  if (bob == PartyAction::Block) set.block(qcore::kModeB, photon, DetectorEvent::DB);
  if (attacked) set.apply(u.adjoint(), {qcore::kModeB, qcore::kProbe});

  StateVector pre = set.coherent();
  set.recombine(qcore::kModeA, qcore::kModeB);
  return RoundOutcome::detect(set, std::move(pre));
}

}  // namespace detail

/// Semi-counterfactual QKD. Arm B is the external arm: Eve attacks it on
/// the way to Bob and undoes the attack on the way back.
inline RoundOutcome scqkd_evolve(PartyAction alice, PartyAction bob, bool attacked) {
  return detail::block_reflect_evolve(alice, bob, attacked);
}

inline RoundRecord scqkd_round(PartyAction alice, PartyAction bob, const EveStrategy& eve,
                               std::mt19937_64& rng) {
  const bool attacked = detail::noiseless_or_none(eve, StrategyKind::Noiseless);
  static OutcomeCache cache;
  const auto& out = cache.get({static_cast<std::size_t>(alice), static_cast<std::size_t>(bob),
                               static_cast<std::size_t>(attacked)},
                              [&] { return scqkd_evolve(alice, bob, attacked); });
  RoundRecord rec;
  rec.protocol = ProtocolId::ScQkd;
  detail::fill_block_reflect_bits(rec, alice, bob);
  detail::sample_into(rec, out, attacked, attacks::GuessRule::scqkd(), rng);
  return rec;
}

/// Guo-Shi as a one-way Mach-Zehnder. Alice's block/pass acts on arm A
/// before anything leaves her station; arm B carries Bob's block/pass.
/// Eve attacks B where it leaves Alice and unattacks it on the leg from
/// Bob's intervention to the recombining beam splitter, whose dark port is
/// D1. The amplitudes coincide with SC-QKD.
inline RoundOutcome guoshi_evolve(PartyAction alice, PartyAction bob, bool attacked) {
  return detail::block_reflect_evolve(alice, bob, attacked);
}

inline RoundRecord guoshi_round(PartyAction alice, PartyAction bob, const EveStrategy& eve,
                                std::mt19937_64& rng) {
  const bool attacked = detail::noiseless_or_none(eve, StrategyKind::GuoShiAttack);
  static OutcomeCache cache;
  const auto& out = cache.get({static_cast<std::size_t>(alice), static_cast<std::size_t>(bob),
                               static_cast<std::size_t>(attacked)},
                              [&] { return guoshi_evolve(alice, bob, attacked); });
  RoundRecord rec;
  rec.protocol = ProtocolId::GuoShi;
  detail::fill_block_reflect_bits(rec, alice, bob);
  detail::sample_into(rec, out, attacked, attacks::GuessRule::scqkd(), rng);
  return rec;
}

}  // namespace cfqkd::protocols
