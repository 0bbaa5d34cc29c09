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

#include "cfqkd/attacks/intercept.hpp"
#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/interferometer.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::protocols {

using attacks::EveStrategy;
using attacks::StrategyKind;

/// What Eve does to the external arm in one Noh09-type round.
enum class ChannelAttack { None, Noiseless, Flip, InterceptResend };

/// Draws the per-round attack from a strategy. Fractional strategies spend
/// exactly one uniform draw.
inline ChannelAttack resolve_channel_attack(const EveStrategy& eve, std::mt19937_64& rng) {
  switch (eve.kind) {
    case StrategyKind::NoEve: return ChannelAttack::None;
    case StrategyKind::Noiseless: return ChannelAttack::Noiseless;
    case StrategyKind::NoisyFlip:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eve.f ? ChannelAttack::Flip
                                                                           : ChannelAttack::Noiseless;
    case StrategyKind::InterceptResend:
    case StrategyKind::Hybrid:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < eve.f
                 ? ChannelAttack::InterceptResend
                 : ChannelAttack::Noiseless;
    default: throw Error("strategy " + attacks::to_string(eve.kind) + " does not apply to noh09");
  }
}

inline qcore::Layout noh09_layout() {
  return qcore::Layout{qcore::optical_mode(qcore::kModeA), qcore::optical_mode(qcore::kModeB),
                       qcore::probe_qutrit()};
}

/// (|0,j> + |j,0>)_AB / √2 (x) |e0>.
inline StateVector noh09_initial(Polarization j) {
  const auto layout = noh09_layout();
  const auto pol = polarization_vector(j);
  std::vector<Complex> amps(layout.dimension());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t l = 1; l < 3; ++l) {
    amps[layout.compose(std::vector<std::size_t>{0, l, 0})] += r * pol[l];
    amps[layout.compose(std::vector<std::size_t>{l, 0, 0})] += r * pol[l];
  }
  return StateVector(layout, amps);
}

namespace detail {

inline CMatrix channel_unitary(ChannelAttack attack) {
  return attack == ChannelAttack::Flip ? attacks::noisy_flip_unitary() : attacks::noiseless_unitary(3);
}

/// Source, onward attack and Bob's R_k. R_k reflects polarization k and
/// blocks its orthogonal partner into D_B.
inline BranchSet noh09_through_bob(Polarization j, PartyAction action, ChannelAttack attack) {
  if (attack == ChannelAttack::InterceptResend)
    throw Error("intercept-resend rounds are event-level; use attacks::intercept_resend");
  const Polarization kept = reflected(action);
  BranchSet set(noh09_initial(j));
  if (attack != ChannelAttack::None) set.apply(channel_unitary(attack), {qcore::kModeB, qcore::kProbe});
  set.block(qcore::kModeB, polarization_vector(orthogonal(kept)), DetectorEvent::DB);
  return set;
}

}  // namespace detail

/// Joint state right after Bob's action, before Eve's return hook; the
/// absorbed branch appears with Bob's mode in vacuum.
inline StateVector noh09_after_bob(Polarization j, PartyAction action, ChannelAttack attack) {
  return detail::noh09_through_bob(j, action, attack).coherent();
}

/// Exact Noh09-type evolution for one (photon, Bob action, channel attack)
/// triple; the same interferometer serves the BB84-augmented variant.
inline RoundOutcome noh09_evolve(Polarization j, PartyAction action, ChannelAttack attack) {
  BranchSet set = detail::noh09_through_bob(j, action, attack);
  if (attack != ChannelAttack::None)
    set.apply(detail::channel_unitary(attack).adjoint(), {qcore::kModeB, qcore::kProbe});
  StateVector pre = set.coherent();
  set.recombine(qcore::kModeA, qcore::kModeB);
  return RoundOutcome::detect(set, std::move(pre));
}

namespace detail {

inline void require_rectilinear_action(PartyAction a) {
  if (a != PartyAction::ReflectH && a != PartyAction::ReflectV)
    throw Error("noh09 expects Bob's action R_H or R_V, got " + to_string(a));
}

/// Samples an outcome and fills the detector/Eve fields of `rec`.
inline void sample_into(RoundRecord& rec, const SamplingTable& out, bool attacked,
                        const attacks::GuessRule& rule, std::mt19937_64& rng) {
  const auto cell = out.sample(rng);
  rec.event = cell.event;
  rec.sifted = cell.event == DetectorEvent::D1;
  rec.blocked = out.blocked();
  if (attacked) {
    EveRecord eve;
    eve.outcome = rule.levels.at(cell.probe_level);
    eve.guess = rule.guess(cell.probe_level, rng);
    rec.eve = eve;
  }
}

}  // namespace detail

/// One Noh09 round: Alice's photon `j`, Bob's R_H/R_V, Eve's strategy.
inline RoundRecord noh09_round(Polarization j, PartyAction action, const EveStrategy& eve,
                               std::mt19937_64& rng) {
  if (!rectilinear(j)) throw Error("noh09 photons are H or V");
  detail::require_rectilinear_action(action);

  RoundRecord rec;
  rec.protocol = ProtocolId::Noh09;
  rec.alice_state = to_string(j);
  rec.bob_action = action;
  rec.alice_bit = key_bit(j);
  rec.bob_bit = key_bit(orthogonal(reflected(action)));
  rec.key_candidate = true;

  const ChannelAttack attack = resolve_channel_attack(eve, rng);
  if (attack == ChannelAttack::InterceptResend) {
    auto ir = attacks::intercept_resend(j, rng);
    rec.event = ir.event;
    rec.sifted = ir.event == DetectorEvent::D1;
    rec.eve = ir.record;
    return rec;
  }
  static OutcomeCache cache;
  const auto& out = cache.get({static_cast<std::size_t>(j), static_cast<std::size_t>(action),
                               static_cast<std::size_t>(attack)},
                              [&] { return noh09_evolve(j, action, attack); });
  detail::sample_into(rec, out, attack != ChannelAttack::None,
                      attacks::GuessRule::ternary_then_coin(), rng);
  return rec;
}

/// BB84-augmented Noh09: four photon states, four R_k actions. Eve may only
/// use the H/V noiseless attack.
inline RoundOutcome bb84mod_evolve(Polarization state, PartyAction action,
                                   const EveStrategy& eve) {
  if (eve.kind != StrategyKind::NoEve && eve.kind != StrategyKind::Noiseless)
    throw Error("bb84mod supports only the noiseless H/V attack");
  return noh09_evolve(state, action,
                      eve.attacking() ? ChannelAttack::Noiseless : ChannelAttack::None);
}

inline RoundRecord bb84mod_round(Polarization state, PartyAction action, const EveStrategy& eve,
                                 std::mt19937_64& rng) {
  if (eve.kind != StrategyKind::NoEve && eve.kind != StrategyKind::Noiseless)
    throw Error("bb84mod supports only the noiseless H/V attack");
  static OutcomeCache cache;
  const auto& out = cache.get({static_cast<std::size_t>(state), static_cast<std::size_t>(action),
                               static_cast<std::size_t>(eve.attacking())},
                              [&] { return bb84mod_evolve(state, action, eve); });
  RoundRecord rec;
  rec.protocol = ProtocolId::Bb84Mod;
  rec.alice_state = to_string(state);
  rec.bob_action = action;
  rec.alice_bit = key_bit(state);
  rec.bob_bit = key_bit(orthogonal(reflected(action)));
  rec.key_candidate = rectilinear(state) == rectilinear(reflected(action));
  detail::sample_into(rec, out, eve.attacking(), attacks::GuessRule::ternary_then_coin(), rng);
  return rec;
}

}  // namespace cfqkd::protocols
