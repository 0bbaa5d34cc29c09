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

#include <optional>
#include <vector>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/cascade.hpp"
#include "cfqkd/protocols/noh09.hpp"
#include "cfqkd/protocols/pingpong.hpp"
#include "cfqkd/protocols/scqkd.hpp"
#include "cfqkd/protocols/session.hpp"
#include "cfqkd/protocols/types.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::attacks {

/// Which rounds Eve's probe state is conditioned on.
///  - BlockedBranch: the whole key-defining round (a mismatch in Noh09, a
///    dissimilar action pair in SC-QKD), whatever the detector said.
///  - D1Event: only rounds announced as D1.
enum class Conditioning { BlockedBranch, D1Event };

inline std::string to_string(Conditioning c) {
  return c == Conditioning::BlockedBranch ? "blocked-branch" : "D1";
}

namespace detail {

inline qcore::MixedState probe_of(const protocols::RoundOutcome& out, Conditioning c) {
  if (c == Conditioning::D1Event) return out.probe_state(protocols::DetectorEvent::D1);
  return out.probe_state();
}

/// (1-f) a + f b on the same layout.
inline qcore::MixedState mix(const qcore::MixedState& a, const qcore::MixedState& b, double f) {
  return qcore::MixedState(a.layout(), a.matrix() * Complex{1.0 - f} + b.matrix() * Complex{f});
}

}  // namespace detail

/// Eve's probe states for key bit 0 and 1 with equal priors, computed from
/// the exact round evolution. `n` is the cascade depth.
inline qcore::ProbeEnsemble probe_conditional_states(protocols::ProtocolId protocol,
                                                     const EveStrategy& eve, Conditioning cond,
                                                     std::size_t n = 1) {
  using namespace protocols;
  if (!eve.attacking()) throw Error("no probe without an attack");
  SessionConfig::require_supported(protocol, eve.kind);
  std::vector<qcore::MixedState> rho;
  switch (protocol) {
    case ProtocolId::Noh09: {
      if (eve.kind == StrategyKind::InterceptResend || eve.kind == StrategyKind::Hybrid)
        throw Error("intercept-resend leaves no probe to condition");
      // Bit j is carried by photon j meeting R_j̄.
      for (auto j : {Polarization::H, Polarization::V}) {
        const auto action = reflect_action(orthogonal(j));
        auto quiet = detail::probe_of(noh09_evolve(j, action, ChannelAttack::Noiseless), cond);
        if (eve.kind == StrategyKind::NoisyFlip && eve.f > 0.0) {
          auto flip = detail::probe_of(noh09_evolve(j, action, ChannelAttack::Flip), cond);
          quiet = detail::mix(quiet, flip, eve.f);
        }
        rho.push_back(std::move(quiet));
      }
      break;
    }
    case ProtocolId::ScQkd:
    case ProtocolId::GuoShi: {
      const auto evolve = protocol == ProtocolId::ScQkd ? scqkd_evolve : guoshi_evolve;
      rho.push_back(detail::probe_of(evolve(PartyAction::Block, PartyAction::Reflect, true), cond));
      rho.push_back(detail::probe_of(evolve(PartyAction::Reflect, PartyAction::Block, true), cond));
      break;
    }
    case ProtocolId::Cascade:
      for (auto j : {Polarization::H, Polarization::V})
        rho.push_back(detail::probe_of(
            cascade_evolve(n, j, reflect_action(orthogonal(j)), true), cond));
      break;
    case ProtocolId::PingPong:
      // Message mode has no detector announcement; both readings coincide.
      for (int j : {0, 1}) {
        const auto psi = pingpong_message(j, eve).final_state;
        const std::vector<qcore::SubsystemId> keep{qcore::kProbe};
        rho.push_back(qcore::MixedState(psi.layout().select(keep), qcore::reduced_operator(psi, keep)));
      }
      break;
    case ProtocolId::Bb84Mod:
      throw Error("bb84mod has no binary probe ensemble");
  }
  return qcore::ProbeEnsemble::binary(rho[0], rho[1]);
}

/// Alice-side states after a Noh09 mismatch round for photon j: under
/// `eve` and without Eve.
struct ResidualDisturbance {
  qcore::MixedState attacked;    // ½(|0><0| + |j><j|) under the noiseless attack
  qcore::MixedState unattacked;  // ½(|0> + |j>)(<0| + <j|)
  double trace_distance;
};

inline ResidualDisturbance residual_disturbance(protocols::Polarization j,
                                                const EveStrategy& eve = EveStrategy::noiseless()) {
  using namespace protocols;
  const auto action = reflect_action(orthogonal(j));
  const std::vector<qcore::SubsystemId> keep{qcore::kModeA};
  auto side = [&](ChannelAttack a) {
    const auto out = noh09_evolve(j, action, a);
    const auto& pre = out.pre_detection();
    return qcore::MixedState(pre.layout().select(keep), qcore::reduced_operator(pre, keep));
  };
  if (eve.kind != StrategyKind::NoEve && eve.kind != StrategyKind::Noiseless)
    throw Error("residual disturbance is defined for the noiseless attack");
  auto s1 = side(eve.attacking() ? ChannelAttack::Noiseless : ChannelAttack::None);
  auto s2 = side(ChannelAttack::None);
  const double d = qcore::trace_distance(s1, s2);
  return {std::move(s1), std::move(s2), d};
}

}  // namespace cfqkd::attacks
