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
#include <string>
#include <vector>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/interferometer.hpp"
#include "cfqkd/protocols/noh09.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::protocols {

// Cascaded Noh09. Beam splitter k sends half of what reaches it into
// Alice's internal arm a_k and transmits the rest to splitter k+1; the
// transmission arm of splitter n is Bob's arm B. The photon sits in exactly
// one of a_1..a_n, B, so the internal arms are stored as a single
// which-arm register with levels "none" and "a<k>:<pol>", next to the
// ordinary mode B and Eve's probe.

inline constexpr SubsystemId kCascadeArms{qcore::SubsystemKind::Cascade, 0};
inline constexpr SubsystemId kCascadePorts{qcore::SubsystemKind::Cascade, 1};

inline qcore::Subsystem cascade_arms(std::size_t n) {
  std::vector<std::string> levels{"none"};
  for (std::size_t k = 1; k <= n; ++k) {
    levels.push_back("a" + std::to_string(k) + ":H");
    levels.push_back("a" + std::to_string(k) + ":V");
  }
  return {kCascadeArms, std::move(levels)};
}

/// Output ports after the return pass: D1, D2 at the first splitter and the
/// open port x<k> of every later splitter.
inline qcore::Subsystem cascade_ports(std::size_t n) {
  std::vector<std::string> levels{"vac", "D1", "D2"};
  for (std::size_t k = 2; k <= n; ++k) levels.push_back("x" + std::to_string(k));
  return {kCascadePorts, std::move(levels)};
}

inline qcore::Layout cascade_layout(std::size_t n) {
  if (n < 1) throw Error("cascade needs n >= 1");
  // Checked before building the levels so absurd n fails fast.
  if (9 * (2 * n + 1) > qcore::kMaxDimension)
    throw Error("cascade n=" + std::to_string(n) + " exceeds the dimension budget");
  return qcore::Layout{cascade_arms(n), qcore::optical_mode(qcore::kModeB), qcore::probe_qutrit()};
}

inline qcore::Layout cascade_output_layout(std::size_t n) {
  // The port register says where the photon left; this mode carries its
  // polarization.
  return qcore::Layout{cascade_ports(n), qcore::optical_mode(qcore::kPortD1),
                       qcore::probe_qutrit()};
}

namespace detail {

inline std::size_t arm_level(std::size_t k, std::size_t pol) { return 1 + 2 * (k - 1) + (pol - 1); }

inline void require_cascade_strategy(const EveStrategy& eve) {
  if (eve.kind != StrategyKind::NoEve && eve.kind != StrategyKind::Noiseless &&
      eve.kind != StrategyKind::CascadeAttack)
    throw Error("strategy " + attacks::to_string(eve.kind) + " does not apply to cascade");
}

}  // namespace detail

/// State after the first pass: amplitude 2^(-k/2) in a_k and 2^(-n/2) in B.
inline StateVector cascade_initial(std::size_t n, Polarization j) {
  if (!rectilinear(j)) throw Error("cascade photons are H or V");
  const auto layout = cascade_layout(n);
  const std::size_t pol = j == Polarization::H ? 1 : 2;
  std::vector<Complex> amps(layout.dimension());
  for (std::size_t k = 1; k <= n; ++k)
    amps[layout.compose(std::vector<std::size_t>{detail::arm_level(k, pol), 0, 0})] =
        std::pow(2.0, -0.5 * static_cast<double>(k));
  amps[layout.compose(std::vector<std::size_t>{0, pol, 0})] = std::pow(2.0, -0.5 * static_cast<double>(n));
  return StateVector(layout, amps);
}

/// Joint state right after Eve's onward attack on B.
inline StateVector cascade_onward_state(std::size_t n, Polarization j) {
  return attacks::noiseless_onward(cascade_initial(n, j));
}

/// One term of the one-hot expansion: register r in 1..n is Alice's arm
/// a_r, register n+1 is Bob's arm, 0 means no photon.
struct CascadeTerm {
  std::size_t occupied;
  std::string polarization;
  std::string probe;
  Complex amplitude;
};

inline std::vector<CascadeTerm> cascade_one_hot(const StateVector& v) {
  const auto& layout = v.layout();
  const std::size_t n = (layout.subsystem(kCascadeArms).dim() - 1) / 2;
  std::vector<CascadeTerm> terms;
  const auto pa = layout.position(kCascadeArms), pb = layout.position(qcore::kModeB),
             pe = layout.position(qcore::kProbe);
  const std::vector<std::string> pols{"vac", "H", "V"};
  for (std::size_t g = 0; g < v.dimension(); ++g) {
    const Complex a = v.amplitudes()[g];
    if (std::abs(a) <= qcore::kConstructionTolerance) continue;
    const std::size_t arm = layout.digit(g, pa), b = layout.digit(g, pb);
    const std::string probe = layout.at(pe).levels[layout.digit(g, pe)];
    if (arm != 0 && b != 0) throw Error("two photons in the cascade");
    if (arm != 0)
      terms.push_back({(arm - 1) / 2 + 1, pols[(arm - 1) % 2 + 1], probe, a});
    else if (b != 0)
      terms.push_back({n + 1, pols[b], probe, a});
    else
      terms.push_back({0, "vac", probe, a});
  }
  return terms;
}

/// Return pass. Walking back from splitter n, the returning amplitude meets
/// a_k: (a_k + in)/√2 continues toward splitter k-1 and (a_k - in)/√2 leaves
/// by the open port x_k. At the first splitter those two outputs are D2 and
/// D1, which for n = 1 is the Noh09 recombination.
inline StateVector cascade_return_pass(const StateVector& v) {
  const auto& layout = v.layout();
  const std::size_t n = (layout.subsystem(kCascadeArms).dim() - 1) / 2;
  const auto out_layout = cascade_output_layout(n);
  const auto pa = layout.position(kCascadeArms), pb = layout.position(qcore::kModeB),
             pe = layout.position(qcore::kProbe);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Complex> out(out_layout.dimension());
  auto emit = [&](std::size_t port, std::size_t pol, std::size_t probe, Complex a) {
    out[out_layout.compose(std::vector<std::size_t>{port, pol, probe})] += a;
  };
  for (std::size_t g = 0; g < v.dimension(); ++g) {
    const Complex amp = v.amplitudes()[g];
    if (amp == Complex{}) continue;
    const std::size_t arm = layout.digit(g, pa), b = layout.digit(g, pb), e = layout.digit(g, pe);
    if (arm == 0 && b == 0) {
      emit(0, 0, e, amp);
      continue;
    }
    if (arm != 0 && b != 0) throw Error("two photons in the cascade");
    const std::size_t pol = arm != 0 ? (arm - 1) % 2 + 1 : b;
    const std::size_t start = arm != 0 ? (arm - 1) / 2 + 1 : 0;
    // Photon in a_start, or in B when start == 0.
    Complex in = start == 0 ? amp : Complex{};
    for (std::size_t k = n; k >= 1; --k) {
      const Complex a = k == start ? amp : Complex{};
      const Complex up = r * (a + in), exit = r * (a - in);
      if (k == 1) {
        emit(1, pol, e, exit);
        emit(2, pol, e, up);
      } else {
        emit(k + 1, pol, e, exit);
      }
      in = up;
    }
  }
  return StateVector(out_layout, std::move(out));
}

/// Exact cascade round: onward attack on B, Bob's R_k, unattack, return
/// pass, detection.
inline RoundOutcome cascade_evolve(std::size_t n, Polarization j, PartyAction action, bool attacked) {
  detail::require_rectilinear_action(action);
  BranchSet set(cascade_initial(n, j));
  const CMatrix u = attacks::noiseless_unitary(3);
  if (attacked) set.apply(u, {qcore::kModeB, qcore::kProbe});
  set.block(qcore::kModeB, polarization_vector(orthogonal(reflected(action))), DetectorEvent::DB);
  if (attacked) set.apply(u.adjoint(), {qcore::kModeB, qcore::kProbe});

  StateVector pre = set.coherent();
  std::vector<EventBranch> events;
  auto push = [&](DetectorEvent ev, StateVector s) {
    if (s.norm_squared() > kNegligibleWeight) events.push_back({ev, std::move(s)});
  };
  for (const auto& br : set.branches()) {
    auto passed = cascade_return_pass(br.ket);
    if (!br.live) {
      push(br.absorbed_at, std::move(passed));
      continue;
    }
    std::vector<std::size_t> exits;
    for (std::size_t k = 3; k < n + 2; ++k) exits.push_back(k);
    push(DetectorEvent::D1, passed.restrict_to(kCascadePorts, std::vector<std::size_t>{1}));
    push(DetectorEvent::D2, passed.restrict_to(kCascadePorts, std::vector<std::size_t>{2}));
    std::vector<std::size_t> none{0};
    none.insert(none.end(), exits.begin(), exits.end());
    push(DetectorEvent::None, passed.restrict_to(kCascadePorts, none));
  }
  return RoundOutcome(std::move(events), std::move(pre), set.blocked_weight());
}

inline RoundRecord cascade_round(std::size_t n, Polarization j, PartyAction action,
                                 const EveStrategy& eve, std::mt19937_64& rng) {
  detail::require_cascade_strategy(eve);
  if (!rectilinear(j)) throw Error("cascade photons are H or V");
  detail::require_rectilinear_action(action);
  static OutcomeCache cache;
  const auto& out = cache.get({n, static_cast<std::size_t>(j), static_cast<std::size_t>(action),
                               static_cast<std::size_t>(eve.attacking())},
                              [&] { return cascade_evolve(n, j, action, eve.attacking()); });
  RoundRecord rec;
  rec.protocol = ProtocolId::Cascade;
  rec.alice_state = to_string(j);
  rec.bob_action = action;
  rec.alice_bit = key_bit(j);
  rec.bob_bit = key_bit(orthogonal(reflected(action)));
  rec.key_candidate = true;
  detail::sample_into(rec, out, eve.attacking(), attacks::GuessRule::ternary_then_coin(), rng);
  return rec;
}

}  // namespace cfqkd::protocols
