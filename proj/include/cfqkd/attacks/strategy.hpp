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
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cfqkd/error.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::attacks {

using qcore::CMatrix;
using qcore::Complex;
using qcore::SubsystemId;

enum class StrategyKind {
  NoEve,
  Noiseless,        // attack/unattack pair; each protocol uses its own form
  NoisyFlip,        // flip variant on a fraction f of rounds
  InterceptResend,  // intercept-resend on a fraction f, noiseless otherwise
  Hybrid,           // same mixture as InterceptResend
  PingPongAttack,
  GuoShiAttack,
  CascadeAttack,
};

struct EveStrategy {
  StrategyKind kind = StrategyKind::NoEve;
  double f = 0.0;

  static EveStrategy none() { return {StrategyKind::NoEve, 0.0}; }
  static EveStrategy noiseless() { return {StrategyKind::Noiseless, 0.0}; }
  static EveStrategy noisy_flip(double f) { return checked({StrategyKind::NoisyFlip, f}); }
  static EveStrategy intercept_resend(double f) {
    return checked({StrategyKind::InterceptResend, f});
  }
  static EveStrategy hybrid(double f) { return checked({StrategyKind::Hybrid, f}); }

  bool attacking() const { return kind != StrategyKind::NoEve; }
  bool has_fraction() const {
    return kind == StrategyKind::NoisyFlip || kind == StrategyKind::InterceptResend ||
           kind == StrategyKind::Hybrid;
  }

 private:
  static EveStrategy checked(EveStrategy s) {
    if (!(s.f >= 0.0 && s.f <= 1.0)) throw Error("attack fraction f outside [0,1]");
    return s;
  }
};

inline std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::NoEve: return "none";
    case StrategyKind::Noiseless: return "noiseless";
    case StrategyKind::NoisyFlip: return "noisyflip";
    case StrategyKind::InterceptResend: return "interceptresend";
    case StrategyKind::Hybrid: return "hybrid";
    case StrategyKind::PingPongAttack: return "pingpong";
    case StrategyKind::GuoShiAttack: return "guoshi";
    case StrategyKind::CascadeAttack: return "cascade";
  }
  return "?";
}

inline StrategyKind parse_strategy(const std::string& s) {
  for (auto k : {StrategyKind::NoEve, StrategyKind::Noiseless, StrategyKind::NoisyFlip,
                 StrategyKind::InterceptResend, StrategyKind::Hybrid})
    if (to_string(k) == s) return k;
  throw Error("unknown attack '" + s + "'");
}

/// Probe measurement in the probe's level basis followed by a map from the
/// observed level to a binary guess. `p_zero[level]` is P(Z=0 | level).
struct GuessRule {
  std::string name;
  std::vector<std::string> levels;
  std::vector<double> p_zero;

  /// Noh09 and cascade: e_H -> 0, e_V -> 1, e0 -> fair coin.
  static GuessRule ternary_then_coin() {
    return {"ternary-then-coin", {"e0", "eH", "eV"}, {0.5, 1.0, 0.0}};
  }
  /// SC-QKD and Guo-Shi: e0 -> 0, e_H -> 1.
  static GuessRule scqkd() { return {"scqkd", {"e0", "eH"}, {1.0, 0.0}}; }
  /// Ping-pong probe: e0 -> 0, e1 -> 1.
  static GuessRule pingpong() { return {"pingpong", {"e0", "e1"}, {1.0, 0.0}}; }

  /// Post-processing of an observed level index.
  int guess(std::size_t level, std::mt19937_64& rng) const {
    const double p0 = p_zero.at(level);
    if (p0 >= 1.0) return 0;
    if (p0 <= 0.0) return 1;
    return std::bernoulli_distribution(p0)(rng) ? 0 : 1;
  }
};

// Attack unitaries on (mode (x) probe). Modes have levels {vac, H[, V]},
// probes {e0, eH[, eV]}; index = mode_level * probe_dim + probe_level.

/// Completes a partial injective map on basis states to a permutation
/// matrix: unmapped inputs stay fixed when their slot is free, otherwise
/// they are sent, in order, to unused outputs.
inline CMatrix complete_permutation(std::size_t dim,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& map) {
  std::vector<long> target(dim, -1);
  std::vector<bool> used(dim, false);
  for (auto [from, to] : map) {
    if (from >= dim || to >= dim || target[from] != -1 || used[to])
      throw Error("partial map is not injective");
    target[from] = static_cast<long>(to);
    used[to] = true;
  }
  for (std::size_t from = 0; from < dim; ++from) {
    if (target[from] == -1 && !used[from]) {
      target[from] = static_cast<long>(from);
      used[from] = true;
    }
  }
  std::size_t next = 0;
  for (std::size_t from = 0; from < dim; ++from) {
    if (target[from] != -1) continue;
    while (used[next]) ++next;
    target[from] = static_cast<long>(next);
    used[next] = true;
  }
  CMatrix u(dim, dim);
  for (std::size_t from = 0; from < dim; ++from) u(static_cast<std::size_t>(target[from]), from) = 1.0;
  return u;
}

/// |α, e0> -> |α, e_α> for α in {vac, H, V} (e_vac = e0); |vac, e_j> fixed.
/// Completed as a photon-controlled swap e0 <-> e_α, which is self-inverse.
/// `mode_dim` is 3 (vac, H, V) or 2 (vac, H); the probe has the same size.
inline CMatrix noiseless_unitary(std::size_t mode_dim = 3) {
  const std::size_t d = mode_dim;
  std::vector<std::pair<std::size_t, std::size_t>> map;
  for (std::size_t alpha = 0; alpha < d; ++alpha) map.push_back({alpha * d + 0, alpha * d + alpha});
  for (std::size_t alpha = 1; alpha < d; ++alpha) map.push_back({alpha * d + alpha, alpha * d + 0});
  for (std::size_t j = 1; j < d; ++j) map.push_back({0 * d + j, 0 * d + j});
  return complete_permutation(d * d, map);
}

/// Flip variant: |j, e0> -> |j̄, e_j> for j in {H, V}; vacuum as in the
/// noiseless attack.
inline CMatrix noisy_flip_unitary() {
  constexpr std::size_t d = 3;
  const std::size_t vac = 0, h = 1, v = 2;
  std::vector<std::pair<std::size_t, std::size_t>> map{
      {vac * d + 0, vac * d + 0},
      {h * d + 0, v * d + h},
      {v * d + 0, h * d + v},
      {vac * d + h, vac * d + h},
      {vac * d + v, vac * d + v},
      {v * d + h, h * d + 0},
      {h * d + v, v * d + 0},
  };
  return complete_permutation(d * d, map);
}

/// Ping-pong attack on (spin B (x) probe qubit), chosen so that the
/// unattack after Bob's Z leaves (|↑↓>e0 - |↓↑>e1)/√2 while Bob's I is
/// undone exactly. Basis order: |up,e0>, |up,e1>, |down,e0>, |down,e1>.
inline CMatrix pingpong_unitary() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix u(4, 4);
  // |down,e0> -> |up,e0>
  u(0, 2) = 1.0;
  // |down,e1> -> |down,e1>
  u(3, 3) = 1.0;
  // (|up,e0> - |up,e1>)/√2 -> |up,e1>
  u(1, 0) += r;
  u(1, 1) += -r;
  // (|up,e0> + |up,e1>)/√2 -> |down,e0>
  u(2, 0) += r;
  u(2, 1) += r;
  return u;
}

/// Probe levels with nonzero weight outside e0 make the onward attack
/// inapplicable.
inline void require_fresh_probe(const qcore::StateVector& joint, SubsystemId probe) {
  const auto& layout = joint.layout();
  const auto p = layout.position(probe);
  for (std::size_t g = 0; g < joint.dimension(); ++g)
    if (layout.digit(g, p) != 0 && std::abs(joint.amplitudes()[g]) > qcore::kConstructionTolerance)
      throw Error("onward attack requires the probe in e0");
}

inline qcore::StateVector noiseless_onward(const qcore::StateVector& joint,
                                           SubsystemId mode = qcore::kModeB,
                                           SubsystemId probe = qcore::kProbe) {
  require_fresh_probe(joint, probe);
  return joint.apply(noiseless_unitary(joint.layout().subsystem(mode).dim()), {mode, probe});
}

inline qcore::StateVector noiseless_return(const qcore::StateVector& joint,
                                           SubsystemId mode = qcore::kModeB,
                                           SubsystemId probe = qcore::kProbe) {
  return joint.apply(noiseless_unitary(joint.layout().subsystem(mode).dim()).adjoint(),
                     {mode, probe});
}

inline qcore::PureState noiseless_onward(const qcore::PureState& joint) {
  return qcore::PureState(noiseless_onward(joint.vector()));
}
inline qcore::PureState noiseless_return(const qcore::PureState& joint) {
  return qcore::PureState(noiseless_return(joint.vector()));
}

/// With probability f uses the flip unitary, otherwise the noiseless one.
/// Returns the transformed state and whether the flip was applied; the
/// matching return hook is `noisy_flip_return(state, flipped)`.
inline std::pair<qcore::StateVector, bool> noisy_flip_onward(const qcore::StateVector& joint,
                                                             double f, std::mt19937_64& rng) {
  if (!(f >= 0.0 && f <= 1.0)) throw Error("flip fraction outside [0,1]");
  const bool flipped = f > 0.0 && std::bernoulli_distribution(f)(rng);
  require_fresh_probe(joint, qcore::kProbe);
  const CMatrix u = flipped ? noisy_flip_unitary() : noiseless_unitary(3);
  return {joint.apply(u, {qcore::kModeB, qcore::kProbe}), flipped};
}

inline qcore::StateVector noisy_flip_return(const qcore::StateVector& joint, bool flipped) {
  const CMatrix u = flipped ? noisy_flip_unitary() : noiseless_unitary(3);
  return joint.apply(u.adjoint(), {qcore::kModeB, qcore::kProbe});
}

struct ProbeMeasurement {
  std::string outcome;
  int guess;
};

/// Samples the projective outcome of the probe in its level basis and
/// applies the guess rule's post-processing.
inline ProbeMeasurement measure_probe(const qcore::MixedState& probe, const GuessRule& rule,
                                      std::mt19937_64& rng) {
  if (probe.layout().size() != 1 || probe.dimension() != rule.levels.size())
    throw Error("probe state does not match the guess rule");
  std::vector<double> weights(probe.dimension());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = std::max(0.0, probe.population(i));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const std::size_t level = pick(rng);
  return {rule.levels[level], rule.guess(level, rng)};
}

}  // namespace cfqkd::attacks
