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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cfqkd/analysis/channel.hpp"
#include "cfqkd/attacks/conditional.hpp"
#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::analysis {

using attacks::EveStrategy;
using attacks::StrategyKind;
using protocols::ProtocolId;

struct Discrimination {
  double D;
  double p_guess;
  double e_prime;
};

inline Discrimination discrimination_report(const qcore::ProbeEnsemble& ens) {
  if (ens.size() != 2) throw Error("discrimination needs a two-member ensemble");
  const double d = qcore::trace_distance(ens[0].state, ens[1].state);
  return {d, 0.5 * (1.0 + d), 0.5 * (1.0 - d)};
}

struct HolevoAnalysis {
  double chi;
  double e_chi;  // error of the binary symmetric channel carrying chi bits
  double p_c;
  double r0;
};

inline HolevoAnalysis holevo_analysis(const qcore::ProbeEnsemble& ens) {
  const double chi = qcore::holevo_chi(ens);
  if (chi > 1.0 + kDerivedTolerance) throw Error("Holevo quantity exceeds one bit");
  const double e = entropy_inverse(std::clamp(1.0 - chi, 0.0, 1.0));
  const double pc = e * e + (1.0 - e) * (1.0 - e);
  return {chi, e, pc, key_rate(pc, 0.0)};
}

/// Noh09 with intercept-resend on a fraction f of rounds and the noiseless
/// attack on the rest.
struct HybridPoint {
  double f;
  double e;
  double I_AB;
  double I_AE;
};

inline HybridPoint hybrid_analysis(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw Error("attack fraction f outside [0,1]");
  const double e = f / (1.0 + f);
  const double i_ab = 1.0 - qcore::binary_entropy(e);
  const double i_ae =
      (1.0 - f) / (1.0 + f) * (1.0 - qcore::binary_entropy(0.25)) + 2.0 * f / (1.0 + f);
  return {f, e, i_ab, i_ae};
}

struct HybridThreshold {
  double f_star;
  double e_max;
};

/// Smallest f with I(A:E) >= I(A:B), by bisection.
inline HybridThreshold hybrid_threshold() {
  auto gap = [](double f) {
    const auto p = hybrid_analysis(f);
    return p.I_AE - p.I_AB;
  };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double f = 0.5 * (lo + hi);
  return {f, f / (1.0 + f)};
}

struct CascadeReport {
  std::size_t n;
  double D;
  double p_c;         // over Eve's raw record
  double p_c_binary;  // after the ternary-then-coin binarization
  double r0;
};

inline CascadeReport cascade_report(std::size_t n) {
  const auto ens = attacks::probe_conditional_states(
      ProtocolId::Cascade, {StrategyKind::CascadeAttack, 0.0}, attacks::Conditioning::BlockedBranch, n);
  const double d = discrimination_report(ens).D;
  const double pc = record_collision_probability(record_channel(ens));
  const double pcb = collision_probability(guess_channel(ens, attacks::GuessRule::ternary_then_coin()));
  return {n, d, pc, pcb, key_rate(pc, 0.0)};
}

/// Exact sifted QBER (the average over Alice's two bit values of the error
/// rate among key-entering D1 rounds), enumerated over uniformly chosen
/// inputs with exact outcome probabilities.
inline double analytic_qber(ProtocolId protocol, const EveStrategy& eve, std::size_t n = 1) {
  using namespace protocols;
  SessionConfig::require_supported(protocol, eve.kind);
  std::array<double, 2> err{}, tot{};
  auto add = [&](int x, int y, double p_d1) {
    tot[x] += p_d1;
    if (x != y) err[x] += p_d1;
  };
  const bool attacked = eve.attacking();
  switch (protocol) {
    case ProtocolId::Noh09: {
      if (eve.kind == StrategyKind::InterceptResend || eve.kind == StrategyKind::Hybrid)
        return hybrid_analysis(eve.f).e;
      for (auto j : {Polarization::H, Polarization::V})
        for (auto a : {PartyAction::ReflectH, PartyAction::ReflectV}) {
          const int y = key_bit(orthogonal(reflected(a)));
          double p = noh09_evolve(j, a, attacked ? ChannelAttack::Noiseless : ChannelAttack::None)
                         .probability(DetectorEvent::D1);
          if (eve.kind == StrategyKind::NoisyFlip)
            p = (1.0 - eve.f) * p +
                eve.f * noh09_evolve(j, a, ChannelAttack::Flip).probability(DetectorEvent::D1);
          add(key_bit(j), y, p);
        }
      break;
    }
    case ProtocolId::Cascade:
      for (auto j : {Polarization::H, Polarization::V})
        for (auto a : {PartyAction::ReflectH, PartyAction::ReflectV})
          add(key_bit(j), key_bit(orthogonal(reflected(a))),
              cascade_evolve(n, j, a, attacked).probability(DetectorEvent::D1));
      break;
    case ProtocolId::ScQkd:
    case ProtocolId::GuoShi:
      for (auto a : {PartyAction::Block, PartyAction::Reflect})
        for (auto b : {PartyAction::Block, PartyAction::Reflect}) {
          if (a == b) continue;
          const auto out = protocol == ProtocolId::ScQkd ? scqkd_evolve(a, b, attacked)
                                                         : guoshi_evolve(a, b, attacked);
          add(a == PartyAction::Block ? 0 : 1, b == PartyAction::Reflect ? 0 : 1,
              out.probability(DetectorEvent::D1));
        }
      break;
    case ProtocolId::Bb84Mod:
      for (auto j : {Polarization::H, Polarization::V, Polarization::Plus, Polarization::Minus})
        for (auto a : {PartyAction::ReflectH, PartyAction::ReflectV, PartyAction::ReflectPlus,
                       PartyAction::ReflectMinus}) {
          if (rectilinear(j) != rectilinear(reflected(a))) continue;
          add(key_bit(j), key_bit(orthogonal(reflected(a))),
              bb84mod_evolve(j, a, eve).probability(DetectorEvent::D1));
        }
      break;
    case ProtocolId::PingPong:
      // Every message-mode round is decoded.
      for (int j : {0, 1}) {
        const double e = pingpong_message(j, eve).decoding_error;
        tot[j] += 1.0;
        err[j] += e;
      }
      break;
  }
  if (tot[0] <= 0.0 && tot[1] <= 0.0) throw Error("no key-entering rounds");
  if (tot[0] <= 0.0) return err[1] / tot[1];
  if (tot[1] <= 0.0) return err[0] / tot[0];
  return 0.5 * (err[0] / tot[0] + err[1] / tot[1]);
}

/// Per-bit error rates behind analytic_qber, for the Alice-Bob channel.
inline std::array<double, 2> analytic_bit_errors(ProtocolId protocol, const EveStrategy& eve,
                                                 std::size_t n = 1) {
  if (protocol == ProtocolId::PingPong)
    return {protocols::pingpong_message(0, eve).decoding_error,
            protocols::pingpong_message(1, eve).decoding_error};
  const double e = analytic_qber(protocol, eve, n);
  return {e, e};
}

/// Guess rule Eve uses for a protocol's probe.
inline attacks::GuessRule guess_rule_for(ProtocolId p) {
  switch (p) {
    case ProtocolId::ScQkd:
    case ProtocolId::GuoShi: return attacks::GuessRule::scqkd();
    case ProtocolId::PingPong: return attacks::GuessRule::pingpong();
    default: return attacks::GuessRule::ternary_then_coin();
  }
}

/// Key rate of the BB84-augmented variant at zero error: half the rounds
/// survive basis sifting and, with nothing to compress, each keeps one bit.
inline double bb84mod_key_rate(double s) { return 0.5 * key_rate(0.5, s); }

struct SecurityReport {
  ProtocolId protocol = ProtocolId::Noh09;
  EveStrategy strategy;
  std::size_t n = 1;
  double s = 0.0;
  attacks::Conditioning conditioning = attacks::Conditioning::BlockedBranch;

  std::optional<double> qber;  // exact, from the round evolution
  std::optional<double> D, p_guess, e_prime;
  std::optional<double> I_AB, I_AE_binarized, I_AE_record;
  std::optional<double> p_c, r0, r_s;
  std::optional<double> chi, e_chi, p_c_chi, r0_chi;
  std::optional<double> f_star, e_max;
};

/// Closed-form report for one protocol and strategy. Probe ensembles use
/// the blocked-branch conditioning. For the intercept-resend mixtures the
/// discrimination and Holevo figures describe the noiseless part, and
/// I(A:E) is the mixture formula.
inline SecurityReport analyze(ProtocolId protocol, const EveStrategy& eve, std::size_t n = 1,
                              double s = 0.0) {
  protocols::SessionConfig::require_supported(protocol, eve.kind);
  if (!(s >= 0.0)) throw Error("security parameter s must be >= 0");
  SecurityReport rep;
  rep.protocol = protocol;
  rep.strategy = eve;
  rep.n = n;
  rep.s = s;
  rep.qber = analytic_qber(protocol, eve, n);
  const auto bit_err = analytic_bit_errors(protocol, eve, n);
  rep.I_AB = mutual_information(error_channel(bit_err[0], bit_err[1]));
  if (protocol == ProtocolId::Noh09) {
    const auto t = hybrid_threshold();
    rep.f_star = t.f_star;
    rep.e_max = t.e_max;
  }

  if (protocol == ProtocolId::Bb84Mod) {
    // No binary probe ensemble; the zero-error rate applies only when the
    // check finds no errors.
    if (*rep.qber <= kDerivedTolerance) {
      rep.r0 = bb84mod_key_rate(0.0);
      rep.r_s = bb84mod_key_rate(s);
    }
    return rep;
  }

  if (!eve.attacking()) {
    rep.D = 0.0;
    rep.p_guess = 0.5;
    rep.e_prime = 0.5;
    rep.I_AE_binarized = rep.I_AE_record = 0.0;
    rep.p_c = 0.5;
    rep.r0 = key_rate(0.5, 0.0);
    rep.r_s = key_rate(0.5, s);
    rep.chi = 0.0;
    rep.e_chi = 0.5;
    rep.p_c_chi = 0.5;
    rep.r0_chi = 1.0;
    return rep;
  }

  const bool mixture = eve.kind == StrategyKind::InterceptResend || eve.kind == StrategyKind::Hybrid;
  const EveStrategy probe_eve = mixture ? EveStrategy::noiseless() : eve;
  const auto ens = attacks::probe_conditional_states(protocol, probe_eve, rep.conditioning, n);
  const auto disc = discrimination_report(ens);
  rep.D = disc.D;
  rep.p_guess = disc.p_guess;
  rep.e_prime = disc.e_prime;
  const auto ch = guess_channel(ens, guess_rule_for(protocol));
  rep.I_AE_binarized = mixture ? hybrid_analysis(eve.f).I_AE : mutual_information(ch);
  rep.I_AE_record = mutual_information(record_channel(ens));
  rep.p_c = protocol == ProtocolId::Cascade ? record_collision_probability(record_channel(ens))
                                            : collision_probability(ch);
  rep.r0 = key_rate(*rep.p_c, 0.0);
  rep.r_s = key_rate(*rep.p_c, s);
  const auto hol = holevo_analysis(ens);
  rep.chi = hol.chi;
  rep.e_chi = hol.e_chi;
  rep.p_c_chi = hol.p_c;
  rep.r0_chi = hol.r0;
  return rep;
}

}  // namespace cfqkd::analysis
