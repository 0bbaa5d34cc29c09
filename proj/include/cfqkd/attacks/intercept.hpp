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

#include <random>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/interferometer.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::attacks {

using protocols::EveRecord;

/// Event-level result of one intercept-resend round.
struct InterceptOutcome {
  protocols::DetectorEvent event;
  EveRecord record;
};

/// Probabilities of the intercept-resend events for a photon of
/// polarization `j`: Eve's measurement on the external arm finds the photon
/// with probability ½. On a find she sends an identical photon straight
/// back to Alice, where it meets an empty internal arm and leaves by D1 or
/// D2. On no find the photon is in Alice's arm and Eve's injected photon
/// of random polarization produces a double detection.
struct InterceptDistribution {
  double found;       // photon found in the external arm
  double d1_given_found;
  double d2_given_found;
};

inline InterceptDistribution intercept_distribution(protocols::Polarization j) {
  using namespace protocols;
  qcore::Layout ab{qcore::optical_mode(qcore::kModeA), qcore::optical_mode(qcore::kModeB)};
  const auto pol = polarization_vector(j);
  // Before Eve: (|0,j> + |j,0>)/√2. Weight in the external arm:
  std::vector<qcore::Complex> amps(ab.dimension());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t l = 1; l < 3; ++l) {
    amps[ab.compose(std::vector<std::size_t>{0, l})] += r * pol[l];
    amps[ab.compose(std::vector<std::size_t>{l, 0})] += r * pol[l];
  }
  qcore::StateVector before(ab, amps);
  const std::vector<std::size_t> photon{1, 2};
  const double found = before.weight_on(qcore::kModeB, photon);

  // Resent photon alone in the external arm.
  if (!rectilinear(j)) throw Error("intercept-resend is defined for H/V photons");
  BranchSet resent(qcore::StateVector::basis(ab, {"vac", to_string(j)}));
  auto pre = resent.coherent();
  resent.recombine(qcore::kModeA, qcore::kModeB);
  auto out = RoundOutcome::detect(resent, pre);
  return {found, out.probability(DetectorEvent::D1), out.probability(DetectorEvent::D2)};
}

inline InterceptOutcome intercept_resend(protocols::Polarization j, std::mt19937_64& rng) {
  using protocols::DetectorEvent;
  const auto dist = intercept_distribution(j);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (u01(rng) < dist.found) {
    const bool d1 = u01(rng) < dist.d1_given_found;
    return {d1 ? DetectorEvent::D1 : DetectorEvent::D2,
            {"intercept:" + protocols::to_string(j), protocols::key_bit(j), true}};
  }
  const int coin = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
  return {DetectorEvent::DoubleAlice, {"intercept:none", coin, true}};
}

}  // namespace cfqkd::attacks
