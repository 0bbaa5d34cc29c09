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

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/noh09.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::protocols {

inline qcore::Subsystem pingpong_probe() { return {qcore::kProbe, {"e0", "e1"}}; }

inline qcore::Layout pingpong_layout() {
  return qcore::Layout{qcore::spin(qcore::kSpinA), qcore::spin(qcore::kSpinB), pingpong_probe()};
}

/// (|up,down> + sign |down,up>)/√2 on spins A, B.
inline StateVector pingpong_bell(double sign) {
  const qcore::Layout ab{qcore::spin(qcore::kSpinA), qcore::spin(qcore::kSpinB)};
  const double r = 1.0 / std::sqrt(2.0);
  return r * StateVector::basis(ab, {"up", "down"}) + (sign * r) * StateVector::basis(ab, {"down", "up"});
}

struct PingPongOutcome {
  StateVector final_state;  // spins A, B and probe after the return leg
  double decoding_error;    // P(Alice's Bell measurement returns the other bit)
};

/// Message mode: Bob encodes bit j with I (0) or Z (1) on the travelling
/// spin; Alice reads it with a Bell measurement distinguishing the two
/// superpositions of |up,down> and |down,up>.
inline PingPongOutcome pingpong_message(int j, const EveStrategy& eve) {
  if (j != 0 && j != 1) throw Error("ping-pong bit must be 0 or 1");
  if (eve.kind != StrategyKind::NoEve && eve.kind != StrategyKind::Noiseless &&
      eve.kind != StrategyKind::PingPongAttack)
    throw Error("strategy " + attacks::to_string(eve.kind) + " does not apply to pingpong");
  const bool attacked = eve.attacking();

  StateVector psi = qcore::tensor(pingpong_bell(1.0), StateVector::basis(qcore::Layout{pingpong_probe()}, {"e0"}));
  const CMatrix u = attacks::pingpong_unitary();
  if (attacked) psi = psi.apply(u, {qcore::kSpinB, qcore::kProbe});
  if (j == 1) {
    CMatrix z = CMatrix::identity(2);
    z(1, 1) = -1.0;
    psi = psi.apply(z, {qcore::kSpinB});
  }
  if (attacked) psi = psi.apply(u.adjoint(), {qcore::kSpinB, qcore::kProbe});

  // Weight on the wrong Bell state, summed over the probe.
  const StateVector wrong = pingpong_bell(j == 0 ? -1.0 : 1.0);
  double err = 0.0;
  for (std::size_t e = 0; e < 2; ++e) {
    Complex overlap{};
    for (std::size_t g = 0; g < wrong.dimension(); ++g)
      overlap += std::conj(wrong.amplitudes()[g]) * psi.amplitudes()[g * 2 + e];  // probe is last
    err += std::norm(overlap);
  }
  return {std::move(psi), err};
}

}  // namespace cfqkd::protocols
