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
#include <cmath>
#include <vector>

#include "cfqkd/error.hpp"
#include "cfqkd/qcore/matrix.hpp"
#include "cfqkd/qcore/state.hpp"

namespace cfqkd::qcore {

/// ½ Σ|λ_i(ρ - σ)|.
inline double trace_distance(const MixedState& rho, const MixedState& sigma) {
  if (!(rho.layout() == sigma.layout()))
    throw Error("trace_distance: states have different subsystem structure");
  double d = 0.0;
  for (double l : hermitian_eigenvalues(rho.matrix() - sigma.matrix())) d += std::abs(l);
  return std::clamp(0.5 * d, 0.0, 1.0);
}

struct HelstromResult {
  double p_guess;
  double error;  // 1 - p_guess
};

/// Optimal probability of identifying which of two states was prepared:
/// ½(1 + ||p0 ρ0 - p1 ρ1||_1).
inline HelstromResult helstrom_guess(const MixedState& rho0, const MixedState& rho1,
                                     double prior0) {
  if (!(prior0 >= 0.0 && prior0 <= 1.0)) throw Error("helstrom_guess: prior outside [0,1]");
  if (!(rho0.layout() == rho1.layout()))
    throw Error("helstrom_guess: states have different subsystem structure");
  const CMatrix gamma = rho0.matrix() * Complex{prior0} - rho1.matrix() * Complex{1.0 - prior0};
  double norm1 = 0.0;
  for (double l : hermitian_eigenvalues(gamma)) norm1 += std::abs(l);
  const double p = std::clamp(0.5 * (1.0 + norm1), 0.0, 1.0);
  return {p, 1.0 - p};
}

/// -x log2 x with 0 log 0 := 0.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("binary_entropy: p outside [0,1]");
  return entropy_term(p) + entropy_term(1.0 - p);
}

/// Shannon entropy (bits) of a probability vector.
inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h += entropy_term(x);
  return h;
}

inline double von_neumann_entropy(const MixedState& rho) {
  double s = 0.0;
  // Eigenvalues within roundoff of zero contribute nothing.
  for (double l : hermitian_eigenvalues(rho)) s += entropy_term(std::max(l, 0.0));
  return s;
}

/// S(Σ p_i ρ_i) - Σ p_i S(ρ_i).
inline double holevo_chi(const ProbeEnsemble& ens) {
  double chi = von_neumann_entropy(ens.average());
  for (const auto& m : ens.members()) chi -= m.prior * von_neumann_entropy(m.state);
  return std::max(chi, 0.0);
}

}  // namespace cfqkd::qcore
