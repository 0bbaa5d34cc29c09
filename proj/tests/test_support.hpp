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

// Random generators shared by the property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cfqkd/qcore.hpp"

namespace cfqkd::testing {

inline qcore::Layout generic_layout(std::size_t dim) {
  qcore::Subsystem s{{qcore::SubsystemKind::Cascade, 0}, {}};
  for (std::size_t i = 0; i < dim; ++i) s.levels.push_back("l" + std::to_string(i));
  return qcore::Layout{s};
}

inline std::vector<qcore::Complex> gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<qcore::Complex> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline qcore::PureState random_pure(const qcore::Layout& layout, std::mt19937_64& rng) {
  return qcore::PureState::normalized(
      qcore::StateVector(layout, gaussian_vector(layout.dimension(), rng)));
}

/// Random density matrix of random rank: G G† / tr.
inline qcore::MixedState random_density(const qcore::Layout& layout, std::mt19937_64& rng) {
  const std::size_t d = layout.dimension();
  std::uniform_int_distribution<std::size_t> rank_pick(1, d);
  const std::size_t rank = rank_pick(rng);
  qcore::CMatrix g(d, rank);
  std::normal_distribution<double> n;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < rank; ++c) g(r, c) = {n(rng), n(rng)};
  qcore::CMatrix rho = g * g.adjoint();
  rho = (rho + rho.adjoint()) * qcore::Complex{0.5};
  return qcore::MixedState::normalized(layout, rho);
}

/// Random unitary by Gram-Schmidt on Gaussian columns.
inline qcore::CMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::vector<std::vector<qcore::Complex>> cols;
  while (cols.size() < d) {
    auto v = gaussian_vector(d, rng);
    for (const auto& c : cols) {
      qcore::Complex ip{};
      for (std::size_t i = 0; i < d; ++i) ip += std::conj(c[i]) * v[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= ip * c[i];
    }
    double n = 0;
    for (auto& x : v) n += std::norm(x);
    n = std::sqrt(n);
    if (n < 1e-8) continue;
    for (auto& x : v) x /= n;
    cols.push_back(v);
  }
  qcore::CMatrix u(d, d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r) u(r, c) = cols[c][r];
  return u;
}

}  // namespace cfqkd::testing
