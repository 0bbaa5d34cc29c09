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
#include <cstdint>
#include <random>
#include <vector>

#include "cfqkd/error.hpp"

namespace cfqkd::analysis {

struct FinalKey {
  std::vector<int> bits;
  std::size_t sifted_length = 0;
  double rate = 0.0;
  std::uint64_t seed = 0;
};

/// Compresses `bits` to floor(n * rate) bits with a random binary Toeplitz
/// matrix drawn from `seed`, a 2-universal family.
inline FinalKey privacy_amplification(const std::vector<int>& bits, double rate, std::uint64_t seed) {
  if (bits.empty()) throw Error("nothing to compress");
  if (!(rate > 0.0 && rate <= 1.0)) throw Error("compression rate must lie in (0,1]");
  const std::size_t n = bits.size();
  // The small slack keeps exact products such as 1000 * 0.5 from rounding down.
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) * rate + 1e-9));
  if (m == 0) throw Error("compression rate leaves no output bits");
  for (int b : bits)
    if (b != 0 && b != 1) throw Error("key bits must be 0 or 1");

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> diag(n + m - 1);
  for (auto& d : diag) d = static_cast<std::uint8_t>(rng() & 1u);

  FinalKey key;
  key.sifted_length = n;
  key.rate = rate;
  key.seed = seed;
  key.bits.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    int acc = 0;
    // Entry (i, j) is diag[i - j + n - 1].
    for (std::size_t j = 0; j < n; ++j) acc ^= diag[i + n - 1 - j] & bits[j];
    key.bits[i] = acc;
  }
  return key;
}

}  // namespace cfqkd::analysis
