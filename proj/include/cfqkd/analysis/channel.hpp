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
#include <string>
#include <vector>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/error.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::analysis {

using qcore::kConstructionTolerance;
using qcore::kDerivedTolerance;

/// Classical channel X -> Z with binary X. Z values of zero total
/// probability are left out.
class GuessChannel {
 public:
  GuessChannel(std::vector<double> priors, std::vector<std::string> z_labels,
               std::vector<std::vector<double>> p_z_given_x)
      : priors_(std::move(priors)), labels_(std::move(z_labels)), table_(std::move(p_z_given_x)) {
    if (priors_.size() != 2 || table_.size() != 2) throw Error("guess channel needs binary X");
    double total = 0.0;
    for (double p : priors_) {
      if (p < -kConstructionTolerance || p > 1.0 + kConstructionTolerance)
        throw Error("prior outside [0,1]");
      total += p;
    }
    if (std::abs(total - 1.0) > kConstructionTolerance) throw Error("priors do not sum to 1");
    for (const auto& row : table_) {
      if (row.size() != labels_.size()) throw Error("channel row does not match the Z alphabet");
      double s = 0.0;
      for (double p : row) {
        if (p < -kConstructionTolerance) throw Error("negative channel probability");
        s += p;
      }
      if (std::abs(s - 1.0) > kConstructionTolerance) throw Error("channel row does not sum to 1");
    }
    prune();
  }

  std::size_t z_size() const { return labels_.size(); }
  const std::vector<std::string>& z_labels() const { return labels_; }
  double prior(int x) const { return priors_.at(static_cast<std::size_t>(x)); }
  double p_z_given_x(std::size_t z, int x) const { return table_.at(static_cast<std::size_t>(x)).at(z); }
  double joint(int x, std::size_t z) const { return prior(x) * p_z_given_x(z, x); }
  double p_z(std::size_t z) const { return joint(0, z) + joint(1, z); }
  double posterior(int x, std::size_t z) const {
    const double pz = p_z(z);
    if (pz <= 0.0) throw Error("posterior undefined for a Z value that never occurs");
    return joint(x, z) / pz;
  }
  std::size_t z_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw Error("Z value '" + label + "' does not occur");
  }

 private:
  void prune() {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> table(2);
    for (std::size_t z = 0; z < labels_.size(); ++z) {
      if (priors_[0] * table_[0][z] + priors_[1] * table_[1][z] <= 0.0) continue;
      labels.push_back(labels_[z]);
      for (int x = 0; x < 2; ++x) table[x].push_back(table_[x][z]);
    }
    labels_ = std::move(labels);
    table_ = std::move(table);
  }

  std::vector<double> priors_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> table_;  // [x][z]
};

namespace detail {

inline void require_binary(const qcore::ProbeEnsemble& ens) {
  if (ens.size() != 2) throw Error("expected a two-member ensemble");
  if (ens[0].bit != 0 || ens[1].bit != 1) throw Error("ensemble members must carry bits 0 and 1");
}

/// Born probabilities of the probe levels for each bit.
inline std::vector<std::vector<double>> level_probabilities(const qcore::ProbeEnsemble& ens) {
  require_binary(ens);
  std::vector<std::vector<double>> p(2);
  for (int x = 0; x < 2; ++x) {
    const auto& rho = ens[static_cast<std::size_t>(x)].state;
    for (std::size_t l = 0; l < rho.dimension(); ++l) p[x].push_back(std::max(0.0, rho.population(l)));
  }
  return p;
}

}  // namespace detail

/// Eve's binarized guess Z: level-basis measurement followed by the rule's
/// post-processing.
inline GuessChannel guess_channel(const qcore::ProbeEnsemble& ens, const attacks::GuessRule& rule) {
  const auto levels = detail::level_probabilities(ens);
  if (levels[0].size() != rule.levels.size())
    throw Error("guess rule does not span the probe space");
  std::vector<std::vector<double>> table(2, std::vector<double>(2));
  for (int x = 0; x < 2; ++x)
    for (std::size_t l = 0; l < rule.levels.size(); ++l) {
      table[x][0] += levels[x][l] * rule.p_zero[l];
      table[x][1] += levels[x][l] * (1.0 - rule.p_zero[l]);
    }
  return GuessChannel({ens[0].prior, ens[1].prior}, {"0", "1"}, table);
}

/// Eve's raw measurement record: Z is the observed probe level itself.
inline GuessChannel record_channel(const qcore::ProbeEnsemble& ens) {
  auto levels = detail::level_probabilities(ens);
  // Renormalize tiny rounding drift so each row is a distribution.
  for (auto& row : levels) {
    double s = 0.0;
    for (double p : row) s += p;
    for (double& p : row) p /= s;
  }
  return GuessChannel({ens[0].prior, ens[1].prior}, ens.layout().at(0).levels, levels);
}

/// Alice -> Bob channel with per-bit error rates and equal priors.
inline GuessChannel error_channel(double error_given_0, double error_given_1) {
  return GuessChannel({0.5, 0.5}, {"0", "1"},
                      {{1.0 - error_given_0, error_given_0}, {error_given_1, 1.0 - error_given_1}});
}

/// I(X:Z) = H(X) - H(X|Z) in bits.
inline double mutual_information(const GuessChannel& ch) {
  const double hx = qcore::shannon_entropy({ch.prior(0), ch.prior(1)});
  double hxz = 0.0;
  for (std::size_t z = 0; z < ch.z_size(); ++z)
    hxz += ch.p_z(z) * qcore::shannon_entropy({ch.posterior(0, z), ch.posterior(1, z)});
  return std::clamp(hx - hxz, 0.0, 1.0);
}

/// Sum over X, Z of P(X|Z)^2 P(Z), over Eve's full measurement record.
inline double record_collision_probability(const GuessChannel& ch) {
  double pc = 0.0;
  for (std::size_t z = 0; z < ch.z_size(); ++z)
    for (int x = 0; x < 2; ++x) pc += ch.posterior(x, z) * ch.posterior(x, z) * ch.p_z(z);
  return pc;
}

/// The same sum for a binary guess Z.
inline double collision_probability(const GuessChannel& ch) {
  if (ch.z_size() > 2) throw Error("collision probability is defined for a binary guess");
  return record_collision_probability(ch);
}

/// r = -log2(p_c) - s.
inline double key_rate(double p_c, double s) {
  if (!(p_c >= 0.5 - kConstructionTolerance && p_c <= 1.0 + kConstructionTolerance))
    throw Error("collision probability outside [1/2, 1]");
  if (!(s >= 0.0)) throw Error("security parameter s must be >= 0");
  return -std::log2(std::clamp(p_c, 0.5, 1.0)) - s;
}

/// The e in [0, 1/2] with h(e) = t.
inline double entropy_inverse(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error("entropy value outside [0,1]");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  // h is flat near 1/2, so bisect on e itself rather than stopping on |h - t|.
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    (qcore::binary_entropy(mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cfqkd::analysis
