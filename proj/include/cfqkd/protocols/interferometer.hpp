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
#include <mutex>
#include <random>
#include <span>
#include <vector>

#include "cfqkd/error.hpp"
#include "cfqkd/protocols/types.hpp"
#include "cfqkd/qcore.hpp"

namespace cfqkd::protocols {

using qcore::CMatrix;
using qcore::Complex;
using qcore::StateVector;
using qcore::SubsystemId;

/// Branches with squared norm below this are dropped.
inline constexpr double kNegligibleWeight = 1e-30;

/// Single-photon polarization vector in the level basis {vac, H, V}.
inline std::vector<Complex> polarization_vector(Polarization p) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (p) {
    case Polarization::H: return {0.0, 1.0, 0.0};
    case Polarization::V: return {0.0, 0.0, 1.0};
    case Polarization::Plus: return {0.0, r, r};
    case Polarization::Minus: return {0.0, r, -r};
  }
  return {};
}

/// One term of a round's evolution. Absorbed branches carry the event of
/// the detector that took the photon; the photon itself is replaced by
/// vacuum so that the coherent sum of all branches reproduces the
/// unmeasured state.
struct Branch {
  StateVector ket;
  bool live = true;
  DetectorEvent absorbed_at = DetectorEvent::None;
};

class BranchSet {
 public:
  explicit BranchSet(StateVector initial) { branches_.push_back({std::move(initial)}); }

  const std::vector<Branch>& branches() const { return branches_; }

  /// Applies a local unitary to every branch.
  void apply(const CMatrix& op, std::span<const SubsystemId> targets) {
    for (auto& b : branches_) b.ket = b.ket.apply(op, targets);
  }
  void apply(const CMatrix& op, std::initializer_list<SubsystemId> targets) {
    std::vector<SubsystemId> t(targets);
    apply(op, std::span<const SubsystemId>(t));
  }

  /// Projective blocking of the single-photon state `blocked` (a vector over
  /// the levels of `mode`, level 0 being vacuum). The blocked component is
  /// split off as an absorbed branch with the photon removed.
  void block(SubsystemId mode, const std::vector<Complex>& blocked, DetectorEvent event) {
    const auto& sub = branches_.front().ket.layout().subsystem(mode);
    if (blocked.size() != sub.dim()) throw Error("blocked state does not match the mode");
    std::vector<Complex> vac(sub.dim());
    vac[0] = 1.0;
    const CMatrix absorb = CMatrix::outer(vac, blocked);
    const CMatrix pass = CMatrix::identity(sub.dim()) - CMatrix::outer(blocked, blocked);

    std::vector<Branch> next;
    for (auto& b : branches_) {
      if (!b.live) {
        next.push_back(std::move(b));
        continue;
      }
      auto absorbed = b.ket.apply(absorb, {mode});
      auto passed = b.ket.apply(pass, {mode});
      if (absorbed.norm_squared() > kNegligibleWeight) {
        last_block_weight_ += absorbed.norm_squared();
        next.push_back({std::move(absorbed), false, event});
      }
      if (passed.norm_squared() > kNegligibleWeight) next.push_back({std::move(passed), true});
    }
    branches_ = std::move(next);
  }

  /// Total squared amplitude absorbed by blocking so far.
  double blocked_weight() const { return last_block_weight_; }

  /// Sum of every branch, i.e. the state had no detector been read out.
  StateVector coherent() const {
    StateVector sum = StateVector::zero(branches_.front().ket.layout());
    for (const auto& b : branches_) sum += b.ket;
    return sum;
  }

  /// Lossless 50:50 recombination of modes (a, b) into output ports
  /// D1 = (a - b)/√2 and D2 = (a + b)/√2, per polarization and per state of
  /// the remaining subsystems. Absorbed branches are vacuum in both modes
  /// and pass through unchanged.
  void recombine(SubsystemId a, SubsystemId b) {
    for (auto& br : branches_) {
      const auto& layout = br.ket.layout();
      const std::size_t d = layout.subsystem(a).dim();
      if (layout.subsystem(b).dim() != d) throw Error("recombined modes differ in dimension");
      br.ket = br.ket.apply(beam_splitter(d), {a, b})
                   .relabel(a, {qcore::kPortD1, layout.subsystem(a).levels})
                   .relabel(b, {qcore::kPortD2, layout.subsystem(b).levels});
    }
    recombined_ = true;
  }

  static CMatrix beam_splitter(std::size_t d) {
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix u = CMatrix::identity(d * d);
    for (std::size_t x = 1; x < d; ++x) {
      const std::size_t photon_in_a = x * d + 0, photon_in_b = 0 * d + x;
      const std::size_t to_d1 = photon_in_a, to_d2 = photon_in_b;
      u(photon_in_a, photon_in_a) = 0.0;
      u(photon_in_b, photon_in_b) = 0.0;
      u(to_d1, photon_in_a) = r;
      u(to_d2, photon_in_a) = r;
      u(to_d1, photon_in_b) = -r;
      u(to_d2, photon_in_b) = r;
    }
    return u;
  }

  bool recombined() const { return recombined_; }

 private:
  std::vector<Branch> branches_;
  double last_block_weight_ = 0.0;
  bool recombined_ = false;
};

/// Unnormalized post-detection state for one detector event.
struct EventBranch {
  DetectorEvent event;
  StateVector ket;
};

/// Exact outcome of a round: every detector event with the (unnormalized)
/// state left behind, plus the coherent pre-detection state.
class RoundOutcome {
 public:
  RoundOutcome() = default;
  RoundOutcome(std::vector<EventBranch> events, StateVector pre_detection, double blocked_weight)
      : events_(std::move(events)),
        pre_detection_(std::move(pre_detection)),
        blocked_weight_(blocked_weight) {}

  /// Reads out D1/D2 on a recombined branch set.
  static RoundOutcome detect(const BranchSet& set, StateVector pre_detection) {
    if (!set.recombined()) throw Error("detect requires recombined modes");
    std::vector<EventBranch> events;
    auto push = [&](DetectorEvent e, StateVector v) {
      if (v.norm_squared() > kNegligibleWeight) events.push_back({e, std::move(v)});
    };
    for (const auto& b : set.branches()) {
      if (!b.live) {
        push(b.absorbed_at, b.ket);
        continue;
      }
      const auto& layout = b.ket.layout();
      std::vector<std::size_t> photon;
      for (std::size_t l = 1; l < layout.subsystem(qcore::kPortD1).dim(); ++l) photon.push_back(l);
      const std::vector<std::size_t> vac{0};
      auto d1 = b.ket.restrict_to(qcore::kPortD1, photon);
      auto d2 = b.ket.restrict_to(qcore::kPortD2, photon).restrict_to(qcore::kPortD1, vac);
      auto none = b.ket.restrict_to(qcore::kPortD1, vac).restrict_to(qcore::kPortD2, vac);
      push(DetectorEvent::D1, std::move(d1));
      push(DetectorEvent::D2, std::move(d2));
      push(DetectorEvent::None, std::move(none));
    }
    return RoundOutcome(std::move(events), std::move(pre_detection), set.blocked_weight());
  }

  const std::vector<EventBranch>& events() const { return events_; }
  const StateVector& pre_detection() const { return pre_detection_; }
  double blocked_weight() const { return blocked_weight_; }
  bool blocked() const { return blocked_weight_ > kNegligibleWeight; }

  double probability(DetectorEvent e) const {
    double p = 0.0;
    for (const auto& b : events_)
      if (b.event == e) p += b.ket.norm_squared();
    return p;
  }

  double total_probability() const {
    double p = 0.0;
    for (const auto& b : events_) p += b.ket.norm_squared();
    return p;
  }

  /// Unnormalized reduced operator on `keep`, summed over branches of event
  /// `e` (all events when `e` is empty).
  CMatrix reduced(std::span<const SubsystemId> keep, std::optional<DetectorEvent> e = {}) const {
    std::optional<CMatrix> acc;
    for (const auto& b : events_) {
      if (e && b.event != *e) continue;
      auto r = qcore::reduced_operator(b.ket, keep);
      if (acc) *acc += r;
      else acc = std::move(r);
    }
    if (!acc) throw Error("conditioning event has zero probability");
    return *acc;
  }

  /// Normalized probe state, conditioned on `e` when given.
  qcore::MixedState probe_state(std::optional<DetectorEvent> e = {}) const {
    const std::vector<SubsystemId> keep{qcore::kProbe};
    const auto& layout = events_.front().ket.layout();
    return qcore::MixedState::normalized(layout.select(keep), reduced(keep, e));
  }

  /// Joint distribution of (event, probe level) for sampling.
  struct JointCell {
    DetectorEvent event;
    std::size_t probe_level;
    double probability;
  };
  std::vector<JointCell> joint_with_probe() const {
    std::vector<JointCell> cells;
    for (const auto& b : events_) {
      const auto& layout = b.ket.layout();
      if (!layout.contains(qcore::kProbe)) {
        cells.push_back({b.event, 0, b.ket.norm_squared()});
        continue;
      }
      const auto p = layout.position(qcore::kProbe);
      std::vector<double> w(layout.at(p).dim());
      for (std::size_t g = 0; g < b.ket.dimension(); ++g)
        w[layout.digit(g, p)] += std::norm(b.ket.amplitudes()[g]);
      for (std::size_t l = 0; l < w.size(); ++l)
        if (w[l] > kNegligibleWeight) cells.push_back({b.event, l, w[l]});
    }
    return cells;
  }

 private:
  std::vector<EventBranch> events_;
  StateVector pre_detection_;
  double blocked_weight_ = 0.0;
};

/// The parts of a RoundOutcome needed to sample it, precomputed.
class SamplingTable {
 public:
  explicit SamplingTable(const RoundOutcome& out)
      : cells_(out.joint_with_probe()), blocked_(out.blocked()) {
    std::vector<double> w;
    for (const auto& c : cells_) w.push_back(c.probability);
    param_ = std::discrete_distribution<std::size_t>::param_type(w.begin(), w.end());
  }

  bool blocked() const { return blocked_; }

  RoundOutcome::JointCell sample(std::mt19937_64& rng) const {
    std::discrete_distribution<std::size_t> pick;
    return cells_[pick(rng, param_)];
  }

 private:
  std::vector<RoundOutcome::JointCell> cells_;
  std::discrete_distribution<std::size_t>::param_type param_;
  bool blocked_;
};

/// Draws (event, probe level) from the exact joint distribution.
inline RoundOutcome::JointCell sample_joint(const RoundOutcome& out, std::mt19937_64& rng) {
  return SamplingTable(out).sample(rng);
}

/// Sampling tables keyed by a round's discrete inputs. Sessions revisit the
/// same few inputs, so each distinct evolution is computed once. Safe to
/// share between worker threads; entries are never removed, so returned
/// references stay valid.
class OutcomeCache {
 public:
  template <class Make>
  const SamplingTable& get(const std::vector<std::size_t>& key, Make&& make) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = tables_.find(key);
    if (it == tables_.end()) it = tables_.emplace(key, SamplingTable(make())).first;
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::vector<std::size_t>, SamplingTable> tables_;
};

}  // namespace cfqkd::protocols
