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
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfqkd/error.hpp"
#include "cfqkd/qcore/matrix.hpp"

namespace cfqkd::qcore {

enum class SubsystemKind {
  ModeA,     // Alice's internal interferometer arm
  ModeB,     // external arm travelling to Bob
  ProbeE,    // Eve's ancilla
  Cascade,   // which-arm register of a cascaded interferometer
  SpinA,
  SpinB,
  PortD1,    // beam-splitter output towards D1
  PortD2,    // beam-splitter output towards D2
};

/// Identifies one tensor factor. `index` distinguishes repeated kinds.
struct SubsystemId {
  SubsystemKind kind;
  int index = 0;

  friend bool operator==(const SubsystemId&, const SubsystemId&) = default;

  std::string name() const {
    switch (kind) {
      case SubsystemKind::ModeA: return "A";
      case SubsystemKind::ModeB: return "B";
      case SubsystemKind::ProbeE: return "E";
      case SubsystemKind::Cascade: return "R" + std::to_string(index);
      case SubsystemKind::SpinA: return "spinA";
      case SubsystemKind::SpinB: return "spinB";
      case SubsystemKind::PortD1: return "D1";
      case SubsystemKind::PortD2: return "D2";
    }
    return "?";
  }
};

inline constexpr SubsystemId kModeA{SubsystemKind::ModeA};
inline constexpr SubsystemId kModeB{SubsystemKind::ModeB};
inline constexpr SubsystemId kProbe{SubsystemKind::ProbeE};
inline constexpr SubsystemId kSpinA{SubsystemKind::SpinA};
inline constexpr SubsystemId kSpinB{SubsystemKind::SpinB};
inline constexpr SubsystemId kPortD1{SubsystemKind::PortD1};
inline constexpr SubsystemId kPortD2{SubsystemKind::PortD2};

/// A tensor factor with named basis levels ("vac", "H", "e0", ...).
struct Subsystem {
  SubsystemId id;
  std::vector<std::string> levels;

  std::size_t dim() const { return levels.size(); }

  std::size_t level(const std::string& label) const {
    auto it = std::find(levels.begin(), levels.end(), label);
    if (it == levels.end())
      throw Error("subsystem " + id.name() + " has no level '" + label + "'");
    return static_cast<std::size_t>(it - levels.begin());
  }

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

/// Optical mode holding vacuum or one photon of polarization H or V.
inline Subsystem optical_mode(SubsystemId id) { return {id, {"vac", "H", "V"}}; }
/// Optical mode restricted to a single fixed polarization H.
inline Subsystem fixed_polarization_mode(SubsystemId id) { return {id, {"vac", "H"}}; }
/// Probe with orthogonal tags e0, eH, eV.
inline Subsystem probe_qutrit() { return {kProbe, {"e0", "eH", "eV"}}; }
/// Probe with orthogonal tags e0, eH.
inline Subsystem probe_qubit() { return {kProbe, {"e0", "eH"}}; }
inline Subsystem spin(SubsystemId id) { return {id, {"up", "down"}}; }

/// Ordered list of subsystems; the first subsystem is the most significant
/// digit of the composite index.
class Layout {
 public:
  Layout() = default;
  Layout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
      if (subsystems_[i].dim() == 0) throw Error("subsystem with no levels");
      for (std::size_t j = 0; j < i; ++j)
        if (subsystems_[i].id == subsystems_[j].id)
          throw Error("duplicate subsystem id " + subsystems_[i].id.name());
    }
    dimension_ = 1;
    for (const auto& s : subsystems_) {
      dimension_ *= s.dim();
      if (dimension_ > kMaxDimension)
        throw Error("composite dimension exceeds the budget of " +
                    std::to_string(kMaxDimension));
    }
    strides_.assign(subsystems_.size(), 1);
    for (std::size_t i = subsystems_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * subsystems_[i].dim();
  }
  Layout(std::initializer_list<Subsystem> subs)
      : Layout(std::vector<Subsystem>(subs)) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return subsystems_.size(); }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const Subsystem& at(std::size_t pos) const { return subsystems_.at(pos); }
  std::size_t stride(std::size_t pos) const { return strides_.at(pos); }

  bool contains(SubsystemId id) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(),
                       [&](const Subsystem& s) { return s.id == id; });
  }

  std::size_t position(SubsystemId id) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
      if (subsystems_[i].id == id) return i;
    throw Error("unknown subsystem id " + id.name());
  }

  const Subsystem& subsystem(SubsystemId id) const {
    return subsystems_[position(id)];
  }

  std::size_t digit(std::size_t index, std::size_t pos) const {
    return (index / strides_[pos]) % subsystems_[pos].dim();
  }

  std::vector<std::size_t> decompose(std::size_t index) const {
    std::vector<std::size_t> out(subsystems_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = digit(index, i);
    return out;
  }

  std::size_t compose(std::span<const std::size_t> digits) const {
    if (digits.size() != subsystems_.size()) throw Error("compose: wrong digit count");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= subsystems_[i].dim()) throw Error("compose: level out of range");
      idx += digits[i] * strides_[i];
    }
    return idx;
  }

  /// Composite index from one level label per subsystem, in layout order.
  std::size_t index_of(const std::vector<std::string>& labels) const {
    if (labels.size() != subsystems_.size()) throw Error("index_of: wrong label count");
    std::vector<std::size_t> d(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) d[i] = subsystems_[i].level(labels[i]);
    return compose(d);
  }

  std::string label(std::size_t index) const {
    std::string out = "|";
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
      if (i) out += ",";
      out += subsystems_[i].levels[digit(index, i)];
    }
    return out + ">";
  }

  Layout concat(const Layout& other) const {
    auto subs = subsystems_;
    subs.insert(subs.end(), other.subsystems_.begin(), other.subsystems_.end());
    return Layout(std::move(subs));
  }

  Layout select(std::span<const SubsystemId> keep) const {
    std::vector<Subsystem> subs;
    for (const auto& s : subsystems_)
      if (std::find(keep.begin(), keep.end(), s.id) != keep.end()) subs.push_back(s);
    return Layout(std::move(subs));
  }

  friend bool operator==(const Layout& a, const Layout& b) {
    return a.subsystems_ == b.subsystems_;
  }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

/// Amplitude vector over a layout, not necessarily normalized. Used for
/// branch bookkeeping during evolution; PureState is the validated form.
class StateVector {
 public:
  StateVector() = default;
  StateVector(Layout layout, std::vector<Complex> amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.dimension())
      throw Error("amplitude count does not match layout dimension");
  }
  static StateVector zero(Layout layout) {
    const auto d = layout.dimension();
    return StateVector(std::move(layout), std::vector<Complex>(d));
  }
  static StateVector basis(Layout layout, const std::vector<std::string>& labels) {
    auto v = zero(std::move(layout));
    v.amps_[v.layout_.index_of(labels)] = 1.0;
    return v;
  }

  const Layout& layout() const { return layout_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex amplitude(const std::vector<std::string>& labels) const {
    return amps_[layout_.index_of(labels)];
  }
  std::size_t dimension() const { return amps_.size(); }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
  }

  StateVector& operator+=(const StateVector& o) {
    if (!(layout_ == o.layout_)) throw Error("adding states over different layouts");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
  }
  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) {
    return a += Complex{-1.0} * b;
  }
  friend StateVector operator*(Complex s, StateVector v) {
    for (auto& a : v.amps_) a *= s;
    return v;
  }

  double max_abs_diff(const StateVector& o) const {
    if (!(layout_ == o.layout_)) throw Error("comparing states over different layouts");
    double worst = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i)
      worst = std::max(worst, std::abs(amps_[i] - o.amps_[i]));
    return worst;
  }

  /// Applies `op` to the listed subsystems (in the listed order), identity
  /// elsewhere.
  StateVector apply(const CMatrix& op, std::span<const SubsystemId> targets) const {
    std::vector<std::size_t> pos;
    std::size_t local_dim = 1;
    for (const auto& t : targets) {
      pos.push_back(layout_.position(t));
      local_dim *= layout_.at(pos.back()).dim();
    }
    if (op.rows() != local_dim || op.cols() != local_dim)
      throw Error("local operator dimension does not match its targets");

    std::vector<std::size_t> local_stride(pos.size(), 1);
    for (std::size_t i = pos.size(); i-- > 1;)
      local_stride[i - 1] = local_stride[i] * layout_.at(pos[i]).dim();

    auto local_index = [&](std::size_t global) {
      std::size_t li = 0;
      for (std::size_t i = 0; i < pos.size(); ++i)
        li += layout_.digit(global, pos[i]) * local_stride[i];
      return li;
    };
    auto with_local = [&](std::size_t global, std::size_t li) {
      std::size_t g = global;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const std::size_t old_digit = layout_.digit(global, pos[i]);
        const std::size_t new_digit = (li / local_stride[i]) % layout_.at(pos[i]).dim();
        g = g - old_digit * layout_.stride(pos[i]) + new_digit * layout_.stride(pos[i]);
      }
      return g;
    };

    std::vector<Complex> out(amps_.size());
    for (std::size_t g = 0; g < amps_.size(); ++g) {
      if (amps_[g] == Complex{}) continue;
      const std::size_t col = local_index(g);
      for (std::size_t row = 0; row < local_dim; ++row) {
        const Complex m = op(row, col);
        if (m == Complex{}) continue;
        out[with_local(g, row)] += m * amps_[g];
      }
    }
    return StateVector(layout_, std::move(out));
  }

  StateVector apply(const CMatrix& op, std::initializer_list<SubsystemId> targets) const {
    std::vector<SubsystemId> t(targets);
    return apply(op, std::span<const SubsystemId>(t));
  }

  /// Relabels the subsystem at `from` with a new descriptor of equal dimension.
  StateVector relabel(SubsystemId from, Subsystem to) const {
    auto subs = layout_.subsystems();
    auto& s = subs[layout_.position(from)];
    if (s.dim() != to.dim()) throw Error("relabel: dimension mismatch");
    s = std::move(to);
    return StateVector(Layout(std::move(subs)), amps_);
  }

  /// Squared norm of the component whose `id` digit lies in `levels`.
  double weight_on(SubsystemId id, std::span<const std::size_t> levels) const {
    const auto p = layout_.position(id);
    double w = 0.0;
    for (std::size_t g = 0; g < amps_.size(); ++g)
      if (std::find(levels.begin(), levels.end(), layout_.digit(g, p)) != levels.end())
        w += std::norm(amps_[g]);
    return w;
  }

  /// Component whose `id` digit lies in `levels` (others zeroed).
  StateVector restrict_to(SubsystemId id, std::span<const std::size_t> levels) const {
    const auto p = layout_.position(id);
    auto out = *this;
    for (std::size_t g = 0; g < amps_.size(); ++g)
      if (std::find(levels.begin(), levels.end(), layout_.digit(g, p)) == levels.end())
        out.amps_[g] = 0.0;
    return out;
  }

 private:
  Layout layout_;
  std::vector<Complex> amps_;
};

/// Normalized pure state over labeled subsystems.
class PureState {
 public:
  explicit PureState(StateVector v) : vec_(std::move(v)) {
    if (std::abs(vec_.norm_squared() - 1.0) > kConstructionTolerance)
      throw Error("pure state is not normalized");
  }
  PureState(Layout layout, std::vector<Complex> amplitudes)
      : PureState(StateVector(std::move(layout), std::move(amplitudes))) {}
  static PureState basis(Layout layout, const std::vector<std::string>& labels) {
    return PureState(StateVector::basis(std::move(layout), labels));
  }
  /// Normalizes a nonzero vector.
  static PureState normalized(const StateVector& v) {
    const double n = std::sqrt(v.norm_squared());
    if (n == 0.0) throw Error("cannot normalize the zero vector");
    return PureState((1.0 / n) * v);
  }

  const StateVector& vector() const { return vec_; }
  const Layout& layout() const { return vec_.layout(); }
  const std::vector<Complex>& amplitudes() const { return vec_.amplitudes(); }
  Complex amplitude(const std::vector<std::string>& labels) const {
    return vec_.amplitude(labels);
  }

 private:
  StateVector vec_;
};

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  for (const auto& s : b.layout().subsystems())
    if (a.layout().contains(s.id))
      throw Error("tensor: overlapping subsystem id " + s.id.name());
  Layout layout = a.layout().concat(b.layout());
  std::vector<Complex> amps;
  amps.reserve(layout.dimension());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  return StateVector(std::move(layout), std::move(amps));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  return PureState(tensor(a.vector(), b.vector()));
}

/// |v><v| without normalization checks.
inline CMatrix outer_product(const StateVector& v) {
  return CMatrix::outer(v.amplitudes(), v.amplitudes());
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems
/// retain their original relative order.
inline CMatrix partial_trace(const Layout& layout, const CMatrix& rho,
                             std::span<const SubsystemId> keep) {
  for (const auto& k : keep) (void)layout.position(k);
  if (rho.rows() != layout.dimension() || !rho.square())
    throw Error("partial_trace: operator does not match layout");
  Layout kept = layout.select(keep);
  std::vector<std::size_t> kept_pos;
  for (const auto& s : kept.subsystems()) kept_pos.push_back(layout.position(s.id));

  auto reduced_index = [&](std::size_t g) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < kept_pos.size(); ++i)
      r += layout.digit(g, kept_pos[i]) * kept.stride(i);
    return r;
  };
  auto traced_key = [&](std::size_t g) {
    std::size_t key = g;
    for (auto p : kept_pos) key -= layout.digit(g, p) * layout.stride(p);
    return key;
  };

  CMatrix out(kept.dimension(), kept.dimension());
  const std::size_t d = layout.dimension();
  for (std::size_t r = 0; r < d; ++r) {
    const auto kr = traced_key(r);
    const auto rr = reduced_index(r);
    for (std::size_t c = 0; c < d; ++c) {
      if (traced_key(c) != kr) continue;
      out(rr, reduced_index(c)) += rho(r, c);
    }
  }
  return out;
}

/// Reduced operator of |v><v| on `keep`, computed directly from amplitudes.
inline CMatrix reduced_operator(const StateVector& v, std::span<const SubsystemId> keep) {
  const Layout& layout = v.layout();
  Layout kept = layout.select(keep);
  std::vector<std::size_t> kept_pos;
  for (const auto& s : kept.subsystems()) kept_pos.push_back(layout.position(s.id));
  for (const auto& k : keep) (void)layout.position(k);

  // Group amplitudes by the traced-out configuration.
  const auto& amps = v.amplitudes();
  std::vector<std::pair<std::size_t, std::size_t>> entries;  // (traced key, global)
  for (std::size_t g = 0; g < amps.size(); ++g) {
    if (amps[g] == Complex{}) continue;
    std::size_t key = g;
    for (auto p : kept_pos) key -= layout.digit(g, p) * layout.stride(p);
    entries.emplace_back(key, g);
  }
  std::sort(entries.begin(), entries.end());
  auto reduced_index = [&](std::size_t g) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < kept_pos.size(); ++i)
      r += layout.digit(g, kept_pos[i]) * kept.stride(i);
    return r;
  };
  CMatrix out(kept.dimension(), kept.dimension());
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    while (j < entries.size() && entries[j].first == entries[i].first) ++j;
    for (std::size_t a = i; a < j; ++a)
      for (std::size_t b = i; b < j; ++b)
        out(reduced_index(entries[a].second), reduced_index(entries[b].second)) +=
            amps[entries[a].second] * std::conj(amps[entries[b].second]);
    i = j;
  }
  return out;
}

/// Validated density operator: Hermitian, unit trace, positive semidefinite.
class MixedState {
 public:
  MixedState(Layout layout, CMatrix rho) : layout_(std::move(layout)), rho_(std::move(rho)) {
    if (!rho_.square() || rho_.rows() != layout_.dimension())
      throw Error("density matrix does not match layout dimension");
    if (rho_.hermiticity_defect() > kConstructionTolerance)
      throw Error("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex{1.0}) > kConstructionTolerance)
      throw Error("density matrix trace is not 1");
    const auto eig = hermitian_eigenvalues(rho_);
    if (!eig.empty() && eig.back() < -kDerivedTolerance)
      throw Error("density matrix has a negative eigenvalue");
  }

  /// Normalizes a nonzero positive operator to unit trace.
  static MixedState normalized(Layout layout, CMatrix op) {
    const double t = op.trace().real();
    if (!(t > 0.0)) throw Error("cannot normalize an operator with zero trace");
    op *= Complex{1.0 / t};
    return MixedState(std::move(layout), std::move(op));
  }

  /// Diagonal state with the given weights on labeled levels of a layout.
  static MixedState diagonal(Layout layout,
                             const std::vector<std::pair<std::string, double>>& weights) {
    if (layout.size() != 1) throw Error("diagonal: single-subsystem layouts only");
    CMatrix m(layout.dimension(), layout.dimension());
    for (const auto& [label, w] : weights) {
      const auto i = layout.at(0).level(label);
      m(i, i) += w;
    }
    return MixedState(std::move(layout), std::move(m));
  }

  const Layout& layout() const { return layout_; }
  const CMatrix& matrix() const { return rho_; }
  std::size_t dimension() const { return rho_.rows(); }

  double population(std::size_t level) const { return rho_(level, level).real(); }

 private:
  Layout layout_;
  CMatrix rho_;
};

inline MixedState to_density(const PureState& psi) {
  return MixedState(psi.layout(), outer_product(psi.vector()));
}

inline MixedState partial_trace(const MixedState& rho, std::span<const SubsystemId> keep) {
  return MixedState(rho.layout().select(keep),
                    partial_trace(rho.layout(), rho.matrix(), keep));
}

inline MixedState partial_trace(const MixedState& rho, std::initializer_list<SubsystemId> keep) {
  std::vector<SubsystemId> k(keep);
  return partial_trace(rho, std::span<const SubsystemId>(k));
}

inline std::vector<double> hermitian_eigenvalues(const MixedState& m) {
  return hermitian_eigenvalues(m.matrix());
}

/// Labeled ensemble {(bit, prior, state)} of probe states.
class ProbeEnsemble {
 public:
  struct Member {
    int bit;
    double prior;
    MixedState state;
  };

  explicit ProbeEnsemble(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error("empty ensemble");
    double total = 0.0;
    for (const auto& m : members_) {
      if (m.prior < 0.0 || m.prior > 1.0) throw Error("ensemble prior outside [0,1]");
      if (!(m.state.layout() == members_.front().state.layout()))
        throw Error("ensemble members have different subsystem structure");
      total += m.prior;
    }
    if (std::abs(total - 1.0) > kConstructionTolerance)
      throw Error("ensemble priors do not sum to 1");
  }

  /// Two-member ensemble with equal priors, bits 0 and 1.
  static ProbeEnsemble binary(MixedState rho0, MixedState rho1) {
    return ProbeEnsemble({{0, 0.5, std::move(rho0)}, {1, 0.5, std::move(rho1)}});
  }

  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Member& operator[](std::size_t i) const { return members_.at(i); }
  const Layout& layout() const { return members_.front().state.layout(); }

  /// Sum_i p_i rho_i.
  MixedState average() const {
    CMatrix avg(layout().dimension(), layout().dimension());
    for (const auto& m : members_) avg += m.state.matrix() * Complex{m.prior};
    return MixedState::normalized(layout(), avg);
  }

 private:
  std::vector<Member> members_;
};

}  // namespace cfqkd::qcore
