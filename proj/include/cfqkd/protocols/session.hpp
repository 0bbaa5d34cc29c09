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
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols/cascade.hpp"
#include "cfqkd/protocols/noh09.hpp"
#include "cfqkd/protocols/scqkd.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::protocols {

struct SessionConfig {
  ProtocolId protocol = ProtocolId::Noh09;
  std::uint64_t rounds = 1000;
  EveStrategy strategy;
  std::size_t n = 1;  // cascade depth
  std::uint64_t seed = 1;
  double sample_fraction = 0.5;
  std::optional<double> abort_threshold;
  double s = 0.0;
  unsigned workers = 1;  // 0 picks the hardware concurrency

  void validate() const {
    if (rounds < 1) throw Error("rounds must be >= 1");
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
      throw Error("sample fraction must lie in (0,1]");
    if (abort_threshold && !(*abort_threshold >= 0.0 && *abort_threshold <= 1.0))
      throw Error("abort threshold must lie in [0,1]");
    if (!(s >= 0.0)) throw Error("security parameter s must be >= 0");
    if (strategy.has_fraction() && !(strategy.f >= 0.0 && strategy.f <= 1.0))
      throw Error("attack fraction f outside [0,1]");
    if (protocol == ProtocolId::Cascade) (void)cascade_layout(n);
    require_supported(protocol, strategy.kind);
  }

  static void require_supported(ProtocolId p, StrategyKind k) {
    using K = StrategyKind;
    bool ok = k == K::NoEve || k == K::Noiseless;
    switch (p) {
      case ProtocolId::Noh09:
        ok = ok || k == K::NoisyFlip || k == K::InterceptResend || k == K::Hybrid;
        break;
      case ProtocolId::GuoShi: ok = ok || k == K::GuoShiAttack; break;
      case ProtocolId::Cascade: ok = ok || k == K::CascadeAttack; break;
      case ProtocolId::PingPong: ok = ok || k == K::PingPongAttack; break;
      case ProtocolId::ScQkd:
      case ProtocolId::Bb84Mod: break;
    }
    if (!ok)
      throw Error("attack " + attacks::to_string(k) + " is not defined for " + to_string(p));
  }
};

/// Counts of (Z, X) over a population; P(X|Z) on demand.
struct ChannelTable {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};  // [z][x]

  void add(int z, int x) { ++counts.at(static_cast<std::size_t>(z)).at(static_cast<std::size_t>(x)); }
  std::uint64_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
  /// Empirical P(X = x | Z = z); nullopt when Z = z never occurred.
  std::optional<double> p_x_given_z(int x, int z) const {
    const auto& row = counts.at(static_cast<std::size_t>(z));
    const auto n = row[0] + row[1];
    if (n == 0) return std::nullopt;
    return static_cast<double>(row.at(static_cast<std::size_t>(x))) / static_cast<double>(n);
  }
  friend bool operator==(const ChannelTable&, const ChannelTable&) = default;
};

struct SessionStats {
  std::uint64_t rounds = 0;
  std::array<std::uint64_t, kAllEvents.size()> counts{};
  std::vector<int> sifted_key;  // Alice's bits, round order
  std::optional<double> qber;
  std::uint64_t qber_sample_size = 0;
  bool aborted = false;

  std::optional<double> accuracy_sifted;
  std::optional<double> accuracy_blocked;
  ChannelTable channel_table;  // over the blocked population

  std::uint64_t count(DetectorEvent e) const { return counts[event_index(e)]; }
  friend bool operator==(const SessionStats&, const SessionStats&) = default;
};

namespace detail {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Independent stream for round `index` of a session with `seed`. Seeding
/// from one hashed word keeps per-round setup cheap; a seed_seq costs more
/// than the round itself.
inline std::mt19937_64 round_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(detail::mix64(detail::mix64(seed) + index * 0x9e3779b97f4a7c15ULL));
}

/// Stream for session-level draws such as the QBER sample.
inline std::mt19937_64 session_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x51u, 0xb3u, 0x7eu};
  return std::mt19937_64(seq);
}

/// Runs one round with uniformly drawn inputs.
inline RoundRecord random_round(const SessionConfig& cfg, std::mt19937_64& rng) {
  auto pick = [&](auto... options) {
    const std::array values{options...};
    return values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];
  };
  switch (cfg.protocol) {
    case ProtocolId::Noh09: {
      const auto j = pick(Polarization::H, Polarization::V);
      const auto a = pick(PartyAction::ReflectH, PartyAction::ReflectV);
      return noh09_round(j, a, cfg.strategy, rng);
    }
    case ProtocolId::Cascade: {
      const auto j = pick(Polarization::H, Polarization::V);
      const auto a = pick(PartyAction::ReflectH, PartyAction::ReflectV);
      return cascade_round(cfg.n, j, a, cfg.strategy, rng);
    }
    case ProtocolId::ScQkd:
    case ProtocolId::GuoShi: {
      const auto a = pick(PartyAction::Block, PartyAction::Reflect);
      const auto b = pick(PartyAction::Block, PartyAction::Reflect);
      return cfg.protocol == ProtocolId::ScQkd ? scqkd_round(a, b, cfg.strategy, rng)
                                               : guoshi_round(a, b, cfg.strategy, rng);
    }
    case ProtocolId::Bb84Mod: {
      const auto j = pick(Polarization::H, Polarization::V, Polarization::Plus, Polarization::Minus);
      const auto a = pick(PartyAction::ReflectH, PartyAction::ReflectV, PartyAction::ReflectPlus,
                          PartyAction::ReflectMinus);
      return bb84mod_round(j, a, cfg.strategy, rng);
    }
    case ProtocolId::PingPong:
      throw Error("pingpong has no Monte Carlo session; use the exact message-mode analysis");
  }
  throw Error("unknown protocol");
}

/// Rounds that enter the sifted key: a D1 announcement whose inputs define
/// a key bit (basis agreement for the BB84-augmented variant).
inline bool enters_key(const RoundRecord& r) { return r.sifted && r.key_candidate; }

inline std::vector<int> sift(const std::vector<RoundRecord>& records) {
  std::vector<int> key;
  for (const auto& r : records)
    if (enters_key(r)) key.push_back(r.alice_bit);
  return key;
}

/// QBER from (Alice bit, Bob bit) pairs of sifted rounds: a sample of the
/// given fraction is revealed and the error rate is averaged over Alice's
/// two bit values, falling back to the one present if a value is missing.
inline double qber_from_pairs(const std::vector<std::pair<int, int>>& pairs, double fraction,
                              std::mt19937_64& rng, std::uint64_t* sample_size = nullptr) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("sample fraction must lie in (0,1]");
  if (pairs.empty()) throw Error("no sifted rounds to estimate the QBER from");
  std::vector<std::size_t> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pairs.size()))));
  std::array<double, 2> errors{}, totals{};
  for (std::size_t i = 0; i < m; ++i) {
    const auto [x, y] = pairs[idx[i]];
    totals[x] += 1.0;
    if (x != y) errors[x] += 1.0;
  }
  if (sample_size) *sample_size = m;
  if (totals[0] == 0.0) return errors[1] / totals[1];
  if (totals[1] == 0.0) return errors[0] / totals[0];
  return 0.5 * (errors[0] / totals[0] + errors[1] / totals[1]);
}

inline double estimate_qber(const std::vector<RoundRecord>& records, double fraction,
                            std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& r : records)
    if (enters_key(r)) pairs.push_back({r.alice_bit, r.bob_bit});
  return qber_from_pairs(pairs, fraction, rng);
}

/// All round records of a session, in round order.
inline std::vector<RoundRecord> run_rounds(const SessionConfig& cfg) {
  cfg.validate();
  std::vector<RoundRecord> out;
  out.reserve(cfg.rounds);
  for (std::uint64_t i = 0; i < cfg.rounds; ++i) {
    auto rng = round_rng(cfg.seed, i);
    out.push_back(random_round(cfg, rng));
  }
  return out;
}

namespace detail {

struct Partial {
  std::array<std::uint64_t, kAllEvents.size()> counts{};
  std::vector<std::pair<int, int>> sifted;  // (alice, bob)
  std::uint64_t eve_sifted = 0, eve_sifted_hits = 0;
  std::uint64_t eve_blocked = 0, eve_blocked_hits = 0;
  ChannelTable table;

  void add(const RoundRecord& r) {
    ++counts[event_index(r.event)];
    if (enters_key(r)) {
      sifted.push_back({r.alice_bit, r.bob_bit});
      if (r.eve) {
        ++eve_sifted;
        if (r.eve->guess == r.alice_bit) ++eve_sifted_hits;
      }
    }
    if (r.eve && r.key_candidate && r.blocked) {
      ++eve_blocked;
      if (r.eve->guess == r.alice_bit) ++eve_blocked_hits;
      table.add(r.eve->guess, r.alice_bit);
    }
  }

  void merge(const Partial& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    sifted.insert(sifted.end(), o.sifted.begin(), o.sifted.end());
    eve_sifted += o.eve_sifted;
    eve_sifted_hits += o.eve_sifted_hits;
    eve_blocked += o.eve_blocked;
    eve_blocked_hits += o.eve_blocked_hits;
    for (int z = 0; z < 2; ++z)
      for (int x = 0; x < 2; ++x) table.counts[z][x] += o.table.counts[z][x];
  }
};

}  // namespace detail

/// Runs a session. Round i draws from its own stream, and workers take
/// contiguous blocks merged in order, so the result does not depend on the
/// worker count.
inline SessionStats run_session(const SessionConfig& cfg) {
  cfg.validate();
  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.rounds));

  std::vector<detail::Partial> parts(workers);
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned w) {
    try {
      const std::uint64_t begin = cfg.rounds * w / workers, end = cfg.rounds * (w + 1) / workers;
      for (std::uint64_t i = begin; i < end; ++i) {
        auto rng = round_rng(cfg.seed, i);
        parts[w].add(random_round(cfg, rng));
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  detail::Partial all;
  for (const auto& p : parts) all.merge(p);

  SessionStats stats;
  stats.rounds = cfg.rounds;
  stats.counts = all.counts;
  for (const auto& [x, y] : all.sifted) stats.sifted_key.push_back(x);
  if (!all.sifted.empty()) {
    auto rng = session_rng(cfg.seed);
    stats.qber = qber_from_pairs(all.sifted, cfg.sample_fraction, rng, &stats.qber_sample_size);
  }
  stats.aborted = cfg.abort_threshold && stats.qber && *stats.qber >= *cfg.abort_threshold;
  if (all.eve_sifted)
    stats.accuracy_sifted = static_cast<double>(all.eve_sifted_hits) / static_cast<double>(all.eve_sifted);
  if (all.eve_blocked)
    stats.accuracy_blocked =
        static_cast<double>(all.eve_blocked_hits) / static_cast<double>(all.eve_blocked);
  stats.channel_table = all.table;
  return stats;
}

}  // namespace cfqkd::protocols
