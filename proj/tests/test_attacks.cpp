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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cfqkd/attacks/conditional.hpp"
#include "cfqkd/attacks/intercept.hpp"
#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/protocols.hpp"
#include "test_support.hpp"

using namespace cfqkd::attacks;
using namespace cfqkd::qcore;
using cfqkd::protocols::DetectorEvent;
using cfqkd::protocols::Polarization;
using cfqkd::protocols::ProtocolId;

namespace {

constexpr double kTol = 1e-12;
const double r2 = 1.0 / std::sqrt(2.0);

Layout mode_probe() { return Layout{optical_mode(kModeB), probe_qutrit()}; }

// ½(|e0><e0| + |tag><tag|) on the qutrit probe, weights as given.
MixedState probe_mix(const std::string& tag, double w_tag) {
  return MixedState::diagonal(Layout{probe_qutrit()}, {{"e0", 1.0 - w_tag}, {tag, w_tag}});
}

bool within_3sigma(double observed, double p, double n) {
  return std::abs(observed - p) <= 3.0 * std::sqrt(p * (1.0 - p) / n) + 1e-12;
}

}  // namespace

TEST_CASE("noiseless attack unitary acts as the controlled tag") {
  const CMatrix u = noiseless_unitary(3);
  CHECK(u.unitarity_defect() < kTol);
  const auto layout = mode_probe();
  auto apply = [&](const std::string& m, const std::string& e) {
    return StateVector::basis(layout, {m, e}).apply(u, {kModeB, kProbe});
  };
  CHECK(apply("vac", "e0").max_abs_diff(StateVector::basis(layout, {"vac", "e0"})) < kTol);
  CHECK(apply("H", "e0").max_abs_diff(StateVector::basis(layout, {"H", "eH"})) < kTol);
  CHECK(apply("V", "e0").max_abs_diff(StateVector::basis(layout, {"V", "eV"})) < kTol);
  CHECK(apply("vac", "eH").max_abs_diff(StateVector::basis(layout, {"vac", "eH"})) < kTol);
  CHECK(apply("vac", "eV").max_abs_diff(StateVector::basis(layout, {"vac", "eV"})) < kTol);
  CHECK(noiseless_unitary(2).unitarity_defect() < kTol);
}

TEST_CASE("flip and ping-pong attack unitaries") {
  const CMatrix f = noisy_flip_unitary();
  CHECK(f.unitarity_defect() < kTol);
  const auto layout = mode_probe();
  auto flipped = StateVector::basis(layout, {"H", "e0"}).apply(f, {kModeB, kProbe});
  CHECK(flipped.max_abs_diff(StateVector::basis(layout, {"V", "eH"})) < kTol);
  flipped = StateVector::basis(layout, {"V", "e0"}).apply(f, {kModeB, kProbe});
  CHECK(flipped.max_abs_diff(StateVector::basis(layout, {"H", "eV"})) < kTol);
  CHECK(pingpong_unitary().unitarity_defect() < kTol);
}

TEST_CASE("onward attack on the source state") {
  using cfqkd::protocols::noh09_initial;
  const auto layout = cfqkd::protocols::noh09_layout();
  for (auto [j, tag] : {std::pair{Polarization::H, "eH"}, std::pair{Polarization::V, "eV"}}) {
    const std::string jl = cfqkd::protocols::to_string(j);
    const auto psi = noiseless_onward(PureState(noh09_initial(j)));
    const StateVector want = Complex{r2} * StateVector::basis(layout, {"vac", jl, tag}) +
                             Complex{r2} * StateVector::basis(layout, {jl, "vac", "e0"});
    CHECK(psi.vector().max_abs_diff(want) < kTol);
    CHECK(noiseless_return(psi).vector().max_abs_diff(noh09_initial(j)) < kTol);
  }
  // Vacuum in mode B leaves the probe alone.
  const auto vac = PureState::basis(mode_probe(), {"vac", "e0"});
  CHECK(noiseless_onward(vac).vector().max_abs_diff(vac.vector()) < kTol);
  CHECK_THROWS_AS(noiseless_onward(PureState::basis(mode_probe(), {"H", "eV"})), cfqkd::Error);
}

TEST_CASE("property: return undoes onward on random states") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = cfqkd::testing::random_pure(mode_probe(), rng);
    const auto there = psi.vector().apply(noiseless_unitary(3), {kModeB, kProbe});
    const auto back = noiseless_return(there);
    CHECK(back.max_abs_diff(psi.vector()) < kTol);
    const auto norm = there.norm_squared();
    CHECK(std::abs(norm - 1.0) < kTol);
    for (bool flipped : {false, true}) {
      const CMatrix u = flipped ? noisy_flip_unitary() : noiseless_unitary(3);
      CHECK(noisy_flip_return(psi.vector().apply(u, {kModeB, kProbe}), flipped).max_abs_diff(psi.vector()) <
            kTol);
    }
  }
}

TEST_CASE("noisy flip hook") {
  std::mt19937_64 rng(4);
  const auto h = StateVector::basis(mode_probe(), {"H", "e0"});
  for (int i = 0; i < 20; ++i) {
    auto [never, f0] = noisy_flip_onward(h, 0.0, rng);
    CHECK_FALSE(f0);
    CHECK(never.max_abs_diff(noiseless_onward(h)) < kTol);
    auto [always, f1] = noisy_flip_onward(h, 1.0, rng);
    CHECK(f1);
    CHECK(always.max_abs_diff(StateVector::basis(mode_probe(), {"V", "eH"})) < kTol);
  }
  CHECK_THROWS_AS(noisy_flip_onward(h, 1.5, rng), cfqkd::Error);
}

TEST_CASE("probe measurement and guess rules") {
  std::mt19937_64 rng(10);
  const Layout p3{probe_qutrit()};
  const auto eh = MixedState::diagonal(p3, {{"eH", 1.0}});
  const auto ev = MixedState::diagonal(p3, {{"eV", 1.0}});
  const auto e0 = MixedState::diagonal(p3, {{"e0", 1.0}});
  int zeros = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    CHECK(measure_probe(eh, GuessRule::ternary_then_coin(), rng).guess == 0);
    CHECK(measure_probe(ev, GuessRule::ternary_then_coin(), rng).guess == 1);
    const auto m = measure_probe(e0, GuessRule::ternary_then_coin(), rng);
    CHECK(m.outcome == "e0");
    zeros += m.guess == 0;
  }
  CHECK(within_3sigma(static_cast<double>(zeros) / trials, 0.5, trials));

  const Layout p2{probe_qubit()};
  const auto sc0 = MixedState::diagonal(p2, {{"e0", 1.0}});
  const auto sch = MixedState::diagonal(p2, {{"eH", 1.0}});
  for (int i = 0; i < 100; ++i) {
    CHECK(measure_probe(sc0, GuessRule::scqkd(), rng).guess == 0);
    CHECK(measure_probe(sch, GuessRule::scqkd(), rng).guess == 1);
  }
  CHECK_THROWS_AS(measure_probe(sc0, GuessRule::ternary_then_coin(), rng), cfqkd::Error);
}

TEST_CASE("intercept-resend event distribution") {
  for (auto j : {Polarization::H, Polarization::V}) {
    const auto d = intercept_distribution(j);
    CHECK(std::abs(d.found - 0.5) < kTol);
    CHECK(std::abs(d.d1_given_found - 0.5) < kTol);
    CHECK(std::abs(d.d2_given_found - 0.5) < kTol);
  }
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const auto o = intercept_resend(Polarization::V, rng);
    CHECK(o.record.intercepted);
    if (o.event == DetectorEvent::D1 || o.event == DetectorEvent::D2) {
      CHECK(o.record.guess == 1);
      CHECK(o.record.outcome == "intercept:V");
    } else {
      CHECK(o.event == DetectorEvent::DoubleAlice);
    }
  }
}

TEST_CASE("intercept-resend sessions") {
  using namespace cfqkd::protocols;
  for (double f : {0.1, 0.3}) {
    SessionConfig cfg;
    cfg.rounds = 100000;
    cfg.seed = 21;
    cfg.workers = 4;
    cfg.strategy = EveStrategy::intercept_resend(f);
    const auto recs = run_rounds(cfg);
    std::uint64_t doubles = 0, q_d1 = 0, q_d1_right = 0;
    for (const auto& r : recs) {
      doubles += r.event == DetectorEvent::DoubleAlice;
      if (r.eve && r.eve->intercepted && enters_key(r)) {
        ++q_d1;
        q_d1_right += r.eve->guess == r.alice_bit;
      }
    }
    CHECK(within_3sigma(static_cast<double>(doubles) / 1e5, f / 2, 1e5));
    REQUIRE(q_d1 > 0);
    CHECK(q_d1_right == q_d1);
  }
  // f = 0 behaves as the plain noiseless attack (the extra coin per round
  // shifts the random stream, so compare distributions).
  SessionConfig a;
  a.rounds = 20000;
  a.strategy = EveStrategy::intercept_resend(0.0);
  const auto sa = run_session(a);
  CHECK(sa.count(DetectorEvent::DoubleAlice) == 0);
  CHECK(within_3sigma(static_cast<double>(sa.count(DetectorEvent::D1)) / 20000, 0.125, 20000));
  CHECK(*sa.qber == 0.0);
}

TEST_CASE("noisy flip session: QBER f with unchanged blocked accuracy") {
  using namespace cfqkd::protocols;
  SessionConfig cfg;
  cfg.rounds = 100000;
  cfg.seed = 5;
  cfg.workers = 4;
  cfg.sample_fraction = 1.0;
  for (double f : {0.05, 0.2}) {
    cfg.strategy = EveStrategy::noisy_flip(f);
    const auto s = run_session(cfg);
    const double sifted = static_cast<double>(s.sifted_key.size());
    // The estimator averages two per-bit rates, each over about half the sample.
    CHECK(std::abs(*s.qber - f) <= 3.0 * std::sqrt(f * (1 - f) / sifted) * std::sqrt(2.0));
    CHECK(within_3sigma(*s.accuracy_blocked, 0.75, static_cast<double>(s.channel_table.total())));
  }
}

TEST_CASE("noiseless session: Eve's blocked-round accuracy is 3/4") {
  using namespace cfqkd::protocols;
  SessionConfig cfg;
  cfg.rounds = 100000;
  cfg.seed = 1234;
  cfg.workers = 4;
  cfg.strategy = EveStrategy::noiseless();
  const auto s = run_session(cfg);
  CHECK(within_3sigma(*s.accuracy_blocked, 0.75, static_cast<double>(s.channel_table.total())));
}

TEST_CASE("noh09 probe ensembles under both conditionings") {
  const auto blocked = probe_conditional_states(ProtocolId::Noh09, EveStrategy::noiseless(),
                                                Conditioning::BlockedBranch);
  CHECK(trace_distance(blocked[0].state, probe_mix("eH", 0.5)) < kTol);
  CHECK(trace_distance(blocked[1].state, probe_mix("eV", 0.5)) < kTol);
  const auto d1 = probe_conditional_states(ProtocolId::Noh09, EveStrategy::noiseless(), Conditioning::D1Event);
  const auto fresh = MixedState::diagonal(Layout{probe_qutrit()}, {{"e0", 1.0}});
  CHECK(trace_distance(d1[0].state, fresh) < kTol);
  CHECK(trace_distance(d1[1].state, fresh) < kTol);
  CHECK_THROWS_AS(probe_conditional_states(ProtocolId::Noh09, EveStrategy::none(), Conditioning::D1Event),
                  cfqkd::Error);
  CHECK_THROWS_AS(probe_conditional_states(ProtocolId::Noh09, EveStrategy::intercept_resend(0.2),
                                           Conditioning::D1Event),
                  cfqkd::Error);
}

TEST_CASE("noisy flip blocks the same probe ensemble rate-wise") {
  const auto ens = probe_conditional_states(ProtocolId::Noh09, EveStrategy::noisy_flip(0.1),
                                            Conditioning::BlockedBranch);
  CHECK(std::abs(ens[0].state.matrix().trace().real() - 1.0) < kTol);
  // A flipped mismatch round reflects the photon, so only the unflipped
  // part carries the tag.
  CHECK(std::abs(ens[0].state.population(1) - 0.45) < kTol);
}

TEST_CASE("scqkd and guoshi probe ensembles") {
  const Layout p2{probe_qubit()};
  for (auto proto : {ProtocolId::ScQkd, ProtocolId::GuoShi}) {
    const auto ens = probe_conditional_states(proto, EveStrategy::noiseless(), Conditioning::BlockedBranch);
    CHECK(trace_distance(ens[0].state, MixedState::diagonal(p2, {{"e0", 1.0}})) < kTol);
    CHECK(trace_distance(ens[1].state, MixedState::diagonal(p2, {{"e0", 0.5}, {"eH", 0.5}})) < kTol);
  }
  const auto sc = probe_conditional_states(ProtocolId::ScQkd, EveStrategy::noiseless(), Conditioning::BlockedBranch);
  const auto gs = probe_conditional_states(ProtocolId::GuoShi, {StrategyKind::GuoShiAttack, 0.0},
                                           Conditioning::BlockedBranch);
  for (std::size_t i = 0; i < 2; ++i) CHECK(sc[i].state.matrix().max_abs_diff(gs[i].state.matrix()) < kTol);
}

TEST_CASE("cascade probe ensembles carry weight 2^-n") {
  for (std::size_t n = 1; n <= 10; ++n) {
    const double w = std::pow(2.0, -static_cast<double>(n));
    const auto ens = probe_conditional_states(ProtocolId::Cascade, {StrategyKind::CascadeAttack, 0.0},
                                              Conditioning::BlockedBranch, n);
    CHECK(ens[0].state.matrix().max_abs_diff(probe_mix("eH", w).matrix()) < kTol);
    CHECK(ens[1].state.matrix().max_abs_diff(probe_mix("eV", w).matrix()) < kTol);
    CHECK(std::abs(trace_distance(ens[0].state, ens[1].state) - w) < kTol);
  }
}

TEST_CASE("ping-pong probe ensemble") {
  const auto ens = probe_conditional_states(ProtocolId::PingPong, {StrategyKind::PingPongAttack, 0.0},
                                            Conditioning::BlockedBranch);
  CHECK(std::abs(ens[0].state.population(0) - 1.0) < kTol);
  CHECK(std::abs(ens[1].state.population(0) - 0.5) < kTol);
  CHECK(std::abs(ens[1].state.population(1) - 0.5) < kTol);
}

TEST_CASE("residual disturbance on Alice's side") {
  for (auto [j, lvl] : {std::pair{Polarization::H, "H"}, std::pair{Polarization::V, "V"}}) {
    const auto rd = residual_disturbance(j);
    const Layout a{optical_mode(kModeA)};
    CHECK(rd.attacked.matrix().max_abs_diff(MixedState::diagonal(a, {{"vac", 0.5}, {lvl, 0.5}}).matrix()) < kTol);
    std::vector<Complex> v(3);
    v[0] = r2;
    v[a.index_of({lvl})] = r2;
    CHECK(rd.unattacked.matrix().max_abs_diff(CMatrix::outer(v, v)) < kTol);
    CHECK(std::abs(rd.trace_distance - 0.5) < kTol);

    const auto none = residual_disturbance(j, EveStrategy::none());
    CHECK(none.trace_distance < kTol);
    CHECK(none.attacked.matrix().max_abs_diff(none.unattacked.matrix()) < kTol);
  }
}
