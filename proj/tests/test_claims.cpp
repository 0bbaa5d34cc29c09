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

#include <set>
#include <string>

#include "cfqkd/analysis/claims.hpp"

using namespace cfqkd::analysis;

namespace {

const std::vector<ClaimRow>& table() {
  static const auto rows = reproduce_all({100000, 7, 2});
  return rows;
}

const ClaimRow& row(const std::string& id) {
  for (const auto& r : table())
    if (r.id == id) return r;
  FAIL("missing claim row " << id);
  throw;
}

}  // namespace

TEST_CASE("claim inventory covers every published figure") {
  // One id per published example the library reproduces.
  const std::vector<std::string> published{
      "encoding.trace_distance", "encoding.p_guess", "encoding.e_prime",
      "noh09.match_d2", "noh09.mismatch_db", "noh09.mismatch_d2", "noh09.mismatch_d1",
      "noh09.onward_state", "noh09.return_match", "noh09.return_mismatch",
      "noh09.probe_blocked", "noh09.D", "noh09.e_prime", "noh09.posterior_0", "noh09.posterior_1",
      "noh09.I_AE", "noh09.p_c", "noh09.r0", "noh09.chi", "noh09.e_chi", "noh09.p_c_chi",
      "noh09.r0_chi", "key_rate.holevo", "entropy_inverse.half", "noh09.residual_alice",
      "guess.eH", "guess.e0_coin", "guess.e0_scqkd", "flip.f1_state",
      "session.noh09_none_d1", "session.noh09_noiseless_qber", "session.noh09_noiseless_d1",
      "sift.d2_dropped", "session.noisyflip_qber.f0.05", "session.noisyflip_qber.f0.10",
      "session.noisyflip_qber.f0.20", "session.noisyflip_accuracy.f0.05",
      "session.noisyflip_accuracy.f0.10", "session.noisyflip_accuracy.f0.20",
      "intercept.double_alice", "intercept.knowledge", "session.scqkd_d1",
      "scqkd.d1_round", "scqkd.probe_blocked", "scqkd.D", "scqkd.e_prime", "scqkd.posterior_1",
      "scqkd.posterior_0", "scqkd.I_AE", "scqkd.p_c", "scqkd.r0", "guoshi.probe_matches",
      "cascade.bob_amplitude", "cascade.probe_mixture", "cascade.D", "cascade.p_c",
      "pingpong.j0_state", "pingpong.j0_error", "pingpong.j1_error",
      "bb84mod.residual_entanglement", "bb84mod.qber_positive", "bb84mod.key_rate",
      "hybrid.f0_e", "hybrid.f0_I_AE", "hybrid.f016_e", "hybrid.f_star", "hybrid.e_max"};
  std::set<std::string> ids;
  for (const auto& r : table()) {
    CHECK(ids.insert(r.id).second);  // ids are unique
  }
  for (const auto& id : published) {
    INFO(id);
    CHECK(ids.count(id) == 1);
    CHECK(row(id).provenance == "paper");
  }
  for (const auto& id : {"noh09.I_AE_record", "noh09.residual_D", "cascade.D.n3", "cascade.D.n10",
                         "cascade.p_c.n1", "bb84mod.qber", "hybrid.f1", "hybrid.f_star_exact",
                         "hybrid.e_max_exact", "sweep.crossing", "pa.length"}) {
    INFO(id);
    CHECK(ids.count(id) == 1);
    CHECK(row(id).provenance != "paper");
  }
}

TEST_CASE("every checked claim passes") {
  for (const auto& r : table()) {
    INFO(r.id << " computed " << r.computed << " expected " << r.expected());
    CHECK(r.pass);
  }
  CHECK(all_pass(table()));
}

TEST_CASE("conditioning rows are informative and show both readings") {
  for (const auto& id : {"conditioning.noh09", "conditioning.scqkd", "conditioning.cascade.n3"}) {
    const auto& r = row(id);
    CHECK(r.informative);
    REQUIRE(r.reference.has_value());
    CHECK(*r.reference > 0.0);   // blocked branch
    CHECK(r.computed == 0.0);    // D1 rounds carry a fresh probe
    CHECK(r.notes.find("D1") != std::string::npos);
  }
  CHECK(row("cascade.p_c_binarized.n1").informative);
}

TEST_CASE("a failing row fails the table") {
  auto rows = table();
  CHECK(all_pass(rows));
  rows.front().pass = false;
  CHECK_FALSE(all_pass(rows));
  // Informative rows never fail it.
  rows = table();
  for (auto& r : rows)
    if (r.informative) r.pass = false;
  CHECK(all_pass(rows));
}

TEST_CASE("claim table does not depend on the worker count") {
  const auto a = reproduce_all({20000, 3, 1});
  const auto b = reproduce_all({20000, 3, 3});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].computed == b[i].computed);
  }
}
