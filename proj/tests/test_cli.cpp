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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfqkd/cli.hpp"

using namespace cfqkd::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cfqkd_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("cfqkd_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("simulate noiseless noh09 reports zero QBER and D1 near 1/8") {
  const auto r = run({"simulate", "--protocol", "noh09", "--attack", "noiseless", "--rounds", "100000", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto d = json::parse(r.out);
  CHECK(d["qber"].get<double>() == 0.0);
  const double d1 = d["counts"]["D1"].get<double>() / 100000.0;
  CHECK(std::abs(d1 - 0.125) < 3 * std::sqrt(0.125 * 0.875 / 1e5));
  CHECK(d["sifted_length"] == d["counts"]["D1"]);
  CHECK(d["abort"] == false);
  CHECK(d["eve"]["channel_table"].is_object());
}

TEST_CASE("json report always carries the documented keys") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"simulate", "--rounds", "1000"}, {"analyze"}, {"sweep", "--steps", "3"}}) {
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto d = json::parse(r.out);
    for (const char* k : {"version", "command", "config", "counts", "qber", "sifted_length", "eve", "analysis",
                          "claims"})
      CHECK(d.contains(k));
    for (const char* k : {"accuracy_sifted", "accuracy_blocked", "channel_table"}) CHECK(d["eve"].contains(k));
    for (const char* k : {"D", "p_guess", "e_prime", "I_AB", "I_AE_binarized", "I_AE_record", "p_c", "r0", "chi",
                          "e_chi", "f_star", "e_max"})
      CHECK(d["analysis"].contains(k));
    // Lossless round trip.
    CHECK(json::parse(d.dump(2)) == d);
  }
}

TEST_CASE("analyze reports full precision") {
  const auto r = run({"analyze", "--attack", "noiseless"});
  REQUIRE(r.code == 0);
  const auto d = json::parse(r.out);
  CHECK(std::abs(d["analysis"]["p_c"].get<double>() - 0.625) < 1e-15);
  const double i_ae = d["analysis"]["I_AE_binarized"].get<double>();
  CHECK(std::abs(i_ae - 0.18872187554086717) < 1e-15);
  CHECK(r.out.find("0.1887218755408") != std::string::npos);
  CHECK(std::abs(d["analysis"]["f_star"].get<double>() - 0.162752905535) < 1e-9);
}

TEST_CASE("reproduce passes and lists the headline rows") {
  const auto r = run({"reproduce"});
  REQUIRE(r.code == 0);
  const auto d = json::parse(r.out);
  std::map<std::string, json> rows;
  for (const auto& row : d["claims"]) rows[row["id"]] = row;
  CHECK(rows.at("noh09.p_c")["computed"].get<double>() == Catch::Approx(0.625));
  CHECK(rows.at("noh09.chi")["computed"].get<double>() == Catch::Approx(0.5));
  CHECK(rows.at("noh09.e_chi")["computed"].get<double>() == Catch::Approx(0.110).margin(1e-3));
  CHECK(rows.at("hybrid.f_star")["computed"].get<double>() == Catch::Approx(0.16).margin(0.005));
  for (const auto& row : d["claims"]) {
    const auto p = row["provenance"].get<std::string>();
    CHECK((p == "paper" || p == "computed" || p == "oracle"));
  }
}

TEST_CASE("sweep csv: fixed header, one row per step, crossing between 0.16 and 0.17") {
  const auto r = run({"sweep", "--param", "f", "--from", "0", "--to", "0.3", "--steps", "31", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "f,e,I_AB,I_AE");
  std::vector<std::array<double, 4>> rows;
  while (std::getline(in, line)) {
    std::array<double, 4> v{};
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) == 4);
    rows.push_back(v);
  }
  REQUIRE(rows.size() == 31);
  CHECK(rows[16][0] == Catch::Approx(0.16));
  CHECK(rows[16][3] < rows[16][2]);
  CHECK(rows[17][3] > rows[17][2]);

  const auto n = run({"sweep", "--param", "n", "--from", "1", "--to", "4", "--steps", "4", "--format", "csv"});
  REQUIRE(n.code == 0);
  CHECK(n.out.rfind("n,D,p_c,r0\n", 0) == 0);
  CHECK(n.out.find("\n4,0.0625,") != std::string::npos);
}

TEST_CASE("byte-identical json for a seed, whatever the worker count") {
  for (const char* proto : {"noh09", "scqkd", "cascade", "bb84mod"}) {
    const std::vector<std::string> base{"simulate", "--protocol", proto, "--attack", "noiseless", "--rounds", "20000",
                                        "--seed", "11"};
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    const auto a = run(one), b = run(four), c = run(one);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}

TEST_CASE("abort flag") {
  const auto r = run({"simulate", "--attack", "noisyflip", "--f", "0.3", "--rounds", "20000", "--abort-threshold",
                      "0.1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["abort"] == true);
  const auto q = run({"simulate", "--attack", "noiseless", "--rounds", "20000", "--abort-threshold", "0.1"});
  CHECK(json::parse(q.out)["abort"] == false);
}

TEST_CASE("config files merge under the flags") {
  const auto path = temp_file("merge.cfg", "# comment\nprotocol = scqkd\nrounds=500  # trailing\n\nseed=3\n");
  const auto r = run({"simulate", "--config", path, "--rounds", "1000"});
  REQUIRE(r.code == 0);
  const auto c = json::parse(r.out)["config"];
  CHECK(c["protocol"] == "scqkd");
  CHECK(c["rounds"] == 1000);
  CHECK(c["seed"] == 3);

  const auto empty = temp_file("empty.cfg", "");
  const auto e = run({"simulate", "--config", empty, "--rounds", "100"});
  REQUIRE(e.code == 0);
  const auto ce = json::parse(e.out)["config"];
  CHECK(ce["protocol"] == "noh09");
  CHECK(ce["seed"] == kDefaultSeed);
  CHECK(ce["sample_fraction"] == 0.5);
}

TEST_CASE("load_config fills a CommandSpec") {
  CommandSpec spec;
  std::istringstream in("attack=hybrid\nf=0.25\nsample_fraction=0.3\n");
  for (const auto& [k, v] : read_config(in)) set_parameter(spec, k, v);
  CHECK(spec.attack == "hybrid");
  CHECK(spec.f == 0.25);
  CHECK(spec.sample_fraction == 0.3);
  CHECK(strategy_of(spec).kind == cfqkd::attacks::StrategyKind::Hybrid);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"simulate", "--bogus", "1"}).code == 2);
  CHECK(run({"simulate", "--rounds", "abc"}).code == 2);
  CHECK(run({"simulate", "--rounds", "-5"}).code == 2);
  CHECK(run({"simulate", "--protocol", "bb85"}).code == 2);
  CHECK(run({"simulate", "--attack", "sneaky"}).code == 2);
  CHECK(run({"simulate", "--format", "xml"}).code == 2);
  CHECK(run({"simulate", "--format", "csv"}).code == 2);
  CHECK(run({"simulate", "--protocol", "pingpong"}).code == 2);
  CHECK(run({"simulate", "--protocol", "scqkd", "--attack", "noisyflip"}).code == 2);
  CHECK(run({"simulate", "--sample-fraction", "0"}).code == 2);
  CHECK(run({"analyze", "--attack", "noisyflip", "--f", "2"}).code == 2);
  CHECK(run({"sweep", "--steps", "0"}).code == 2);
  CHECK(run({"simulate", "--from", "0"}).code == 2);  // sweep-only flag
  CHECK(run({}).code == 2);
  CHECK(run({"simulate", "--config", "/nonexistent/file"}).code == 2);
  CHECK(run({"simulate", "--config", temp_file("bad1.cfg", "rounds=abc\n")}).code == 2);
  CHECK(run({"simulate", "--config", temp_file("bad2.cfg", "colour=blue\n")}).code == 2);
  CHECK(run({"simulate", "--config", temp_file("bad3.cfg", "just words\n")}).code == 2);
  const auto r = run({"simulate", "--rounds", "abc"});
  CHECK(r.err.find("rounds") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("output file and table format") {
  const auto path = (std::filesystem::temp_directory_path() / "cfqkd_test_out.json").string();
  std::filesystem::remove(path);
  const auto r = run({"analyze", "--protocol", "scqkd", "--attack", "noiseless", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto d = json::parse(in);
  CHECK(d["analysis"]["p_c"].get<double>() == Catch::Approx(2.0 / 3.0));

  const auto t = run({"analyze", "--format", "table", "--attack", "noiseless"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("0.678071905113") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}
