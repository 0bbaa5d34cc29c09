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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfqkd/analysis/claims.hpp"
#include "cfqkd/analysis/security.hpp"
#include "cfqkd/cli/command.hpp"
#include "cfqkd/protocols.hpp"

#ifndef CFQKD_VERSION
#define CFQKD_VERSION "1.0.0"
#endif

namespace cfqkd::cli {

using nlohmann::ordered_json;

struct CommandResult {
  int exit_code = 0;
  ordered_json document;
  std::string rendered;  // the document in the requested format
};

namespace detail {

inline ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string num(const ordered_json& v) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Parameters that define the result; the worker count and output
/// destination are left out so reports compare byte for byte.
inline ordered_json echo_config(const CommandSpec& spec) {
  ordered_json c;
  c["protocol"] = spec.protocol;
  c["attack"] = spec.attack;
  c["f"] = spec.f;
  c["n"] = spec.n;
  c["s"] = spec.s;
  c["rounds"] = spec.rounds;
  c["seed"] = spec.seed;
  c["sample_fraction"] = spec.sample_fraction;
  c["abort_threshold"] = opt(spec.abort_threshold);
  if (spec.command == Subcommand::Sweep) {
    c["param"] = spec.param;
    c["from"] = spec.from;
    c["to"] = spec.to;
    c["steps"] = spec.steps;
  }
  return c;
}

inline ordered_json empty_analysis() {
  ordered_json a;
  for (const char* k : {"D", "p_guess", "e_prime", "I_AB", "I_AE_binarized", "I_AE_record", "p_c", "r0",
                        "chi", "e_chi", "f_star", "e_max"})
    a[k] = nullptr;
  return a;
}

inline ordered_json skeleton(const CommandSpec& spec) {
  ordered_json d;
  d["version"] = CFQKD_VERSION;
  d["command"] = to_string(spec.command);
  d["config"] = echo_config(spec);
  d["counts"] = nullptr;
  d["qber"] = nullptr;
  d["sifted_length"] = nullptr;
  d["eve"] = {{"accuracy_sifted", nullptr}, {"accuracy_blocked", nullptr}, {"channel_table", nullptr}};
  d["analysis"] = empty_analysis();
  d["claims"] = ordered_json::array();
  d["abort"] = nullptr;
  d["sweep"] = nullptr;
  return d;
}

inline protocols::SessionConfig session_config(const CommandSpec& spec) {
  protocols::SessionConfig cfg;
  cfg.protocol = protocols::parse_protocol(spec.protocol);
  cfg.rounds = spec.rounds;
  cfg.strategy = strategy_of(spec);
  cfg.n = spec.n;
  cfg.seed = spec.seed;
  cfg.sample_fraction = spec.sample_fraction;
  cfg.abort_threshold = spec.abort_threshold;
  cfg.s = spec.s;
  cfg.workers = spec.workers;
  cfg.validate();
  return cfg;
}

inline void simulate(const CommandSpec& spec, ordered_json& d) {
  const auto stats = protocols::run_session(session_config(spec));
  ordered_json counts;
  for (auto e : protocols::kAllEvents) counts[protocols::to_string(e)] = stats.count(e);
  d["counts"] = counts;
  d["qber"] = opt(stats.qber);
  d["sifted_length"] = stats.sifted_key.size();
  if (strategy_of(spec).attacking()) {
    ordered_json table;
    for (int z = 0; z < 2; ++z)
      for (int x = 0; x < 2; ++x)
        table["z" + std::to_string(z)]["x" + std::to_string(x)] =
            stats.channel_table.counts[static_cast<std::size_t>(z)][static_cast<std::size_t>(x)];
    d["eve"] = {{"accuracy_sifted", opt(stats.accuracy_sifted)},
                {"accuracy_blocked", opt(stats.accuracy_blocked)},
                {"channel_table", table}};
  }
  d["abort"] = stats.aborted;
}

inline void analyze(const CommandSpec& spec, ordered_json& d) {
  const auto r = analysis::analyze(protocols::parse_protocol(spec.protocol), strategy_of(spec), spec.n, spec.s);
  d["qber"] = opt(r.qber);
  auto& a = d["analysis"];
  a["D"] = opt(r.D);
  a["p_guess"] = opt(r.p_guess);
  a["e_prime"] = opt(r.e_prime);
  a["I_AB"] = opt(r.I_AB);
  a["I_AE_binarized"] = opt(r.I_AE_binarized);
  a["I_AE_record"] = opt(r.I_AE_record);
  a["p_c"] = opt(r.p_c);
  a["r0"] = opt(r.r0);
  a["chi"] = opt(r.chi);
  a["e_chi"] = opt(r.e_chi);
  a["f_star"] = opt(r.f_star);
  a["e_max"] = opt(r.e_max);
  a["r_s"] = opt(r.r_s);
  a["p_c_chi"] = opt(r.p_c_chi);
  a["r0_chi"] = opt(r.r0_chi);
  a["conditioning"] = attacks::to_string(r.conditioning);
}

inline bool reproduce(const CommandSpec& spec, ordered_json& d) {
  const auto rows = analysis::reproduce_all({spec.rounds, spec.seed, spec.workers});
  for (const auto& r : rows) {
    ordered_json row;
    row["id"] = r.id;
    row["description"] = r.description;
    row["reference"] = opt(r.reference);
    row["expected"] = r.expected();
    row["computed"] = r.computed;
    row["tolerance"] = r.tolerance;
    row["pass"] = r.pass;
    row["provenance"] = r.provenance;
    row["informative"] = r.informative;
    row["notes"] = r.notes;
    d["claims"].push_back(row);
  }
  return analysis::all_pass(rows);
}

inline void sweep(const CommandSpec& spec, ordered_json& d) {
  if (spec.steps < 1) throw UsageError("--steps must be >= 1");
  ordered_json rows = ordered_json::array();
  const double span = spec.to - spec.from;
  for (std::size_t i = 0; i < spec.steps; ++i) {
    const double x = spec.steps == 1 ? spec.from : spec.from + span * static_cast<double>(i) /
                                                                    static_cast<double>(spec.steps - 1);
    ordered_json row;
    if (spec.param == "f") {
      const auto p = analysis::hybrid_analysis(x);
      row["f"] = p.f;
      row["e"] = p.e;
      row["I_AB"] = p.I_AB;
      row["I_AE"] = p.I_AE;
    } else {
      const double rounded = std::round(x);
      if (rounded < 1.0) throw UsageError("cascade depth must be >= 1");
      const auto c = analysis::cascade_report(static_cast<std::size_t>(rounded));
      row["n"] = c.n;
      row["D"] = c.D;
      row["p_c"] = c.p_c;
      row["r0"] = c.r0;
    }
    rows.push_back(row);
  }
  d["sweep"] = rows;
}

inline std::string render_csv(const ordered_json& d) {
  std::ostringstream out;
  const auto& rows = d["sweep"];
  bool header = false;
  for (const auto& row : rows) {
    if (!header) {
      bool first = true;
      for (const auto& [k, _] : row.items()) {
        out << (first ? "" : ",") << k;
        first = false;
      }
      out << '\n';
      header = true;
    }
    bool first = true;
    for (const auto& [_, v] : row.items()) {
      out << (first ? "" : ",") << num(v);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_table(const ordered_json& d) {
  std::ostringstream out;
  out << "cfqkd " << d["version"].get<std::string>() << "  " << d["command"].get<std::string>() << '\n';
  for (const auto& [k, v] : d["config"].items()) out << "  " << std::left << std::setw(18) << k << num(v) << '\n';
  if (!d["counts"].is_null()) {
    out << "counts\n";
    for (const auto& [k, v] : d["counts"].items()) out << "  " << std::setw(18) << k << v << '\n';
    out << "  " << std::setw(18) << "sifted_length" << d["sifted_length"] << '\n';
    out << "  " << std::setw(18) << "qber" << num(d["qber"]) << '\n';
    out << "  " << std::setw(18) << "abort" << d["abort"] << '\n';
    out << "eve\n";
    out << "  " << std::setw(18) << "accuracy_sifted" << num(d["eve"]["accuracy_sifted"]) << '\n';
    out << "  " << std::setw(18) << "accuracy_blocked" << num(d["eve"]["accuracy_blocked"]) << '\n';
  }
  if (d["command"] == "analyze") {
    out << "analysis\n";
    out << "  " << std::setw(18) << "qber" << num(d["qber"]) << '\n';
    for (const auto& [k, v] : d["analysis"].items()) out << "  " << std::setw(18) << k << num(v) << '\n';
  }
  if (!d["claims"].empty()) {
    out << std::setw(36) << "claim" << std::setw(6) << "pass" << std::setw(30) << "expected" << std::setw(22)
        << "computed" << std::setw(10) << "source" << "notes\n";
    for (const auto& r : d["claims"]) {
      const std::string pass = r["informative"].get<bool>() ? "info" : (r["pass"].get<bool>() ? "ok" : "FAIL");
      out << std::setw(36) << r["id"].get<std::string>() << std::setw(6) << pass << std::setw(30)
          << r["expected"].get<std::string>() << std::setw(22) << num(r["computed"]) << std::setw(10)
          << r["provenance"].get<std::string>() << r["notes"].get<std::string>() << '\n';
    }
  }
  if (!d["sweep"].is_null()) out << render_csv(d);
  return out.str();
}

}  // namespace detail

/// Runs one command. Usage errors surface as UsageError or cfqkd::Error.
inline CommandResult run_command(const CommandSpec& spec) {
  if (spec.format == Format::Csv && spec.command != Subcommand::Sweep)
    throw UsageError("csv output is only available for sweep");
  CommandResult res;
  res.document = detail::skeleton(spec);
  switch (spec.command) {
    case Subcommand::Simulate: detail::simulate(spec, res.document); break;
    case Subcommand::Analyze: detail::analyze(spec, res.document); break;
    case Subcommand::Reproduce:
      if (!detail::reproduce(spec, res.document)) res.exit_code = 1;
      break;
    case Subcommand::Sweep: detail::sweep(spec, res.document); break;
  }
  switch (spec.format) {
    case Format::Json: res.rendered = res.document.dump(2) + "\n"; break;
    case Format::Csv: res.rendered = detail::render_csv(res.document); break;
    case Format::Table: res.rendered = detail::render_table(res.document); break;
  }
  return res;
}

/// Full command line: parses, runs, writes the report. Returns the exit
/// code (0 success, 1 failed claims, 2 usage error).
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual QKD simulator and security analysis", "cfqkd_cli"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", CFQKD_VERSION);

  // Flags are kept as text and parsed like config values, so both paths
  // accept and reject exactly the same inputs.
  std::map<std::string, std::string> flags;
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> common{
      {"protocol", "noh09|scqkd|guoshi|cascade|pingpong|bb84mod"},
      {"attack", "none|noiseless|noisyflip|interceptresend|hybrid"},
      {"rounds", "number of rounds"},
      {"f", "attack fraction"},
      {"n", "cascade depth"},
      {"s", "privacy amplification security parameter"},
      {"seed", "64-bit seed (default 7)"},
      {"sample-fraction", "fraction of sifted bits revealed for the QBER check"},
      {"abort-threshold", "abort when the QBER reaches this value"},
      {"workers", "worker threads, 0 = all cores; results do not depend on it"},
      {"output", "write the report here instead of stdout"},
      {"format", "json|csv|table"}};
  const std::vector<std::pair<std::string, std::string>> sweep_only{
      {"param", "f (hybrid attack) or n (cascade depth)"}, {"from", "first value"}, {"to", "last value"},
      {"steps", "number of rows"}};

  std::map<std::string, Subcommand> names{{"simulate", Subcommand::Simulate},
                                          {"analyze", Subcommand::Analyze},
                                          {"reproduce", Subcommand::Reproduce},
                                          {"sweep", Subcommand::Sweep}};
  const std::map<std::string, std::string> about{
      {"simulate", "run a seeded Monte Carlo session"},
      {"analyze", "closed-form security report for one protocol and attack"},
      {"reproduce", "recompute every published figure; exit 1 if any check fails"},
      {"sweep", "tabulate the hybrid attack over f, or the cascade over n"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, _] : names) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "key=value file; flags override it");
    auto add = [&](const std::pair<std::string, std::string>& o) {
      sub->add_option("--" + o.first, flags[o.first], o.second);
    };
    for (const auto& o : common) add(o);
    if (name == "sweep")
      for (const auto& o : sweep_only) add(o);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << CFQKD_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  CommandSpec spec;
  try {
    for (const auto* sub : subs)
      if (sub->parsed()) spec.command = names.at(sub->get_name());
    if (!config_path.empty()) load_config(spec, config_path);
    for (const auto* sub : subs) {
      if (!sub->parsed()) continue;
      for (const auto& [key, value] : flags)
        if (const auto* o = sub->get_option_no_throw("--" + key); o && o->count() > 0)
          set_parameter(spec, key, value);
    }
    const auto res = run_command(spec);
    if (spec.output.empty()) {
      out << res.rendered;
    } else {
      std::ofstream file(spec.output);
      if (!file) throw UsageError("cannot write " + spec.output);
      file << res.rendered;
    }
    return res.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cfqkd::cli
