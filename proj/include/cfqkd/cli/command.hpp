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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <system_error>

#include "cfqkd/analysis/security.hpp"
#include "cfqkd/attacks/strategy.hpp"
#include "cfqkd/error.hpp"
#include "cfqkd/protocols/types.hpp"

namespace cfqkd::cli {

/// Bad flags, config files or parameter combinations; exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Subcommand { Simulate, Analyze, Reproduce, Sweep };
enum class Format { Json, Csv, Table };

inline constexpr std::uint64_t kDefaultSeed = 7;

struct CommandSpec {
  Subcommand command = Subcommand::Simulate;
  std::string protocol = "noh09";
  std::string attack = "none";
  std::uint64_t rounds = 100000;
  double f = 0.0;
  std::size_t n = 1;
  double s = 0.0;
  std::uint64_t seed = kDefaultSeed;
  double sample_fraction = 0.5;
  std::optional<double> abort_threshold;
  unsigned workers = 1;  // 0 = all hardware threads; never changes results
  std::string output;    // empty = stdout
  Format format = Format::Json;
  // sweep
  std::string param = "f";
  double from = 0.0;
  double to = 0.3;
  std::size_t steps = 31;
};

inline std::string to_string(Subcommand c) {
  switch (c) {
    case Subcommand::Simulate: return "simulate";
    case Subcommand::Analyze: return "analyze";
    case Subcommand::Reproduce: return "reproduce";
    case Subcommand::Sweep: return "sweep";
  }
  return "?";
}

inline std::string to_string(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Table: return "table";
  }
  return "?";
}

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw UsageError("invalid value '" + text + "' for " + key);
  return value;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Sets one named parameter from text. Keys are the long flag names
/// without dashes; underscores and dashes are interchangeable.
inline void set_parameter(CommandSpec& spec, std::string key, const std::string& value) {
  for (char& c : key)
    if (c == '_') c = '-';
  using detail::parse_number;
  if (key == "protocol") {
    try {
      protocols::parse_protocol(value);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    spec.protocol = value;
  } else if (key == "attack") {
    try {
      attacks::parse_strategy(value);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    spec.attack = value;
  } else if (key == "rounds") {
    spec.rounds = parse_number<std::uint64_t>(key, value);
  } else if (key == "f") {
    spec.f = parse_number<double>(key, value);
  } else if (key == "n") {
    spec.n = parse_number<std::size_t>(key, value);
  } else if (key == "s") {
    spec.s = parse_number<double>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "sample-fraction") {
    spec.sample_fraction = parse_number<double>(key, value);
  } else if (key == "abort-threshold") {
    spec.abort_threshold = parse_number<double>(key, value);
  } else if (key == "workers") {
    spec.workers = parse_number<unsigned>(key, value);
  } else if (key == "output") {
    spec.output = value;
  } else if (key == "format") {
    if (value == "json") spec.format = Format::Json;
    else if (value == "csv") spec.format = Format::Csv;
    else if (value == "table") spec.format = Format::Table;
    else throw UsageError("unknown format '" + value + "'");
  } else if (key == "param") {
    if (value != "f" && value != "n") throw UsageError("sweep parameter must be f or n");
    spec.param = value;
  } else if (key == "from") {
    spec.from = parse_number<double>(key, value);
  } else if (key == "to") {
    spec.to = parse_number<double>(key, value);
  } else if (key == "steps") {
    spec.steps = parse_number<std::size_t>(key, value);
  } else {
    throw UsageError("unknown key '" + key + "'");
  }
}

/// Reads flat key=value lines; blank lines and text after '#' are ignored.
inline std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(number) + ": expected key=value");
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(number) + ": empty key");
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

/// Applies a config file to `spec`. Flags given on the command line are
/// applied afterwards and win.
inline void load_config(CommandSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  for (const auto& [k, v] : read_config(in)) set_parameter(spec, k, v);
}

/// Strategy named by the spec. The fraction f applies to the strategies
/// that take one.
inline attacks::EveStrategy strategy_of(const CommandSpec& spec) {
  attacks::EveStrategy eve{attacks::parse_strategy(spec.attack), 0.0};
  if (eve.has_fraction()) {
    if (!(spec.f >= 0.0 && spec.f <= 1.0)) throw UsageError("--f must lie in [0,1]");
    eve.f = spec.f;
  }
  return eve;
}

}  // namespace cfqkd::cli
