/*
 * Copyright 2026 The QPIR Lab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qpir/cli/config.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "qpir/aqpir/aqpir.h"
#include "qpir/heqpir/heqpir.h"
#include "qpir/multiserver/cube.h"
#include "qpir/multiserver/two_server.h"
#include "qpir/runtime/baseline.h"
#include "qpir/util/status_macros.h"
#include "toml.hpp"

namespace qpir::cli {

using runtime::Database;

namespace {

absl::Status Invalid(std::string message) { return absl::InvalidArgumentError(std::move(message)); }

// Splits a bit string into `count` entries of `bits` bits, most significant
// bit first.
absl::StatusOr<Database> ParseEntries(const std::string& text, size_t count, int bits) {
  if (text.size() != count * static_cast<size_t>(bits)) {
    return Invalid(absl::StrCat("database has ", text.size(), " bits, expected ",
                                count * static_cast<size_t>(bits)));
  }
  Database db;
  db.entry_bits = bits;
  db.entries.assign(count, 0);
  for (size_t k = 0; k < text.size(); ++k) {
    if (text[k] != '0' && text[k] != '1') return Invalid("database must be a string of 0 and 1");
    db.entries[k / bits] = (db.entries[k / bits] << 1) | static_cast<uint64_t>(text[k] - '0');
  }
  return db;
}

absl::StatusOr<Database> EntriesOrRandom(const RunConfig& config, size_t count, int bits) {
  if (!config.database.empty()) return ParseEntries(config.database, count, bits);
  Rng rng = DeriveStream(*config.seed, kDatabaseStream);
  return Database::Random(count, bits, rng);
}

// One-dimensional protocols take a single 1-based index.
absl::StatusOr<uint64_t> SingleIndex(const RunConfig& config, uint64_t count) {
  QPIR_ASSIGN_OR_RETURN(std::vector<int64_t> list, ParseIndexList(config.index));
  if (list.size() != 1) return Invalid("expected a single index");
  if (list[0] < 1 || static_cast<uint64_t>(list[0]) > count) {
    return absl::OutOfRangeError(absl::StrCat("index ", list[0], " outside [1, ", count, "]"));
  }
  return static_cast<uint64_t>(list[0] - 1);
}

// n from --n, or from the database length when only that is given.
absl::StatusOr<int64_t> SizeFromConfig(const RunConfig& config, int bits_per_entry) {
  int64_t n = config.n;
  if (n == 0 && !config.database.empty()) n = static_cast<int64_t>(config.database.size()) / bits_per_entry;
  if (n < 1) return Invalid("--n is required");
  return n;
}

absl::Status BuildCube(const RunConfig& config, Scenario& s) {
  if (config.d < 1 || config.ell < 1) return Invalid("cube needs --d and --ell");
  const multiserver::CubeShape shape{config.ell, config.d};
  QPIR_RETURN_IF_ERROR(shape.Validate());
  QPIR_ASSIGN_OR_RETURN(s.database, EntriesOrRandom(config, shape.size(), 1));
  QPIR_ASSIGN_OR_RETURN(std::vector<int64_t> list, ParseIndexList(config.index));
  if (list.size() == static_cast<size_t>(config.d)) {
    std::vector<int> coords;
    for (int64_t c : list) {
      if (c < 1 || c > config.ell) {
        return absl::OutOfRangeError(absl::StrCat("coordinate ", c, " outside [1, ", config.ell, "]"));
      }
      coords.push_back(static_cast<int>(c - 1));
    }
    s.index = shape.Encode(coords);
  } else if (list.size() == 1) {
    QPIR_ASSIGN_OR_RETURN(s.index, SingleIndex(config, shape.size()));
  } else {
    return Invalid(absl::StrCat("cube index needs ", config.d, " coordinates"));
  }
  s.protocol = std::make_unique<multiserver::CubeProtocol>(shape);
  s.params["d"] = config.d;
  s.params["ell"] = config.ell;
  return absl::OkStatus();
}

absl::Status BuildAqpir(const RunConfig& config, Scenario& s) {
  aqpir::AqpirParams params;
  if (config.ell > 0 && config.r > 0) {
    params.ell = config.ell;
    params.r = config.r;
    QPIR_ASSIGN_OR_RETURN(s.database, EntriesOrRandom(config, static_cast<size_t>(params.ell), params.r));
  } else {
    QPIR_ASSIGN_OR_RETURN(const int64_t n, SizeFromConfig(config, 1));
    if (n > 1024) return Invalid("aqpir supports at most 1024 database bits");
    params = aqpir::AqpirParams::ForDatabaseBits(static_cast<int>(n));
    std::vector<int> bits(static_cast<size_t>(n));
    if (!config.database.empty()) {
      QPIR_ASSIGN_OR_RETURN(Database flat, ParseEntries(config.database, bits.size(), 1));
      for (size_t k = 0; k < bits.size(); ++k) bits[k] = static_cast<int>(flat.entries[k]);
    } else {
      Rng rng = DeriveStream(*config.seed, kDatabaseStream);
      for (int& b : bits) b = CoinFlip(rng);
    }
    s.database = aqpir::PackBlocks(bits, params.r);
    s.database.entries.resize(static_cast<size_t>(params.ell), 0);
    s.params["n"] = n;
  }
  params.tcf_bits = config.n_tcf;
  params.detection_pairs = config.k_detect;
  params.delta = config.delta;
  QPIR_RETURN_IF_ERROR(params.Validate());
  QPIR_ASSIGN_OR_RETURN(s.index, SingleIndex(config, static_cast<uint64_t>(params.ell)));
  s.params["ell"] = params.ell;
  s.params["r"] = params.r;
  s.params["n_tcf"] = params.tcf_bits;
  s.params["k_detect"] = params.pairs();
  s.protocol = std::make_unique<aqpir::AqpirProtocol>(params);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<int64_t>> ParseIndexList(const std::string& text) {
  std::vector<int64_t> out;
  for (absl::string_view piece : absl::StrSplit(text, ',')) {
    const std::string item(absl::StripAsciiWhitespace(piece));
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      return Invalid(absl::StrCat("malformed index '", text, "'"));
    }
    out.push_back(value);
  }
  return out;
}

std::string DatabaseBits(const Database& db) {
  std::string out;
  for (uint64_t entry : db.entries) {
    for (int b = db.entry_bits - 1; b >= 0; --b) out += ((entry >> b) & 1) ? '1' : '0';
  }
  return out;
}

absl::StatusOr<Scenario> BuildScenario(const RunConfig& config) {
  if (!config.seed) return Invalid("--seed is required");
  Scenario s;
  s.seed = *config.seed;
  s.params["protocol"] = config.protocol;
  const std::string& p = config.protocol;
  if (p == "baseline" || p == "cleartext" || p == "heqpir") {
    QPIR_ASSIGN_OR_RETURN(const int64_t n, SizeFromConfig(config, 1));
    if (n > (int64_t{1} << 20)) return Invalid("n is too large");
    QPIR_ASSIGN_OR_RETURN(s.database, EntriesOrRandom(config, static_cast<size_t>(n), 1));
    if (p == "baseline") {
      s.protocol = std::make_unique<runtime::SendEverythingProtocol>();
    } else if (p == "cleartext") {
      s.protocol = std::make_unique<runtime::CleartextIndexProtocol>();
    } else {
      s.protocol = std::make_unique<heqpir::HeqpirProtocol>(heqpir::HeqpirOptions{config.checksum});
      s.params["checksum"] = config.checksum;
    }
    QPIR_ASSIGN_OR_RETURN(s.index, SingleIndex(config, static_cast<uint64_t>(n)));
    s.params["n"] = n;
  } else if (p == "two_server") {
    QPIR_ASSIGN_OR_RETURN(const auto variant, multiserver::ParseTwoServerVariant(config.variant));
    if (config.m < 1 || config.m > 16) return Invalid("--m must lie in [1, 16]");
    QPIR_ASSIGN_OR_RETURN(const int64_t n, SizeFromConfig(config, config.m));
    if (n > 20) return Invalid("two_server supports at most 20 entries");
    QPIR_ASSIGN_OR_RETURN(s.database, EntriesOrRandom(config, static_cast<size_t>(n), config.m));
    s.protocol = std::make_unique<multiserver::TwoServerProtocol>(variant);
    QPIR_ASSIGN_OR_RETURN(s.index, SingleIndex(config, static_cast<uint64_t>(n)));
    s.params["n"] = n;
    s.params["m"] = config.m;
    s.params["variant"] = config.variant;
  } else if (p == "cube") {
    QPIR_RETURN_IF_ERROR(BuildCube(config, s));
  } else if (p == "aqpir") {
    QPIR_RETURN_IF_ERROR(BuildAqpir(config, s));
  } else {
    return Invalid(absl::StrCat("unknown protocol '", p,
                                "' (expected aqpir, heqpir, two_server, cube, baseline or cleartext)"));
  }
  QPIR_RETURN_IF_ERROR(s.protocol->ValidateDatabase(s.database));
  QPIR_RETURN_IF_ERROR(s.protocol->ValidateIndex(s.database, s.index));

  QPIR_ASSIGN_OR_RETURN(const runtime::AdversaryKind kind, runtime::ParseAdversaryKind(config.adversary));
  s.adversary.kind = kind;
  s.adversary.epsilon = config.epsilon;
  s.adversary.deviations = {config.deviations.begin(), config.deviations.end()};
  s.adversary.rounds = {config.rounds.begin(), config.rounds.end()};
  s.adversary.target = config.target;
  if (s.adversary.target.empty() && !s.adversary.IsHonest()) {
    s.adversary.target = s.protocol->roles().front();
  }
  if (!s.adversary.target.empty()) {
    const auto roles = s.protocol->roles();
    if (std::find(roles.begin(), roles.end(), s.adversary.target) == roles.end()) {
      return Invalid(absl::StrCat("unknown adversary target '", s.adversary.target, "'"));
    }
  }
  s.params["adversary"] = std::string(runtime::AdversaryKindName(kind));
  return s;
}

absl::StatusOr<std::vector<std::string>> ConfigFileArguments(const std::string& path) {
  toml::table table;
  try {
    table = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    return Invalid(absl::StrCat("cannot read config ", path, ": ", std::string(e.description())));
  }
  std::vector<std::string> args;
  auto scalar = [](const toml::node& node) -> absl::StatusOr<std::string> {
    if (auto v = node.value<std::string>()) return *v;
    if (auto v = node.value<int64_t>()) return absl::StrCat(*v);
    if (node.is_floating_point()) {
      std::ostringstream out;
      out.precision(17);
      out << *node.value<double>();
      return out.str();
    }
    return Invalid("unsupported config value");
  };
  for (const auto& [key, node] : table) {
    const std::string flag = absl::StrCat("--", std::string(key.str()));
    if (auto b = node.value<bool>(); b && node.is_boolean()) {
      if (*b) args.push_back(flag);
      continue;
    }
    if (const toml::array* array = node.as_array()) {
      std::vector<std::string> items;
      for (const auto& item : *array) {
        QPIR_ASSIGN_OR_RETURN(std::string text, scalar(item));
        items.push_back(std::move(text));
      }
      args.push_back(flag);
      args.push_back(absl::StrJoin(items, ","));
      continue;
    }
    if (node.is_table()) return Invalid(absl::StrCat("config key '", std::string(key.str()), "' is a table"));
    QPIR_ASSIGN_OR_RETURN(std::string text, scalar(node));
    args.push_back(flag);
    args.push_back(std::move(text));
  }
  return args;
}

}  // namespace qpir::cli
