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

#include "qpir/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "qpir/chsh/chsh.h"
#include "qpir/cli/config.h"
#include "qpir/info/bound_sweep.h"
#include "qpir/multiserver/cube.h"
#include "qpir/runtime/baseline.h"
#include "qpir/runtime/evaluators.h"
#include "qpir/util/status_macros.h"

namespace qpir::cli {

using nlohmann::ordered_json;
using runtime::Database;
using runtime::RunResult;

namespace {

// Statuses caused by the user's input map to exit 2.
int ExitFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kResourceExhausted:
    case absl::StatusCode::kFailedPrecondition:
      return kExitInvalid;
    default:
      return kExitViolation;
  }
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitFor(status);
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::PermissionDeniedError(absl::StrCat("cannot open ", path));
  file << text;
  file.close();
  if (!file) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

// Report to stdout and, if requested, to a file.
absl::Status Emit(const ordered_json& report, const std::string& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!path.empty()) return WriteFile(path, text);
  return absl::OkStatus();
}

void AddScenarioOptions(CLI::App* cmd, RunConfig& c, uint64_t& seed) {
  cmd->add_option("--protocol", c.protocol, "aqpir, heqpir, two_server, cube, baseline, cleartext")
      ->required();
  cmd->add_option("--n", c.n, "database size (entries, or bits for aqpir)");
  cmd->add_option("--ell", c.ell, "entries per cube side, or aqpir block count");
  cmd->add_option("--d", c.d, "cube dimension");
  cmd->add_option("--m", c.m, "bits per two_server entry");
  cmd->add_option("--r", c.r, "aqpir block width");
  cmd->add_option("--n_tcf", c.n_tcf, "aqpir claw-function domain bits");
  cmd->add_option("--k_detect", c.k_detect, "aqpir detection pairs (0: ceil(sqrt(ell)))");
  cmd->add_option("--variant", c.variant, "two_server variant: per_bit_z or qft_modN");
  cmd->add_flag("--checksum", c.checksum, "heqpir parity record");
  cmd->add_option("--index", c.index, "1-based index; comma-separated coordinates for the cube");
  cmd->add_option("--database", c.database, "database as a bit string (random if omitted)");
  cmd->add_option("--adversary", c.adversary, "honest, specious, intercept_resend, phase_tamper");
  cmd->add_option("--target", c.target, "party the adversary controls");
  cmd->add_option("--deviations", c.deviations, "named deviations")->delimiter(',');
  cmd->add_option("--rounds", c.rounds, "rounds in which the adversary acts")->delimiter(',');
  cmd->add_option("--epsilon", c.epsilon, "privacy / speciousness tolerance");
  cmd->add_option("--delta", c.delta, "correctness slack");
  cmd->add_option("--seed", seed, "random seed (required)");
}

absl::StatusOr<Scenario> Resolve(CLI::App* cmd, RunConfig& config, uint64_t seed) {
  if (cmd->count("--seed") == 0) return absl::InvalidArgumentError("--seed is required");
  config.seed = seed;
  return BuildScenario(config);
}

ordered_json RunSummary(const Scenario& s, const RunConfig& config, const RunResult& run) {
  ordered_json summary;
  summary["command"] = "run";
  summary["params"] = s.params;
  summary["index"] = config.index;
  summary["seed"] = s.seed;
  summary["database"] = DatabaseBits(s.database);
  summary["result"] = run.value ? ordered_json(*run.value) : ordered_json(nullptr);
  summary["qubit_cost"] = run.transcript.qubit_cost();
  summary["classical_cost"] = run.transcript.classical_cost();
  summary["aborted_at"] = run.aborted() ? ordered_json(run.aborted_at) : ordered_json(nullptr);
  summary["abort_reason"] = run.abort_reason;
  summary["success_probability"] = run.success_probability;
  summary["record"] = run.record;
  return summary;
}

int CmdRun(CLI::App* cmd, RunConfig& config, uint64_t seed, std::ostream& out, std::ostream& err) {
  auto scenario = Resolve(cmd, config, seed);
  if (!scenario.ok()) return Fail(err, scenario.status());
  Rng rng = DeriveStream(scenario->seed, kRunStream);
  auto run = runtime::RunProtocol(*scenario->protocol, scenario->database, scenario->index,
                                  scenario->adversary, rng);
  if (!run.ok()) return Fail(err, run.status());
  if (!config.transcript_path.empty()) {
    if (auto st = run->transcript.WriteJsonLines(config.transcript_path); !st.ok()) return Fail(err, st);
  }
  if (auto st = Emit(RunSummary(*scenario, config, *run), config.report_path, out); !st.ok()) {
    return Fail(err, st);
  }
  err << "run " << config.protocol << ": result="
      << (run->value ? absl::StrCat(*run->value) : std::string("none"))
      << " qubits=" << run->transcript.qubit_cost() << " bits=" << run->transcript.classical_cost();
  if (run->aborted()) err << " aborted_at=" << run->aborted_at << " (" << run->abort_reason << ")";
  err << "\n";
  return run->aborted() ? kExitAborted : kExitOk;
}

struct AnalyzeOptions {
  int64_t samples = runtime::kDefaultPrivacySamples;
  int trials = 1;
  int databases = 3;
  std::vector<uint32_t> coalition;
};

// Desk-scale limits for the exhaustive and density-matrix analyses.
absl::Status CheckAnalyzeSize(const Scenario& s) {
  const std::string name(s.protocol->name());
  const ordered_json& p = s.params;
  bool ok = true;
  if (name == "aqpir") {
    ok = p["ell"].get<int>() + p["r"].get<int>() + p["n_tcf"].get<int>() <= 9;
  } else if (name == "heqpir") {
    ok = s.database.size() <= 64;
  } else if (name == "two_server") {
    ok = s.database.size() <= 10 && s.database.entry_bits <= 3;
  } else if (name == "cube") {
    ok = s.database.size() <= 4096 && p["d"].get<int>() * p["ell"].get<int>() <= 16;
  } else {
    ok = s.database.size() <= 4096;
  }
  if (!ok) {
    return absl::InvalidArgumentError(
        absl::StrCat("parameters too large to analyze for ", name, ": ", p.dump()));
  }
  return absl::OkStatus();
}

absl::StatusOr<ordered_json> Analyze(const Scenario& s, const RunConfig& config,
                                     const AnalyzeOptions& options, bool& pass) {
  ordered_json report;
  report["command"] = "analyze";
  report["params"] = s.params;
  report["seed"] = s.seed;

  ordered_json privacy = ordered_json::array();
  std::vector<runtime::PrivacyReport> privacy_reports;
  for (const std::string& role : s.protocol->roles()) {
    runtime::PrivacyOptions po;
    po.samples = options.samples;
    po.seed = s.seed;
    QPIR_ASSIGN_OR_RETURN(auto pr, runtime::EvaluatePrivacy(*s.protocol, s.database, role,
                                                            config.epsilon, po));
    pass &= pr.pass;
    privacy.push_back(pr.ToJson());
    privacy_reports.push_back(std::move(pr));
  }
  report["privacy_report"] = privacy;

  std::vector<Database> family = {s.database};
  Rng db_rng = DeriveStream(s.seed, kDatabaseStream + 100);
  for (int k = 0; k < options.databases; ++k) {
    family.push_back(Database::Random(s.database.size(), s.database.entry_bits, db_rng));
  }
  runtime::CorrectnessOptions co;
  co.trials = options.trials;
  co.seed = s.seed;
  co.adversary = s.adversary;
  QPIR_ASSIGN_OR_RETURN(auto correctness,
                        runtime::EvaluateCorrectness(*s.protocol, family, config.delta, co));
  pass &= correctness.pass;
  report["correctness_report"] = correctness.ToJson();

  if (s.protocol->name() == "cube") {
    const auto* cube = static_cast<const multiserver::CubeProtocol*>(s.protocol.get());
    std::vector<uint32_t> coalition = options.coalition;
    if (coalition.empty()) coalition = cube->shape().d >= 2 ? std::vector<uint32_t>{0, 1} : std::vector<uint32_t>{0};
    multiserver::CollusionOptions col;
    col.seed = s.seed;
    QPIR_ASSIGN_OR_RETURN(auto collusion, multiserver::EvaluateCollusion(cube->shape(), coalition, col));
    pass &= collusion.pass;
    report["collusion_report"] = collusion.ToJson();
  }

  // Communication lower bound for single-server protocols, when the view
  // ensemble is small enough to hold densely.
  if (s.protocol->roles().size() == 1 && !privacy_reports.empty()) {
    const auto& views = privacy_reports[0].views;
    size_t dimension = 0;
    std::set<std::string> records;
    for (const auto& v : views) {
      for (const auto& [record, block] : v.blocks()) records.insert(record);
      dimension = static_cast<size_t>(v.dimension());
    }
    Rng rng = DeriveStream(s.seed, kRunStream);
    QPIR_ASSIGN_OR_RETURN(RunResult honest,
                          runtime::RunProtocol(*s.protocol, s.database, s.index,
                                               runtime::AdversaryModel::Honest(), rng));
    const double cost = static_cast<double>(honest.transcript.qubit_cost() +
                                            honest.transcript.classical_cost());
    if (records.size() * dimension <= 512 && s.database.total_bits() < (1 << 20)) {
      QPIR_ASSIGN_OR_RETURN(auto bound,
                            runtime::EvaluateCommunicationBound(
                                privacy_reports[0], static_cast<int>(s.database.total_bits()), cost));
      pass &= bound.satisfied;
      report["bound_report"] = {{"n", s.database.total_bits()},
                                {"bound", bound.bound_value},
                                {"measured_cost", bound.measured_cost},
                                {"slack", bound.slack},
                                {"satisfied", bound.satisfied}};
    } else {
      report["bound_report"] = {{"skipped", "view ensemble too large to hold densely"}};
    }
  }
  report["pass"] = pass;
  return report;
}

int CmdAnalyze(CLI::App* cmd, RunConfig& config, uint64_t seed, const AnalyzeOptions& options,
               std::ostream& out, std::ostream& err) {
  auto scenario = Resolve(cmd, config, seed);
  if (!scenario.ok()) return Fail(err, scenario.status());
  if (auto st = CheckAnalyzeSize(*scenario); !st.ok()) return Fail(err, st);
  if (options.samples < 1 || options.trials < 1 || options.databases < 0) {
    return Fail(err, absl::InvalidArgumentError("samples and trials must be positive"));
  }
  bool pass = true;
  auto report = Analyze(*scenario, config, options, pass);
  if (!report.ok()) return Fail(err, report.status());
  if (auto st = Emit(*report, config.report_path, out); !st.ok()) return Fail(err, st);
  double worst = 0.0;
  for (const auto& pr : (*report)["privacy_report"]) worst = std::max(worst, pr["max_distance"].get<double>());
  err << "analyze " << config.protocol << ": max privacy distance " << worst << ", correctness min "
      << (*report)["correctness_report"]["min_success"].get<double>() << ", "
      << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

struct VerifyOptions {
  int samples = 1000;
  int dims = 8;
  double tolerance = 1e-6;
  std::string report_path;
};

int CmdVerifyBounds(CLI::App* cmd, uint64_t seed, const VerifyOptions& options, std::ostream& out,
                    std::ostream& err) {
  if (cmd->count("--seed") == 0) return Fail(err, absl::InvalidArgumentError("--seed is required"));
  if (options.dims < 2 || options.dims > 8) {
    return Fail(err, absl::InvalidArgumentError("--dims must lie in [2, 8]"));
  }
  if (options.samples < 1) return Fail(err, absl::InvalidArgumentError("--samples must be positive"));
  info::SweepOptions sweep;
  sweep.samples = options.samples;
  sweep.max_dim = options.dims;
  sweep.tolerance = options.tolerance;
  Rng rng(seed);
  auto results = info::RunBoundSweeps(sweep, rng);
  if (!results.ok()) return Fail(err, results.status());
  bool pass = true;
  ordered_json report;
  report["command"] = "verify-bounds";
  report["seed"] = seed;
  report["samples"] = options.samples;
  report["dims"] = options.dims;
  report["tolerance"] = options.tolerance;
  ordered_json sweeps = ordered_json::array();
  for (const auto& r : *results) {
    pass &= r.violations == 0;
    sweeps.push_back({{"name", r.name},
                      {"instances", r.instances},
                      {"violations", r.violations},
                      {"worst_margin", r.worst_margin},
                      {"infinite_cases", r.infinite_cases}});
  }
  report["sweeps"] = sweeps;
  // The send-everything baseline against the communication lower bound.
  ordered_json bound_rows = ordered_json::array();
  const runtime::SendEverythingProtocol baseline;
  for (int n : {2, 4, 8}) {
    Rng db_rng = DeriveStream(seed, static_cast<uint64_t>(n));
    const Database db = Database::Random(static_cast<size_t>(n), 1, db_rng);
    runtime::PrivacyOptions po;
    po.seed = seed;
    auto privacy = runtime::EvaluatePrivacy(baseline, db, "server", 0.0, po);
    if (!privacy.ok()) return Fail(err, privacy.status());
    Rng run_rng = DeriveStream(seed, kRunStream);
    auto run = runtime::RunProtocol(baseline, db, 0, runtime::AdversaryModel::Honest(), run_rng);
    if (!run.ok()) return Fail(err, run.status());
    const double cost = static_cast<double>(run->transcript.classical_cost());
    auto bound = runtime::EvaluateCommunicationBound(*privacy, n, cost);
    if (!bound.ok()) return Fail(err, bound.status());
    const bool exact = std::abs(bound->bound_value - n) <= options.tolerance;
    pass &= bound->satisfied && exact;
    bound_rows.push_back({{"n", n},
                       {"bound", bound->bound_value},
                       {"measured_cost", cost},
                       {"bound_equals_n", exact},
                       {"satisfied", bound->satisfied}});
  }
  report["communication_bound"] = bound_rows;
  report["pass"] = pass;
  if (auto st = Emit(report, options.report_path, out); !st.ok()) return Fail(err, st);
  for (const auto& r : *results) {
    err << r.name << ": " << r.instances << " instances, " << r.violations << " violations\n";
  }
  err << "verify-bounds: " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kExitOk : kExitViolation;
}

struct BenchCli {
  std::vector<std::string> protocols = {"aqpir", "heqpir", "cube", "baseline"};
  std::vector<int64_t> sizes = {4, 16, 64};
  int d = 2;
  std::string out_path;
  std::string fits_path;
};

int CmdBench(CLI::App* cmd, uint64_t seed, const BenchCli& options, std::ostream& out,
             std::ostream& err) {
  if (cmd->count("--seed") == 0) return Fail(err, absl::InvalidArgumentError("--seed is required"));
  BenchOptions bench{options.protocols, options.sizes, options.d, seed};
  auto rows = RunBench(bench);
  if (!rows.ok()) return Fail(err, rows.status());
  const std::string csv = BenchCsv(*rows);
  const ordered_json fits = BenchFits(*rows);
  if (options.out_path.empty()) {
    out << csv;
  } else if (auto st = WriteFile(options.out_path, csv); !st.ok()) {
    return Fail(err, st);
  }
  if (!options.fits_path.empty()) {
    if (auto st = WriteFile(options.fits_path, fits.dump(2) + "\n"); !st.ok()) return Fail(err, st);
  }
  err << "bench fits: " << fits.dump() << "\n";
  return kExitOk;
}

struct ChshCli {
  int64_t rounds = 100000;
  std::string strategy = "quantum";
  double excess = 0.05;
  double confidence = 0.99;
  std::string report_path;
};

int CmdChsh(CLI::App* cmd, uint64_t seed, const ChshCli& options, std::ostream& out,
            std::ostream& err) {
  if (cmd->count("--seed") == 0) return Fail(err, absl::InvalidArgumentError("--seed is required"));
  if (options.rounds < 1) return Fail(err, absl::InvalidArgumentError("--rounds must be at least 1"));
  if (options.strategy != "quantum" && options.strategy != "classical") {
    return Fail(err, absl::InvalidArgumentError("--strategy must be quantum or classical"));
  }
  if (!(options.confidence > 0.0 && options.confidence < 1.0) || !(options.excess > 0.0)) {
    return Fail(err, absl::InvalidArgumentError("confidence must lie in (0, 1) and excess be positive"));
  }
  const int64_t minimum = chsh::MinimumRounds(options.excess, options.confidence);
  if (options.rounds < minimum) {
    return Fail(err, absl::FailedPreconditionError(
                         absl::StrCat("insufficient rounds: ", options.rounds, " < ", minimum,
                                      " needed for excess ", options.excess, " at confidence ",
                                      options.confidence)));
  }
  Rng rng(seed);
  auto stats = options.strategy == "quantum" ? chsh::PlayQuantum(options.rounds, rng)
                                             : chsh::PlayClassical(options.rounds, rng);
  if (!stats.ok()) return Fail(err, stats.status());
  auto verdict = chsh::ThresholdTest(*stats, chsh::kClassicalBound, options.excess, options.confidence);
  if (!verdict.ok()) return Fail(err, verdict.status());
  ordered_json report = {{"command", "chsh"},
                         {"seed", seed},
                         {"strategy", options.strategy},
                         {"rounds", stats->rounds},
                         {"wins", stats->wins},
                         {"win_rate", stats->win_rate},
                         {"quantum_value", chsh::kQuantumValue},
                         {"classical_bound", chsh::kClassicalBound},
                         {"threshold",
                          {{"excess", options.excess},
                           {"confidence", options.confidence},
                           {"lower_bound", verdict->lower_bound},
                           {"minimum_rounds", verdict->minimum_rounds},
                           {"accept", verdict->accept}}}};
  if (auto st = Emit(report, options.report_path, out); !st.ok()) return Fail(err, st);
  err << "chsh " << options.strategy << ": win rate " << stats->win_rate << " over " << stats->rounds
      << " rounds, " << (verdict->accept ? "accept" : "reject") << "\n";
  return kExitOk;
}

// Moves `--config FILE` out of the arguments and splices the file's
// settings in right after the subcommand, so later flags override them.
absl::StatusOr<std::vector<std::string>> ExpandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (size_t k = 0; k < args.size(); ++k) {
    std::string path;
    if (args[k] == "--config") {
      if (k + 1 == args.size()) return absl::InvalidArgumentError("--config needs a file");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
      continue;
    }
    QPIR_ASSIGN_OR_RETURN(auto extra, ConfigFileArguments(path));
    from_file.insert(from_file.end(), extra.begin(), extra.end());
  }
  if (from_file.empty()) return rest;
  if (rest.empty()) return absl::InvalidArgumentError("--config must follow a subcommand");
  std::vector<std::string> out = {rest[0]};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

absl::StatusOr<std::vector<BenchRow>> RunBench(const BenchOptions& options) {
  if (options.protocols.empty() || options.sizes.empty()) {
    return absl::InvalidArgumentError("bench needs protocols and sizes");
  }
  std::vector<std::pair<std::string, RunConfig>> plan;
  for (const std::string& protocol : options.protocols) {
    for (int64_t n : options.sizes) {
      RunConfig config;
      config.protocol = protocol;
      config.seed = options.seed;
      if (protocol == "cube") {
        const int d = options.cube_d;
        if (d < 1) return absl::InvalidArgumentError("cube dimension must be positive");
        const int ell = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / d)));
        if (std::lround(std::pow(ell, d)) != n) {
          return absl::InvalidArgumentError(
              absl::StrCat("cube size ", n, " is not a perfect ", d, "-th power"));
        }
        config.d = d;
        config.ell = ell;
      } else {
        config.n = n;
      }
      plan.emplace_back(protocol, config);
    }
  }
  std::vector<Scenario> scenarios;
  for (const auto& [protocol, config] : plan) {
    QPIR_ASSIGN_OR_RETURN(Scenario s, BuildScenario(config));
    scenarios.push_back(std::move(s));
  }
  std::vector<BenchRow> rows;
  for (size_t k = 0; k < scenarios.size(); ++k) {
    const Scenario& s = scenarios[k];
    Rng rng = DeriveStream(options.seed, k);
    QPIR_ASSIGN_OR_RETURN(RunResult run, runtime::RunProtocol(*s.protocol, s.database, s.index,
                                                              runtime::AdversaryModel::Honest(), rng));
    const int64_t n = plan[k].second.n > 0 ? plan[k].second.n
                                           : static_cast<int64_t>(s.database.size());
    rows.push_back({plan[k].first, n, run.transcript.qubit_cost(), run.transcript.classical_cost(),
                    options.seed});
  }
  return rows;
}

std::string BenchCsv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "protocol,n,qubit_cost,bit_cost,seed\n";
  for (const BenchRow& r : rows) {
    out << r.protocol << ',' << r.n << ',' << r.qubit_cost << ',' << r.bit_cost << ',' << r.seed << '\n';
  }
  return out.str();
}

absl::StatusOr<LinearFit> FitLinear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return absl::InvalidArgumentError("need two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) return absl::InvalidArgumentError("x values are all equal");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (size_t k = 0; k < x.size(); ++k) {
    const double residual = std::abs(y[k] - (fit.slope * x[k] + fit.intercept));
    fit.max_relative_residual =
        std::max(fit.max_relative_residual, y[k] != 0.0 ? residual / std::abs(y[k]) : residual);
  }
  return fit;
}

absl::StatusOr<PowerLawFit> FitPowerLaw(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("size mismatch");
  std::vector<double> lx, ly;
  for (size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) return absl::InvalidArgumentError("power law needs positive data");
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
  }
  QPIR_ASSIGN_OR_RETURN(LinearFit line, FitLinear(lx, ly));
  return PowerLawFit{line.slope, std::exp(line.intercept)};
}

nlohmann::ordered_json BenchFits(const std::vector<BenchRow>& rows) {
  ordered_json fits = ordered_json::object();
  std::vector<std::string> order;
  for (const BenchRow& r : rows) {
    if (std::find(order.begin(), order.end(), r.protocol) == order.end()) order.push_back(r.protocol);
  }
  for (const std::string& protocol : order) {
    std::vector<double> n, qubits, bits, total;
    for (const BenchRow& r : rows) {
      if (r.protocol != protocol) continue;
      n.push_back(static_cast<double>(r.n));
      qubits.push_back(static_cast<double>(r.qubit_cost));
      bits.push_back(static_cast<double>(r.bit_cost));
      total.push_back(static_cast<double>(r.qubit_cost + r.bit_cost));
    }
    ordered_json entry;
    auto put = [&](const char* key, const std::vector<double>& y) {
      auto fit = FitPowerLaw(n, y);
      entry[key] = fit.ok() ? ordered_json(fit->exponent) : ordered_json(nullptr);
    };
    put("qubit_exponent", qubits);
    put("bit_exponent", bits);
    put("total_exponent", total);
    if (auto line = FitLinear(n, total); line.ok()) {
      entry["total_linear"] = {{"slope", line->slope},
                               {"intercept", line->intercept},
                               {"max_relative_residual", line->max_relative_residual}};
    }
    fits[protocol] = entry;
  }
  return fits;
}

int Main(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  auto args = ExpandConfig(raw_args);
  if (!args.ok()) return Fail(err, args.status());

  CLI::App app{"Simulation laboratory for quantum private information retrieval", "qpir"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig run_config, analyze_config;
  uint64_t run_seed = 0, analyze_seed = 0, verify_seed = 0, bench_seed = 0, chsh_seed = 0;
  CLI::App* run = app.add_subcommand("run", "run one protocol execution");
  AddScenarioOptions(run, run_config, run_seed);
  run->add_option("--transcript", run_config.transcript_path, "write the JSON-lines transcript here");
  run->add_option("--report", run_config.report_path, "also write the summary here");

  AnalyzeOptions analyze_options;
  CLI::App* analyze = app.add_subcommand("analyze", "privacy, correctness and collusion reports");
  AddScenarioOptions(analyze, analyze_config, analyze_seed);
  analyze->add_option("--samples", analyze_options.samples, "privacy samples when not enumerable");
  analyze->add_option("--trials", analyze_options.trials, "runs per correctness input");
  analyze->add_option("--databases", analyze_options.databases, "extra random databases");
  analyze->add_option("--coalition", analyze_options.coalition, "cube coalition server numbers")
      ->delimiter(',');
  analyze->add_option("--report", analyze_config.report_path, "also write the report here");

  VerifyOptions verify_options;
  CLI::App* verify = app.add_subcommand("verify-bounds", "information-theoretic bound sweeps");
  verify->add_option("--samples", verify_options.samples, "instances per sweep");
  verify->add_option("--dims", verify_options.dims, "largest quantum dimension (<= 8)");
  verify->add_option("--tolerance", verify_options.tolerance, "allowed numerical slack");
  verify->add_option("--seed", verify_seed, "random seed (required)");
  verify->add_option("--report", verify_options.report_path, "also write the report here");

  BenchCli bench_options;
  CLI::App* bench = app.add_subcommand("bench", "communication cost table");
  bench->add_option("--protocols", bench_options.protocols, "protocols to measure")->delimiter(',');
  bench->add_option("--sizes", bench_options.sizes, "database sizes")->delimiter(',');
  bench->add_option("--d", bench_options.d, "cube dimension");
  bench->add_option("--seed", bench_seed, "random seed (required)");
  bench->add_option("--out", bench_options.out_path, "CSV path (stdout if omitted)");
  bench->add_option("--fits", bench_options.fits_path, "write the fitted exponents here");

  ChshCli chsh_options;
  CLI::App* chsh_cmd = app.add_subcommand("chsh", "CHSH game statistics");
  chsh_cmd->add_option("--rounds", chsh_options.rounds, "rounds to play");
  chsh_cmd->add_option("--strategy", chsh_options.strategy, "quantum or classical");
  chsh_cmd->add_option("--excess", chsh_options.excess, "required margin over 3/4");
  chsh_cmd->add_option("--confidence", chsh_options.confidence, "confidence of the threshold test");
  chsh_cmd->add_option("--seed", chsh_seed, "random seed (required)");
  chsh_cmd->add_option("--report", chsh_options.report_path, "also write the report here");

  std::vector<std::string> reversed(args->rbegin(), args->rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (run->parsed()) return CmdRun(run, run_config, run_seed, out, err);
  if (analyze->parsed()) return CmdAnalyze(analyze, analyze_config, analyze_seed, analyze_options, out, err);
  if (verify->parsed()) return CmdVerifyBounds(verify, verify_seed, verify_options, out, err);
  if (bench->parsed()) return CmdBench(bench, bench_seed, bench_options, out, err);
  if (chsh_cmd->parsed()) return CmdChsh(chsh_cmd, chsh_seed, chsh_options, out, err);
  return kExitInvalid;
}

}  // namespace qpir::cli
