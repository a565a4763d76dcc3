#pragma once

// Command implementations behind the hmnc CLI. Every command is a pure
// function of the scenario (and seed); files are produced in memory and written
// by run().

#include "hmnc/scenario.hpp"

#include <functional>
#include <iosfwd>

namespace hmnc::harness {

enum ExitCode : int { exit_pass = 0, exit_failure = 1, exit_config = 2, exit_internal = 3 };

// A computed result that contradicts a proven inequality; never emitted.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// A verified mathematical failure (exit 1).
class VerifiedFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Invariant {
  std::string name;
  bool passed = true;
  // Smallest (tolerance − violation) seen; +inf when nothing was checked.
  double worst_margin = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<Invariant> invariants;
  bool passed() const;
};

VerifyReport verify_scenario(const Scenario &s, bool audit_oracle, unsigned workers);
Json verify_report_json(const Scenario &s, const VerifyReport &report);

struct OutputFile {
  std::string name;
  std::string content;
};

/// set_<name>.json/.csv and operator_<name>.json/.csv per descriptor, then measure.json.
std::vector<OutputFile> measure_scenario(const Scenario &s, unsigned workers);

struct WitnessRun {
  std::vector<OutputFile> files;
  bool valid = false;
  std::string summary;
};

/// certificate.json and validation.json for the configured witness generator.
WitnessRun witness_scenario(const Scenario &s, bool audit_oracle);

/// HMNC_WORKERS if set, otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs task(0..count−1) on up to `workers` threads. The first exception in
/// index order is rethrown after all tasks finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &task);

struct RunOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = ".";
  bool audit_oracle = false;
  // 0 selects worker_count().
  unsigned workers = 0;
};

int run(const RunOptions &options, std::ostream &out, std::ostream &err);

} // namespace hmnc::harness
