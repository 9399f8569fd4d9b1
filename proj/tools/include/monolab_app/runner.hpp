#pragma once

#include "monolab_app/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace monolab::app {

/// Report layout version; bump on any incompatible change to report.json.
inline constexpr int kReportSchemaVersion = 1;
const char* tool_version();

enum ExitCode : int {
  kExitOk = 0,
  kExitProbeError = 1,
  kExitSchema = 2,
  kExitNoConvergence = 3,
  kExitUnknownName = 4,
};

struct RunOptions {
  std::optional<long> horizon;
  std::optional<double> eps_member;
  bool timings = false;
  int jobs = 1;
};

/// Applies command-line overrides and re-validates.
void apply_overrides(Scenario& s, const RunOptions& opt);

struct ProbeOutcome {
  Json entry;  // the probe's report entry
  std::vector<std::pair<std::string, ConvergenceTrace>> traces;
  std::vector<std::pair<std::string, ScalarField>> fields;
  bool no_convergence = false;
  bool failed = false;
};

ProbeOutcome run_probe(const Scenario& s, std::size_t index, bool timings = false);

struct RunResult {
  Json report;
  std::vector<ProbeOutcome> probes;
  int exit_code = kExitOk;
};

/// Runs every probe (concurrently when jobs > 1); the report is ordered by
/// probe index, so it does not depend on scheduling.
RunResult run_scenario(const Scenario& s, const RunOptions& opt);

/// Trace CSV: n, x_n[0..d), residual, dist_to_x.
void write_trace_csv(std::ostream& os, const ConvergenceTrace& t, int dim);
/// Field CSV: x[0..d), xstar[0..d), value.
void write_field_csv(std::ostream& os, const ScalarField& f);

/// Shortest decimal that round-trips; "inf", "-inf" and "nan" otherwise.
std::string format_double(double v);

}  // namespace monolab::app
