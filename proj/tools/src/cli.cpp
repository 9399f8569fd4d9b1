#include "monolab_app/cli.hpp"

#include "monolab_app/examples.hpp"
#include "monolab_app/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace monolab::app {

namespace {

namespace fs = std::filesystem;

constexpr const char* kReportFile = "report.json";
constexpr const char* kScenarioFile = "scenario.json";

std::string headline(const Json& entry) {
  if (entry.value("status", "") != "ok") return "error (" + entry["error"].value("type", "") + "): " + entry["error"].value("message", "");
  const Json& r = entry["result"];
  std::ostringstream os;
  if (r.contains("verdict")) os << r["verdict"]["status"].get<std::string>();
  if (r.contains("aggregate")) {
    os << r["aggregate"]["status"].get<std::string>();
    if (r["aggregate"].contains("certified_by")) os << " (certified by " << r["aggregate"]["certified_by"].get<std::string>() << ")";
  }
  if (r.contains("classification")) {
    const Json& c = r["classification"];
    os << "monotone=" << c["monotone"] << " representable=" << c["representable"] << " maximal=" << c["maximal"];
  }
  if (r.contains("agree")) {
    os << "routes " << (r["agree"].get<bool>() ? "agree" : "DISAGREE") << " ("
       << r["composition"]["aggregate"]["status"].get<std::string>() << ")";
  }
  if (r.contains("holds")) os << "certificate " << (r["holds"].get<bool>() ? "holds" : "fails");
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

std::string file_safe(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return out;
}

int trace_dim(const ConvergenceTrace& t) { return t.rows.empty() ? 0 : static_cast<int>(t.rows.front().x_n.size()); }

struct RunArgs {
  std::string scenario;
  std::string out_dir = "monolab-out";
  long horizon = -1;
  double eps_member = -1.0;
  bool timings = false;
  bool traces = false;
  bool fields = false;
  int jobs = 1;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(a.scenario);
    RunOptions opt;
    if (a.horizon != -1) opt.horizon = a.horizon;
    if (a.eps_member >= 0.0) opt.eps_member = a.eps_member;
    apply_overrides(s, opt);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  }
  RunOptions opt;
  opt.timings = a.timings;
  opt.jobs = a.jobs;
  const RunResult r = run_scenario(s, opt);

  const fs::path dir(a.out_dir);
  write_file(dir / kReportFile, r.report.dump(2) + "\n");
  write_file(dir / kScenarioFile, to_json(s).dump(2) + "\n");
  for (const auto& p : r.probes) {
    if (a.traces) {
      for (const auto& [id, t] : p.traces) {
        std::ostringstream csv;
        write_trace_csv(csv, t, trace_dim(t));
        write_file(dir / "traces" / (file_safe(id) + ".csv"), csv.str());
      }
    }
    if (a.fields) {
      for (const auto& [id, f] : p.fields) {
        std::ostringstream csv;
        write_field_csv(csv, f);
        write_file(dir / "fields" / (file_safe(id) + ".csv"), csv.str());
      }
    }
    out << p.entry["id"].get<std::string>() << " [" << p.entry["kind"].get<std::string>() << "]: " << headline(p.entry)
        << "\n";
  }
  out << "report: " << (dir / kReportFile).string() << "\n";
  return r.exit_code;
}

struct ExamplesArgs {
  std::string filter;
  double eps_member = -1.0;
  double eps_scale = 1.0;
  bool list = false;
  std::string out_dir;
  int jobs = 1;
};

int cmd_examples(const ExamplesArgs& a, std::ostream& out, std::ostream& err) {
  int selected = 0, failed = 0;
  for (const auto& ex : builtin_examples()) {
    if (!a.filter.empty() && ex.name.find(a.filter) == std::string::npos) continue;
    ++selected;
    if (a.list) {
      out << ex.name << ": " << ex.summary << "\n";
      continue;
    }
    ExampleCheck check;
    try {
      Scenario s = parse_scenario(ex.scenario);
      RunOptions opt;
      opt.eps_member = a.eps_member >= 0.0 ? a.eps_member : s.tolerances.eps_member * a.eps_scale;
      opt.jobs = a.jobs;
      apply_overrides(s, opt);
      const RunResult r = run_scenario(s, opt);
      if (!a.out_dir.empty()) write_file(fs::path(a.out_dir) / (ex.name + ".json"), r.report.dump(2) + "\n");
      check = ex.check(r.report);
    } catch (const std::exception& e) {
      check = ExampleCheck{false, std::string("exception: ") + e.what()};
    }
    if (!check.pass) ++failed;
    out << (check.pass ? "PASS " : "FAIL ") << ex.name << ": " << check.detail << "\n";
  }
  if (selected == 0) {
    err << "no example matches '" << a.filter << "'\n";
    return kExitUnknownName;
  }
  if (!a.list) out << (selected - failed) << "/" << selected << " examples passed\n";
  return failed == 0 ? kExitOk : kExitProbeError;
}

struct ExportArgs {
  std::string name;
  std::string dir = "monolab-out";
  std::string output;
};

int cmd_export(const ExportArgs& a, bool field, std::ostream& out, std::ostream& err) {
  const fs::path dir(a.dir);
  Json report;
  {
    std::ifstream f(dir / kReportFile);
    if (!f) {
      err << "no report in " << dir.string() << "; run a scenario first\n";
      return kExitUnknownName;
    }
    report = Json::parse(f);
  }
  const char* list = field ? "fields" : "traces";
  std::size_t owner = report["probes"].size();
  for (std::size_t i = 0; i < report["probes"].size() && owner == report["probes"].size(); ++i) {
    for (const auto& item : report["probes"][i][list]) {
      if (item["id"] == a.name) owner = i;
    }
  }
  if (owner == report["probes"].size()) {
    err << "unknown " << (field ? "field" : "trace") << " '" << a.name << "' in " << (dir / kReportFile).string() << "\n";
    return kExitUnknownName;
  }
  Scenario s;
  try {
    s = load_scenario((dir / kScenarioFile).string());
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  }
  // Everything is deterministic, so re-running the owning probe reproduces the object.
  const ProbeOutcome p = run_probe(s, owner);
  if (p.no_convergence) return kExitNoConvergence;
  std::ostringstream csv;
  bool found = false;
  if (field) {
    for (const auto& [id, f] : p.fields) {
      if (id == a.name) {
        write_field_csv(csv, f);
        found = true;
      }
    }
  } else {
    for (const auto& [id, t] : p.traces) {
      if (id == a.name) {
        write_trace_csv(csv, t, trace_dim(t));
        found = true;
      }
    }
  }
  if (!found) {
    err << "'" << a.name << "' was not reproduced by re-running its probe\n";
    return kExitProbeError;
  }
  if (a.output.empty()) {
    out << csv.str();
  } else {
    write_file(fs::absolute(a.output), csv.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical probes for limits and sums of monotone operators"};
  app.name("monolab");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("monolab ") + tool_version());

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run every probe of a scenario and write a JSON report");
  run_cmd->add_option("scenario", run.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--horizon", run.horizon, "Override the horizon N");
  run_cmd->add_option("--eps-member", run.eps_member, "Override the membership tolerance");
  run_cmd->add_flag("--timings", run.timings, "Record wall-clock seconds per probe (breaks byte-identical reports)");
  run_cmd->add_flag("--traces", run.traces, "Also write every trace as CSV under OUT/traces");
  run_cmd->add_flag("--fields", run.fields, "Also write every field as CSV under OUT/fields");
  run_cmd->add_option("--jobs", run.jobs, "Probes run concurrently")->check(CLI::Range(1, 256));

  ExamplesArgs ex;
  auto* ex_cmd = app.add_subcommand("examples", "Run the built-in golden examples");
  ex_cmd->add_option("--filter", ex.filter, "Only examples whose name contains NAME");
  ex_cmd->add_option("--eps-member", ex.eps_member, "Membership tolerance for every example");
  ex_cmd->add_option("--eps-scale", ex.eps_scale, "Multiply each example's membership tolerance")
      ->check(CLI::PositiveNumber);
  ex_cmd->add_flag("--list", ex.list, "List examples without running them");
  ex_cmd->add_option("--out", ex.out_dir, "Write one report per example into this directory");
  ex_cmd->add_option("--jobs", ex.jobs, "Probes run concurrently")->check(CLI::Range(1, 256));

  ExportArgs field, trace;
  auto* field_cmd = app.add_subcommand("export-field", "Write a field of the last run as CSV");
  field_cmd->add_option("name", field.name, "Field id, e.g. PROBE.phi_star")->required();
  field_cmd->add_option("--dir", field.dir, "Output directory of the run")->capture_default_str();
  field_cmd->add_option("-o,--output", field.output, "CSV file (default: stdout)");
  auto* trace_cmd = app.add_subcommand("export-trace", "Write a trace of the last run as CSV");
  trace_cmd->add_option("id", trace.name, "Trace id, e.g. PROBE or PROBE.0")->required();
  trace_cmd->add_option("--dir", trace.dir, "Output directory of the run")->capture_default_str();
  trace_cmd->add_option("-o,--output", trace.output, "CSV file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    out << (e.get_name() == "CallForVersion" ? e.what() + std::string("\n") : app.help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitSchema;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (ex_cmd->parsed()) return cmd_examples(ex, out, err);
    if (field_cmd->parsed()) return cmd_export(field, true, out, err);
    if (trace_cmd->parsed()) return cmd_export(trace, false, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitProbeError;
  }
  return kExitSchema;
}

}  // namespace monolab::app
