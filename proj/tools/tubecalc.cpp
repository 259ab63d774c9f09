#include "tubecalc/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using namespace tubecalc;

ReportFormat pick_format(const std::string& format, const std::string& out) {
  if (format == "json") return ReportFormat::Json;
  if (format == "csv") return ReportFormat::Csv;
  return out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0 ? ReportFormat::Json : ReportFormat::Csv;
}

void emit(const Report& report, ReportFormat format, const std::string& out) {
  if (out.empty()) {
    std::cout << (format == ReportFormat::Csv ? format_csv(report) : format_json(report));
  } else {
    write_report(report, format, out);
  }
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void print_table(const CriterionResult& r, bool all_rows) {
  std::printf("[%s] criterion %d: %s  (%zu checks, %.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
              r.rows.size(), r.seconds);
  std::printf("    reference: %s\n", r.reference.c_str());
  if (!r.note.empty()) std::printf("    note: %s\n", r.note.c_str());
  for (const CheckRow& row : r.rows) {
    if (!all_rows && row.pass) continue;
    std::printf("    %-4s %-60s expected=%-14s got=%-22s tol=%-10s\n", row.pass ? "ok" : "FAIL",
                row.check_id.c_str(), sci(row.expected).c_str(), sci(row.value).c_str(), sci(row.tolerance).c_str());
  }
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tubecalc: finite-part and thick-delta pairings along submanifolds"};
  app.require_subcommand(1);

  std::string scenario_path, out, format = "auto";
  auto* run = app.add_subcommand("run", "Execute a JSON scenario and write a report");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out, "Report path (stdout when omitted)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"auto", "csv", "json"}));

  std::string level = "quick";
  int fiber_level = 0;
  std::vector<int> only;
  bool all_rows = false;
  auto* validate = app.add_subcommand("validate", "Run the acceptance-criteria suite");
  validate->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  validate->add_option("--out", out, "Report path");
  validate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"auto", "csv", "json"}));
  validate->add_option("--fiber-level", fiber_level, "Force the fiber quadrature level")->check(CLI::Range(1, 64));
  validate->add_option("--only", only, "Criteria to run (1-9)")->check(CLI::Range(1, 9));
  validate->add_flag("--all-rows", all_rows, "Print passing rows too");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const Report report = run_scenario_file(scenario_path);
      emit(report, pick_format(format, out), out);
      return report.pass ? 0 : 3;
    }
    SuiteOptions opts;
    opts.level = level == "full" ? SuiteLevel::Full : SuiteLevel::Quick;
    if (fiber_level > 0) opts.fiber_level = fiber_level;
    opts.only = only;
    opts.on_result = [all_rows](const CriterionResult& r) { print_table(r, all_rows); };
    const auto results = run_validation(opts);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    if (!out.empty()) write_report(validation_report(results), pick_format(format, out), out);
    return failed ? 3 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
