#pragma once

#include "tubecalc/validation.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tubecalc {

enum class ReportFormat { Csv, Json };

struct Report {
  nlohmann::json scenario;  // echo of the input
  std::vector<CheckRow> rows;
  bool pass = true;
};

// Parses and executes a scenario. Schema problems throw Error(SchemaError) before
// any pairing is computed; numerical problems propagate as their own kinds.
Report run_scenario(const nlohmann::json& scenario);
Report run_scenario_file(const std::string& path);

// Rows of a validation run, ordered by check_id.
Report validation_report(const std::vector<CriterionResult>& results);

std::string format_csv(const Report& report);
std::string format_json(const Report& report);

// Writes via a temporary file and rename, so a failed run never leaves a partial file.
void write_report(const Report& report, ReportFormat format, const std::string& path);

// Exit status for an exception escaping a command: 2 for schema errors, 3 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace tubecalc
