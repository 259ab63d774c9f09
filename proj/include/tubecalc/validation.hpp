#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tubecalc {

struct CheckRow {
  std::string check_id;
  std::string shape;
  std::string distribution;
  std::string testfn;
  int axis = 0;  // 1-based, 0 when not applicable
  double value = 0.0;
  double eta = std::numeric_limits<double>::quiet_NaN();
  double value_eta_half = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::string reference;  // the identity being checked
  bool pass = true;
  double worst = 0.0;      // worst error relative to the pinned tolerance scale
  double tolerance = 0.0;  // pinned tolerance
  double seconds = 0.0;
  std::string note;
  std::vector<CheckRow> rows;
};

enum class SuiteLevel { Quick, Full };

struct SuiteOptions {
  SuiteLevel level = SuiteLevel::Full;
  std::optional<int> fiber_level;  // force a fiber level everywhere (diagnostics)
  std::vector<int> only;           // criteria to run; empty = all
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_validation(const SuiteOptions& opts);

}  // namespace tubecalc
