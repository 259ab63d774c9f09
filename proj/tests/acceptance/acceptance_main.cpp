#include "tubecalc/validation.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

// One line per criterion; exit status 1 when any criterion fails.
int main(int argc, char** argv) {
  tubecalc::SuiteOptions opts;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--quick") opts.level = tubecalc::SuiteLevel::Quick;
    else if (arg == "--verbose") continue;
    else opts.only.push_back(std::atoi(arg.c_str()));
  }
  bool verbose = false;
  for (int a = 1; a < argc; ++a) verbose = verbose || std::string(argv[a]) == "--verbose";
  opts.on_result = [verbose](const tubecalc::CriterionResult& r) {
    std::printf("%s criterion %d: %s (worst %.3g, tolerance %.1g, %d checks, %.1fs)%s%s\n",
                r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.worst, r.tolerance,
                static_cast<int>(r.rows.size()), r.seconds, r.note.empty() ? "" : " -- ", r.note.c_str());
    if (verbose || !r.pass) {
      for (const auto& row : r.rows) {
        if (!verbose && row.pass) continue;
        std::printf("    %s %s value=%.12g expected=%.12g diff=%.3g tol=%.3g\n", row.pass ? "ok  " : "FAIL",
                    row.check_id.c_str(), row.value, row.expected, row.abs_diff, row.tolerance);
      }
    }
    std::fflush(stdout);
  };
  bool ok = true;
  for (const auto& r : tubecalc::run_validation(opts)) ok = ok && r.pass;
  return ok ? 0 : 1;
}
