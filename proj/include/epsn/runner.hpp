#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace epsn::runner {

// One executed experiment. wall_seconds stays in memory only: report.json
// must be byte-identical across runs.
struct ExperimentResult {
  std::string name;
  std::string kind;
  std::string status;  // pass | fail | diagnostic | error
  std::vector<std::pair<std::string, std::string>> files;  // (relative path, fnv1a64)
  std::map<std::string, std::int64_t> method_counts;
  std::vector<std::string> warnings;
  std::string error;
  double wall_seconds = 0.0;
};

struct RunReport {
  std::vector<ExperimentResult> experiments;
  int exit_code = 0;  // 0 ok, 1 failures/errors, 2 config error
};

enum class CommandFilter { All, VerifyOnly, ProfileOnly };

// Parses the config, executes the (filtered) experiments with up to `jobs`
// workers, writes per-experiment artifacts plus report.json under out_dir.
// Identical config + seed produce byte-identical outputs at any job count.
RunReport run(const std::string& config_path, const std::string& out_dir, int jobs,
              CommandFilter filter = CommandFilter::All);

std::string fnv1a64_hex(const std::string& data);

// EPSN_LOG = error | info | debug (stderr)
void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_error(const std::string& msg);

}  // namespace epsn::runner
