#pragma once

#include <map>
#include <string>

#include "serialize.hpp"

namespace lspace {

// Shared run configuration; recorded verbatim in every report.
struct RunConfig {
  unsigned word_cap = 3;
  unsigned degree_cap = 2;
  std::size_t branch_bound = 8;
  bool strict_overflow = true;
  std::string format = "text";  // "text" | "json"
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<ValidationCheck> checks;
  Json data = Json::object();

  bool math_pass() const;
  Json to_json() const;
  // Machine output is byte-deterministic; timing appears in text output only.
  std::string render(long long elapsed_ms) const;
};

// Dispatch one subcommand. `document` may be null for commands driven purely
// by params (zoo, aksz-certify). Throws InputError / CapOverflowError on
// malformed input or cap overflow; mathematical failures come back as failing
// checks in the report.
Report run_command(const std::string& command, const Json* document,
                   const std::map<std::string, std::string>& params, const RunConfig& config);

}  // namespace lspace
