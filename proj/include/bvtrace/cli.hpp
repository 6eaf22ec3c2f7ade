#pragma once

#include <string>
#include <vector>

namespace bvtrace {

struct CliOutput {
  int exit_code = 0;
  std::string out;  // JSON document or text result
  std::string err;  // warnings and human-readable error lines
};

/// Runs one `bvtrace` invocation; args excludes the program name. Exit codes:
/// 0 success, 1 usage or syntax error, 2 domain error or failed selftest.
CliOutput run_cli(const std::vector<std::string>& args);

}  // namespace bvtrace
