#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mzeta {

// xfail: a check configured as expected to fail did fail; xpass: it passed.
enum class CheckStatus { pass, fail, xfail, xpass };

std::string_view status_name(CheckStatus s);

struct CheckConfig {
  std::string name;
  std::optional<double> tolerance;  // check default when empty
  bool expect_failure = false;
};

struct SuiteConfig {
  std::vector<CheckConfig> checks;
  unsigned threads = 0;
};

struct CheckOutcome {
  std::string check;
  CheckStatus status = CheckStatus::fail;
  std::string measured;
  std::string expected;
  std::string tolerance;
  double seconds = 0;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckOutcome> outcomes;  // sorted by check name

  // False when any check failed or unexpectedly passed.
  bool ok() const;
  // Without timings the report is reproducible byte for byte.
  nlohmann::json to_json(bool with_timing = true) const;
};

// Registered check names, sorted.
std::vector<std::string> check_names();
// One-line description of a registered check; throws ConfigurationError when unknown.
std::string check_description(std::string_view name);

// Parses {"threads": k, "checks": [{"name": ..., "tolerance": ..., "expect": "fail"}, ...]}.
// Entries may also be plain name strings.  Throws ConfigurationError on
// malformed input or unknown check names.
SuiteConfig parse_suite_config(const nlohmann::json& j);
SuiteConfig parse_suite_config(std::string_view text);

// Every registered check with its default tolerance.
SuiteConfig default_suite();

SuiteReport verify_suite(const SuiteConfig& config);

}  // namespace mzeta
