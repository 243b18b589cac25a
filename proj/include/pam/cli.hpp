#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace pam {

/// Resolved settings of one CLI invocation: config file values overridden by
/// flags. Logged to stderr on every run and embedded in JSON reports.
struct RunConfig {
  std::string command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::ordered_json& j);
  bool operator==(const RunConfig&) const = default;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace pam
