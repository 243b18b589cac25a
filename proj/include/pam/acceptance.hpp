#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pam {

struct AcceptanceOptions {
  std::uint64_t seed = 20190517;
  long mc_samples = 200000;
  long lemma_samples = 20000;
  int workers = 1;
};

struct CriterionResult {
  std::string id;  ///< "1".."13"; diagnostics carry a suffix ("6i")
  std::string title;
  bool pass = false;
  /// Failure analysed and documented as not attainable by any faithful
  /// implementation (see README).
  bool known_unattainable = false;
  bool diagnostic = false;
  std::string detail;
};

/// Ids of criteria whose failure is expected.
bool known_unattainable(const std::string& id);

/// One line: "criterion <id>: PASS|FAIL|FAIL (known) | <title> | <detail>".
std::string format_line(const CriterionResult& r);

/// Runs criteria 1-13 in order plus diagnostic lines, reporting each as it
/// completes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& report = {});

/// 0 when every non-diagnostic failure is known-unattainable, 1 otherwise.
int acceptance_exit_code(const std::vector<CriterionResult>& results, bool strict = false);

}  // namespace pam
