#pragma once

#include <string>
#include <vector>

namespace torusns {

struct VerifyCheck {
  std::string name;
  double value = 0.0;      // worst observed value
  double threshold = 0.0;  // pass iff value <= threshold
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool pass() const;
  std::string json() const;
};

std::vector<std::string> verify_suite_names();

/// Run a property suite at pinned seeds and sizes. Throws ConfigError for an unknown name.
VerifyReport run_verify_suite(const std::string& name);

}  // namespace torusns
