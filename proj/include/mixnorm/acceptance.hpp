#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixnorm/io.hpp"
#include "mixnorm/verify.hpp"

namespace mixnorm {

struct AcceptOptions {
  std::uint64_t seed = kFamilySeed;
  // overrides the exact-identity tolerances (criteria 1, 2, 3, 11) when positive
  double tolerance = -1.0;
  // check ids, numbers or substrings; empty runs everything
  std::vector<std::string> only;
};

struct CheckResult {
  int number = 0;
  std::string check_id;
  std::string paper_ref;
  bool pass = false;
  std::string verdict;  // "pass" / "fail" or a RatioReport verdict summary
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double runtime_ms = 0.0;
  std::string summary;  // one human line
  Json detail;          // deterministic diagnostics
};

struct CheckInfo {
  int number;
  const char* id;
  const char* ref;
};

const std::vector<CheckInfo>& acceptance_checks();
bool selected(const CheckInfo& c, const std::vector<std::string>& only);

CheckResult run_check(int number, const AcceptOptions& opt);
// every selected check except determinism, in order
std::vector<CheckResult> run_checks(const AcceptOptions& opt);

// manifest without timestamp and runtimes, for comparing runs
Json manifest_core(const std::vector<CheckResult>& results);
Json manifest(const std::vector<CheckResult>& results, const std::string& timestamp);

// determinism: runs the selected checks a second time and compares manifest cores
CheckResult determinism_check(const std::vector<CheckResult>& first, const AcceptOptions& opt);

std::string result_line(const CheckResult& r);

}  // namespace mixnorm
