#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "oddsum/arith.hpp"
#include "oddsum/config.hpp"

namespace oddsum::cli {

enum class VerifyLevel { Quick, Full };
VerifyLevel parse_level(const std::string& text);

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  unsigned workers = 0;
  /// Optional caps that shrink the grids; 0 keeps the level default.
  i64 max_k = 0;
  i64 max_h = 0;
  i64 max_q = 0;

  /// Keys: level, workers, max_k, max_h, max_q. Throws ConfigError.
  static VerifyOptions from_config(const Config& c);
};

struct SuiteResult {
  std::string name;
  u64 checks = 0;
  u64 failures = 0;
  double seconds = 0;
  std::string first_failure;
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  bool ok() const;
};

VerifySummary verify_all(const VerifyOptions& opt);
void print_summary(const VerifySummary& s, std::ostream& out);

}  // namespace oddsum::cli
