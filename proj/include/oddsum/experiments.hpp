#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "oddsum/arith.hpp"
#include "oddsum/config.hpp"

namespace oddsum::cli {

/// One output column. Exact rationals are kept as "p/q" text.
struct Field {
  enum class Kind { Integer, Real, Text };
  std::string key;
  std::string text;
  Kind kind = Kind::Text;

  static Field integer(std::string key, i64 v);
  static Field integer(std::string key, const BigInt& v);
  static Field real(std::string key, double v);
  static Field rational(std::string key, const BigRational& v);
  static Field str(std::string key, std::string v);
};

struct ResultRow {
  std::vector<Field> fields;
  ResultRow& add(Field f) {
    fields.push_back(std::move(f));
    return *this;
  }
  const Field* find(const std::string& key) const;
};

/// Deterministic shortest round-trip rendering of a double.
std::string format_real(double v);

/// CSV with a header taken from the first row, or one JSON object per line.
void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);

/// Runs every grid point; a failing point yields a row whose error column is
/// set and whose measured columns are empty.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

}  // namespace oddsum::cli
