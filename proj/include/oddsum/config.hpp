#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oddsum/arith.hpp"
#include "oddsum/fracsolve.hpp"

namespace oddsum::cli {

/// Invalid configuration or arguments; maps to exit status 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Line-oriented `key = value` file. Values are scalars or `[a,b,c]` lists;
/// `#` starts a comment. Key order is preserved.
class Config {
 public:
  struct Value {
    std::vector<std::string> items;
    bool is_list = false;
    friend bool operator==(const Value&, const Value&) = default;
  };

  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  std::string serialize() const;

  bool has(const std::string& key) const;
  const Value& at(const std::string& key) const;
  void set(const std::string& key, Value v);
  void set_scalar(const std::string& key, const std::string& v);
  void set_list(const std::string& key, const std::vector<std::string>& v);
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  i64 get_int(const std::string& key) const;
  i64 get_int(const std::string& key, i64 fallback) const;
  /// A scalar is read as a one-element list.
  std::vector<i64> get_int_list(const std::string& key) const;
  std::vector<Fraction> get_fraction_list(const std::string& key) const;

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

i64 parse_int(const std::string& text, const std::string& what);
/// "2,4,8" or "[2,4,8]".
std::vector<i64> parse_int_csv(const std::string& text, const std::string& what);

enum class OutputFormat { Csv, JsonLines };
OutputFormat parse_format(const std::string& text);
std::string format_str(OutputFormat f);

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::vector<i64>> grid;  // k, n, Q, h, y, q
  fracsolve::Target target;
  fracsolve::Method method = fracsolve::Method::Auto;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 0;

  /// Validates names, required grid keys and module caps; throws ConfigError.
  static ExperimentConfig from_config(const Config& c);
  Config to_config() const;
  const std::vector<i64>& values(const std::string& key) const;
};

/// Registered experiment names.
const std::vector<std::string>& experiment_names();

/// Interval spec: arity, lo, hi, Q (lists or scalars broadcast to the arity),
/// optional target and method.
struct IntervalSpec {
  fracsolve::IntervalConstraint constraint;
  fracsolve::Method method = fracsolve::Method::Auto;
};
IntervalSpec parse_interval_spec(const Config& c);

}  // namespace oddsum::cli
