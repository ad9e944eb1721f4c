#include "oddsum/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace oddsum::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> out;
  if (trim(body).empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list item in '" + body + "'");
    out.push_back(item);
  }
  return out;
}

std::vector<std::string> broadcast(const Config& c, const std::string& key, std::size_t n) {
  const auto& v = c.at(key);
  if (!v.is_list) return std::vector<std::string>(n, v.items.at(0));
  if (v.items.size() != n)
    throw ConfigError("'" + key + "' has " + std::to_string(v.items.size()) + " entries, expected " +
                      std::to_string(n));
  return v.items;
}

}  // namespace

i64 parse_int(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(what + ": not an integer: '" + text + "'");
  return v;
}

std::vector<i64> parse_int_csv(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::vector<i64> out;
  for (const auto& item : split_items(t)) out.push_back(parse_int(item, what));
  return out;
}

Config Config::parse(const std::string& text) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string raw = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (raw.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (c.has(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    Value v;
    if (raw.front() == '[') {
      if (raw.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated list");
      v.is_list = true;
      v.items = split_items(raw.substr(1, raw.size() - 2));
    } else {
      v.items = {raw};
    }
    c.entries_.emplace_back(key, std::move(v));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [key, v] : entries_) {
    out += key + " = ";
    if (v.is_list) {
      out += "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) out += (i ? "," : "") + v.items[i];
      out += "]";
    } else {
      out += v.items.at(0);
    }
    out += "\n";
  }
  return out;
}

bool Config::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

const Config::Value& Config::at(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return e.second;
  throw ConfigError("missing key '" + key + "'");
}

void Config::set(const std::string& key, Value v) {
  for (auto& e : entries_) {
    if (e.first == key) {
      e.second = std::move(v);
      return;
    }
  }
  entries_.emplace_back(key, std::move(v));
}

void Config::set_scalar(const std::string& key, const std::string& v) { set(key, Value{{v}, false}); }

void Config::set_list(const std::string& key, const std::vector<std::string>& v) {
  set(key, Value{v, true});
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::string Config::get_string(const std::string& key) const {
  const auto& v = at(key);
  if (v.is_list) throw ConfigError("'" + key + "' must be a scalar");
  return v.items.at(0);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

i64 Config::get_int(const std::string& key) const { return parse_int(get_string(key), key); }

i64 Config::get_int(const std::string& key, i64 fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<i64> Config::get_int_list(const std::string& key) const {
  std::vector<i64> out;
  for (const auto& item : at(key).items) out.push_back(parse_int(item, key));
  return out;
}

std::vector<Fraction> Config::get_fraction_list(const std::string& key) const {
  std::vector<Fraction> out;
  for (const auto& item : at(key).items) {
    try {
      out.push_back(parse_fraction(item));
    } catch (const std::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  return out;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json" || text == "jsonl" || text == "json-lines") return OutputFormat::JsonLines;
  throw ConfigError("unknown output format '" + text + "' (csv|json)");
}

std::string format_str(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

// --- experiments ------------------------------------------------------------

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"thm1-scaling", "degenerate-split", "moment-growth",
                                                 "rk-growth", "gallagher"};
  return names;
}

namespace {

struct GridRule {
  std::string key;
  i64 lo, hi;
};

std::vector<GridRule> rules_for(const std::string& name) {
  if (name == "thm1-scaling") return {{"k", 1, 7}, {"n", 1, 100'000}, {"Q", 1, 100'000}};
  if (name == "degenerate-split") return {{"k", 1, 5}, {"n", 1, 100'000}, {"Q", 1, 100'000}};
  if (name == "moment-growth") return {{"q", 1, 1'000'000}, {"h", 1, 10'000}, {"k", 0, 8}};
  if (name == "rk-growth") return {{"h", 1, 10'000}, {"k", 1, 8}, {"y", 1, 1'000}};
  if (name == "gallagher") return {{"h", 1, 10'000}, {"k", 1, 8}, {"y", 1, 1'000}};
  throw ConfigError("unknown experiment '" + name + "'");
}

const std::set<std::string> kKnownKeys = {"experiment", "k", "n", "Q", "h", "y", "q",
                                          "target", "method", "output", "format", "workers"};

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  for (const auto& key : c.keys())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig e;
  e.experiment = c.get_string("experiment");
  for (const auto& rule : rules_for(e.experiment)) {
    if (!c.has(rule.key)) throw ConfigError(e.experiment + ": missing grid key '" + rule.key + "'");
    auto values = c.get_int_list(rule.key);
    if (values.empty()) throw ConfigError(e.experiment + ": grid key '" + rule.key + "' is empty");
    for (i64 v : values) {
      if (v < rule.lo || v > rule.hi)
        throw ConfigError(e.experiment + ": " + rule.key + " = " + std::to_string(v) + " outside [" +
                          std::to_string(rule.lo) + "," + std::to_string(rule.hi) + "]");
      if (rule.key == "q" && !is_squarefree(static_cast<u64>(v)))
        throw ConfigError(e.experiment + ": q = " + std::to_string(v) + " is not squarefree");
    }
    e.grid[rule.key] = std::move(values);
  }
  for (const auto& key : {"k", "n", "Q", "h", "y", "q"})
    if (c.has(key) && !e.grid.count(key))
      throw ConfigError(e.experiment + ": key '" + std::string(key) + "' is not used by this experiment");
  try {
    e.target = fracsolve::Target::parse(c.get_string("target", "int"));
    e.method = fracsolve::parse_method(c.get_string("method", "auto"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  if (e.experiment == "degenerate-split" && c.has("target") && e.target.kind != fracsolve::Target::Kind::Zero)
    throw ConfigError("degenerate-split: target must be zero");
  if (e.experiment == "degenerate-split") e.target = fracsolve::Target::zero();
  if (c.has("output")) e.output = c.get_string("output");
  e.format = parse_format(c.get_string("format", "csv"));
  i64 w = c.get_int("workers", 0);
  if (w < 0 || w > 1024) throw ConfigError("workers must be in [0,1024]");
  e.workers = static_cast<unsigned>(w);
  return e;
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set_scalar("experiment", experiment);
  for (const auto& rule : rules_for(experiment)) {
    std::vector<std::string> items;
    for (i64 v : grid.at(rule.key)) items.push_back(std::to_string(v));
    c.set_list(rule.key, items);
  }
  c.set_scalar("target", target.str());
  c.set_scalar("method", fracsolve::method_str(method));
  if (output) c.set_scalar("output", *output);
  c.set_scalar("format", format_str(format));
  c.set_scalar("workers", std::to_string(workers));
  return c;
}

const std::vector<i64>& ExperimentConfig::values(const std::string& key) const {
  auto it = grid.find(key);
  if (it == grid.end()) throw ConfigError("grid has no '" + key + "'");
  return it->second;
}

IntervalSpec parse_interval_spec(const Config& c) {
  static const std::set<std::string> known = {"arity", "lo", "hi", "Q", "target", "method"};
  for (const auto& key : c.keys())
    if (!known.count(key)) throw ConfigError("interval spec: unknown key '" + key + "'");
  i64 arity = c.get_int("arity");
  if (arity < 1 || arity > static_cast<i64>(fracsolve::kMaxArity) || arity % 2 == 0)
    throw ConfigError("interval spec: arity must be odd and at most 7");
  const auto n = static_cast<std::size_t>(arity);
  IntervalSpec spec;
  auto& ic = spec.constraint;
  for (const auto& s : broadcast(c, "lo", n)) ic.lo.push_back(parse_fraction(s));
  for (const auto& s : broadcast(c, "hi", n)) ic.hi.push_back(parse_fraction(s));
  for (const auto& s : broadcast(c, "Q", n)) ic.Q.push_back(parse_int(s, "Q"));
  try {
    ic.target = fracsolve::Target::parse(c.get_string("target", "int"));
    spec.method = fracsolve::parse_method(c.get_string("method", "auto"));
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  return spec;
}

}  // namespace oddsum::cli
