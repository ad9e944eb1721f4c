#include "oddsum/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "oddsum/fracsolve.hpp"
#include "oddsum/moments.hpp"
#include "oddsum/singular.hpp"

namespace oddsum::cli {

Field Field::integer(std::string key, i64 v) { return {std::move(key), std::to_string(v), Kind::Integer}; }

Field Field::integer(std::string key, const BigInt& v) { return {std::move(key), v.get_str(), Kind::Integer}; }

Field Field::real(std::string key, double v) { return {std::move(key), format_real(v), Kind::Real}; }

Field Field::rational(std::string key, const BigRational& v) {
  return {std::move(key), format_rational(v), Kind::Text};
}

Field Field::str(std::string key, std::string v) { return {std::move(key), std::move(v), Kind::Text}; }

const Field* ResultRow::find(const std::string& key) const {
  for (const auto& f : fields)
    if (f.key == key) return &f;
  return nullptr;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BigInt big(i64 v) { return BigInt(static_cast<long>(v)); }

struct Point {
  std::vector<Field> params;
  std::function<std::vector<Field>()> measure;
};

/// Measured columns for each experiment, in output order.
std::vector<std::string> measured_columns(const std::string& name) {
  if (name == "thm1-scaling")
    return {"count", "method", "count_over_n2Q", "count_over_n2Q_float", "box_reference", "count_over_box",
            "lower_bound_reference", "heuristic_reference", "seconds"};
  if (name == "degenerate-split")
    return {"total", "degenerate", "nondegenerate", "heuristic_reference", "nondegenerate_over_heuristic",
            "seconds"};
  if (name == "moment-growth") return {"M", "V", "reference", "M_over_q_reference", "seconds"};
  if (name == "rk-growth") return {"R", "R_float", "reference", "R_over_reference", "seconds"};
  return {"ratio", "ratio_float", "deviation", "seconds"};
}

std::vector<Point> grid_points(const ExperimentConfig& cfg) {
  std::vector<Point> pts;
  const auto& name = cfg.experiment;
  const unsigned workers = cfg.workers;
  if (name == "thm1-scaling" || name == "degenerate-split") {
    for (i64 k : cfg.values("k"))
      for (i64 n : cfg.values("n"))
        for (i64 Q : cfg.values("Q")) {
          fracsolve::BoxConstraint box{static_cast<unsigned>(k), n, Q, cfg.target};
          Point p;
          p.params = {Field::integer("k", k), Field::integer("n", n), Field::integer("Q", Q),
                      Field::str("target", cfg.target.str())};
          fracsolve::CountOptions opt{cfg.method, workers, false};
          if (name == "thm1-scaling") {
            p.measure = [box, opt, n, Q] {
              auto t0 = Clock::now();
              auto rep = fracsolve::count_box(box, opt);
              auto ref = fracsolve::reference_bounds(box);
              BigRational ratio(big(static_cast<i64>(rep.total)), ref.lower_bound);
              ratio.canonicalize();
              return std::vector<Field>{
                  Field::integer("count", BigInt(std::to_string(rep.total))),
                  Field::str("method", fracsolve::method_str(rep.method)),
                  Field::rational("count_over_n2Q", ratio),
                  Field::real("count_over_n2Q_float", to_double(ratio)),
                  Field::real("box_reference", ref.box),
                  Field::real("count_over_box", static_cast<double>(rep.total) / ref.box),
                  Field::integer("lower_bound_reference", ref.lower_bound),
                  Field::integer("heuristic_reference", ref.heuristic),
                  Field::real("seconds", seconds_since(t0))};
            };
          } else {
            p.measure = [box, opt] {
              auto t0 = Clock::now();
              auto rep = fracsolve::classify_degenerate(box, opt);
              auto ref = fracsolve::reference_bounds(box);
              BigRational ratio(BigInt(std::to_string(*rep.nondegenerate)), ref.heuristic);
              ratio.canonicalize();
              return std::vector<Field>{Field::integer("total", BigInt(std::to_string(rep.total))),
                                        Field::integer("degenerate", BigInt(std::to_string(*rep.degenerate))),
                                        Field::integer("nondegenerate", BigInt(std::to_string(*rep.nondegenerate))),
                                        Field::integer("heuristic_reference", ref.heuristic),
                                        Field::rational("nondegenerate_over_heuristic", ratio),
                                        Field::real("seconds", seconds_since(t0))};
            };
          }
          pts.push_back(std::move(p));
        }
  } else if (name == "moment-growth") {
    for (i64 q : cfg.values("q"))
      for (i64 h : cfg.values("h"))
        for (i64 k : cfg.values("k")) {
          Point p;
          p.params = {Field::integer("q", q), Field::integer("h", h), Field::integer("k", k)};
          p.measure = [q, h, k, workers] {
            auto t0 = Clock::now();
            u64 uq = static_cast<u64>(q);
            unsigned uk = static_cast<unsigned>(k);
            BigRational M = moments::M_direct(uq, h, uk, workers);
            BigRational density(big(static_cast<i64>(totient(uq))), big(q));
            density.canonicalize();
            BigRational V = M / (BigRational(big(q)) * pow(density, uk));
            double ref = std::pow(to_double(density) * static_cast<double>(h), (static_cast<double>(k) - 1) / 2);
            return std::vector<Field>{Field::rational("M", M), Field::rational("V", V), Field::real("reference", ref),
                                      Field::real("M_over_q_reference", to_double(M) / (static_cast<double>(q) * ref)),
                                      Field::real("seconds", seconds_since(t0))};
          };
          pts.push_back(std::move(p));
        }
  } else {
    for (i64 y : cfg.values("y"))
      for (i64 k : cfg.values("k"))
        for (i64 h : cfg.values("h")) {
          Point p;
          p.params = {Field::integer("y", y), Field::integer("k", k), Field::integer("h", h)};
          if (name == "rk-growth") {
            p.measure = [y, k, h, workers] {
              auto t0 = Clock::now();
              auto q = SquarefreeModulus::primorial(static_cast<u64>(y));
              BigRational R = singular::R_mod_q(h, static_cast<unsigned>(k), q, workers);
              double ref = std::pow(static_cast<double>(h), (static_cast<double>(k) - 1) / 2);
              return std::vector<Field>{Field::rational("R", R), Field::real("R_float", to_double(R)),
                                        Field::real("reference", ref), Field::real("R_over_reference", to_double(R) / ref),
                                        Field::real("seconds", seconds_since(t0))};
            };
          } else {
            p.measure = [y, k, h, workers] {
              auto t0 = Clock::now();
              auto q = SquarefreeModulus::primorial(static_cast<u64>(y));
              auto g = singular::gallagher_ratio(h, static_cast<unsigned>(k), q, workers);
              return std::vector<Field>{Field::rational("ratio", g.exact), Field::real("ratio_float", g.value),
                                        Field::real("deviation", std::abs(g.value - 1)),
                                        Field::real("seconds", seconds_since(t0))};
            };
          }
          pts.push_back(std::move(p));
        }
  }
  return pts;
}

}  // namespace

void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    if (rows.empty()) return;
    for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
      out << (i ? "," : "") << csv_escape(rows[0].fields[i].key);
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.fields.size(); ++i) out << (i ? "," : "") << csv_escape(row.fields[i].text);
      out << "\n";
    }
    return;
  }
  for (const auto& row : rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : row.fields) {
      if (f.text.empty()) {
        j[f.key] = nullptr;
      } else if (f.kind == Field::Kind::Integer && f.text.size() < 18) {
        j[f.key] = std::stoll(f.text);
      } else if (f.kind == Field::Kind::Real && std::isfinite(std::stod(f.text))) {
        j[f.key] = std::stod(f.text);
      } else {
        j[f.key] = f.text;
      }
    }
    out << j.dump() << "\n";
  }
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  const auto columns = measured_columns(cfg.experiment);
  std::vector<ResultRow> rows;
  for (auto& p : grid_points(cfg)) {
    ResultRow row;
    row.add(Field::str("experiment", cfg.experiment));
    for (auto& f : p.params) row.add(f);
    std::string error;
    std::vector<Field> measured;
    try {
      measured = p.measure();
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (error.empty()) {
      for (auto& f : measured) row.add(std::move(f));
    } else {
      for (const auto& c : columns) row.add(Field::str(c, ""));
    }
    row.add(Field::str("error", error));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace oddsum::cli
