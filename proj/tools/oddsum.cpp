#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oddsum/config.hpp"
#include "oddsum/experiments.hpp"
#include "oddsum/fracsolve.hpp"
#include "oddsum/moments.hpp"
#include "oddsum/partitions.hpp"
#include "oddsum/relgcd.hpp"
#include "oddsum/singular.hpp"
#include "oddsum/verify.hpp"

using namespace oddsum;
using cli::Field;
using cli::ResultRow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitInvalid = 2;

struct Globals {
  unsigned workers = 0;
  std::string out = "csv";
};

void emit(const std::vector<ResultRow>& rows, const std::string& out) {
  cli::write_rows(rows, cli::parse_format(out), std::cout);
}

std::string join_ints(const std::vector<i64>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

SquarefreeModulus modulus_from(u64 q, u64 y) {
  if (q && y) throw cli::ConfigError("give either --q or --y, not both");
  if (y) return SquarefreeModulus::primorial(y);
  if (q) return SquarefreeModulus::from_value(q);
  throw cli::ConfigError("a modulus is required (--q or --y)");
}

// --- relgcd -----------------------------------------------------------------

int run_relgcd(const std::vector<u64>& q, const std::string& format) {
  auto local = relgcd::decompose_local(q);
  auto rec = relgcd::decompose_recursive(q);
  bool roundtrip = relgcd::recompose(local) == q;
  bool agree = local == rec;
  auto cross = relgcd::check_cross_coprimality(local);
  bool squarefree = std::all_of(q.begin(), q.end(), [](u64 v) { return is_squarefree(v); });
  bool pairwise = squarefree ? relgcd::check_squarefree_pairwise(local, q) : true;
  bool ok = roundtrip && agree && cross.holds && pairwise;

  if (format == "json") {
    nlohmann::ordered_json j;
    j["q"] = q;
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    for (auto [s, v] : local.entries()) g[relgcd::subset_str(s)] = v;
    j["g"] = g;
    j["roundtrip"] = roundtrip;
    j["local_equals_recursive"] = agree;
    j["cross_coprime"] = cross.holds;
    if (squarefree) j["squarefree_pairwise_coprime"] = pairwise;
    else j["squarefree_pairwise_coprime"] = nullptr;
    std::cout << j.dump() << "\n";
  } else if (format == "table") {
    for (auto [s, v] : local.entries()) std::cout << "g" << relgcd::subset_str(s) << " = " << v << "\n";
    std::cout << "roundtrip               " << (roundtrip ? "ok" : "FAIL") << "\n"
              << "local == recursive      " << (agree ? "ok" : "FAIL") << "\n"
              << "cross-coprimality       " << (cross.holds ? "ok" : "FAIL") << "\n"
              << "squarefree pairwise     " << (squarefree ? (pairwise ? "ok" : "FAIL") : "n/a") << "\n";
  } else {
    throw cli::ConfigError("unknown format '" + format + "' (json|table)");
  }
  return ok ? kExitOk : kExitInvariant;
}

// --- counting ---------------------------------------------------------------

int run_count(unsigned k, i64 n, i64 Q, const std::string& target, bool classify, const std::string& method,
              const Globals& g) {
  fracsolve::BoxConstraint box{k, n, Q, fracsolve::Target::parse(target)};
  fracsolve::CountOptions opt{fracsolve::parse_method(method), g.workers, false};
  auto rep = classify ? fracsolve::classify_degenerate(box, opt) : fracsolve::count_box(box, opt);
  auto ref = fracsolve::reference_bounds(box);
  ResultRow row;
  row.add(Field::integer("k", k)).add(Field::integer("n", n)).add(Field::integer("Q", Q));
  row.add(Field::str("target", box.target.str())).add(Field::str("method", fracsolve::method_str(rep.method)));
  row.add(Field::integer("total", BigInt(std::to_string(rep.total))));
  if (classify) {
    row.add(Field::integer("degenerate", BigInt(std::to_string(*rep.degenerate))));
    row.add(Field::integer("nondegenerate", BigInt(std::to_string(*rep.nondegenerate))));
  }
  row.add(Field::real("box_reference", ref.box));
  row.add(Field::integer("lower_bound_reference", ref.lower_bound));
  row.add(Field::integer("heuristic_reference", ref.heuristic));
  row.add(Field::real("seconds", rep.seconds));
  emit({row}, g.out);
  return kExitOk;
}

int run_count_interval(const std::string& path, const Globals& g) {
  auto spec = cli::parse_interval_spec(cli::Config::load(path));
  fracsolve::CountOptions opt{spec.method, g.workers, false};
  auto rep = fracsolve::count_interval(spec.constraint, opt);
  auto ref = fracsolve::reference_bounds(spec.constraint);
  std::string xs;
  for (std::size_t i = 0; i < ref.minimizing_set.size(); ++i)
    xs += (i ? "," : "") + std::to_string(ref.minimizing_set[i] + 1);
  ResultRow row;
  row.add(Field::str("constraint", rep.constraint)).add(Field::str("method", fracsolve::method_str(rep.method)));
  row.add(Field::integer("total", BigInt(std::to_string(rep.total))));
  row.add(Field::rational("interval_reference", ref.value)).add(Field::str("minimizing_set", xs));
  row.add(Field::real("seconds", rep.seconds));
  emit({row}, g.out);
  return kExitOk;
}

// --- moments ----------------------------------------------------------------

int run_moments(u64 q, i64 h, unsigned k, const std::vector<i64>& mixed, const std::string& check, u64 q2,
                const Globals& g) {
  ResultRow row;
  row.add(Field::integer("q", static_cast<i64>(q))).add(Field::integer("h", h));
  int status = kExitOk;
  if (check.empty()) {
    if (!mixed.empty()) {
      if (mixed.size() != 2 || mixed[0] < 0 || mixed[1] < 0)
        throw cli::ConfigError("--mixed expects K1,K2 with non-negative entries");
      unsigned k1 = static_cast<unsigned>(mixed[0]), k2 = static_cast<unsigned>(mixed[1]);
      row.add(Field::integer("k1", k1)).add(Field::integer("k2", k2));
      row.add(Field::rational("M", moments::M_mixed_direct(q, h, k1, k2, g.workers)));
      row.add(Field::real("V_expsum", moments::V_expsum_mixed(q, h, k1, k2, g.workers).value));
    } else {
      row.add(Field::integer("k", k));
      row.add(Field::rational("M", moments::M_direct(q, h, k, g.workers)));
      BigRational v = moments::V_via_singular(q, h, k, g.workers);
      double ve = moments::V_expsum(q, h, k, g.workers).value;
      row.add(Field::rational("V_singular", v)).add(Field::real("V_expsum", ve));
      bool agree = moments::agrees(ve, v);
      row.add(Field::str("paths_agree", agree ? "true" : "false"));
      if (!agree) status = kExitInvariant;
    }
  } else if (check == "identity") {
    row.add(Field::integer("k", k));
    BigRational r = moments::check_MV_identity(q, h, k, g.workers);
    row.add(Field::rational("residual", r));
    if (r != 0) status = kExitInvariant;
  } else if (check == "rough") {
    if (q2 == 0) throw cli::ConfigError("--check rough needs --q2 (the rough factor)");
    row.add(Field::integer("q2", static_cast<i64>(q2))).add(Field::integer("k", k));
    BigRational r = moments::check_smooth_rough_decomposition(q, q2, h, k);
    row.add(Field::rational("residual", r));
    if (r != 0) status = kExitInvariant;
  } else if (check == "rsum") {
    row.fields.pop_back();  // h plays no role
    row.add(Field::integer("k", k));
    auto b = moments::check_r_sum_bound(q, k);
    row.add(Field::rational("lhs", b.lhs)).add(Field::rational("rhs", b.rhs));
    row.add(Field::str("holds", b.holds ? "true" : "false"));
    if (!b.holds) status = kExitInvariant;
  } else {
    throw cli::ConfigError("unknown check '" + check + "' (identity|rough|rsum)");
  }
  emit({row}, g.out);
  return status;
}

// --- singular series ----------------------------------------------------------

int run_singular(const std::vector<i64>& d, u64 q, u64 y, bool refined, bool infinite, u64 P, const Globals& g) {
  singular::TupleD D(d);
  ResultRow row;
  row.add(Field::str("d", join_ints(d)));
  if (infinite) {
    auto v = singular::S_infinite(D, P);
    row.add(Field::integer("P", static_cast<i64>(P))).add(Field::integer("truncation", static_cast<i64>(v.truncation)));
    row.add(Field::real("S", v.value)).add(Field::real("tail_bound", v.tail_bound));
  } else {
    auto m = modulus_from(q, y);
    row.add(Field::str("q", m.str()));
    BigRational s = refined ? singular::S0_mod_q(D, m) : singular::S_mod_q(D, m);
    row.add(Field::rational(refined ? "S0" : "S", s)).add(Field::real("float", to_double(s)));
  }
  emit({row}, g.out);
  return kExitOk;
}

int run_rk(i64 h, unsigned k, u64 y, u64 q, const Globals& g) {
  auto m = modulus_from(q, y);
  BigRational r = singular::R_mod_q(h, k, m, g.workers);
  auto gal = singular::gallagher_ratio(h, k, m, g.workers);
  ResultRow row;
  row.add(Field::integer("h", h)).add(Field::integer("k", k)).add(Field::str("q", m.str()));
  row.add(Field::rational("R", r)).add(Field::real("R_float", to_double(r)));
  row.add(Field::rational("gallagher_ratio", gal.exact)).add(Field::real("gallagher_ratio_float", gal.value));
  emit({row}, g.out);
  return kExitOk;
}

int run_rk_terms(i64 h, unsigned k, u64 y, u64 q, const Globals& g) {
  auto m = modulus_from(q, y);
  auto table = partitions::evaluate_main_terms(k, h, m, g.workers);
  std::vector<ResultRow> rows;
  auto add = [&](const std::string& term, const std::string& coeff, const BigRational& v) {
    ResultRow row;
    row.add(Field::integer("k", k)).add(Field::integer("h", h)).add(Field::str("q", m.str()));
    row.add(Field::str("term", term)).add(Field::str("coefficient", coeff));
    row.add(Field::rational("value", v)).add(Field::real("float", to_double(v)));
    rows.push_back(std::move(row));
  };
  for (const auto& t : table.terms) add(t.label(), t.coefficient.str(), t.value);
  add("main_term_sum", "", table.sum);
  add("closed_form_sum", "", table.closed_form_sum);
  add("R_mod_q", "", table.R_mod_q);
  emit(rows, g.out);
  return kExitOk;
}

// --- partitions ---------------------------------------------------------------

int run_partitions(unsigned k, bool weights, const std::string& check, i64 h, u64 q, u64 y, const Globals& g) {
  auto parts = partitions::enumerate_partitions(k);
  std::vector<ResultRow> rows;
  int status = kExitOk;
  if (check.empty()) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      ResultRow row;
      row.add(Field::integer("index", static_cast<i64>(i))).add(Field::str("partition", parts[i].str()));
      row.add(Field::integer("M", static_cast<i64>(parts[i].M()))).add(Field::integer("N1", static_cast<i64>(parts[i].N1())));
      if (weights) {
        i64 w = partitions::w_weight(parts[i]);
        i64 wb = partitions::w_weight_bruteforce(parts[i]);
        row.add(Field::integer("w", w)).add(Field::integer("w_bruteforce", wb));
        if (w != wb) status = kExitInvariant;
      }
      rows.push_back(std::move(row));
    }
  } else if (check == "lemma") {
    auto m = modulus_from(q, y);
    for (const auto& p : parts) {
      auto id = partitions::check_partition_lemma(p, h, m);
      ResultRow row;
      row.add(Field::str("partition", p.str())).add(Field::integer("h", h)).add(Field::str("q", m.str()));
      row.add(Field::rational("lhs", id.lhs)).add(Field::rational("rhs", id.rhs));
      row.add(Field::rational("residual", id.residual()));
      if (id.residual() != 0) status = kExitInvariant;
      rows.push_back(std::move(row));
    }
  } else if (check == "rk-identity") {
    auto m = modulus_from(q, y);
    auto id = partitions::check_Rk_partition_identity(h, k, m, g.workers);
    ResultRow row;
    row.add(Field::integer("k", k)).add(Field::integer("h", h)).add(Field::str("q", m.str()));
    row.add(Field::rational("R_mod_q", id.lhs)).add(Field::rational("partition_sum", id.rhs));
    row.add(Field::rational("residual", id.residual()));
    if (id.residual() != 0) status = kExitInvariant;
    rows.push_back(std::move(row));
  } else {
    throw cli::ConfigError("unknown check '" + check + "' (lemma|rk-identity)");
  }
  emit(rows, g.out);
  return status;
}

// --- experiments / verify -----------------------------------------------------

int run_experiment_cmd(const std::string& path, const Globals& g, bool workers_given) {
  auto cfg = cli::ExperimentConfig::from_config(cli::Config::load(path));
  if (workers_given) cfg.workers = g.workers;
  auto rows = cli::run_experiment(cfg);
  std::size_t errors = 0;
  for (const auto& r : rows)
    if (const auto* f = r.find("error"); f && !f->text.empty()) ++errors;
  if (cfg.output) {
    std::ofstream out(*cfg.output);
    if (!out) throw cli::ConfigError("cannot write '" + *cfg.output + "'");
    cli::write_rows(rows, cfg.format, out);
    std::cerr << rows.size() << " rows written to " << *cfg.output << "\n";
  } else {
    cli::write_rows(rows, cfg.format, std::cout);
  }
  if (errors) std::cerr << errors << " grid point(s) failed; see the error column\n";
  return kExitOk;
}

int run_verify(const std::string& level, const std::string& config, const Globals& g, bool workers_given) {
  cli::VerifyOptions opt;
  if (!config.empty()) opt = cli::VerifyOptions::from_config(cli::Config::load(config));
  if (!level.empty()) opt.level = cli::parse_level(level);
  if (workers_given) opt.workers = g.workers;
  auto summary = cli::verify_all(opt);
  cli::print_summary(summary, std::cout);
  return summary.ok() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oddsum: exact experiments on fraction sums, short-interval moments and singular series"};
  // -h would collide with the interval-length option --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Globals g;
  auto* workers_opt = app.add_option("--workers", g.workers, "Worker threads (overrides ODDSUM_WORKERS)");
  std::function<int()> action;

  // relgcd
  auto* c_relgcd = app.add_subcommand("relgcd", "Relative gcd decomposition of q1..qk");
  std::vector<u64> rq;
  std::string rformat = "table";
  c_relgcd->add_option("q", rq, "Positive integers")->required();
  c_relgcd->add_option("--format", rformat, "json|table");
  c_relgcd->callback([&] { action = [&] { return run_relgcd(rq, rformat); }; });

  // count
  auto* c_count = app.add_subcommand("count", "Count fraction tuples in a box");
  unsigned ck = 3;
  i64 cn = 1, cQ = 1;
  std::string ctarget = "int", cmethod = "auto";
  bool cclassify = false;
  c_count->add_option("--k", ck, "Arity")->required();
  c_count->add_option("--n", cn, "Numerator bound")->required();
  c_count->add_option("--Q", cQ, "Denominator bound")->required();
  c_count->add_option("--target", ctarget, "zero|int|m=M");
  c_count->add_flag("--classify", cclassify, "Split zero-sum solutions into degenerate and non-degenerate");
  c_count->add_option("--method", cmethod, "auto|naive|mitm");
  c_count->add_option("--out", g.out, "csv|json");
  c_count->callback([&] { action = [&] { return run_count(ck, cn, cQ, ctarget, cclassify, cmethod, g); }; });

  // count-interval
  auto* c_ci = app.add_subcommand("count-interval", "Count fraction tuples with interval constraints");
  std::string spec_path;
  c_ci->add_option("--spec", spec_path, "Interval spec file")->required();
  c_ci->add_option("--out", g.out, "csv|json");
  c_ci->callback([&] { action = [&] { return run_count_interval(spec_path, g); }; });

  // moments
  auto* c_mom = app.add_subcommand("moments", "Moments of reduced residues in short intervals");
  u64 mq = 0, mq2 = 0;
  i64 mh = 1;
  unsigned mk = 2;
  std::string mmixed, mcheck;
  c_mom->add_option("--q", mq, "Squarefree modulus")->required();
  c_mom->add_option("--h", mh, "Interval length");
  c_mom->add_option("--k", mk, "Moment order");
  c_mom->add_option("--mixed", mmixed, "K1,K2");
  c_mom->add_option("--check", mcheck, "identity|rough|rsum");
  c_mom->add_option("--q2", mq2, "Rough factor for --check rough");
  c_mom->add_option("--out", g.out, "csv|json");
  c_mom->callback([&] {
    action = [&] {
      std::vector<i64> mixed = mmixed.empty() ? std::vector<i64>{} : cli::parse_int_csv(mmixed, "--mixed");
      return run_moments(mq, mh, mk, mixed, mcheck, mq2, g);
    };
  });

  // singular
  auto* c_sing = app.add_subcommand("singular", "Singular series of a tuple");
  std::string sd;
  u64 sq = 0, sy = 0, sP = 100000;
  bool srefined = false, sinfinite = false;
  c_sing->add_option("--d", sd, "Offsets, comma separated")->required();
  c_sing->add_option("--q", sq, "Squarefree modulus");
  c_sing->add_option("--y", sy, "Use q = product of primes <= y");
  c_sing->add_flag("--refined", srefined, "Refined (inclusion-exclusion) series");
  c_sing->add_flag("--infinite", sinfinite, "Truncated infinite product with tail bound");
  c_sing->add_option("--P", sP, "Truncation prime for --infinite");
  c_sing->add_option("--out", g.out, "csv|json");
  c_sing->callback([&] {
    action = [&] { return run_singular(cli::parse_int_csv(sd, "--d"), sq, sy, srefined, sinfinite, sP, g); };
  });

  // rk
  auto* c_rk = app.add_subcommand("rk", "R_k(h;q) and the Gallagher ratio");
  i64 rh = 1;
  unsigned rk = 2;
  u64 ry = 0, rqv = 0;
  c_rk->add_option("--h", rh, "Interval length")->required();
  c_rk->add_option("--k", rk, "Tuple length")->required();
  c_rk->add_option("--y", ry, "q = product of primes <= y");
  c_rk->add_option("--q", rqv, "Explicit squarefree modulus");
  c_rk->add_option("--out", g.out, "csv|json");
  c_rk->callback([&] { action = [&] { return run_rk(rh, rk, ry, rqv, g); }; });

  // rk-terms
  auto* c_rkt = app.add_subcommand("rk-terms", "Main-term table for odd R_k");
  i64 th = 1;
  unsigned tk = 3;
  u64 ty = 0, tq = 0;
  c_rkt->add_option("--h", th, "Interval length")->required();
  c_rkt->add_option("--k", tk, "Odd tuple length (3 or 5)")->required();
  c_rkt->add_option("--y", ty, "q = product of primes <= y");
  c_rkt->add_option("--q", tq, "Explicit squarefree modulus");
  c_rkt->add_option("--out", g.out, "csv|json");
  c_rkt->callback([&] { action = [&] { return run_rk_terms(th, tk, ty, tq, g); }; });

  // partitions
  auto* c_part = app.add_subcommand("partitions", "Set partitions, weights and identity checks");
  unsigned pk = 3;
  bool pweights = false;
  std::string pcheck;
  i64 ph = 1;
  u64 pq = 0, py = 0;
  c_part->add_option("--k", pk, "Ground set size")->required();
  c_part->add_flag("--weights", pweights, "Show w(P) by closed form and brute force");
  c_part->add_option("--check", pcheck, "lemma|rk-identity");
  c_part->add_option("--h", ph, "Interval length for checks");
  c_part->add_option("--q", pq, "Squarefree modulus for checks");
  c_part->add_option("--y", py, "q = product of primes <= y");
  c_part->add_option("--out", g.out, "csv|json");
  c_part->callback([&] { action = [&] { return run_partitions(pk, pweights, pcheck, ph, pq, py, g); }; });

  // experiment run
  auto* c_exp = app.add_subcommand("experiment", "Experiment runner");
  c_exp->require_subcommand(1);
  auto* c_run = c_exp->add_subcommand("run", "Run an experiment config");
  std::string exp_path;
  c_run->add_option("config", exp_path, "Config file")->required();
  c_run->callback([&] { action = [&] { return run_experiment_cmd(exp_path, g, workers_opt->count() > 0); }; });

  // verify
  auto* c_ver = app.add_subcommand("verify", "Run the invariant suites");
  std::string vlevel, vconfig;
  c_ver->add_option("--level", vlevel, "quick|full");
  c_ver->add_option("--config", vconfig, "Optional caps config");
  c_ver->callback([&] { action = [&] { return run_verify(vlevel, vconfig, g, workers_opt->count() > 0); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    return action ? action() : kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitInvariant;
  }
}
