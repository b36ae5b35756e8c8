#pragma once

// Command-line surface. cli_main is separated from main() so the test suite
// can drive every subcommand in-process and capture exact bytes.
//
// Exit codes: 0 success, 2 flag or usage error, 3 violated precondition or
// invalid input database.

#include <cstdlib>
#include <ctime>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topk/aggregate.hpp"
#include "topk/algorithms.hpp"
#include "topk/core.hpp"
#include "topk/generators.hpp"
#include "topk/json_io.hpp"
#include "topk/oracle.hpp"
#include "topk/report.hpp"

namespace topk {

namespace detail {

inline bool log_enabled() {
  const char* v = std::getenv("TOPK_LOG");
  return v != nullptr && *v != '\0';
}

inline void log_line(std::ostream& err, const std::string& msg) {
  if (log_enabled()) err << "[topk] " << msg << "\n";
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CommonQueryFlags {
  std::string db_path;
  std::string agg_name;
  int k = 1;
  double cs = 1.0;
  double cr = 1.0;
};

inline void add_query_flags(CLI::App* cmd, CommonQueryFlags& f, bool with_costs) {
  cmd->add_option("--db", f.db_path, "database JSON file")->required();
  cmd->add_option("--agg", f.agg_name, "aggregation function")
      ->required()
      ->check(CLI::IsMember(builtin_aggregation_names()));
  cmd->add_option("--k", f.k, "number of answers")->required();
  if (with_costs) {
    cmd->add_option("--cs", f.cs, "cost per sorted access");
    cmd->add_option("--cr", f.cr, "cost per random access");
  }
}

inline nlohmann::json run_row_json(const Database& db, const RunReport& r) {
  nlohmann::json row = run_report_to_json(r);
  row.erase("schema");
  row.erase("aggregation");
  row.erase("k");
  row.erase("cost_model");
  (void)db;
  return row;
}

inline std::string csv_result_field(const RunReport& r) {
  std::string ids;
  for (const auto& e : r.result) {
    if (!ids.empty()) ids += ';';
    ids += e.id;
  }
  return ids;
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"top-k aggregation over sorted lists"};
  app.require_subcommand(1);

  // ---- run ----
  detail::CommonQueryFlags runq;
  std::string run_alg;
  double run_theta = 1.0;
  std::vector<int> run_z;
  std::size_t run_budget = 0;
  bool run_memoize = false;
  std::string run_format = "json";
  bool run_no_meta = false;
  CLI::App* cmd_run = app.add_subcommand("run", "run one algorithm and print its report");
  detail::add_query_flags(cmd_run, runq, true);
  cmd_run->add_option("--alg", run_alg, "algorithm")
      ->required()
      ->check(CLI::IsMember(algorithm_names()));
  cmd_run->add_option("--theta", run_theta, "approximation factor for ta-theta");
  cmd_run->add_option("--z", run_z, "1-based sorted-access lists for ta-z")->delimiter(',');
  cmd_run->add_option("--budget", run_budget, "stop ta after this many rounds");
  cmd_run->add_flag("--memoize", run_memoize, "cache grades fetched by random access");
  cmd_run->add_option("--format", run_format)->check(CLI::IsMember({"json", "csv"}));
  cmd_run->add_flag("--no-meta", run_no_meta, "omit timestamp/path metadata");

  // ---- gen ----
  std::string gen_family, gen_out_path, gen_variant = "single";
  std::map<std::string, double> gen_values;
  std::set<std::string> gen_given;
  bool gen_distinct = false;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a database file");
  cmd_gen->set_help_flag("--help", "print help");  // frees -h / --h for the depth parameter
  cmd_gen->add_option("--family", gen_family, "generator family")
      ->required()
      ->check(CLI::IsMember(generator_families()));
  cmd_gen->add_option("-o,--out", gen_out_path, "output JSON path")->required();
  for (const char* name : {"n", "N", "d", "h", "m", "k1", "k2", "seed", "theta"}) {
    gen_values[name] = 0.0;
    cmd_gen->add_option("--" + std::string(name), gen_values[name])
        ->each([&gen_given, name](const std::string&) { gen_given.insert(name); });
  }
  cmd_gen->add_flag("--distinct", gen_distinct, "random family: distinct grades per list");
  cmd_gen->add_option("--variant", gen_variant, "example-8-3 layout")
      ->check(CLI::IsMember({"single", "two-winners"}));

  // ---- compare ----
  detail::CommonQueryFlags cmpq;
  std::vector<std::string> cmp_algs;
  bool cmp_certify = false, cmp_wild = false, cmp_memoize = false, cmp_no_meta = false;
  double cmp_theta = 1.0;
  std::vector<int> cmp_z;
  std::string cmp_format = "json";
  CLI::App* cmd_cmp = app.add_subcommand("compare", "run several algorithms on one database");
  detail::add_query_flags(cmd_cmp, cmpq, true);
  cmd_cmp->add_option("--algs", cmp_algs, "comma-separated algorithms")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(algorithm_names()));
  cmd_cmp->add_flag("--certify", cmp_certify, "append certificate cost and per-row ratios");
  cmd_cmp->add_flag("--wild-guesses", cmp_wild, "certificate may random-access unseen objects");
  cmd_cmp->add_option("--theta", cmp_theta, "approximation factor for ta-theta rows");
  cmd_cmp->add_option("--z", cmp_z, "1-based sorted-access lists for ta-z rows")->delimiter(',');
  cmd_cmp->add_flag("--memoize", cmp_memoize);
  cmd_cmp->add_option("--format", cmp_format)->check(CLI::IsMember({"json", "csv"}));
  cmd_cmp->add_flag("--no-meta", cmp_no_meta, "omit timestamp/path metadata");

  // ---- oracle ----
  detail::CommonQueryFlags oraq;
  std::string ora_format = "json";
  std::vector<std::string> ora_candidate;
  double ora_theta = 1.0;
  bool ora_no_meta = false;
  CLI::App* cmd_ora = app.add_subcommand("oracle", "exhaustive top-k, optional candidate check");
  detail::add_query_flags(cmd_ora, oraq, false);
  cmd_ora->add_option("--candidate", ora_candidate, "ids to check as a theta-approximation")
      ->delimiter(',');
  cmd_ora->add_option("--theta", ora_theta, "factor for the candidate check");
  cmd_ora->add_option("--format", ora_format)->check(CLI::IsMember({"json", "csv"}));
  cmd_ora->add_flag("--no-meta", ora_no_meta, "omit timestamp/path metadata");

  // ---- certify ----
  detail::CommonQueryFlags cerq;
  bool cer_wild = false, cer_sorted_only = false, cer_distinct = false, cer_no_meta = false;
  std::uint64_t cer_budget = 10'000'000;
  std::string cer_format = "json";
  CLI::App* cmd_cer = app.add_subcommand("certify", "search for a cheapest determining transcript");
  detail::add_query_flags(cmd_cer, cerq, true);
  auto* wild_flag =
      cmd_cer->add_flag("--wild-guesses", cer_wild, "allow random access to unseen objects");
  cmd_cer->add_flag("--sorted-only", cer_sorted_only, "forbid random access entirely")
      ->excludes(wild_flag);
  cmd_cer->add_flag("--assume-distinct", cer_distinct,
                    "treat per-list grades as pairwise distinct");
  cmd_cer->add_option("--max-expansions", cer_budget, "search node budget");
  cmd_cer->add_option("--format", cer_format)->check(CLI::IsMember({"json", "csv"}));
  cmd_cer->add_flag("--no-meta", cer_no_meta, "omit timestamp/path metadata");

  // ---- validate ----
  std::string val_db;
  bool val_distinct = false;
  CLI::App* cmd_val = app.add_subcommand("validate", "check a database file's invariants");
  cmd_val->add_option("--db", val_db, "database JSON file")->required();
  cmd_val->add_flag("--distinct", val_distinct, "also require pairwise distinct grades per list");

  std::vector<const char*> argv;
  argv.push_back("topk");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_run->parsed()) {
      Database db = load_database_file(runq.db_path);
      detail::log_line(err, "loaded " + runq.db_path + " N=" + std::to_string(db.size()) +
                                " m=" + std::to_string(db.num_lists()));
      CostModel model{runq.cs, runq.cr};
      model.require_valid();
      AggregationFunction t = builtin_aggregation(runq.agg_name, db.num_lists());
      AlgorithmOptions opt;
      opt.theta = run_theta;
      opt.budget = run_budget;
      opt.memoize = run_memoize;
      opt.record_transcript = false;
      for (int z : run_z) {
        if (z < 1 || z > db.num_lists())
          throw PreconditionError("--z entries must be 1-based list indices in [1, m]");
        opt.z_lists.push_back(z - 1);
      }
      RunReport r = run_algorithm(run_alg, db, t, runq.k, model, opt);
      if (run_format == "csv") {
        out << run_report_csv_header() << "\n" << run_report_to_csv_row(r) << "\n";
      } else {
        nlohmann::json j = run_report_to_json(r);
        if (!run_no_meta)
          j["meta"] = {{"db", runq.db_path}, {"generated_at", detail::utc_timestamp()}};
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cmd_gen->parsed()) {
      GeneratorSpec spec;
      spec.family = gen_family;
      // canonical parameter names per family; reject flags the family ignores
      static const std::map<std::string, std::set<std::string>> allowed = {
          {"example-6-3", {"n"}},
          {"example-6-8", {"n", "theta"}},
          {"example-7-3", {"n"}},
          {"example-8-3", {"n", "variant"}},
          {"figure-5", {"h"}},
          {"thm-9-1", {"d", "m", "k1", "k2", "N"}},
          {"thm-9-2", {"d", "m", "N"}},
          {"thm-9-3", {"d", "m"}},
          {"thm-9-5", {"d", "m"}},
          {"random", {"n", "m", "seed", "distinct"}},
      };
      const auto& ok = allowed.at(gen_family);
      for (const auto& name : gen_given)
        if (!ok.count(name)) {
          err << "error: family '" << gen_family << "' does not take --" << name << "\n";
          return 2;
        }
      if (gen_distinct && !ok.count("distinct")) {
        err << "error: family '" << gen_family << "' does not take --distinct\n";
        return 2;
      }
      if (cmd_gen->count("--variant") && !ok.count("variant")) {
        err << "error: family '" << gen_family << "' does not take --variant\n";
        return 2;
      }
      for (const auto& name : gen_given) {
        // these two families key their size parameter as N, not n
        std::string key = name;
        if (name == "n" && (gen_family == "example-7-3" || gen_family == "random")) key = "N";
        spec.params[key] = gen_values[name];
      }
      if (gen_family == "random" && gen_distinct) spec.params["distinct"] = 1.0;
      if (gen_family == "example-8-3" && gen_variant == "two-winners")
        spec.params["two_winners"] = 1.0;
      Database db = generate(spec);
      save_database_file(db, gen_out_path);
      detail::log_line(err, "wrote " + gen_out_path + " N=" + std::to_string(db.size()));
      out << hex64(fnv1a(spec.to_string())) << "\n";
      return 0;
    }

    if (cmd_cmp->parsed()) {
      Database db = load_database_file(cmpq.db_path);
      CostModel model{cmpq.cs, cmpq.cr};
      model.require_valid();
      AggregationFunction t = builtin_aggregation(cmpq.agg_name, db.num_lists());
      AlgorithmOptions opt;
      opt.theta = cmp_theta;
      opt.memoize = cmp_memoize;
      opt.record_transcript = false;
      for (int z : cmp_z) {
        if (z < 1 || z > db.num_lists())
          throw PreconditionError("--z entries must be 1-based list indices in [1, m]");
        opt.z_lists.push_back(z - 1);
      }
      struct RowOut {
        std::string algorithm;
        std::optional<RunReport> report;
        std::string skipped;
      };
      std::vector<RowOut> rows;
      for (const auto& name : cmp_algs) {
        RowOut row;
        row.algorithm = name;
        try {
          row.report = run_algorithm(name, db, t, cmpq.k, model, opt);
        } catch (const PreconditionError& e) {
          row.skipped = e.what();
        }
        rows.push_back(std::move(row));
      }
      std::optional<Certificate> cert;
      bool cert_budget_exceeded = false;
      if (cmp_certify) {
        CertificateSearchOptions copt;
        copt.policy =
            cmp_wild ? CertificatePolicy::kWildGuess : CertificatePolicy::kNoWildGuess;
        CertificateSearch search = min_certificate_cost(db, t, cmpq.k, model, copt);
        cert = std::move(search.certificate);
        cert_budget_exceeded = search.budget_exceeded;
      }
      if (cmp_format == "csv") {
        out << run_report_csv_header() << (cmp_certify ? ",ratio" : "") << "\n";
        for (const auto& row : rows) {
          if (row.report) {
            out << run_report_to_csv_row(*row.report);
            if (cmp_certify)
              out << ","
                  << (cert ? format_real(optimality_ratio(row.report->cost(), cert->cost)) : "");
          } else {
            out << row.algorithm << ",,,,,skipped: " << row.skipped << ",";
            if (cmp_certify) out << ",";
          }
          out << "\n";
        }
        if (cmp_certify && cert) {
          std::string ids;
          for (const auto& id : cert->proven) {
            if (!ids.empty()) ids += ';';
            ids += id;
          }
          out << "certificate," << cert->sorted_count << "," << cert->random_count << ","
              << format_real(cert->cost) << ",," << ids << ",,\n";
        }
      } else {
        nlohmann::json j;
        j["schema"] = "topk-compare-report/1";
        j["db_digest"] = database_digest(db);
        j["k"] = cmpq.k;
        j["aggregation"] = cmpq.agg_name;
        j["cost_model"] = {{"cs", model.sorted_cost}, {"cr", model.random_cost}};
        auto& jrows = j["rows"] = nlohmann::json::array();
        for (const auto& row : rows) {
          if (!row.report) {
            jrows.push_back({{"algorithm", row.algorithm}, {"skipped", row.skipped}});
            continue;
          }
          nlohmann::json jr = detail::run_row_json(db, *row.report);
          if (cmp_certify && cert)
            jr["ratio"] = optimality_ratio(row.report->cost(), cert->cost);
          jrows.push_back(std::move(jr));
        }
        if (cmp_certify) {
          if (cert) {
            nlohmann::json jc;
            jc["cost"] = cert->cost;
            jc["sorted"] = cert->sorted_count;
            jc["random"] = cert->random_count;
            jc["proven"] = cert->proven;
            j["certificate"] = std::move(jc);
          } else {
            j["certificate"] = {{"budget_exceeded", cert_budget_exceeded}};
          }
        }
        if (!cmp_no_meta)
          j["meta"] = {{"db", cmpq.db_path}, {"generated_at", detail::utc_timestamp()}};
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cmd_ora->parsed()) {
      Database db = load_database_file(oraq.db_path);
      AggregationFunction t = builtin_aggregation(oraq.agg_name, db.num_lists());
      auto top = brute_force_topk(db, t, static_cast<std::size_t>(oraq.k));
      std::optional<ThetaCheck> check;
      if (!ora_candidate.empty())
        check = verify_theta_approx(db, t, static_cast<std::size_t>(oraq.k), ora_candidate,
                                    ora_theta);
      if (ora_format == "csv") {
        out << "id,grade\n";
        for (const auto& e : top) out << e.id << "," << format_real(*e.grade) << "\n";
      } else {
        nlohmann::json j;
        j["schema"] = "topk-oracle-report/1";
        j["k"] = oraq.k;
        j["aggregation"] = oraq.agg_name;
        auto& res = j["result"] = nlohmann::json::array();
        for (const auto& e : top) res.push_back({{"id", e.id}, {"grade", *e.grade}});
        if (check) {
          nlohmann::json jc;
          jc["theta"] = ora_theta;
          jc["ok"] = check->ok;
          if (check->witness)
            jc["witness"] = {{"unchosen", check->witness->unchosen},
                             {"chosen", check->witness->chosen},
                             {"unchosen_grade", check->witness->unchosen_grade},
                             {"chosen_grade", check->witness->chosen_grade}};
          j["theta_check"] = std::move(jc);
        }
        if (!ora_no_meta)
          j["meta"] = {{"db", oraq.db_path}, {"generated_at", detail::utc_timestamp()}};
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cmd_cer->parsed()) {
      Database db = load_database_file(cerq.db_path);
      CostModel model{cerq.cs, cerq.cr};
      model.require_valid();
      AggregationFunction t = builtin_aggregation(cerq.agg_name, db.num_lists());
      CertificateSearchOptions copt;
      copt.policy = cer_sorted_only ? CertificatePolicy::kSortedOnly
                    : cer_wild      ? CertificatePolicy::kWildGuess
                                    : CertificatePolicy::kNoWildGuess;
      copt.assume_distinct = cer_distinct;
      copt.max_expansions = cer_budget;
      CertificateSearch search =
          min_certificate_cost(db, t, static_cast<std::size_t>(cerq.k), model, copt);
      const char* policy_name = cer_sorted_only ? "sorted-only"
                                : cer_wild      ? "wild-guess"
                                                : "no-wild-guess";
      if (cer_format == "csv") {
        out << run_report_csv_header() << "\n";
        if (search.certificate) {
          std::string ids;
          for (const auto& id : search.certificate->proven) {
            if (!ids.empty()) ids += ';';
            ids += id;
          }
          out << "certificate," << search.certificate->sorted_count << ","
              << search.certificate->random_count << "," << format_real(search.certificate->cost)
              << ",," << ids << ",\n";
        } else {
          out << "certificate,,,,,skipped: budget exceeded,\n";
        }
      } else {
        nlohmann::json j;
        j["schema"] = "topk-certificate/1";
        j["db_digest"] = database_digest(db);
        j["k"] = cerq.k;
        j["aggregation"] = cerq.agg_name;
        j["cost_model"] = {{"cs", model.sorted_cost}, {"cr", model.random_cost}};
        j["policy"] = policy_name;
        j["assume_distinct"] = cer_distinct;
        j["budget_exceeded"] = search.budget_exceeded;
        j["expanded"] = search.expanded;
        if (search.certificate) {
          j["cost"] = search.certificate->cost;
          j["sorted"] = search.certificate->sorted_count;
          j["random"] = search.certificate->random_count;
          j["proven"] = search.certificate->proven;
          j["transcript"] = transcript_to_json(db, search.certificate->transcript);
        }
        if (!cer_no_meta)
          j["meta"] = {{"db", cerq.db_path}, {"generated_at", detail::utc_timestamp()}};
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (cmd_val->parsed()) {
      std::ifstream in(val_db, std::ios::binary);
      if (!in) throw ValidationError("cannot open database file '" + val_db + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(buf.str());
      } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("database file: JSON parse error: ") + e.what());
      }
      DatabaseDraft draft = draft_from_json(j);
      auto violations = validate_database(draft, val_distinct);
      if (violations.empty()) {
        out << "ok\n";
        return 0;
      }
      for (const auto& v : violations) err << v << "\n";
      return 3;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace topk
