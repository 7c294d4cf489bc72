// Copyright 2026 The Matchforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Thin adapters from flags and files to the library; no business logic here.

#include "cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "matchforge/blocking.hpp"
#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/errors.hpp"
#include "matchforge/exact.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/instance.hpp"
#include "matchforge/inverse.hpp"
#include "matchforge/metrics.hpp"
#include "matchforge/opt_model.hpp"
#include "matchforge/pipeline.hpp"

namespace matchforge::cli {

namespace {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kInfeasibleConfig:
    case Errc::kInfeasibleBudget:
    case Errc::kInfeasibleTarget:
    case Errc::kInfeasibleInverse:
    case Errc::kInfeasibleMatching:
    case Errc::kAllInfeasible:
    case Errc::kHypothesisViolated:
      return 2;
    case Errc::kMalformedModel:
    case Errc::kBackendUnavailable:
    case Errc::kModelTooLarge:
    case Errc::kNumericalFailure:
    case Errc::kTimeLimit:
      return 3;
    default:
      return 1;
  }
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<long long> parse_longs(const std::string& csv) {
  std::vector<long long> out;
  for (double v : parse_doubles(csv)) out.push_back(std::llround(v));
  return out;
}

WeightTriple parse_weights(const std::string& csv) {
  const std::vector<double> w = parse_doubles(csv);
  if (w.size() != 3) {
    throw Error(Errc::kUsage, "--weights expects l1,l2,l3");
  }
  return {w[0], w[1], w[2]};
}

std::vector<WeightTriple> parse_grid(const std::string& text) {
  if (text == "default") return default_weight_grid();
  std::vector<WeightTriple> grid;
  std::istringstream in(text);
  std::string triple;
  while (std::getline(in, triple, ';')) {
    if (triple.empty()) continue;
    grid.push_back(parse_weights(triple));
  }
  if (grid.empty()) throw Error(Errc::kUsage, "--grid parsed to an empty grid");
  return grid;
}

void emit(const std::string& content, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_text_file(path, content);
  }
}

std::string exact_summary_json(const ExactResult& r, int matched) {
  nlohmann::json doc;
  doc["travel"] = r.travel;
  doc["matched"] = matched;
  doc["bp_count"] = r.blocking.count;
  doc["bp_pct"] = r.blocking.pct_of_admissible;
  doc["time_limit_hit"] = r.time_limit_hit;
  doc["best_bound"] = r.best_bound;
  return doc.dump(2) + "\n";
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"matchforge: many-to-one assignment toolkit "
               "(deferred acceptance, stability cost recovery, "
               "multi-objective assignment)"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(30);

  // global defaults, overridable per subcommand
  std::uint64_t g_seed = 0;
  int g_jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (g_jobs <= 0) g_jobs = 1;
  double g_time_limit = 1e18;
  app.add_option("--seed", g_seed, "Default RNG seed");
  app.add_option("--jobs", g_jobs, "Default worker count for sweeps");
  app.add_option("--time-limit", g_time_limit,
                 "Default per-solve time limit in seconds");

  // ---- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  int gen_students = 0, gen_schools = 0, gen_couples = 0;
  int gen_rank_min = 2, gen_rank_max = 0;
  double gen_capacity_factor = 1.0, gen_mu = 0.75;
  std::string gen_phi = "0,0.25,0.5,0.75,1";
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false, gen_literal = false;
  std::string gen_out;
  gen->add_option("--students", gen_students, "Number of applicants")
      ->required();
  gen->add_option("--schools", gen_schools, "Number of programs")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")
      ->each([&](const std::string&) { gen_seed_set = true; });
  gen->add_option("--capacity-factor", gen_capacity_factor,
                  "Total capacity divided by applicant count (default 1.0)");
  gen->add_option("--phi", gen_phi,
                  "Comma-separated distance-sensitivity levels");
  gen->add_option("--mu", gen_mu, "Program-side distance weight (default 0.75)");
  gen->add_option("--rank-min", gen_rank_min, "Shortest preference list");
  gen->add_option("--rank-max", gen_rank_max,
                  "Longest preference list (default min(9, schools))");
  gen->add_option("--couples", gen_couples,
                  "Applicants applying with a partner (even)");
  gen->add_flag("--literal-distance", gen_literal,
                "Use the raw positive distance term in the utility model");
  gen->add_option("-o,--output", gen_out, "Instance JSON path")->required();

  // ---- da ----------------------------------------------------------------
  auto* da = app.add_subcommand("da", "Run deferred acceptance");
  std::string da_inst, da_out, da_side = "student";
  da->add_option("instance", da_inst, "Instance JSON")->required();
  da->add_option("-o,--output", da_out, "Matching CSV path")->required();
  da->add_option("--side", da_side, "Proposing side: student|program");

  // ---- audit ---------------------------------------------------------------
  auto* audit = app.add_subcommand(
      "audit", "Count blocking pairs of a matching (JSON report)");
  std::string audit_inst, audit_matching, audit_out;
  bool audit_rural = false;
  audit->add_option("instance", audit_inst, "Instance JSON")->required();
  audit->add_option("matching", audit_matching, "Matching CSV")->required();
  audit->add_option("-o,--output", audit_out, "Report path (default stdout)");
  audit->add_flag("--rural", audit_rural,
                  "Also audit both proposing directions for identical "
                  "matched sets and fills");

  // ---- exact ---------------------------------------------------------------
  auto* exact = app.add_subcommand(
      "exact", "Minimum-travel assignment under a blocking-pair budget");
  std::string exact_inst, exact_out, exact_report, exact_dump;
  long long exact_budget = 0;
  int exact_min_matched = -1, exact_pair_cap = 5000;
  double exact_time_limit = -1.0;
  exact->add_option("instance", exact_inst, "Instance JSON")->required();
  exact->add_option("--budget", exact_budget, "Blocking-pair budget B")
      ->required();
  exact->add_option("--min-matched", exact_min_matched,
                    "Minimum matched count (default: DA matched count)");
  exact->add_option("--time-limit", exact_time_limit, "Seconds");
  exact->add_option("--pair-cap", exact_pair_cap,
                    "Refuse instances with more admissible pairs");
  exact->add_option("-o,--output", exact_out, "Matching CSV path");
  exact->add_option("--report", exact_report, "Summary JSON path");
  exact->add_option("--dump-model", exact_dump, "Write the model in LP format");

  // ---- inverse ---------------------------------------------------------------
  auto* inverse = app.add_subcommand(
      "inverse", "Recover a stability cost vector from a stable matching");
  std::string inv_inst, inv_matching, inv_out, inv_prior = "uniform";
  double inv_lambda = 1.0;
  bool inv_no_verify = false;
  inverse->add_option("instance", inv_inst, "Instance JSON")->required();
  inverse->add_option("matching", inv_matching, "Reference matching CSV")
      ->required();
  inverse->add_option("-o,--output", inv_out, "Cost vector JSON path")
      ->required();
  inverse->add_option("--lambda", inv_lambda,
                      "Regularization weight (default 1.0)");
  inverse->add_option("--prior", inv_prior,
                      "'uniform' or a cost-vector JSON file");
  inverse->add_flag("--no-verify-forward", inv_no_verify,
                    "Skip the forward LP re-solve check");

  // ---- assign ---------------------------------------------------------------
  auto* assign = app.add_subcommand(
      "assign", "Multi-objective assignment given a recovered cost vector");
  std::string as_inst, as_cost, as_out, as_mode, as_weights = "1,0,0";
  std::string as_dump;
  double as_travel = std::numeric_limits<double>::infinity();
  int as_couples = 0, as_min_matched = 0;
  double as_time_limit = -1.0;
  assign->add_option("instance", as_inst, "Instance JSON")->required();
  assign->add_option("--cost-vector", as_cost, "Cost vector JSON")->required();
  assign->add_option("--mode", as_mode, "school|residency")->required();
  assign->add_option("--travel-target", as_travel,
                     "Total travel bound (school mode)");
  assign->add_option("--couples-target", as_couples,
                     "Co-located couples bound (residency mode)");
  assign->add_option("--weights", as_weights, "l1,l2,l3 (default 1,0,0)");
  assign->add_option("--min-matched", as_min_matched,
                     "Minimum matched count (default 0)");
  assign->add_option("--time-limit", as_time_limit, "Seconds");
  assign->add_option("-o,--output", as_out, "Matching CSV path")->required();
  assign->add_option("--dump-model", as_dump, "Write the model in LP format");

  // ---- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Trade-off sweeps over travel, matched count, or couples");
  std::string sw_inst, sw_out, sw_kind = "travel", sw_targets, sw_grid = "default";
  int sw_min_matched = -1, sw_jobs = -1;
  double sw_lambda = 1.0, sw_time_limit = -1.0;
  sweep->add_option("instance", sw_inst, "Instance JSON")->required();
  sweep->add_option("--kind", sw_kind, "travel|matched|couples");
  sweep->add_option("--targets", sw_targets, "Comma-separated target grid")
      ->required();
  sweep->add_option("--grid", sw_grid,
                    "Weight grid 'l1,l2,l3;...' or 'default'");
  sweep->add_option("--min-matched", sw_min_matched,
                    "Minimum matched count (default: DA matched count)");
  sweep->add_option("--lambda", sw_lambda, "Regularization weight");
  sweep->add_option("--jobs", sw_jobs, "Parallel grid evaluations");
  sweep->add_option("--time-limit", sw_time_limit, "Seconds per solve");
  sweep->add_option("-o,--output", sw_out, "Sweep CSV path")->required();

  // ---- compare ---------------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare", "Exact-versus-inverse trade-off at matched travel targets");
  std::string cp_inst, cp_out, cp_budgets, cp_grid = "default";
  int cp_min_matched = -1, cp_jobs = -1;
  double cp_lambda = 1.0, cp_time_limit = -1.0;
  compare->add_option("instance", cp_inst, "Instance JSON")->required();
  compare->add_option("--budgets", cp_budgets,
                      "Comma-separated blocking-pair budgets")
      ->required();
  compare->add_option("--grid", cp_grid,
                      "Weight grid 'l1,l2,l3;...' or 'default'");
  compare->add_option("--min-matched", cp_min_matched,
                      "Minimum matched count (default: DA matched count)");
  compare->add_option("--lambda", cp_lambda, "Regularization weight");
  compare->add_option("--jobs", cp_jobs, "Parallel grid evaluations");
  compare->add_option("--time-limit", cp_time_limit,
                      "Seconds per exact solve");
  compare->add_option("-o,--output", cp_out, "Comparison CSV path")->required();

  // ---- report ---------------------------------------------------------------
  auto* report = app.add_subcommand(
      "report", "Assignment quality metrics for a matching");
  std::string rp_inst, rp_matching, rp_baseline, rp_out, rp_format = "json";
  report->add_option("instance", rp_inst, "Instance JSON")->required();
  report->add_option("matching", rp_matching, "Matching CSV")->required();
  report->add_option("--baseline", rp_baseline,
                     "Baseline matching CSV for travel reduction");
  report->add_option("--format", rp_format, "json|csv");
  report->add_option("-o,--output", rp_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      GenConfig cfg;
      cfg.n_applicants = gen_students;
      cfg.n_programs = gen_schools;
      cfg.total_capacity_factor = gen_capacity_factor;
      cfg.phi_values = parse_doubles(gen_phi);
      cfg.mu = gen_mu;
      cfg.rank_max = gen_rank_max > 0 ? gen_rank_max : std::min(9, gen_schools);
      cfg.rank_min = std::min(gen_rank_min, cfg.rank_max);
      cfg.couples_count = gen_couples;
      cfg.seed = gen_seed_set ? gen_seed : g_seed;
      cfg.literal_distance_term = gen_literal;
      const Instance inst = gen_couples > 0 ? gen_residency_instance(cfg)
                                            : gen_school_instance(cfg);
      save_instance(inst, gen_out);
      return 0;
    }
    if (da->parsed()) {
      if (da_side != "student" && da_side != "program") {
        throw Error(Errc::kUsage, "--side must be student or program");
      }
      const ValidatedInstance vi = validate_instance(load_instance(da_inst));
      const Matching m = da_side == "student" ? student_proposing_da(vi)
                                              : program_proposing_da(vi);
      save_matching_csv(vi, m, da_out);
      return 0;
    }
    if (audit->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(audit_inst));
      const Matching m = load_matching_csv(vi, audit_matching);
      const BlockingReport br = count_blocking_pairs(vi, m);
      std::string content = blocking_report_to_json_string(vi, br);
      if (audit_rural) {
        nlohmann::json doc = nlohmann::json::parse(content);
        const RuralHospitalsReport rh = rural_hospitals_audit(vi);
        doc["rural_hospitals"] = {
            {"same_matched_applicants", rh.same_matched_applicants},
            {"same_program_fills", rh.same_program_fills},
            {"same_under_capacity_rosters", rh.same_under_capacity_rosters},
            {"identical_matchings", rh.identical_matchings}};
        content = doc.dump(2) + "\n";
      }
      emit(content, audit_out, out);
      return 0;
    }
    if (exact->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(exact_inst));
      ExactOptions opts;
      opts.time_limit_sec =
          exact_time_limit > 0 ? exact_time_limit : g_time_limit;
      opts.pair_cap = exact_pair_cap;
      const int min_matched = exact_min_matched >= 0
                                  ? exact_min_matched
                                  : student_proposing_da(vi).matched_count();
      ExactResult res = solve_exact(vi, exact_budget, min_matched, opts);
      if (!exact_out.empty()) save_matching_csv(vi, res.matching, exact_out);
      const std::string summary =
          exact_summary_json(res, res.matching.matched_count());
      if (!exact_report.empty()) write_text_file(exact_report, summary);
      out << summary;
      return 0;
    }
    if (inverse->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(inv_inst));
      const Matching x_ref = load_matching_csv(vi, inv_matching);
      std::vector<double> prior;
      if (inv_prior == "uniform") {
        prior = default_prior(vi);
      } else {
        prior = load_cost_vector(vi, inv_prior).b;
      }
      InverseOptions opts;
      opts.verify_forward = !inv_no_verify;
      const CostVector cost = recover_cost(vi, x_ref, prior, inv_lambda, opts);
      save_cost_vector(vi, cost, inv_out);
      nlohmann::json doc;
      doc["normalization_error"] = cost.residuals.normalization_error;
      doc["max_dual_infeasibility"] = cost.residuals.max_dual_infeasibility;
      doc["max_slackness_violation"] = cost.residuals.max_slackness_violation;
      doc["duality_gap"] = cost.residuals.duality_gap;
      doc["forward_gap"] = cost.residuals.forward_gap;
      out << doc.dump(2) << "\n";
      return 0;
    }
    if (assign->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(as_inst));
      const CostVector cost = load_cost_vector(vi, as_cost);
      const WeightTriple w = parse_weights(as_weights);
      ForwardOptions opts;
      opts.time_limit_sec = as_time_limit > 0 ? as_time_limit : g_time_limit;
      Matching m(vi.num_applicants(), vi.num_programs());
      if (as_mode == "school") {
        m = solve_school(vi, cost, w, as_min_matched, as_travel, opts);
      } else if (as_mode == "residency") {
        m = solve_residency(vi, cost, w, as_min_matched, as_couples, opts);
      } else {
        throw Error(Errc::kUsage, "--mode must be school or residency");
      }
      save_matching_csv(vi, m, as_out);
      out << metrics_to_json_string(compute_metrics(vi, m));
      return 0;
    }
    if (sweep->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(sw_inst));
      PipelineParams params;
      params.grid = parse_grid(sw_grid);
      if (sw_min_matched >= 0) params.min_matched = sw_min_matched;
      params.lambda_reg = sw_lambda;
      params.jobs = sw_jobs > 0 ? sw_jobs : g_jobs;
      params.time_limit_sec = sw_time_limit > 0 ? sw_time_limit : g_time_limit;
      Table table;
      if (sw_kind == "travel") {
        table = travel_sweep_table(
            sweep_travel(vi, parse_doubles(sw_targets), params));
      } else if (sw_kind == "matched") {
        std::vector<int> targets;
        for (long long v : parse_longs(sw_targets))
          targets.push_back(static_cast<int>(v));
        table = matched_sweep_table(sweep_min_matched(vi, targets, params));
      } else if (sw_kind == "couples") {
        std::vector<int> targets;
        for (long long v : parse_longs(sw_targets))
          targets.push_back(static_cast<int>(v));
        table = couple_sweep_table(sweep_couples(vi, targets, params));
      } else {
        throw Error(Errc::kUsage, "--kind must be travel, matched or couples");
      }
      write_text_file(sw_out, table_to_csv(table));
      return 0;
    }
    if (compare->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(cp_inst));
      PipelineParams params;
      params.grid = parse_grid(cp_grid);
      if (cp_min_matched >= 0) params.min_matched = cp_min_matched;
      params.lambda_reg = cp_lambda;
      params.jobs = cp_jobs > 0 ? cp_jobs : g_jobs;
      params.time_limit_sec = cp_time_limit > 0 ? cp_time_limit : g_time_limit;
      const auto rows = compare_exact_inverse(
          vi, parse_longs(cp_budgets), params,
          cp_time_limit > 0 ? cp_time_limit : g_time_limit);
      write_text_file(cp_out, table_to_csv(compare_table(rows)));
      return 0;
    }
    if (report->parsed()) {
      const ValidatedInstance vi = validate_instance(load_instance(rp_inst));
      const Matching m = load_matching_csv(vi, rp_matching);
      std::optional<Matching> baseline;
      if (!rp_baseline.empty()) baseline = load_matching_csv(vi, rp_baseline);
      const MetricsReport r =
          compute_metrics(vi, m, baseline ? &*baseline : nullptr);
      if (rp_format == "json") {
        emit(metrics_to_json_string(r), rp_out, out);
      } else if (rp_format == "csv") {
        emit(metrics_to_csv_string(r), rp_out, out);
      } else {
        throw Error(Errc::kUsage, "--format must be json or csv");
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace matchforge::cli
