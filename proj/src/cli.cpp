#include "sc2apx/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sc2apx/error.hpp"
#include "sc2apx/monte_carlo.hpp"
#include "sc2apx/report.hpp"
#include "sc2apx/scenarios.hpp"
#include "sc2apx/unit_catalog.hpp"

namespace sc2apx {

namespace {

struct Options {
  std::string format = "table";
  std::string catalog_path;
  std::string output_path;
  std::string scenario_path;
  std::string model = "all";
  std::string match = "all";
  int round = 0;
  int trials = kDefaultTrials;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool from_reference = false;
  bool chart = false;
  bool with_reference = false;
};

UnitCatalog load_selected_catalog(const Options& o) {
  if (!o.catalog_path.empty()) return load_catalog_file(o.catalog_path);
  if (const char* env = std::getenv(kCatalogEnvVar); env && *env) return load_catalog_file(env);
  return default_catalog();
}

std::vector<ModelId> selected_models(const Options& o) {
  if (o.model == "all") return {std::begin(kAllModels), std::end(kAllModels)};
  return {*parse_model(o.model)};
}

std::vector<MatchupSpec> selected_matchups(const Options& o) {
  std::vector<MatchupSpec> out;
  const auto pairing = o.match == "all" ? std::nullopt : parse_pairing(o.match);
  for (const auto& m : builtin_matchups()) {
    if (o.round != 0 && m.id->round != o.round) continue;
    if (pairing && m.id->pairing != *pairing) continue;
    out.push_back(m);
  }
  return out;
}

std::vector<AggregateResult> simulate_builtin(const Options& o, const UnitCatalog& catalog) {
  std::vector<AggregateResult> results;
  for (const auto& m : selected_matchups(o)) {
    for (auto model : selected_models(o)) {
      results.push_back(run_experiment({m, model, o.trials, o.seed}, catalog, {o.threads, false}));
    }
  }
  return results;
}

void cmd_run(const Options& o, std::ostream& out, ReportFormat format) {
  const auto catalog = load_selected_catalog(o);
  const auto scenario = load_scenario_file(o.scenario_path, catalog);
  ExperimentSpec spec{scenario.matchup, scenario.model.value_or(ModelId::Apx4),
                      scenario.trials.value_or(kDefaultTrials), scenario.seed.value_or(0)};
  // Explicit flags override the scenario document.
  if (o.model != "all") spec.model = *parse_model(o.model);
  if (o.trials != kDefaultTrials) spec.trials = o.trials;
  if (o.seed != 0) spec.master_seed = o.seed;
  const auto result = run_experiment(spec, catalog, {o.threads, false});
  if (format == ReportFormat::Json) {
    out << to_json(result) << '\n';
    return;
  }
  const ResultRow row = make_row(result);
  write_rows(out, std::span(&row, 1), format);
  if (format == ReportFormat::Table) {
    out << "\ntrials " << spec.trials << ", seed " << spec.master_seed << ", draws "
        << result.draws << " (stalemates " << result.stalemates << "), mean rounds "
        << result.mean_rounds << '\n';
  }
}

void cmd_reproduce(const Options& o, std::ostream& out, ReportFormat format) {
  const auto catalog = load_selected_catalog(o);
  std::vector<ResultRow> rows;
  std::optional<MatchupId> last;
  for (const auto& r : simulate_builtin(o, catalog)) {
    const auto id = *r.spec.matchup.id;
    if (o.with_reference && id != last) rows.push_back(make_row(reference_row(id, std::nullopt)));
    last = id;
    rows.push_back(make_row(r));
  }
  write_rows(out, rows, format);
}

void cmd_compare(const Options& o, std::ostream& out, ReportFormat format) {
  const auto catalog = load_selected_catalog(o);
  const auto results = simulate_builtin(o, catalog);
  write_comparison(out, compare_with_reference(results), format);
}

void cmd_mae(const Options& o, std::ostream& out, ReportFormat format) {
  if (o.from_reference) {
    write_mae(out, mae_by_model(reference_table()), format, o.chart);
    return;
  }
  const auto catalog = load_selected_catalog(o);
  const auto results = simulate_builtin(o, catalog);
  write_mae(out, mae_by_model(reference_table(), results), format, o.chart);
}

void cmd_list_units(const Options& o, std::ostream& out, ReportFormat format) {
  const auto catalog = load_selected_catalog(o);
  if (format == ReportFormat::Json) {
    out << serialize_catalog(catalog);
    return;
  }
  const char sep = format == ReportFormat::Csv ? ',' : '\t';
  out << "name" << sep << "race" << sep << "ranged" << sep << "eff_health" << sep << "eff_dps"
      << sep << "eff_bonus_dps" << sep << "bonus_vs\n";
  for (const auto& u : catalog.units()) {
    std::string bonus;
    for (auto a : u.bonus_vs.to_vector()) bonus += (bonus.empty() ? "" : "|") + std::string(to_string(a));
    out << u.name << sep << to_string(u.race) << sep << (u.ranged ? "yes" : "no") << sep
        << effective_health(u) << sep << effective_dps(u) << sep << effective_bonus_dps(u)
        << sep << bonus << '\n';
  }
}

void cmd_list_matchups(std::ostream& out) {
  for (const auto& m : builtin_matchups()) {
    out << m.name << ':';
    for (const auto* army : {&m.army1, &m.army2}) {
      if (army == &m.army2) out << " vs";
      for (const auto& e : *army) out << ' ' << e.count << ' ' << e.unit;
    }
    out << '\n';
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Approximate combat models for StarCraft 2 army engagements", "sc2apx"};
  app.require_subcommand(1);

  const std::vector<std::string> models = {"apx1", "apx2", "apx3", "apx4", "all"};
  const std::vector<std::string> matches = {"pvt", "tvz", "pvz", "all"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--catalog", o.catalog_path,
                    std::string("Unit data file (default: $") + kCatalogEnvVar +
                        " or the builtin catalog)");
    sub->add_option("--output,-o", o.output_path, "Write the report to a file");
  };
  auto add_simulation = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--model", o.model, "apx1..apx4 or all")
        ->check(CLI::IsMember(models, CLI::ignore_case));
    sub->add_option("--trials", o.trials, "Trials per experiment")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };
  auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--round", o.round, "Round 1-4 (default: all)")->check(CLI::Range(1, 4));
    sub->add_option("--match", o.match, "pvt, tvz, pvz or all")
        ->check(CLI::IsMember(matches, CLI::ignore_case));
  };

  auto* run = app.add_subcommand("run", "Simulate a scenario file");
  add_simulation(run);
  run->add_option("--scenario", o.scenario_path, "Scenario file")->required();

  auto* reproduce = app.add_subcommand("reproduce", "Simulate the builtin matchups as table rows");
  add_simulation(reproduce);
  add_selection(reproduce);
  reproduce->add_flag("--with-reference", o.with_reference, "Include the in-game Test rows");

  auto* compare = app.add_subcommand("compare", "Compare simulated win rates with the reference");
  add_simulation(compare);
  add_selection(compare);

  auto* mae = app.add_subcommand("mae", "Mean absolute win-rate error per model vs in-game tests");
  add_simulation(mae);
  add_selection(mae);
  mae->add_flag("--from-reference", o.from_reference, "Use the published model rows");
  mae->add_flag("--chart", o.chart, "Append a text bar chart");

  auto* list_units = app.add_subcommand("list-units", "Show the unit catalog");
  add_common(list_units);
  auto* list_matchups = app.add_subcommand("list-matchups", "Show the builtin matchups");

  std::vector<std::string> argv_storage = {"sc2apx"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (auto& c : o.model) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto format = *parse_format(o.format);

  try {
    std::ostringstream report;
    if (run->parsed()) cmd_run(o, report, format);
    else if (reproduce->parsed()) cmd_reproduce(o, report, format);
    else if (compare->parsed()) cmd_compare(o, report, format);
    else if (mae->parsed()) cmd_mae(o, report, format);
    else if (list_units->parsed()) cmd_list_units(o, report, format);
    else if (list_matchups->parsed()) cmd_list_matchups(report);

    if (o.output_path.empty()) {
      out << report.str();
    } else {
      std::ofstream file(o.output_path);
      if (!file) throw Error("cannot write '" + o.output_path + "'");
      file << report.str();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace sc2apx
