// Acceptance suite. Prints one PASS/FAIL line per criterion; pass a criterion
// number (1-8) to run just that one. Exit status is nonzero if any selected
// criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sc2apx/error.hpp"
#include "sc2apx/monte_carlo.hpp"
#include "sc2apx/report.hpp"
#include "sc2apx/scenarios.hpp"
#include "sc2apx/unit_catalog.hpp"
#include "support/generators.hpp"
#include "support/properties.hpp"

using namespace sc2apx;
using namespace sc2apx::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Seeds are fixed up front; they are not picked after looking at results.
constexpr std::uint64_t kGeneratorSeed = 0x5eed0001;
constexpr std::uint64_t kTrialSeed = 0x5eed0002;

// Monte Carlo vs exact enumeration on random tiny matchups. A cell passes if
// |k - Np| <= 3 sqrt(Np(1-p)) + 0.5, the half count being the usual
// continuity correction for a discrete count. Outcomes the oracle gives
// probability zero must never be sampled.
Verdict oracle_equivalence() {
  constexpr int kMatchups = 24;
  constexpr int kTrials = 10'000;
  RandomStream rng = RandomStream::for_trial(kGeneratorSeed, 0);
  int cells = 0, misses = 0, impossible = 0;
  double worst_z = 0.0;
  // Misses a correct engine would still produce, normal approximation.
  double expected_misses = 0.0;
  std::string first;
  for (int m = 0; m < kMatchups; ++m) {
    const auto g = random_tiny_matchup(rng, {});
    for (auto model : kAllModels) {
      const auto exact = enumerate_exact(g.matchup, model, g.catalog);
      const auto mc = run_experiment({g.matchup, model, kTrials, kTrialSeed + m}, g.catalog,
                                     {0, true});
      for (const auto& [key, count] : mc.outcome_counts) {
        if (!exact.contains(key) || exact.at(key) <= 0.0) {
          ++impossible;
          if (first.empty()) first = "impossible outcome " + to_string(key);
        }
      }
      for (const auto& [key, p] : exact) {
        const auto it = mc.outcome_counts.find(key);
        const double k = it == mc.outcome_counts.end() ? 0.0 : static_cast<double>(it->second);
        const double sd = std::sqrt(kTrials * p * (1.0 - p));
        const double dev = std::abs(k - kTrials * p);
        ++cells;
        if (sd > 0.0) {
          worst_z = std::max(worst_z, dev / sd);
          expected_misses += std::erfc((3.0 + 0.5 / sd) / std::sqrt(2.0));
        }
        if (dev > 3.0 * sd + 0.5) {
          ++misses;
          if (first.empty()) {
            first = format("matchup %d %s %s: p=%.5f observed %.0f/%d", m,
                           std::string(to_string(model)).c_str(), to_string(key).c_str(), p, k,
                           kTrials);
          }
        }
      }
    }
  }
  Verdict v{misses == 0 && impossible == 0,
            format("%d matchups x 4 models, N=%d, %d outcome cells, %d outside 3 sigma, "
                   "%d impossible, max |z| %.2f, chance alone expects %.2f misses",
                   kMatchups, kTrials, cells, misses, impossible, worst_z, expected_misses)};
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

Verdict determinism() {
  std::vector<std::pair<MatchupSpec, UnitCatalog>> cases;
  for (const auto& m : builtin_matchups()) cases.emplace_back(m, default_catalog());
  RandomStream rng = RandomStream::for_trial(kGeneratorSeed, 1);
  for (int i = 0; i < 8; ++i) {
    auto g = random_tiny_matchup(rng, {});
    cases.emplace_back(g.matchup, g.catalog);
  }
  int compared = 0;
  for (const auto& [matchup, catalog] : cases) {
    for (auto model : kAllModels) {
      const ExperimentSpec spec{matchup, model, 1000, 99};
      const auto serial = to_json(run_experiment(spec, catalog, {1, false}));
      const auto again = to_json(run_experiment(spec, catalog, {1, false}));
      for (unsigned threads : {2u, 3u, 8u}) {
        const auto parallel = to_json(run_experiment(spec, catalog, {threads, false}));
        if (parallel != serial || again != serial) {
          return {false, "mismatch on " + matchup.name + " " + std::string(to_string(model)) +
                             format(" with %u threads", threads)};
        }
        ++compared;
      }
    }
  }
  return {true, format("%d serial/parallel pairs byte-identical (1 vs 2, 3, 8 threads)", compared)};
}

double max_abs_difference(const ExactDistribution& a, const ExactDistribution& b) {
  double worst = 0.0;
  for (const auto& [key, p] : a) {
    const auto it = b.find(key);
    worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, p] : b) {
    if (!a.contains(key)) worst = std::max(worst, p);
  }
  return worst;
}

Verdict degeneracies() {
  struct Case {
    const char* label;
    TinyMatchupShape shape;
    ModelId lower, upper;
  };
  const Case cases[] = {
      {"APX2=APX1 all ranged", {3, true, false, false}, ModelId::Apx1, ModelId::Apx2},
      {"APX3=APX2 no bonus", {3, false, true, false}, ModelId::Apx2, ModelId::Apx3},
      {"APX4=APX3 homogeneous", {3, false, false, true}, ModelId::Apx3, ModelId::Apx4},
  };
  constexpr int kInstances = 50;
  RandomStream rng = RandomStream::for_trial(kGeneratorSeed, 2);
  std::string detail;
  bool pass = true;
  for (const auto& c : cases) {
    double worst = 0.0;
    for (int i = 0; i < kInstances; ++i) {
      const auto g = random_tiny_matchup(rng, c.shape);
      worst = std::max(worst, max_abs_difference(enumerate_exact(g.matchup, c.lower, g.catalog),
                                                 enumerate_exact(g.matchup, c.upper, g.catalog)));
    }
    pass = pass && worst <= 1e-12;
    detail += format("%s%s: max diff %.1e over %d", detail.empty() ? "" : "; ", c.label, worst,
                     kInstances);
  }
  return {pass, detail};
}

double simulated_win1(const MatchupSpec& m, ModelId model, const UnitCatalog& catalog, int trials) {
  return run_experiment({m, model, trials, kTrialSeed}, catalog, {0, false}).reported_win1;
}

// Win1 of one matchup with each unit's health and dps moved by +-20% in turn.
void print_sensitivity(const MatchupSpec& m, ModelId model, std::ostream& out) {
  const auto base = default_catalog();
  constexpr int kTrials = 4000;
  out << "  sensitivity of " << m.name << ' ' << to_string(model) << " win1 (" << kTrials
      << " trials), baseline " << format("%.3f", simulated_win1(m, model, base, kTrials)) << '\n';
  out << "    unit        health-20% health+20%  dps-20%   dps+20%\n";
  for (const auto* army : {&m.army1, &m.army2}) {
    for (const auto& entry : *army) {
      std::string line = format("    %-10s", entry.unit.c_str());
      for (int stat = 0; stat < 2; ++stat) {
        for (double factor : {0.8, 1.2}) {
          auto units = base.units();
          for (auto& u : units) {
            if (u.name != entry.unit) continue;
            if (stat == 0) u.base_health = static_cast<int>(std::lround(u.base_health * factor));
            else u.base_dps *= factor;
          }
          line += format("  %8.3f", simulated_win1(m, model, UnitCatalog(units), kTrials));
        }
      }
      out << line << '\n';
    }
  }
}

Verdict table_rows(std::ostream& out) {
  struct Row {
    int round;
    Pairing pairing;
    ModelId model;
    double lo, hi;
  };
  const Row rows[] = {
      {1, Pairing::PvT, ModelId::Apx1, 0.94, 1.00},
      {4, Pairing::PvT, ModelId::Apx1, 0.98, 1.00},
      {4, Pairing::TvZ, ModelId::Apx4, 0.00, 0.05},
      {1, Pairing::TvZ, ModelId::Apx4, 0.45, 0.65},
  };
  const auto catalog = default_catalog();
  bool pass = true;
  std::string detail;
  std::vector<const Row*> failed;
  for (const auto& r : rows) {
    const auto& m = builtin_matchup({r.round, r.pairing});
    const double w = simulated_win1(m, r.model, catalog, 1000);
    const bool ok = w >= r.lo - 1e-9 && w <= r.hi + 1e-9;
    if (!ok) failed.push_back(&r);
    pass = pass && ok;
    detail += format("%sR%d %s %s %.3f in [%.2f, %.2f]%s", detail.empty() ? "" : "; ", r.round,
                     std::string(to_string(r.pairing)).c_str(),
                     std::string(to_string(r.model)).c_str(), w, r.lo, r.hi, ok ? "" : " NO");
  }
  for (const auto* r : failed) print_sensitivity(builtin_matchup({r->round, r->pairing}), r->model, out);
  return {pass, detail + " (1000 trials)"};
}

Verdict test_rows_are_data() {
  int found = 0;
  for (const auto& m : builtin_matchups()) {
    const auto& row = reference_row(*m.id, std::nullopt);
    if (row.type_label() == "Test") ++found;
  }
  return {found == 12, format("%d of 12 in-game rows present as reference data; none simulated",
                              found)};
}

Verdict mae_ordering() {
  const auto summary = mae_by_model(reference_table());
  const auto* apx3 = summary.find(ModelId::Apx3);
  const auto* apx4 = summary.find(ModelId::Apx4);
  if (!apx3 || !apx4 || !apx3->abs_error_centi || !apx4->abs_error_centi) {
    return {false, "missing model rows"};
  }
  return {*apx3->abs_error_centi < *apx4->abs_error_centi,
          format("sum |dwin1| in hundredths: APX3 %lld vs APX4 %lld (MAE %.4f vs %.4f)",
                 static_cast<long long>(*apx3->abs_error_centi),
                 static_cast<long long>(*apx4->abs_error_centi), apx3->mae, apx4->mae)};
}

Verdict derived_stats() {
  const auto catalog = default_catalog();
  const double zealot = effective_health(catalog.at("zealot"));
  const double dps = effective_dps(catalog.at("hellion"));
  const double bonus = effective_bonus_dps(catalog.at("hellion"));
  return {zealot == 225.0 && dps == 16.0 && bonus == 12.0,
          format("zealot health %.17g, hellion dps %.17g, hellion bonus dps %.17g", zealot, dps,
                 bonus)};
}

Verdict properties() {
  constexpr int kCases = 1000;
  const auto results = run_all_properties(kCases, 0x5eed0003);
  int failed = 0;
  std::string first;
  for (const auto& p : results) {
    if (!p.ok() || p.cases < kCases) {
      ++failed;
      if (first.empty()) first = p.name + ": " + p.first_failure;
    }
  }
  Verdict v{failed == 0, format("%zu properties x %d cases, %d failing", results.size(), kCases,
                                failed)};
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict(std::ostream&)>>> criteria = {
      {"oracle equivalence", [](std::ostream&) { return oracle_equivalence(); }},
      {"determinism", [](std::ostream&) { return determinism(); }},
      {"model degeneracies", [](std::ostream&) { return degeneracies(); }},
      {"reference model rows", table_rows},
      {"in-game rows as data", [](std::ostream&) { return test_rows_are_data(); }},
      {"MAE ordering", [](std::ostream&) { return mae_ordering(); }},
      {"derived unit stats", [](std::ostream&) { return derived_stats(); }},
      {"property suite", [](std::ostream&) { return properties(); }},
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "usage: " << argv[0] << " [1-" << criteria.size() << "]\n";
      return 2;
    }
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    std::ostringstream extra;
    Verdict v;
    try {
      v = criteria[i].second(extra);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first
              << ": " << v.detail << '\n'
              << extra.str() << std::flush;
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
