#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sc2apx/combat.hpp"
#include "sc2apx/scenarios.hpp"
#include "sc2apx/unit_catalog.hpp"

namespace sc2apx {

inline constexpr int kDefaultTrials = 1000;

struct ExperimentSpec {
  MatchupSpec matchup;
  ModelId model = ModelId::Apx4;
  int trials = kDefaultTrials;
  std::uint64_t master_seed = 0;
};

// Terminal state of one battle: who won and what is left of each army.
struct OutcomeKey {
  Winner winner = Winner::Draw;
  std::vector<int> survivors1;
  std::vector<int> survivors2;

  friend auto operator<=>(const OutcomeKey&, const OutcomeKey&) = default;
};

std::string to_string(const OutcomeKey& key);  // e.g. "army1 [1,0] vs [0]"

/*!
 * Summary of N trials.
 *
 * Counts are exact integers; every fraction is derived from them at the end,
 * so the result does not depend on the order in which trials were merged.
 * Survivor means are conditioned on that army winning and are absent when
 * the army never won.
 */
struct AggregateResult {
  ExperimentSpec spec;
  std::int64_t wins1 = 0;
  std::int64_t wins2 = 0;
  std::int64_t draws = 0;       // includes stalemates
  std::int64_t stalemates = 0;
  std::int64_t total_rounds = 0;

  double win1 = 0.0;
  double win2 = 0.0;
  double draw = 0.0;
  // Draws split evenly; reported_win1 + reported_win2 == 1.
  double reported_win1 = 0.0;
  double reported_win2 = 0.0;
  std::optional<std::vector<double>> mean_survivors1;
  std::optional<std::vector<double>> mean_survivors2;
  double mean_rounds = 0.0;

  // Per-outcome trial counts; filled only when requested in RunOptions.
  std::map<OutcomeKey, std::int64_t> outcome_counts;
};

struct RunOptions {
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
  bool collect_outcomes = false;
};

/*!
 * Runs spec.trials independent battles. Trial i draws from
 * RandomStream::for_trial(spec.master_seed, i), so the result is identical
 * for any thread count. Stalemates are counted as draws, not thrown.
 */
AggregateResult run_experiment(const ExperimentSpec& spec, const UnitCatalog& catalog,
                               const RunOptions& options = {});

// Canonical JSON encoding of every field except outcome_counts.
std::string to_json(const AggregateResult& result);

// Exact terminal-outcome probabilities.
using ExactDistribution = std::map<OutcomeKey, double>;

struct ExactLimits {
  int max_units_per_side = 4;
  // Distinct (alive counts, first-round flag) states the search may visit.
  std::size_t max_states = 50'000;
};

/*!
 * Exhaustive expansion of the battle's probability tree over every target
 * selection and every probabilistic kill. Rounds that change nothing are
 * folded in analytically, so battles of unbounded length are handled
 * exactly. States where neither side can deal damage terminate as a Draw
 * with the survivors left standing, matching a capped Monte Carlo trial.
 *
 * This is an independent oracle for the Monte Carlo engine: it shares only
 * the derived unit stats with it. Throws ExplosionError past `limits`.
 */
ExactDistribution enumerate_exact(const MatchupSpec& matchup, ModelId model,
                                  const UnitCatalog& catalog,
                                  const ExactLimits& limits = {});

}  // namespace sc2apx
