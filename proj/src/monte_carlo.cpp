#include "sc2apx/monte_carlo.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sc2apx/error.hpp"

namespace sc2apx {

namespace {

// Integer tallies for a contiguous block of trials.
struct Tally {
  std::int64_t wins1 = 0;
  std::int64_t wins2 = 0;
  std::int64_t draws = 0;
  std::int64_t stalemates = 0;
  std::int64_t rounds = 0;
  std::vector<std::int64_t> survivor_sum1;
  std::vector<std::int64_t> survivor_sum2;
  std::map<OutcomeKey, std::int64_t> outcomes;

  Tally(std::size_t classes1, std::size_t classes2)
      : survivor_sum1(classes1, 0), survivor_sum2(classes2, 0) {}

  void add(TrialOutcome&& t, bool collect) {
    rounds += t.rounds;
    switch (t.winner) {
      case Winner::Army1:
        ++wins1;
        for (std::size_t i = 0; i < t.survivors1.size(); ++i) survivor_sum1[i] += t.survivors1[i];
        break;
      case Winner::Army2:
        ++wins2;
        for (std::size_t i = 0; i < t.survivors2.size(); ++i) survivor_sum2[i] += t.survivors2[i];
        break;
      case Winner::Draw:
        ++draws;
        if (t.stalemate) ++stalemates;
        break;
    }
    if (collect) {
      ++outcomes[OutcomeKey{t.winner, std::move(t.survivors1), std::move(t.survivors2)}];
    }
  }

  void merge(const Tally& other) {
    wins1 += other.wins1;
    wins2 += other.wins2;
    draws += other.draws;
    stalemates += other.stalemates;
    rounds += other.rounds;
    for (std::size_t i = 0; i < survivor_sum1.size(); ++i) survivor_sum1[i] += other.survivor_sum1[i];
    for (std::size_t i = 0; i < survivor_sum2.size(); ++i) survivor_sum2[i] += other.survivor_sum2[i];
    for (const auto& [key, count] : other.outcomes) outcomes[key] += count;
  }
};

std::optional<std::vector<double>> conditional_means(const std::vector<std::int64_t>& sums,
                                                     std::int64_t wins) {
  if (wins == 0) return std::nullopt;
  std::vector<double> means;
  for (auto s : sums) means.push_back(static_cast<double>(s) / static_cast<double>(wins));
  return means;
}

}  // namespace

std::string to_string(const OutcomeKey& key) {
  std::ostringstream out;
  auto list = [&](const std::vector<int>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << ']';
  };
  out << to_string(key.winner) << ' ';
  list(key.survivors1);
  out << " vs ";
  list(key.survivors2);
  return out.str();
}

AggregateResult run_experiment(const ExperimentSpec& spec, const UnitCatalog& catalog,
                               const RunOptions& options) {
  if (spec.trials < 1) throw ValidationError("trials must be >= 1");
  validate(spec.matchup, catalog);
  const ArmyState army1 = make_army(spec.matchup.army1, catalog);
  const ArmyState army2 = make_army(spec.matchup.army2, catalog);

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.trials));

  std::vector<Tally> tallies(threads, Tally(army1.class_count(), army2.class_count()));
  auto run_block = [&](unsigned block) {
    const std::int64_t begin = std::int64_t{spec.trials} * block / threads;
    const std::int64_t end = std::int64_t{spec.trials} * (block + 1) / threads;
    for (std::int64_t i = begin; i < end; ++i) {
      auto rng = RandomStream::for_trial(spec.master_seed, static_cast<std::uint64_t>(i));
      tallies[block].add(simulate_trial(army1, army2, spec.model, rng),
                         options.collect_outcomes);
    }
  };
  if (threads == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned b = 0; b < threads; ++b) workers.emplace_back(run_block, b);
  }
  Tally total(army1.class_count(), army2.class_count());
  for (const auto& t : tallies) total.merge(t);

  AggregateResult r;
  r.spec = spec;
  r.wins1 = total.wins1;
  r.wins2 = total.wins2;
  r.draws = total.draws;
  r.stalemates = total.stalemates;
  r.total_rounds = total.rounds;
  const auto n = static_cast<double>(spec.trials);
  r.win1 = static_cast<double>(r.wins1) / n;
  r.win2 = static_cast<double>(r.wins2) / n;
  r.draw = static_cast<double>(r.draws) / n;
  r.reported_win1 = static_cast<double>(2 * r.wins1 + r.draws) / (2.0 * n);
  r.reported_win2 = 1.0 - r.reported_win1;
  r.mean_survivors1 = conditional_means(total.survivor_sum1, r.wins1);
  r.mean_survivors2 = conditional_means(total.survivor_sum2, r.wins2);
  r.mean_rounds = static_cast<double>(r.total_rounds) / n;
  r.outcome_counts = std::move(total.outcomes);
  return r;
}

std::string to_json(const AggregateResult& r) {
  using json = nlohmann::ordered_json;
  auto army = [](const std::vector<ArmyEntry>& entries) {
    json out = json::object();
    for (const auto& e : entries) out[e.unit] = e.count;
    return out;
  };
  auto means = [](const std::optional<std::vector<double>>& m) {
    return m ? json(*m) : json(nullptr);
  };
  json doc;
  doc["matchup"] = r.spec.matchup.name;
  doc["army1"] = army(r.spec.matchup.army1);
  doc["army2"] = army(r.spec.matchup.army2);
  doc["model"] = std::string(to_string(r.spec.model));
  doc["trials"] = r.spec.trials;
  doc["seed"] = r.spec.master_seed;
  doc["wins1"] = r.wins1;
  doc["wins2"] = r.wins2;
  doc["draws"] = r.draws;
  doc["stalemates"] = r.stalemates;
  doc["win1"] = r.win1;
  doc["win2"] = r.win2;
  doc["draw"] = r.draw;
  doc["reported_win1"] = r.reported_win1;
  doc["reported_win2"] = r.reported_win2;
  doc["mean_survivors1"] = means(r.mean_survivors1);
  doc["mean_survivors2"] = means(r.mean_survivors2);
  doc["mean_rounds"] = r.mean_rounds;
  return doc.dump();
}

}  // namespace sc2apx
