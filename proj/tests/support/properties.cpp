#include "support/properties.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "sc2apx/combat.hpp"
#include "sc2apx/monte_carlo.hpp"
#include "sc2apx/report.hpp"
#include "sc2apx/scenarios.hpp"
#include "support/generators.hpp"

namespace sc2apx::testing {

namespace {

using Check = std::function<std::optional<std::string>(RandomStream&)>;

PropertyResult check_property(const std::string& name, int cases, std::uint64_t seed,
                              const Check& check) {
  PropertyResult result{name, 0, 0, {}};
  for (int i = 0; i < cases; ++i) {
    auto rng = RandomStream::for_trial(seed, static_cast<std::uint64_t>(i));
    ++result.cases;
    std::optional<std::string> failure;
    try {
      failure = check(rng);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (failure) {
      if (result.failures++ == 0) result.first_failure = "case " + std::to_string(i) + ": " + *failure;
    }
  }
  return result;
}

ArmyState random_army(RandomStream& rng, const std::string& prefix, int max_classes, int max_count) {
  std::vector<std::pair<UnitClass, int>> groups;
  const int classes = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_classes)));
  for (int c = 0; c < classes; ++c) {
    groups.emplace_back(random_unit(rng, prefix + std::to_string(c)),
                        1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_count))));
  }
  return ArmyState(groups);
}

double max_abs_difference(const ExactDistribution& a, const ExactDistribution& b) {
  double worst = 0.0;
  for (const auto& [key, p] : a) {
    auto it = b.find(key);
    worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, p] : b) {
    if (!a.contains(key)) worst = std::max(worst, p);
  }
  return worst;
}

std::optional<std::string> degeneracy(RandomStream& rng, TinyMatchupShape shape, ModelId lower,
                                      ModelId upper) {
  const auto g = random_tiny_matchup(rng, shape);
  const auto a = enumerate_exact(g.matchup, lower, g.catalog);
  const auto b = enumerate_exact(g.matchup, upper, g.catalog);
  const double diff = max_abs_difference(a, b);
  if (diff > 1e-12) {
    return std::string(to_string(lower)) + " vs " + std::string(to_string(upper)) +
           " differ by " + std::to_string(diff);
  }
  return std::nullopt;
}

}  // namespace

std::vector<PropertyResult> run_all_properties(int cases, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  auto add = [&](const std::string& name, const Check& check) {
    out.push_back(check_property(name, cases, mix64(seed ^ std::hash<std::string>{}(name)), check));
  };

  // unit-catalog
  add("effective_health monotone in health, shields, armor", [](RandomStream& rng) -> std::optional<std::string> {
    auto u = random_unit(rng, "u");
    const double before = effective_health(u);
    for (int field = 0; field < 3; ++field) {
      auto v = u;
      (field == 0 ? v.base_health : field == 1 ? v.shields : v.armor) += 1;
      if (effective_health(v) < before) return "decreased when raising field " + std::to_string(field);
    }
    return std::nullopt;
  });
  add("effective dps and bonus dps at least their base values", [](RandomStream& rng) -> std::optional<std::string> {
    const auto u = random_unit(rng, "u");
    if (effective_dps(u) < u.base_dps) return "effective_dps < base_dps";
    if (effective_bonus_dps(u) < u.bonus_base_dps) return "effective_bonus_dps < bonus_base_dps";
    return std::nullopt;
  });
  add("catalog load/serialize/load round trip", [](RandomStream& rng) -> std::optional<std::string> {
    std::vector<UnitClass> units;
    const int n = static_cast<int>(rng.uniform_index(6));
    for (int i = 0; i < n; ++i) {
      auto u = random_unit(rng, "unit" + std::to_string(i));
      if (rng.uniform01() < 0.5) u.note = "note \"" + std::to_string(i) + "\"";
      units.push_back(std::move(u));
    }
    const UnitCatalog catalog(std::move(units));
    const auto reloaded = load_catalog(serialize_catalog(catalog));
    if (!(reloaded == catalog)) return "reloaded catalog differs";
    if (serialize_catalog(reloaded) != serialize_catalog(catalog)) return "re-serialization differs";
    return std::nullopt;
  });

  // combat-engine
  add("apply_pool kill bound and survivor bounds", [](RandomStream& rng) -> std::optional<std::string> {
    auto defender = random_army(rng, "d", 3, 6);
    const double pool = rng.uniform01() * 400.0;
    double min_health = 1e300;
    for (std::size_t i = 0; i < defender.class_count(); ++i) {
      min_health = std::min(min_health, defender.combatant(i).health);
    }
    const auto policy = rng.uniform01() < 0.5 ? TargetPolicy::UniformRandom : TargetPolicy::MeleeFirst;
    const int kills = apply_pool(pool, defender, policy, rng);
    if (kills > static_cast<int>(std::ceil(pool / min_health))) return "too many kills";
    int alive = 0;
    for (std::size_t i = 0; i < defender.class_count(); ++i) {
      if (defender.alive(i) < 0 || defender.alive(i) > defender.initial(i)) return "count out of range";
      alive += defender.alive(i);
    }
    if (alive + kills != defender.initial_total()) return "kill count inconsistent with survivors";
    return std::nullopt;
  });
  add("pools non-negative, bonus fraction within [0,1]", [](RandomStream& rng) -> std::optional<std::string> {
    auto a = random_army(rng, "a", 3, 5);
    auto b = random_army(rng, "b", 3, 5);
    apply_pool(rng.uniform01() * 200.0, b, TargetPolicy::UniformRandom, rng);
    if (b.defeated()) return std::nullopt;
    double full_bonus = 0.0;
    for (std::size_t i = 0; i < a.class_count(); ++i) full_bonus += a.alive(i) * a.combatant(i).bonus_dps;
    const bool ranged_only = rng.uniform01() < 0.5;
    const double bonus = bonus_pool(a, b, ranged_only);
    if (bonus < 0.0 || bonus > full_bonus * (1 + 1e-12)) return "bonus pool outside [0, full bonus]";
    for (auto model : kAllModels) {
      for (bool first : {true, false}) {
        if (compute_pool(a, b, model, first) < 0.0) return "negative pool";
      }
    }
    return std::nullopt;
  });
  add("melee units contribute nothing to the opening round from APX2 on", [](RandomStream& rng) -> std::optional<std::string> {
    const auto a = random_army(rng, "a", 3, 5);
    const auto b = random_army(rng, "b", 3, 5);
    std::vector<std::pair<UnitClass, int>> ranged_only;
    for (std::size_t i = 0; i < a.class_count(); ++i) {
      if (a.combatant(i).unit.ranged) ranged_only.emplace_back(a.combatant(i).unit, a.alive(i));
    }
    const ArmyState stripped(ranged_only);
    for (auto model : {ModelId::Apx2, ModelId::Apx3, ModelId::Apx4}) {
      const double with_melee = compute_pool(a, b, model, true);
      const double without = compute_pool(stripped, b, model, true);
      if (std::abs(with_melee - without) > 1e-9 * (1 + without)) return "melee contributed in round one";
    }
    return std::nullopt;
  });
  add("run_trial reproducible and outcome consistent", [](RandomStream& rng) -> std::optional<std::string> {
    const auto g = random_tiny_matchup(rng, {.max_units_per_side = 6});
    const auto a = make_army(g.matchup.army1, g.catalog);
    const auto b = make_army(g.matchup.army2, g.catalog);
    const auto model = kAllModels[rng.uniform_index(4)];
    const auto seed = rng();
    auto r1 = RandomStream(seed);
    auto r2 = RandomStream(seed);
    const auto t1 = simulate_trial(a, b, model, r1);
    const auto t2 = simulate_trial(a, b, model, r2);
    if (t1.winner != t2.winner || t1.survivors1 != t2.survivors1 || t1.survivors2 != t2.survivors2 ||
        t1.rounds != t2.rounds) {
      return "same seed, different outcome";
    }
    auto total = [](const std::vector<int>& v) { int n = 0; for (int x : v) n += x; return n; };
    for (std::size_t i = 0; i < t1.survivors1.size(); ++i) {
      if (t1.survivors1[i] > a.initial(i)) return "survivors exceed initial";
    }
    const int s1 = total(t1.survivors1), s2 = total(t1.survivors2);
    switch (t1.winner) {
      case Winner::Army1: if (s1 == 0 || s2 != 0) return "bad Army1 outcome"; break;
      case Winner::Army2: if (s2 == 0 || s1 != 0) return "bad Army2 outcome"; break;
      case Winner::Draw:
        if (!((s1 == 0 && s2 == 0) || (t1.stalemate && s1 > 0 && s2 > 0))) return "bad Draw outcome";
        break;
    }
    if (t1.rounds < 1) return "rounds must be positive";
    return std::nullopt;
  });
  add("APX2 equals APX1 when every unit is ranged (exact)", [](RandomStream& rng) {
    return degeneracy(rng, {.force_all_ranged = true}, ModelId::Apx1, ModelId::Apx2);
  });
  add("APX3 equals APX2 without bonus damage (exact)", [](RandomStream& rng) {
    return degeneracy(rng, {.force_no_bonus = true}, ModelId::Apx2, ModelId::Apx3);
  });
  add("APX4 equals APX3 for melee/ranged-homogeneous armies (exact)", [](RandomStream& rng) {
    return degeneracy(rng, {.force_homogeneous = true}, ModelId::Apx3, ModelId::Apx4);
  });

  // monte-carlo
  add("aggregate fractions sum exactly", [](RandomStream& rng) -> std::optional<std::string> {
    const auto g = random_tiny_matchup(rng, {.max_units_per_side = 4});
    const ExperimentSpec spec{g.matchup, kAllModels[rng.uniform_index(4)],
                              1 + static_cast<int>(rng.uniform_index(40)), rng()};
    const auto r = run_experiment(spec, g.catalog);
    if (r.wins1 + r.wins2 + r.draws != spec.trials) return "counts do not sum to trials";
    if (r.reported_win1 + r.reported_win2 != 1.0) return "reported fractions do not sum to 1";
    for (double f : {r.win1, r.win2, r.draw, r.reported_win1, r.reported_win2}) {
      if (f < 0.0 || f > 1.0) return "fraction outside [0,1]";
    }
    if (r.mean_survivors1.has_value() != (r.wins1 > 0)) return "army1 mean presence wrong";
    if (r.mean_survivors2.has_value() != (r.wins2 > 0)) return "army2 mean presence wrong";
    return std::nullopt;
  });
  add("serial and parallel runs are byte-identical", [](RandomStream& rng) -> std::optional<std::string> {
    const auto g = random_tiny_matchup(rng, {.max_units_per_side = 5});
    const ExperimentSpec spec{g.matchup, kAllModels[rng.uniform_index(4)],
                              1 + static_cast<int>(rng.uniform_index(64)), rng()};
    const auto serial = run_experiment(spec, g.catalog, {1, true});
    const auto parallel = run_experiment(spec, g.catalog, {1 + static_cast<unsigned>(rng.uniform_index(7)), true});
    if (to_json(serial) != to_json(parallel)) return "json differs";
    if (serial.outcome_counts != parallel.outcome_counts) return "outcome counts differ";
    return std::nullopt;
  });
  add("exact distribution sums to 1 and mirrors under label swap", [](RandomStream& rng) -> std::optional<std::string> {
    auto g = random_tiny_matchup(rng);
    const auto model = kAllModels[rng.uniform_index(4)];
    const auto dist = enumerate_exact(g.matchup, model, g.catalog);
    double sum = 0.0;
    for (const auto& [_, p] : dist) sum += p;
    if (std::abs(sum - 1.0) > 1e-12) return "sum " + std::to_string(sum);

    MatchupSpec swapped = g.matchup;
    std::swap(swapped.army1, swapped.army2);
    const auto mirror = enumerate_exact(swapped, model, g.catalog);
    for (const auto& [key, p] : dist) {
      OutcomeKey flipped{key.winner == Winner::Army1   ? Winner::Army2
                         : key.winner == Winner::Army2 ? Winner::Army1
                                                       : Winner::Draw,
                         key.survivors2, key.survivors1};
      auto it = mirror.find(flipped);
      if (it == mirror.end() || std::abs(it->second - p) > 1e-12) return "not symmetric under swap";
    }
    return std::nullopt;
  });

  // cli-report
  add("CSV report round trip at emitted precision", [](RandomStream& rng) -> std::optional<std::string> {
    std::vector<ResultRow> rows;
    const int n = 1 + static_cast<int>(rng.uniform_index(5));
    for (int i = 0; i < n; ++i) {
      ResultRow r;
      r.round = rng.uniform01() < 0.5 ? std::to_string(1 + rng.uniform_index(4)) : "";
      r.type = std::string(to_string(kAllModels[rng.uniform_index(4)]));
      r.match = rng.uniform01() < 0.3 ? "my, \"odd\" scenario" : "PvT";
      for (auto* side : {&r.survivors1, &r.survivors2}) {
        const bool absent = rng.uniform01() < 0.2;
        const int cols = 4 + static_cast<int>(rng.uniform_index(2));
        for (int k = 0; k < cols; ++k) {
          side->push_back(absent ? std::nullopt : std::optional(rng.uniform01() * 40.0));
        }
      }
      r.win1 = rng.uniform01();
      r.win2 = 1.0 - r.win1;
      rows.push_back(std::move(r));
    }
    std::ostringstream first;
    write_rows(first, rows, ReportFormat::Csv);
    const auto parsed = parse_rows_csv(first.str());
    if (parsed.size() != rows.size()) return "row count changed";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (parsed[i].round != rows[i].round || parsed[i].match != rows[i].match) return "label changed";
      if (std::abs(parsed[i].win1 - rows[i].win1) > 0.005 + 1e-12) return "win1 beyond precision";
      for (std::size_t k = 0; k < rows[i].survivors1.size(); ++k) {
        const auto& a = rows[i].survivors1[k];
        const auto& b = parsed[i].survivors1[k];
        if (a.has_value() != b.has_value() || (a && std::abs(*a - *b) > 0.05 + 1e-12)) {
          return "survivor beyond precision";
        }
      }
    }
    std::ostringstream second;
    write_rows(second, parsed, ReportFormat::Csv);
    if (second.str() != first.str()) return "re-emitted CSV differs";
    return std::nullopt;
  });
  add("MAE within [0,1] and zero for perfect models", [](RandomStream& rng) -> std::optional<std::string> {
    auto rows = reference_table();
    const bool perfect = rng.uniform01() < 0.3;
    std::map<MatchupId, int> test;
    for (const auto& r : rows) {
      if (!r.model) test[r.id()] = r.win1_centi;
    }
    for (auto& r : rows) {
      if (!r.model) continue;
      r.win1_centi = perfect ? test[r.id()] : static_cast<int>(rng.uniform_index(101));
      r.win2_centi = 100 - r.win1_centi;
    }
    const auto summary = mae_by_model(rows);
    if (summary.models.size() != 4) return "expected four models";
    for (const auto& m : summary.models) {
      if (m.mae < 0.0 || m.mae > 1.0) return "MAE outside [0,1]";
      if (perfect && m.mae != 0.0) return "perfect model with nonzero MAE";
    }
    return std::nullopt;
  });
  return out;
}

}  // namespace sc2apx::testing
