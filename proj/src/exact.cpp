#include <cmath>

#include "sc2apx/error.hpp"
#include "sc2apx/monte_carlo.hpp"

// Brute-force outcome distribution. Deliberately does not reuse ArmyState or
// the engine's pool and targeting code; only the per-unit derived stats are
// shared.

namespace sc2apx {

namespace {

using Counts = std::vector<int>;

struct ClassStats {
  double health;
  double dps;
  double bonus_dps;
  bool ranged;
  AttributeSet attributes;
  AttributeSet bonus_vs;
};

struct State {
  Counts a1;
  Counts a2;
  bool first_round;

  friend auto operator<=>(const State&, const State&) = default;
};

class Enumerator {
 public:
  Enumerator(std::vector<ClassStats> side1, std::vector<ClassStats> side2, ModelId model,
             std::size_t max_states)
      : side1_(std::move(side1)), side2_(std::move(side2)), model_(model),
        max_states_(max_states) {}

  const ExactDistribution& solve(const State& s) {
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    if (++visited_ > max_states_) {
      throw ExplosionError("exact enumeration exceeded " + std::to_string(max_states_) +
                           " states");
    }
    ExactDistribution result = expand(s);
    return memo_.emplace(s, std::move(result)).first->second;
  }

 private:
  static int total(const Counts& c) {
    int n = 0;
    for (int x : c) n += x;
    return n;
  }

  double pool(const std::vector<ClassStats>& attacker, const Counts& alive,
              const std::vector<ClassStats>& defender, const Counts& defender_alive,
              bool first_round) const {
    const int level = static_cast<int>(model_);
    const bool ranged_only = level >= 1 && first_round;
    double damage = 0.0;
    for (std::size_t i = 0; i < attacker.size(); ++i) {
      if (ranged_only && !attacker[i].ranged) continue;
      damage += alive[i] * attacker[i].dps;
    }
    if (level >= 2) {
      const int targets = total(defender_alive);
      if (targets == 0) return damage;
      double bonus = 0.0;
      for (std::size_t i = 0; i < attacker.size(); ++i) {
        if (alive[i] == 0 || attacker[i].bonus_dps == 0.0) continue;
        if (ranged_only && !attacker[i].ranged) continue;
        int vulnerable = 0;
        for (std::size_t j = 0; j < defender.size(); ++j) {
          if (defender[j].attributes.intersects(attacker[i].bonus_vs)) {
            vulnerable += defender_alive[j];
          }
        }
        bonus += alive[i] * attacker[i].bonus_dps * vulnerable / targets;
      }
      damage += bonus;
    }
    return damage;
  }

  // Distribution of the defender's alive counts after `damage` is spent.
  void spend(double damage, const std::vector<ClassStats>& defender, Counts& alive,
             double weight, std::map<Counts, double>& out) const {
    const bool melee_first = model_ == ModelId::Apx4;
    int melee = 0;
    for (std::size_t i = 0; i < defender.size(); ++i) {
      if (!defender[i].ranged) melee += alive[i];
    }
    const int everyone = total(alive);
    if (damage <= 0.0 || everyone == 0) {
      out[alive] += weight;
      return;
    }
    const bool melee_only = melee_first && melee > 0;
    const int candidates = melee_only ? melee : everyone;
    for (std::size_t i = 0; i < defender.size(); ++i) {
      if (alive[i] == 0 || (melee_only && defender[i].ranged)) continue;
      const double pick = weight * alive[i] / candidates;
      const double h = defender[i].health;
      if (damage >= h) {
        --alive[i];
        spend(damage - h, defender, alive, pick, out);
        ++alive[i];
      } else {
        const double p_kill = damage / h;
        out[alive] += pick * (1.0 - p_kill);
        --alive[i];
        out[alive] += pick * p_kill;
        ++alive[i];
      }
    }
  }

  static OutcomeKey terminal(const Counts& a1, const Counts& a2) {
    const bool dead1 = total(a1) == 0;
    const bool dead2 = total(a2) == 0;
    const Winner w = dead1 == dead2 ? Winner::Draw : (dead2 ? Winner::Army1 : Winner::Army2);
    return {w, a1, a2};
  }

  ExactDistribution expand(const State& s) {
    if (total(s.a1) == 0 || total(s.a2) == 0) return {{terminal(s.a1, s.a2), 1.0}};

    const double pool1 = pool(side1_, s.a1, side2_, s.a2, s.first_round);
    const double pool2 = pool(side2_, s.a2, side1_, s.a1, s.first_round);
    if (!s.first_round && pool1 == 0.0 && pool2 == 0.0) {
      // Nobody can deal damage: the engine would run into its round cap.
      return {{terminal(s.a1, s.a2), 1.0}};
    }

    std::map<Counts, double> next2;
    std::map<Counts, double> next1;
    Counts scratch = s.a2;
    spend(pool1, side2_, scratch, 1.0, next2);
    scratch = s.a1;
    spend(pool2, side1_, scratch, 1.0, next1);

    // Probability that the round leaves the state unchanged.
    double stay = 0.0;
    if (!s.first_round) {
      auto it1 = next1.find(s.a1);
      auto it2 = next2.find(s.a2);
      if (it1 != next1.end() && it2 != next2.end()) stay = it1->second * it2->second;
    }

    ExactDistribution result;
    for (const auto& [a1, p1] : next1) {
      for (const auto& [a2, p2] : next2) {
        State next{a1, a2, false};
        if (!s.first_round && next.a1 == s.a1 && next.a2 == s.a2) continue;
        const double p = p1 * p2 / (1.0 - stay);
        if (p == 0.0) continue;
        for (const auto& [key, q] : solve(next)) result[key] += p * q;
      }
    }
    return result;
  }

  std::vector<ClassStats> side1_;
  std::vector<ClassStats> side2_;
  ModelId model_;
  std::size_t max_states_;
  std::size_t visited_ = 0;
  std::map<State, ExactDistribution> memo_;
};

std::vector<ClassStats> stats_for(const std::vector<ArmyEntry>& army, const UnitCatalog& catalog,
                                  int max_units, const char* side) {
  std::vector<ClassStats> out;
  int units = 0;
  for (const auto& entry : army) {
    const auto& u = catalog.at(entry.unit);
    out.push_back({effective_health(u), effective_dps(u), effective_bonus_dps(u), u.ranged,
                   u.attributes, u.bonus_vs});
    units += entry.count;
  }
  if (units > max_units) {
    throw ExplosionError(std::string(side) + " has " + std::to_string(units) +
                         " units; exact enumeration allows " + std::to_string(max_units));
  }
  return out;
}

}  // namespace

ExactDistribution enumerate_exact(const MatchupSpec& matchup, ModelId model,
                                  const UnitCatalog& catalog, const ExactLimits& limits) {
  validate(matchup, catalog);
  auto side1 = stats_for(matchup.army1, catalog, limits.max_units_per_side, "army1");
  auto side2 = stats_for(matchup.army2, catalog, limits.max_units_per_side, "army2");
  State start{{}, {}, true};
  for (const auto& e : matchup.army1) start.a1.push_back(e.count);
  for (const auto& e : matchup.army2) start.a2.push_back(e.count);
  Enumerator enumerator(std::move(side1), std::move(side2), model, limits.max_states);
  return enumerator.solve(start);
}

}  // namespace sc2apx
