#include "sc2apx/combat.hpp"

#include <cctype>

#include "sc2apx/error.hpp"

namespace sc2apx {

std::string_view to_string(ModelId model) {
  switch (model) {
    case ModelId::Apx1: return "APX1";
    case ModelId::Apx2: return "APX2";
    case ModelId::Apx3: return "APX3";
    case ModelId::Apx4: return "APX4";
  }
  return "?";
}

std::optional<ModelId> parse_model(std::string_view text) {
  if (text.size() != 4) return std::nullopt;
  std::string upper;
  for (char c : text) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto model : kAllModels) {
    if (upper == to_string(model)) return model;
  }
  return std::nullopt;
}

std::string_view to_string(Winner winner) {
  switch (winner) {
    case Winner::Army1: return "army1";
    case Winner::Army2: return "army2";
    case Winner::Draw: return "draw";
  }
  return "?";
}

Combatant::Combatant(UnitClass u)
    : unit(std::move(u)),
      health(effective_health(unit)),
      dps(effective_dps(unit)),
      bonus_dps(effective_bonus_dps(unit)) {}

ArmyState::ArmyState(const std::vector<std::pair<UnitClass, int>>& groups) {
  auto roster = std::make_shared<Roster>();
  for (const auto& [unit, count] : groups) {
    if (count < 0) {
      throw ValidationError("negative count for unit '" + unit.name + "'");
    }
    roster->classes.emplace_back(unit);
    roster->initial.push_back(count);
    roster->initial_total += count;
  }
  roster_ = std::move(roster);
  reset();
}

void ArmyState::reset() {
  alive_ = roster_->initial;
  total_alive_ = roster_->initial_total;
  melee_alive_ = 0;
  for (std::size_t i = 0; i < alive_.size(); ++i) {
    if (!roster_->classes[i].unit.ranged) melee_alive_ += alive_[i];
  }
}

double ArmyState::total_effective_health() const {
  double total = 0.0;
  for (std::size_t i = 0; i < alive_.size(); ++i) {
    total += alive_[i] * roster_->classes[i].health;
  }
  return total;
}

void ArmyState::kill(std::size_t i) {
  --alive_[i];
  --total_alive_;
  if (!roster_->classes[i].unit.ranged) --melee_alive_;
}

double bonus_pool(const ArmyState& attacker, const ArmyState& defender,
                  bool ranged_only) {
  const int defenders = defender.total_alive();
  if (defenders == 0) return 0.0;
  double pool = 0.0;
  for (std::size_t i = 0; i < attacker.class_count(); ++i) {
    const auto& c = attacker.combatant(i);
    if (attacker.alive(i) == 0 || c.bonus_dps == 0.0) continue;
    if (ranged_only && !c.unit.ranged) continue;
    int vulnerable = 0;
    for (std::size_t j = 0; j < defender.class_count(); ++j) {
      if (defender.combatant(j).unit.attributes.intersects(c.unit.bonus_vs)) {
        vulnerable += defender.alive(j);
      }
    }
    pool += attacker.alive(i) * c.bonus_dps * vulnerable / defenders;
  }
  return pool;
}

double compute_pool(const ArmyState& attacker, const ArmyState& defender,
                    ModelId model, bool is_first_round) {
  const auto f = features(model);
  const bool ranged_only = f.ranged_opening && is_first_round;
  double pool = 0.0;
  for (std::size_t i = 0; i < attacker.class_count(); ++i) {
    const auto& c = attacker.combatant(i);
    if (ranged_only && !c.unit.ranged) continue;
    pool += attacker.alive(i) * c.dps;
  }
  if (f.bonus_pools) pool += bonus_pool(attacker, defender, ranged_only);
  return pool;
}

namespace {

std::size_t pick_target(const ArmyState& defender, bool melee_only,
                        RandomStream& rng) {
  const int candidates = melee_only ? defender.melee_alive() : defender.total_alive();
  auto ticket = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(candidates)));
  for (std::size_t i = 0; i < defender.class_count(); ++i) {
    if (melee_only && defender.combatant(i).unit.ranged) continue;
    if (ticket < defender.alive(i)) return i;
    ticket -= defender.alive(i);
  }
  return defender.class_count();  // unreachable while counts are consistent
}

}  // namespace

int apply_pool(double pool, ArmyState& defender, TargetPolicy policy,
               RandomStream& rng) {
  int kills = 0;
  while (pool > 0.0 && !defender.defeated()) {
    const bool melee_only =
        policy == TargetPolicy::MeleeFirst && defender.melee_alive() > 0;
    const std::size_t target = pick_target(defender, melee_only, rng);
    const double health = defender.combatant(target).health;
    if (pool >= health) {
      defender.kill(target);
      ++kills;
      pool -= health;
    } else {
      if (rng.uniform01() < pool / health) {
        defender.kill(target);
        ++kills;
      }
      pool = 0.0;
    }
  }
  return kills;
}

void step_round(ArmyState& army1, ArmyState& army2, ModelId model,
                bool is_first_round, RandomStream& rng) {
  const double pool1 = compute_pool(army1, army2, model, is_first_round);
  const double pool2 = compute_pool(army2, army1, model, is_first_round);
  const auto policy = features(model).policy;
  apply_pool(pool1, army2, policy, rng);
  apply_pool(pool2, army1, policy, rng);
}

TrialOutcome simulate_trial(ArmyState army1, ArmyState army2, ModelId model,
                            RandomStream& rng) {
  TrialOutcome outcome;
  while (!army1.defeated() && !army2.defeated() && outcome.rounds < kRoundCap) {
    step_round(army1, army2, model, outcome.rounds == 0, rng);
    ++outcome.rounds;
  }
  if (army1.defeated() == army2.defeated()) {
    outcome.winner = Winner::Draw;
    outcome.stalemate = !army1.defeated();
  } else {
    outcome.winner = army2.defeated() ? Winner::Army1 : Winner::Army2;
  }
  outcome.survivors1.assign(army1.alive_counts().begin(), army1.alive_counts().end());
  outcome.survivors2.assign(army2.alive_counts().begin(), army2.alive_counts().end());
  return outcome;
}

TrialOutcome run_trial(ArmyState army1, ArmyState army2, ModelId model,
                       RandomStream& rng) {
  auto outcome = simulate_trial(std::move(army1), std::move(army2), model, rng);
  if (outcome.stalemate) throw StalemateError(outcome.rounds);
  return outcome;
}

}  // namespace sc2apx
