#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sc2apx/rng.hpp"
#include "sc2apx/unit_catalog.hpp"

namespace sc2apx {

// The four approximation models. Each enables exactly one feature over the
// previous one: Apx2 the ranged opening volley, Apx3 bonus-damage pools,
// Apx4 melee-first targeting.
enum class ModelId { Apx1, Apx2, Apx3, Apx4 };

inline constexpr ModelId kAllModels[] = {ModelId::Apx1, ModelId::Apx2,
                                         ModelId::Apx3, ModelId::Apx4};

std::string_view to_string(ModelId model);  // "APX1".."APX4"
std::optional<ModelId> parse_model(std::string_view text);  // case-insensitive

enum class TargetPolicy { UniformRandom, MeleeFirst };

struct ModelFeatures {
  bool ranged_opening = false;  // only ranged units fire in round one
  bool bonus_pools = false;     // add attribute-weighted bonus damage
  TargetPolicy policy = TargetPolicy::UniformRandom;
};

constexpr ModelFeatures features(ModelId model) {
  const int level = static_cast<int>(model);
  return {level >= 1, level >= 2,
          level >= 3 ? TargetPolicy::MeleeFirst : TargetPolicy::UniformRandom};
}

// A unit class with its derived combat stats precomputed.
struct Combatant {
  UnitClass unit;
  double health = 0.0;     // effective_health(unit)
  double dps = 0.0;        // effective_dps(unit)
  double bonus_dps = 0.0;  // effective_bonus_dps(unit)

  explicit Combatant(UnitClass u);
};

/*!
 * Alive-unit counts per class for one side of a battle.
 *
 * Units are either alive at full effective health or dead; no partial damage
 * is carried between rounds. The class list and initial counts are shared
 * and immutable, so copying an ArmyState only copies the alive counts.
 */
class ArmyState {
 public:
  ArmyState() = default;
  explicit ArmyState(const std::vector<std::pair<UnitClass, int>>& groups);

  std::size_t class_count() const { return alive_.size(); }
  const Combatant& combatant(std::size_t i) const { return roster_->classes[i]; }
  int initial(std::size_t i) const { return roster_->initial[i]; }
  int alive(std::size_t i) const { return alive_[i]; }
  std::span<const int> alive_counts() const { return alive_; }

  int total_alive() const { return total_alive_; }
  int melee_alive() const { return melee_alive_; }
  int initial_total() const { return roster_->initial_total; }
  bool defeated() const { return total_alive_ == 0; }
  double total_effective_health() const;

  void kill(std::size_t i);
  // Restores every class to its initial count.
  void reset();

 private:
  struct Roster {
    std::vector<Combatant> classes;
    std::vector<int> initial;
    int initial_total = 0;
  };

  std::shared_ptr<const Roster> roster_;
  std::vector<int> alive_;
  int total_alive_ = 0;
  int melee_alive_ = 0;
};

enum class Winner { Army1, Army2, Draw };

std::string_view to_string(Winner winner);

struct TrialOutcome {
  Winner winner = Winner::Draw;
  std::vector<int> survivors1;
  std::vector<int> survivors2;
  int rounds = 0;
  // Round cap reached with both armies alive; reported as a Draw.
  bool stalemate = false;
};

inline constexpr int kRoundCap = 10'000;

// Sum over alive attackers u (restricted to ranged u when ranged_only) of
// effective_bonus_dps(u) times the fraction of alive defenders carrying any
// attribute in u.bonus_vs. Zero against a defeated defender.
double bonus_pool(const ArmyState& attacker, const ArmyState& defender,
                  bool ranged_only);

// One second of damage output of `attacker`, from its current state.
double compute_pool(const ArmyState& attacker, const ArmyState& defender,
                    ModelId model, bool is_first_round);

// Spends `pool` on randomly selected defenders. A target whose effective
// health the remaining pool covers dies and is paid for; otherwise it dies
// with probability pool / health and the pool is spent. Returns the number
// of units killed.
int apply_pool(double pool, ArmyState& defender, TargetPolicy policy,
               RandomStream& rng);

// Both pools come from the start-of-round state, then army1's pool is
// applied to army2 and army2's to army1.
void step_round(ArmyState& army1, ArmyState& army2, ModelId model,
                bool is_first_round, RandomStream& rng);

// Runs rounds until an army is destroyed or kRoundCap is reached. Never
// throws; a capped battle comes back as a stalemate Draw.
TrialOutcome simulate_trial(ArmyState army1, ArmyState army2, ModelId model,
                            RandomStream& rng);

// As simulate_trial, but a capped battle throws StalemateError.
TrialOutcome run_trial(ArmyState army1, ArmyState army2, ModelId model,
                       RandomStream& rng);

}  // namespace sc2apx
