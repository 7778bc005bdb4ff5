#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sc2apx/combat.hpp"
#include "sc2apx/unit_catalog.hpp"

namespace sc2apx {

enum class Pairing { PvT, TvZ, PvZ };

inline constexpr Pairing kAllPairings[] = {Pairing::PvT, Pairing::TvZ, Pairing::PvZ};

std::string_view to_string(Pairing pairing);
std::optional<Pairing> parse_pairing(std::string_view text);  // case-insensitive
// Races of army 1 and army 2 for a pairing, e.g. PvT -> (Protoss, Terran).
std::pair<Race, Race> races_of(Pairing pairing);

struct MatchupId {
  int round = 0;  // 1..4
  Pairing pairing = Pairing::PvT;

  friend auto operator<=>(const MatchupId&, const MatchupId&) = default;
};

std::string to_string(const MatchupId& id);  // e.g. "R1 PvT"

struct ArmyEntry {
  std::string unit;
  int count = 0;

  friend bool operator==(const ArmyEntry&, const ArmyEntry&) = default;
};

struct MatchupSpec {
  std::optional<MatchupId> id;  // set for builtin matchups
  std::string name;
  std::vector<ArmyEntry> army1;
  std::vector<ArmyEntry> army2;

  friend bool operator==(const MatchupSpec&, const MatchupSpec&) = default;
};

// Throws ValidationError for empty armies or counts < 1.
void validate(const MatchupSpec& matchup);
// Also checks every unit resolves (UnknownUnitError) and, for builtin ids,
// that army races match the pairing.
void validate(const MatchupSpec& matchup, const UnitCatalog& catalog);

// Builds the starting state of one army; throws UnknownUnitError.
ArmyState make_army(const std::vector<ArmyEntry>& entries, const UnitCatalog& catalog);

// The twelve benchmark matchups, round-major, PvT/TvZ/PvZ within a round.
const std::vector<MatchupSpec>& builtin_matchups();
const MatchupSpec& builtin_matchup(MatchupId id);

/*!
 * One row of the published results table. Survivor columns follow the unit
 * order of the matchup's armies. Win fractions are kept in hundredths so
 * comparisons against the table are exact.
 */
struct ReferenceRow {
  int round = 0;
  std::optional<ModelId> model;  // empty for the in-game Test row
  Pairing match = Pairing::PvT;
  std::array<int, 4> survivors1{};
  std::array<int, 4> survivors2{};
  int win1_centi = 0;
  int win2_centi = 0;

  MatchupId id() const { return {round, match}; }
  std::string type_label() const;  // "Test" or "APX1".."APX4"
  double win1() const { return win1_centi / 100.0; }
  double win2() const { return win2_centi / 100.0; }
};

// Parses the tab-separated table (header line plus one row per line) and
// checks the per-row win sums. Throws ParseError / ValidationError.
std::vector<ReferenceRow> parse_reference_table(std::string_view tsv);
// Checks 60 rows with every (round, type, match) present exactly once.
void validate_reference_table(const std::vector<ReferenceRow>& rows);

const std::vector<ReferenceRow>& reference_table();
const ReferenceRow& reference_row(MatchupId id, std::optional<ModelId> model);

/*!
 * Scenario document (JSON):
 *
 *   {"name": "...", "army1": {"zealot": 8, "stalker": 2},
 *    "army2": {"marine": 12}, "model": "apx4", "trials": 1000, "seed": 42}
 *
 * "name", "model", "trials" and "seed" are optional. Army key order is kept.
 */
struct Scenario {
  MatchupSpec matchup;
  std::optional<ModelId> model;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

Scenario load_scenario(std::string_view document, const UnitCatalog& catalog);
Scenario load_scenario_file(const std::string& path, const UnitCatalog& catalog);

}  // namespace sc2apx
