#include "sc2apx/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sc2apx/embedded_data.hpp"
#include "sc2apx/error.hpp"

namespace sc2apx {

using json = nlohmann::ordered_json;

namespace {

std::string upper(std::string_view text) {
  std::string out;
  for (char c : text) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<ArmyEntry> parse_army(const json& block, const char* key) {
  if (!block.is_object()) {
    throw ParseError(std::string("'") + key + "' must be an object of unit: count");
  }
  std::vector<ArmyEntry> army;
  for (const auto& [unit, count] : block.items()) {
    if (!count.is_number_integer()) {
      throw ParseError(std::string("'") + key + "': count for '" + unit +
                       "' must be an integer");
    }
    army.push_back({unit, count.get<int>()});
  }
  return army;
}

json parse_document(std::string_view document, const char* what) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(std::string("cannot open ") + what + " '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// "0.92" -> 92. Only two-decimal fractions in [0, 1] are accepted.
int parse_centi(const std::string& text) {
  if (text.size() != 4 || (text[0] != '0' && text[0] != '1') || text[1] != '.' ||
      !std::isdigit(static_cast<unsigned char>(text[2])) ||
      !std::isdigit(static_cast<unsigned char>(text[3]))) {
    throw ParseError("reference table: bad win fraction '" + text + "'");
  }
  const int value = (text[0] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
  if (value > 100) throw ParseError("reference table: win fraction > 1: " + text);
  return value;
}

int parse_int(const std::string& text) {
  int value = 0;
  std::size_t used = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ParseError("reference table: bad integer '" + text + "'");
  }
  return value;
}

std::vector<MatchupSpec> load_builtin_matchups() {
  const json root = parse_document(embedded::matchups_json(), "builtin matchups");
  std::vector<MatchupSpec> out;
  for (const auto& record : root.at("matchups")) {
    MatchupSpec spec;
    auto pairing = parse_pairing(record.at("pairing").get<std::string>());
    if (!pairing) throw ParseError("builtin matchups: bad pairing");
    spec.id = MatchupId{record.at("round").get<int>(), *pairing};
    spec.name = to_string(*spec.id);
    spec.army1 = parse_army(record.at("army1"), "army1");
    spec.army2 = parse_army(record.at("army2"), "army2");
    validate(spec);
    out.push_back(std::move(spec));
  }
  if (out.size() != 12) throw ValidationError("builtin matchups: expected 12 entries");
  return out;
}

}  // namespace

std::string_view to_string(Pairing pairing) {
  switch (pairing) {
    case Pairing::PvT: return "PvT";
    case Pairing::TvZ: return "TvZ";
    case Pairing::PvZ: return "PvZ";
  }
  return "?";
}

std::optional<Pairing> parse_pairing(std::string_view text) {
  for (auto p : kAllPairings) {
    if (upper(text) == upper(to_string(p))) return p;
  }
  return std::nullopt;
}

std::pair<Race, Race> races_of(Pairing pairing) {
  switch (pairing) {
    case Pairing::PvT: return {Race::Protoss, Race::Terran};
    case Pairing::TvZ: return {Race::Terran, Race::Zerg};
    case Pairing::PvZ: return {Race::Protoss, Race::Zerg};
  }
  return {Race::Protoss, Race::Terran};
}

std::string to_string(const MatchupId& id) {
  return "R" + std::to_string(id.round) + " " + std::string(to_string(id.pairing));
}

void validate(const MatchupSpec& matchup) {
  auto check = [&](const std::vector<ArmyEntry>& army, const char* side) {
    if (army.empty()) {
      throw ValidationError(std::string(side) + " of '" + matchup.name + "' is empty");
    }
    std::set<std::string> seen;
    for (const auto& entry : army) {
      if (entry.count < 1) {
        throw ValidationError(std::string(side) + ": count for '" + entry.unit +
                              "' must be >= 1");
      }
      if (!seen.insert(entry.unit).second) {
        throw ValidationError(std::string(side) + ": unit '" + entry.unit +
                              "' listed twice");
      }
    }
  };
  check(matchup.army1, "army1");
  check(matchup.army2, "army2");
  if (matchup.id && (matchup.id->round < 1 || matchup.id->round > 4)) {
    throw ValidationError("matchup round must be 1..4");
  }
}

void validate(const MatchupSpec& matchup, const UnitCatalog& catalog) {
  validate(matchup);
  auto check = [&](const std::vector<ArmyEntry>& army, std::optional<Race> race) {
    for (const auto& entry : army) {
      const auto& unit = catalog.at(entry.unit);
      if (race && unit.race != *race) {
        throw ValidationError("unit '" + entry.unit + "' is " +
                              std::string(to_string(unit.race)) + ", expected " +
                              std::string(to_string(*race)) + " in " + matchup.name);
      }
    }
  };
  std::optional<Race> race1, race2;
  if (matchup.id) std::tie(race1, race2) = races_of(matchup.id->pairing);
  check(matchup.army1, race1);
  check(matchup.army2, race2);
}

ArmyState make_army(const std::vector<ArmyEntry>& entries, const UnitCatalog& catalog) {
  std::vector<std::pair<UnitClass, int>> groups;
  for (const auto& entry : entries) groups.emplace_back(catalog.at(entry.unit), entry.count);
  return ArmyState(groups);
}

const std::vector<MatchupSpec>& builtin_matchups() {
  static const std::vector<MatchupSpec> matchups = load_builtin_matchups();
  return matchups;
}

const MatchupSpec& builtin_matchup(MatchupId id) {
  for (const auto& m : builtin_matchups()) {
    if (m.id == id) return m;
  }
  throw ValidationError("no builtin matchup " + to_string(id));
}

std::string ReferenceRow::type_label() const {
  return model ? std::string(to_string(*model)) : std::string("Test");
}

std::vector<ReferenceRow> parse_reference_table(std::string_view tsv) {
  std::vector<ReferenceRow> rows;
  std::istringstream in{std::string(tsv)};
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, '\t')) cells.push_back(cell);
    if (cells.size() != 13) {
      throw ParseError("reference table line " + std::to_string(line_no) +
                       ": expected 13 columns");
    }
    ReferenceRow row;
    row.round = parse_int(cells[0]);
    if (cells[1] != "Test") {
      row.model = parse_model(cells[1]);
      if (!row.model) throw ParseError("reference table: bad type '" + cells[1] + "'");
    }
    auto match = parse_pairing(cells[2]);
    if (!match) throw ParseError("reference table: bad match '" + cells[2] + "'");
    row.match = *match;
    for (int k = 0; k < 4; ++k) {
      row.survivors1[k] = parse_int(cells[3 + k]);
      row.survivors2[k] = parse_int(cells[7 + k]);
    }
    row.win1_centi = parse_centi(cells[11]);
    row.win2_centi = parse_centi(cells[12]);
    // Published fractions are rounded independently, so a row may sum to 1.01.
    const int sum = row.win1_centi + row.win2_centi;
    if (sum < 99 || sum > 101) {
      throw ValidationError("reference table line " + std::to_string(line_no) +
                            ": win fractions sum to " + std::to_string(sum) + "/100");
    }
    rows.push_back(row);
  }
  return rows;
}

void validate_reference_table(const std::vector<ReferenceRow>& rows) {
  if (rows.size() != 60) {
    throw ValidationError("reference table: expected 60 rows, got " +
                          std::to_string(rows.size()));
  }
  std::set<std::tuple<int, int, Pairing>> seen;
  for (const auto& row : rows) {
    if (row.round < 1 || row.round > 4) throw ValidationError("reference table: bad round");
    const int type = row.model ? static_cast<int>(*row.model) : -1;
    if (!seen.emplace(row.round, type, row.match).second) {
      throw ValidationError("reference table: duplicate row " + to_string(row.id()) +
                            " " + row.type_label());
    }
  }
}

const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows = [] {
    auto parsed = parse_reference_table(embedded::table1_tsv());
    validate_reference_table(parsed);
    return parsed;
  }();
  return rows;
}

const ReferenceRow& reference_row(MatchupId id, std::optional<ModelId> model) {
  for (const auto& row : reference_table()) {
    if (row.id() == id && row.model == model) return row;
  }
  throw ValidationError("no reference row for " + to_string(id));
}

Scenario load_scenario(std::string_view document, const UnitCatalog& catalog) {
  const json root = parse_document(document, "scenario");
  if (!root.is_object()) throw ParseError("scenario: expected a JSON object");
  static constexpr std::string_view kKnownKeys[] = {"name",  "army1",  "army2",
                                                    "model", "trials", "seed"};
  for (const auto& [key, _] : root.items()) {
    if (std::ranges::find(kKnownKeys, key) == std::end(kKnownKeys)) {
      throw ParseError("scenario: unknown key '" + key + "'");
    }
  }
  if (!root.contains("army1") || !root.contains("army2")) {
    throw ParseError("scenario: 'army1' and 'army2' are required");
  }
  Scenario scenario;
  auto& m = scenario.matchup;
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ParseError("scenario: 'name' must be a string");
    m.name = root["name"].get<std::string>();
  } else {
    m.name = "scenario";
  }
  m.army1 = parse_army(root["army1"], "army1");
  m.army2 = parse_army(root["army2"], "army2");
  if (root.contains("model")) {
    if (!root["model"].is_string()) throw ParseError("scenario: 'model' must be a string");
    scenario.model = parse_model(root["model"].get<std::string>());
    if (!scenario.model) {
      throw ValidationError("scenario: unknown model '" + root["model"].get<std::string>() + "'");
    }
  }
  if (root.contains("trials")) {
    if (!root["trials"].is_number_integer()) {
      throw ParseError("scenario: 'trials' must be an integer");
    }
    const auto trials = root["trials"].get<std::int64_t>();
    if (trials < 1 || trials > std::numeric_limits<int>::max()) {
      throw ValidationError("scenario: 'trials' must be >= 1");
    }
    scenario.trials = static_cast<int>(trials);
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw ParseError("scenario: 'seed' must be a non-negative integer");
    }
    scenario.seed = root["seed"].get<std::uint64_t>();
  }
  validate(m, catalog);
  return scenario;
}

Scenario load_scenario_file(const std::string& path, const UnitCatalog& catalog) {
  return load_scenario(read_file(path, "scenario file"), catalog);
}

}  // namespace sc2apx
