#include "sc2apx/unit_catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sc2apx/embedded_data.hpp"
#include "sc2apx/error.hpp"

namespace sc2apx {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kRaceNames[] = {"Protoss", "Terran", "Zerg"};

bool iequals(std::string_view a, std::string_view b) {
  return std::ranges::equal(a, b, [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) ==
           std::tolower(static_cast<unsigned char>(y));
  });
}

AttributeSet parse_attribute_list(const json& list, const std::string& unit,
                                  const char* key) {
  if (!list.is_array()) {
    throw ParseError("unit '" + unit + "': '" + key + "' must be an array");
  }
  AttributeSet set;
  for (const auto& item : list) {
    if (!item.is_string()) {
      throw ParseError("unit '" + unit + "': '" + key +
                       "' entries must be strings");
    }
    auto attribute = parse_attribute(item.get<std::string>());
    if (!attribute) {
      throw ValidationError("unit '" + unit + "': unknown attribute '" +
                            item.get<std::string>() + "'");
    }
    set.insert(*attribute);
  }
  return set;
}

int read_int(const json& record, const char* key, const std::string& unit,
             std::optional<int> fallback) {
  if (!record.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError("unit '" + unit + "': missing '" + key + "'");
  }
  const auto& value = record.at(key);
  if (!value.is_number_integer()) {
    throw ParseError("unit '" + unit + "': '" + key + "' must be an integer");
  }
  return value.get<int>();
}

double read_number(const json& record, const char* key, const std::string& unit,
                   std::optional<double> fallback) {
  if (!record.contains(key)) {
    if (fallback) return *fallback;
    throw ParseError("unit '" + unit + "': missing '" + key + "'");
  }
  const auto& value = record.at(key);
  if (!value.is_number()) {
    throw ParseError("unit '" + unit + "': '" + key + "' must be a number");
  }
  return value.get<double>();
}

UnitClass parse_unit(const json& record) {
  static constexpr std::string_view kKnownKeys[] = {
      "name",     "race",       "health",    "shields",        "armor",
      "dps",      "aoe_area",   "ranged",    "attributes",     "bonus_dps",
      "bonus_aoe_area", "bonus_vs", "note"};

  if (!record.is_object()) throw ParseError("unit record must be an object");
  if (!record.contains("name") || !record["name"].is_string()) {
    throw ParseError("unit record without a string 'name'");
  }
  UnitClass unit;
  unit.name = record["name"].get<std::string>();
  for (const auto& [key, _] : record.items()) {
    if (std::ranges::find(kKnownKeys, key) == std::end(kKnownKeys)) {
      throw ParseError("unit '" + unit.name + "': unknown key '" + key + "'");
    }
  }

  if (!record.contains("race") || !record["race"].is_string()) {
    throw ParseError("unit '" + unit.name + "': missing string 'race'");
  }
  auto race = parse_race(record["race"].get<std::string>());
  if (!race) {
    throw ValidationError("unit '" + unit.name + "': unknown race '" +
                          record["race"].get<std::string>() + "'");
  }
  unit.race = *race;
  unit.base_health = read_int(record, "health", unit.name, std::nullopt);
  unit.shields = read_int(record, "shields", unit.name, 0);
  unit.armor = read_int(record, "armor", unit.name, std::nullopt);
  unit.base_dps = read_number(record, "dps", unit.name, std::nullopt);
  unit.aoe_area = read_number(record, "aoe_area", unit.name, 1.0);
  if (!record.contains("ranged") || !record["ranged"].is_boolean()) {
    throw ParseError("unit '" + unit.name + "': missing boolean 'ranged'");
  }
  unit.ranged = record["ranged"].get<bool>();
  if (record.contains("attributes")) {
    unit.attributes =
        parse_attribute_list(record["attributes"], unit.name, "attributes");
  }
  unit.bonus_base_dps = read_number(record, "bonus_dps", unit.name, 0.0);
  unit.bonus_aoe_area = read_number(record, "bonus_aoe_area", unit.name, 1.0);
  if (record.contains("bonus_vs")) {
    unit.bonus_vs = parse_attribute_list(record["bonus_vs"], unit.name, "bonus_vs");
  }
  if (record.contains("note")) {
    if (!record["note"].is_string()) {
      throw ParseError("unit '" + unit.name + "': 'note' must be a string");
    }
    unit.note = record["note"].get<std::string>();
  }
  return unit;
}

json attribute_list(AttributeSet set) {
  json list = json::array();
  for (auto a : set.to_vector()) list.push_back(std::string(to_string(a)));
  return list;
}

}  // namespace

std::string_view to_string(Race race) {
  return kRaceNames[static_cast<int>(race)];
}

std::optional<Race> parse_race(std::string_view text) {
  for (int i = 0; i < 3; ++i) {
    if (iequals(text, kRaceNames[i])) return static_cast<Race>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Attribute attribute) {
  switch (attribute) {
    case Attribute::Light: return "Light";
    case Attribute::Armored: return "Armored";
    case Attribute::Biological: return "Biological";
    case Attribute::Mechanical: return "Mechanical";
    case Attribute::Massive: return "Massive";
    case Attribute::Psionic: return "Psionic";
  }
  return "?";
}

std::optional<Attribute> parse_attribute(std::string_view text) {
  for (auto a : kAllAttributes) {
    if (iequals(text, to_string(a))) return a;
  }
  return std::nullopt;
}

std::vector<Attribute> AttributeSet::to_vector() const {
  std::vector<Attribute> out;
  for (auto a : kAllAttributes) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

void validate(const UnitClass& unit) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("unit '" + unit.name + "': " + what);
  };
  if (unit.name.empty()) throw ValidationError("unit with empty name");
  if (unit.base_health < 0 || unit.shields < 0 || unit.armor < 0) {
    fail("health, shields and armor must be non-negative");
  }
  if (unit.base_health + unit.shields <= 0) fail("health + shields must be > 0");
  if (!(std::isfinite(unit.base_dps) && unit.base_dps >= 0.0)) {
    fail("dps must be a non-negative number");
  }
  if (!(std::isfinite(unit.bonus_base_dps) && unit.bonus_base_dps >= 0.0)) {
    fail("bonus_dps must be a non-negative number");
  }
  if (!(std::isfinite(unit.aoe_area) && unit.aoe_area >= 1.0) ||
      !(std::isfinite(unit.bonus_aoe_area) && unit.bonus_aoe_area >= 1.0)) {
    fail("aoe areas must be >= 1");
  }
  if (unit.bonus_vs.empty() != (unit.bonus_base_dps == 0.0)) {
    fail("bonus_vs must be empty exactly when bonus_dps is 0");
  }
}

double effective_health(const UnitClass& unit) {
  return static_cast<double>(unit.base_health + unit.shields) *
         std::pow(1.5, unit.armor);
}

double effective_dps(const UnitClass& unit) { return unit.base_dps * unit.aoe_area; }

double effective_bonus_dps(const UnitClass& unit) {
  return unit.bonus_base_dps * unit.bonus_aoe_area;
}

UnitCatalog::UnitCatalog(std::vector<UnitClass> units) : units_(std::move(units)) {
  for (std::size_t i = 0; i < units_.size(); ++i) {
    validate(units_[i]);
    if (!index_.emplace(units_[i].name, i).second) {
      throw ValidationError("duplicate unit name '" + units_[i].name + "'");
    }
  }
}

const UnitClass* UnitCatalog::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &units_[it->second];
}

const UnitClass& UnitCatalog::at(std::string_view name) const {
  if (const auto* unit = find(name)) return *unit;
  throw UnknownUnitError(std::string(name));
}

UnitCatalog load_catalog(std::string_view document) {
  if (std::ranges::all_of(document, [](char c) {
        return std::isspace(static_cast<unsigned char>(c));
      })) {
    return UnitCatalog{};
  }
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("unit data: ") + e.what());
  }
  if (!root.is_object() || !root.contains("units") || !root["units"].is_array()) {
    throw ParseError("unit data: expected an object with a 'units' array");
  }
  std::vector<UnitClass> units;
  try {
    for (const auto& record : root["units"]) units.push_back(parse_unit(record));
  } catch (const json::exception& e) {
    throw ParseError(std::string("unit data: ") + e.what());
  }
  return UnitCatalog(std::move(units));
}

UnitCatalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open unit data file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_catalog(buffer.str());
}

std::string serialize_catalog(const UnitCatalog& catalog) {
  json units = json::array();
  for (const auto& u : catalog.units()) {
    json record;
    record["name"] = u.name;
    record["race"] = std::string(to_string(u.race));
    record["health"] = u.base_health;
    record["shields"] = u.shields;
    record["armor"] = u.armor;
    record["dps"] = u.base_dps;
    record["aoe_area"] = u.aoe_area;
    record["ranged"] = u.ranged;
    record["attributes"] = attribute_list(u.attributes);
    record["bonus_dps"] = u.bonus_base_dps;
    record["bonus_aoe_area"] = u.bonus_aoe_area;
    record["bonus_vs"] = attribute_list(u.bonus_vs);
    if (!u.note.empty()) record["note"] = u.note;
    units.push_back(std::move(record));
  }
  json root;
  root["units"] = std::move(units);
  return root.dump(2) + "\n";
}

const UnitCatalog& default_catalog() {
  static const UnitCatalog catalog = load_catalog(embedded::units_json());
  return catalog;
}

}  // namespace sc2apx
