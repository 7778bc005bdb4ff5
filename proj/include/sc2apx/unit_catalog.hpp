#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sc2apx {

enum class Race { Protoss, Terran, Zerg };

std::string_view to_string(Race race);
std::optional<Race> parse_race(std::string_view text);

// Unit attribute tags, usable as bit flags in an AttributeSet.
enum class Attribute : std::uint8_t {
  Light = 1 << 0,
  Armored = 1 << 1,
  Biological = 1 << 2,
  Mechanical = 1 << 3,
  Massive = 1 << 4,
  Psionic = 1 << 5,
};

inline constexpr Attribute kAllAttributes[] = {
    Attribute::Light,      Attribute::Armored, Attribute::Biological,
    Attribute::Mechanical, Attribute::Massive, Attribute::Psionic};

std::string_view to_string(Attribute attribute);
std::optional<Attribute> parse_attribute(std::string_view text);

class AttributeSet {
 public:
  constexpr AttributeSet() = default;
  constexpr AttributeSet(std::initializer_list<Attribute> attributes) {
    for (auto a : attributes) insert(a);
  }

  constexpr void insert(Attribute a) { bits_ |= static_cast<std::uint8_t>(a); }
  constexpr bool contains(Attribute a) const {
    return (bits_ & static_cast<std::uint8_t>(a)) != 0;
  }
  constexpr bool intersects(AttributeSet other) const {
    return (bits_ & other.bits_) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  std::vector<Attribute> to_vector() const;

  friend constexpr bool operator==(AttributeSet, AttributeSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

/*!
 * Static description of one unit type.
 *
 * Shields are plain extra hit points: they never regenerate. Area values
 * multiply single-target DPS by the number of targets an attack is assumed
 * to reach in a large engagement.
 */
struct UnitClass {
  std::string name;
  Race race = Race::Terran;
  int base_health = 0;
  int shields = 0;
  int armor = 0;
  double base_dps = 0.0;
  double aoe_area = 1.0;
  bool ranged = false;
  AttributeSet attributes;
  double bonus_base_dps = 0.0;
  double bonus_aoe_area = 1.0;
  AttributeSet bonus_vs;
  // Free-form provenance text carried through load/serialize.
  std::string note;

  friend bool operator==(const UnitClass&, const UnitClass&) = default;
};

// Throws ValidationError if any UnitClass invariant is violated.
void validate(const UnitClass& unit);

// (health + shields) * 1.5^armor.
double effective_health(const UnitClass& unit);
// base_dps * aoe_area.
double effective_dps(const UnitClass& unit);
// bonus_base_dps * bonus_aoe_area.
double effective_bonus_dps(const UnitClass& unit);

class UnitCatalog {
 public:
  UnitCatalog() = default;

  // Validates every unit and rejects duplicate names.
  explicit UnitCatalog(std::vector<UnitClass> units);

  const UnitClass& at(std::string_view name) const;  // throws UnknownUnitError
  const UnitClass* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }

  // Units in the order they were loaded.
  const std::vector<UnitClass>& units() const { return units_; }

  friend bool operator==(const UnitCatalog& a, const UnitCatalog& b) {
    return a.units_ == b.units_;
  }

 private:
  std::vector<UnitClass> units_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Unit data document: JSON object {"units": [ {name, race, health, shields,
// armor, dps, aoe_area, ranged, attributes[], bonus_dps, bonus_aoe_area,
// bonus_vs[], note?}, ... ]}. A blank document is an empty catalog.
UnitCatalog load_catalog(std::string_view document);
UnitCatalog load_catalog_file(const std::string& path);
std::string serialize_catalog(const UnitCatalog& catalog);

// The catalog shipped in data/units.json.
const UnitCatalog& default_catalog();

// Environment variable naming a catalog file to use instead of the default.
inline constexpr const char* kCatalogEnvVar = "SC2APX_CATALOG";

}  // namespace sc2apx
