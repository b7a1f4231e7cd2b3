#pragma once

#include <array>
#include <span>
#include <string>

#include "bazi/calendrics.hpp"
#include "bazi/errors.hpp"

#include <json.hpp>

namespace bazi::chart {

enum class Element { Wood, Fire, Earth, Metal, Water };
enum class Polarity { Yang, Yin };
enum class Gender { Male, Female };

// Generation cycle: Wood -> Fire -> Earth -> Metal -> Water -> Wood.
Element generated_by(Element e);   // the element that generates e
Element generates(Element e);      // the element e generates
Element controls(Element e);       // the element e controls
Element controlled_by(Element e);  // the element that controls e

const char* to_string(Element e);
const char* to_string(Polarity p);
const char* to_string(Gender g);

struct HiddenStem {
  int stem_index;  // 0-9
  double weight;   // (0, 1]; per-branch weights sum to 1
};

class Stem {
 public:
  explicit Stem(int index);
  int index() const { return index_; }
  Element element() const;
  Polarity polarity() const { return index_ % 2 == 0 ? Polarity::Yang : Polarity::Yin; }
  const char* glyph() const;
  const char* pinyin() const;
  bool operator==(const Stem&) const = default;

 private:
  int index_;
};

class Branch {
 public:
  explicit Branch(int index);
  int index() const { return index_; }
  Element element() const;
  Polarity polarity() const { return index_ % 2 == 0 ? Polarity::Yang : Polarity::Yin; }
  const char* glyph() const;
  const char* pinyin() const;
  // Canonical hidden-stem table; first entry is the principal stem.
  std::span<const HiddenStem> hidden_stems() const;
  Stem principal_stem() const;
  bool operator==(const Branch&) const = default;

 private:
  int index_;
};

// A valid sexagenary stem-branch pair (parities must match).
class Pillar {
 public:
  Pillar(Stem stem, Branch branch);
  static Pillar from_index(int sexagenary_index);  // 0-59

  Stem stem() const { return stem_; }
  Branch branch() const { return branch_; }
  int sexagenary_index() const;
  Pillar step(int delta) const;  // cyclic step through the 60 pairs
  std::string glyphs() const;    // e.g. "丙午"
  std::string pinyin() const;    // e.g. "Bing-Wu"
  bool operator==(const Pillar&) const = default;

 private:
  Stem stem_;
  Branch branch_;
};

enum class LateZiPolicy {
  NextDayForLateZi,  // 23:00-24:00 takes the following day's pillar
  SameDay,
};

struct ChartConfig {
  LateZiPolicy late_zi = LateZiPolicy::NextDayForLateZi;
  calendrics::SolarTimeMode solar_time = calendrics::SolarTimeMode::LongitudeAndEquationOfTime;

  bool operator==(const ChartConfig&) const = default;
};

struct FourPillarsChart {
  Pillar year;
  Pillar month;
  Pillar day;
  Pillar hour;
  Stem day_master;  // always the day pillar's stem
  Gender gender = Gender::Male;
  calendrics::SolarInstant birth;
  bool late_zi_applied = false;
  ChartConfig config;

  std::string glyphs() const;  // "丙午 戊戌 辛亥 戊子"
};

struct ElementTally {
  std::array<int, 5> visible{};            // over the 8 visible symbols
  std::array<double, 5> hidden_weighted{}; // stems + branch hidden stems by weight

  int visible_total() const;
  double hidden_total() const;
};

// Sexagenary year with the boundary at the Lichun instant. 1984 anchors 甲子.
Pillar year_pillar(const calendrics::SolarInstant& instant);

// Month bounded by the jie terms (even term indices); stem from the
// Five-Tigers rule keyed on the year stem.
Pillar month_pillar(const calendrics::SolarInstant& instant, Stem year_stem);

// Day cycle anchored so that 1949-10-01 is 甲子 (index 0).
Pillar day_pillar(const calendrics::SolarInstant& instant,
                  LateZiPolicy policy = LateZiPolicy::NextDayForLateZi);

// Two-hour branches over local true solar time (23:00-00:59 is 子); stem from
// the Five-Rats rule keyed on the day stem.
Pillar hour_pillar(const calendrics::SolarInstant& instant, Stem day_stem);

FourPillarsChart build_chart(const calendrics::CivilDateTime& birth,
                             const calendrics::GeoLocation& loc, Gender gender,
                             const ChartConfig& config = {});

ElementTally element_tally(const FourPillarsChart& chart);

nlohmann::json to_json(const FourPillarsChart& chart);

}  // namespace bazi::chart
