#include "bazi/chart.hpp"

#include <cmath>
#include <vector>

namespace bazi::chart {
namespace {

using calendrics::CivilDateTime;
using calendrics::SolarInstant;

constexpr const char* kStemGlyphs[10] = {"甲", "乙", "丙", "丁", "戊",
                                         "己", "庚", "辛", "壬", "癸"};
constexpr const char* kStemPinyin[10] = {"Jia", "Yi", "Bing", "Ding", "Wu",
                                         "Ji", "Geng", "Xin", "Ren", "Gui"};
constexpr const char* kBranchGlyphs[12] = {"子", "丑", "寅", "卯", "辰", "巳",
                                           "午", "未", "申", "酉", "戌", "亥"};
constexpr const char* kBranchPinyin[12] = {"Zi", "Chou", "Yin", "Mao", "Chen", "Si",
                                           "Wu", "Wei", "Shen", "You", "Xu", "Hai"};

constexpr Element kStemElement[5] = {Element::Wood, Element::Fire, Element::Earth,
                                     Element::Metal, Element::Water};

constexpr Element kBranchElement[12] = {
    Element::Water, Element::Earth, Element::Wood, Element::Wood,
    Element::Earth, Element::Fire,  Element::Fire, Element::Earth,
    Element::Metal, Element::Metal, Element::Earth, Element::Water};

// Canonical three-tier hidden-stem table (藏干), principal stem first.
const std::array<std::vector<HiddenStem>, 12> kHiddenStems = {{
    {{9, 1.0}},                       // 子: 癸
    {{5, 0.6}, {9, 0.3}, {7, 0.1}},   // 丑: 己 癸 辛
    {{0, 0.6}, {2, 0.3}, {4, 0.1}},   // 寅: 甲 丙 戊
    {{1, 1.0}},                       // 卯: 乙
    {{4, 0.6}, {1, 0.3}, {9, 0.1}},   // 辰: 戊 乙 癸
    {{2, 0.6}, {4, 0.3}, {6, 0.1}},   // 巳: 丙 戊 庚
    {{3, 0.7}, {5, 0.3}},             // 午: 丁 己
    {{5, 0.6}, {3, 0.3}, {1, 0.1}},   // 未: 己 丁 乙
    {{6, 0.6}, {8, 0.3}, {4, 0.1}},   // 申: 庚 壬 戊
    {{7, 1.0}},                       // 酉: 辛
    {{4, 0.6}, {7, 0.3}, {3, 0.1}},   // 戌: 戊 辛 丁
    {{8, 0.7}, {0, 0.3}},             // 亥: 壬 甲
}};

// Day-cycle anchor: 1949-10-01 (JDN 2433191) is a 甲子 day, cross-checked
// against 2000-01-01 = 戊午. (JDN + 49) mod 60 reproduces both.
constexpr long long kDayAnchorOffset = 49;

int positive_mod(long long value, int modulus) {
  const long long m = value % modulus;
  return static_cast<int>(m < 0 ? m + modulus : m);
}

int local_year_of(const SolarInstant& instant) { return instant.local_true_solar.year; }

// Gregorian year label after moving the boundary to the Lichun instant.
int lichun_adjusted_year(const SolarInstant& instant) {
  const int y = local_year_of(instant);
  if (instant.local_true_solar.month > 2) return y;
  const auto lichun = calendrics::solar_term_instant(y, 0);
  return instant.jd_utc >= lichun.instant.jd_utc ? y : y - 1;
}

}  // namespace

Element generates(Element e) { return static_cast<Element>((static_cast<int>(e) + 1) % 5); }
Element generated_by(Element e) { return static_cast<Element>((static_cast<int>(e) + 4) % 5); }
Element controls(Element e) { return static_cast<Element>((static_cast<int>(e) + 2) % 5); }
Element controlled_by(Element e) { return static_cast<Element>((static_cast<int>(e) + 3) % 5); }

const char* to_string(Element e) {
  switch (e) {
    case Element::Wood: return "Wood";
    case Element::Fire: return "Fire";
    case Element::Earth: return "Earth";
    case Element::Metal: return "Metal";
    case Element::Water: return "Water";
  }
  return "?";
}

const char* to_string(Polarity p) { return p == Polarity::Yang ? "Yang" : "Yin"; }
const char* to_string(Gender g) { return g == Gender::Male ? "Male" : "Female"; }

Stem::Stem(int index) : index_(index) {
  if (index < 0 || index > 9) {
    throw ValidationError("stem index out of range: " + std::to_string(index));
  }
}

Element Stem::element() const { return kStemElement[index_ / 2]; }
const char* Stem::glyph() const { return kStemGlyphs[index_]; }
const char* Stem::pinyin() const { return kStemPinyin[index_]; }

Branch::Branch(int index) : index_(index) {
  if (index < 0 || index > 11) {
    throw ValidationError("branch index out of range: " + std::to_string(index));
  }
}

Element Branch::element() const { return kBranchElement[index_]; }
const char* Branch::glyph() const { return kBranchGlyphs[index_]; }
const char* Branch::pinyin() const { return kBranchPinyin[index_]; }

std::span<const HiddenStem> Branch::hidden_stems() const {
  const auto& v = kHiddenStems[static_cast<std::size_t>(index_)];
  return {v.data(), v.size()};
}

Stem Branch::principal_stem() const { return Stem(hidden_stems().front().stem_index); }

Pillar::Pillar(Stem stem, Branch branch) : stem_(stem), branch_(branch) {
  if (stem.polarity() != branch.polarity()) {
    throw ValidationError(std::string("invalid sexagenary pair ") + stem.glyph() +
                          branch.glyph() + ": stem/branch polarity mismatch");
  }
}

Pillar Pillar::from_index(int sexagenary_index) {
  if (sexagenary_index < 0 || sexagenary_index > 59) {
    throw ValidationError("sexagenary index out of range: " + std::to_string(sexagenary_index));
  }
  return Pillar(Stem(sexagenary_index % 10), Branch(sexagenary_index % 12));
}

int Pillar::sexagenary_index() const {
  // Unique n with n mod 10 = stem and n mod 12 = branch; since both share
  // parity, n = branch + 12k where k aligns the stem residue.
  for (int n = branch_.index(); n < 60; n += 12) {
    if (n % 10 == stem_.index()) return n;
  }
  return -1;  // unreachable: constructor enforces parity
}

Pillar Pillar::step(int delta) const {
  return from_index(positive_mod(sexagenary_index() + delta, 60));
}

std::string Pillar::glyphs() const { return std::string(stem_.glyph()) + branch_.glyph(); }

std::string Pillar::pinyin() const {
  return std::string(stem_.pinyin()) + "-" + branch_.pinyin();
}

std::string FourPillarsChart::glyphs() const {
  return year.glyphs() + " " + month.glyphs() + " " + day.glyphs() + " " + hour.glyphs();
}

int ElementTally::visible_total() const {
  int total = 0;
  for (int v : visible) total += v;
  return total;
}

double ElementTally::hidden_total() const {
  double total = 0;
  for (double v : hidden_weighted) total += v;
  return total;
}

Pillar year_pillar(const SolarInstant& instant) {
  const int g = lichun_adjusted_year(instant);
  return Pillar(Stem(positive_mod(g - 4, 10)), Branch(positive_mod(g - 4, 12)));
}

Pillar month_pillar(const SolarInstant& instant, Stem year_stem) {
  const int g = lichun_adjusted_year(instant);

  // The twelve jie of BaZi year g are the even-indexed terms 0,2,...,22;
  // month m (1 = 寅) starts at term 2(m-1).
  int month_number = 1;
  for (int m = 12; m >= 1; --m) {
    const auto jie = calendrics::solar_term_instant(g, 2 * (m - 1));
    if (instant.jd_utc >= jie.instant.jd_utc) {
      month_number = m;
      break;
    }
  }

  const Branch branch(positive_mod(month_number + 1, 12));
  // Five-Tigers rule: the 寅-month stem of the year, advancing one per month.
  const int first_month_stem = ((year_stem.index() % 5) * 2 + 2) % 10;
  const Stem stem(positive_mod(first_month_stem + month_number - 1, 10));
  return Pillar(stem, branch);
}

Pillar day_pillar(const SolarInstant& instant, LateZiPolicy policy) {
  const CivilDateTime& local = instant.local_true_solar;
  long long jdn = calendrics::julian_day_number(local.year, local.month, local.day);
  if (policy == LateZiPolicy::NextDayForLateZi && local.hour == 23) ++jdn;
  return Pillar::from_index(positive_mod(jdn + kDayAnchorOffset, 60));
}

Pillar hour_pillar(const SolarInstant& instant, Stem day_stem) {
  const int hour = instant.local_true_solar.hour;
  const int branch_index = ((hour + 1) % 24) / 2;
  // Five-Rats rule: the 子-hour stem of the day, advancing one per branch.
  const int zi_stem = (day_stem.index() % 5) * 2 % 10;
  return Pillar(Stem(positive_mod(zi_stem + branch_index, 10)), Branch(branch_index));
}

FourPillarsChart build_chart(const CivilDateTime& birth, const calendrics::GeoLocation& loc,
                             Gender gender, const ChartConfig& config) {
  SolarInstant instant;
  try {
    instant = calendrics::true_solar_time(birth, loc, config.solar_time);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("true-solar-time stage: ") + e.what());
  }

  try {
    const Pillar year = year_pillar(instant);
    const Pillar month = month_pillar(instant, year.stem());
    const Pillar day = day_pillar(instant, config.late_zi);
    const Pillar hour = hour_pillar(instant, day.stem());
    const bool late_zi = instant.local_true_solar.hour == 23;

    return FourPillarsChart{year,   month,  day,     hour, day.stem(),
                            gender, instant, late_zi, config};
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("pillar stage: ") + e.what());
  }
}

ElementTally element_tally(const FourPillarsChart& chart) {
  ElementTally tally;
  const Pillar pillars[] = {chart.year, chart.month, chart.day, chart.hour};
  for (const Pillar& p : pillars) {
    tally.visible[static_cast<std::size_t>(p.stem().element())] += 1;
    tally.visible[static_cast<std::size_t>(p.branch().element())] += 1;
    tally.hidden_weighted[static_cast<std::size_t>(p.stem().element())] += 1.0;
    for (const HiddenStem& h : p.branch().hidden_stems()) {
      tally.hidden_weighted[static_cast<std::size_t>(Stem(h.stem_index).element())] += h.weight;
    }
  }
  return tally;
}

namespace {

nlohmann::json stem_json(const Stem& s) {
  return {{"index", s.index()},
          {"glyph", s.glyph()},
          {"pinyin", s.pinyin()},
          {"element", to_string(s.element())},
          {"polarity", to_string(s.polarity())}};
}

nlohmann::json branch_json(const Branch& b) {
  nlohmann::json hidden = nlohmann::json::array();
  for (const HiddenStem& h : b.hidden_stems()) {
    hidden.push_back({{"stem", stem_json(Stem(h.stem_index))}, {"weight", h.weight}});
  }
  return {{"index", b.index()},
          {"glyph", b.glyph()},
          {"pinyin", b.pinyin()},
          {"element", to_string(b.element())},
          {"polarity", to_string(b.polarity())},
          {"hidden_stems", hidden}};
}

nlohmann::json pillar_json(const Pillar& p) {
  return {{"stem", stem_json(p.stem())},
          {"branch", branch_json(p.branch())},
          {"sexagenary_index", p.sexagenary_index()},
          {"glyphs", p.glyphs()}};
}

const char* to_string(calendrics::SolarTimeMode m) {
  switch (m) {
    case calendrics::SolarTimeMode::Off: return "off";
    case calendrics::SolarTimeMode::LongitudeOnly: return "longitude_only";
    case calendrics::SolarTimeMode::LongitudeAndEquationOfTime: return "longitude_and_eot";
  }
  return "?";
}

}  // namespace

nlohmann::json to_json(const FourPillarsChart& chart) {
  const ElementTally tally = element_tally(chart);
  nlohmann::json visible, hidden;
  for (int e = 0; e < 5; ++e) {
    visible[to_string(static_cast<Element>(e))] = tally.visible[static_cast<std::size_t>(e)];
    hidden[to_string(static_cast<Element>(e))] =
        tally.hidden_weighted[static_cast<std::size_t>(e)];
  }
  return {{"schema_version", "chart.v1"},
          {"pillars",
           {{"year", pillar_json(chart.year)},
            {"month", pillar_json(chart.month)},
            {"day", pillar_json(chart.day)},
            {"hour", pillar_json(chart.hour)}}},
          {"day_master", stem_json(chart.day_master)},
          {"gender", to_string(chart.gender)},
          {"birth",
           {{"jd_utc", chart.birth.jd_utc},
            {"local_true_solar", chart.birth.local_true_solar.iso_local()}}},
          {"late_zi_applied", chart.late_zi_applied},
          {"config",
           {{"late_zi_policy",
             chart.config.late_zi == LateZiPolicy::NextDayForLateZi ? "next_day" : "same_day"},
            {"solar_time", to_string(chart.config.solar_time)}}}};
}

}  // namespace bazi::chart
