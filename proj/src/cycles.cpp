#include "bazi/cycles.hpp"

#include <array>
#include <cmath>

namespace bazi::cycles {
namespace {

using analysis::PillarPosition;
using calendrics::SolarInstant;
using chart::Gender;
using chart::Pillar;
using chart::Polarity;
using chart::Stem;

constexpr double kDaysPerLuckYear = 3.0;  // one day to the jie = four months

// 六合 partner of each branch: 子丑, 寅亥, 卯戌, 辰酉, 巳申, 午未.
constexpr int kSixCombinationPartner[12] = {1, 0, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2};

// Jie instants flanking the birth: the greatest jie <= birth and the smallest
// jie > birth, searched across the adjacent BaZi years.
std::pair<double, double> flanking_jie(double jd) {
  const calendrics::CivilDateTime utc = calendrics::from_julian_date(jd, 0);
  double before = 0, after = 0;
  bool have_before = false, have_after = false;
  for (int year = utc.year + 1; year >= utc.year - 1; --year) {
    if (year > calendrics::kMaxYear) continue;
    for (int k = 22; k >= 0; k -= 2) {
      const double t = calendrics::solar_term_instant(year, k).instant.jd_utc;
      if (t <= jd) {
        if (!have_before || t > before) {
          before = t;
          have_before = true;
        }
      } else if (!have_after || t < after) {
        after = t;
        have_after = true;
      }
    }
    if (have_before && have_after) break;
  }
  return {before, after};
}

}  // namespace

const char* to_string(LuckDirection d) { return d == LuckDirection::Forward ? "forward" : "backward"; }

const char* to_string(InteractionFeature::Kind k) {
  switch (k) {
    case InteractionFeature::Kind::StemCombination: return "stem_combination";
    case InteractionFeature::Kind::BranchClash: return "branch_clash";
    case InteractionFeature::Kind::BranchCombination: return "branch_combination";
    case InteractionFeature::Kind::TrineHarmony: return "trine_harmony";
  }
  return "?";
}

LuckDirection luck_direction(Stem year_stem, Gender gender) {
  const bool yang = year_stem.polarity() == Polarity::Yang;
  const bool male = gender == Gender::Male;
  return yang == male ? LuckDirection::Forward : LuckDirection::Backward;
}

std::vector<LuckPillar> luck_pillars(const chart::FourPillarsChart& c,
                                     const SolarInstant& birth, int count) {
  if (count < 1 || count > 12) {
    throw ValidationError("luck pillar count must be 1-12, got " + std::to_string(count));
  }
  const LuckDirection direction = luck_direction(c.year.stem(), c.gender);
  const auto [before, after] = flanking_jie(birth.jd_utc);

  const double gap_days = direction == LuckDirection::Forward ? after - birth.jd_utc
                                                              : birth.jd_utc - before;
  const double first_age = gap_days / kDaysPerLuckYear;
  const int step = direction == LuckDirection::Forward ? 1 : -1;
  const int birth_year = birth.local_true_solar.year;

  std::vector<LuckPillar> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    LuckPillar lp;
    lp.pillar = c.month.step(step * i);
    lp.start_age_years = first_age + 10.0 * (i - 1);
    lp.start_civil_year = birth_year + static_cast<int>(std::floor(lp.start_age_years));
    lp.ordinal = i;
    out.push_back(lp);
  }
  return out;
}

FlowingPillar flowing_pillar(FlowGranularity granularity, const calendrics::CivilDateTime& civil,
                             const calendrics::GeoLocation& loc,
                             const chart::ChartConfig& config) {
  const SolarInstant instant = calendrics::true_solar_time(civil, loc, config.solar_time);

  FlowingPillar out;
  out.granularity = granularity;
  switch (granularity) {
    case FlowGranularity::Year: {
      out.pillar = chart::year_pillar(instant);
      // Period starts at the governing Lichun instant.
      int g = instant.local_true_solar.year;
      if (instant.jd_utc < calendrics::solar_term_instant(g, 0).instant.jd_utc) --g;
      out.period_start = calendrics::from_julian_date(
          calendrics::solar_term_instant(g, 0).instant.jd_utc, civil.utc_offset_minutes);
      break;
    }
    case FlowGranularity::Month: {
      out.pillar = chart::month_pillar(instant, chart::year_pillar(instant).stem());
      // Period starts at the governing jie instant.
      const auto [before, after] = flanking_jie(instant.jd_utc);
      (void)after;
      out.period_start = calendrics::from_julian_date(before, civil.utc_offset_minutes);
      break;
    }
    case FlowGranularity::Day:
      out.pillar = chart::day_pillar(instant, config.late_zi);
      out.period_start = {civil.year, civil.month, civil.day, 0, 0, civil.utc_offset_minutes};
      break;
  }
  return out;
}

bool branches_clash(int a, int b) { return (a - b + 12) % 12 == 6; }

bool branches_combine(int a, int b) { return kSixCombinationPartner[a] == b; }

bool stems_combine(int a, int b) { return (a - b + 10) % 10 == 5; }

std::vector<InteractionFeature> interactions(const chart::FourPillarsChart& c,
                                             const FlowingPillar& flowing,
                                             const RuleProfile& profile) {
  std::vector<InteractionFeature> out;
  const std::array<Pillar, 4> pillars = {c.year, c.month, c.day, c.hour};
  constexpr PillarPosition kPositions[4] = {PillarPosition::Year, PillarPosition::Month,
                                            PillarPosition::Day, PillarPosition::Hour};

  const int fs = flowing.pillar.stem().index();
  const int fb = flowing.pillar.branch().index();
  for (int i = 0; i < 4; ++i) {
    const int ns = pillars[static_cast<std::size_t>(i)].stem().index();
    const int nb = pillars[static_cast<std::size_t>(i)].branch().index();
    if (stems_combine(ns, fs)) {
      out.push_back({InteractionFeature::Kind::StemCombination, kPositions[i], true, ns, fs});
    }
    if (branches_clash(nb, fb)) {
      out.push_back({InteractionFeature::Kind::BranchClash, kPositions[i], false, nb, fb});
    }
    if (branches_combine(nb, fb)) {
      out.push_back({InteractionFeature::Kind::BranchCombination, kPositions[i], false, nb, fb});
    }
    if (profile.three_harmony_enabled && nb != fb && nb % 4 == fb % 4) {
      out.push_back({InteractionFeature::Kind::TrineHarmony, kPositions[i], false, nb, fb});
    }
  }
  return out;
}

nlohmann::json to_json(const LuckPillar& p) {
  return {{"pillar", p.pillar.glyphs()},
          {"sexagenary_index", p.pillar.sexagenary_index()},
          {"start_age_years", p.start_age_years},
          {"start_civil_year", p.start_civil_year},
          {"ordinal", p.ordinal}};
}

nlohmann::json to_json(const FlowingPillar& p) {
  const char* g = p.granularity == FlowGranularity::Year
                      ? "year"
                      : p.granularity == FlowGranularity::Month ? "month" : "day";
  return {{"granularity", g},
          {"period_start", p.period_start.iso_local()},
          {"pillar", p.pillar.glyphs()},
          {"sexagenary_index", p.pillar.sexagenary_index()}};
}

nlohmann::json to_json(const InteractionFeature& f) {
  return {{"kind", to_string(f.kind)},
          {"natal_position", analysis::to_string(f.natal_position)},
          {"on_stem", f.on_stem},
          {"natal_index", f.natal_index},
          {"flowing_index", f.flowing_index}};
}

}  // namespace bazi::cycles
