#pragma once

#include <optional>
#include <vector>

#include "bazi/analysis.hpp"
#include "bazi/chart.hpp"

#include <json.hpp>

namespace bazi::cycles {

enum class LuckDirection { Forward, Backward };
const char* to_string(LuckDirection d);

struct LuckPillar {
  chart::Pillar pillar;
  double start_age_years = 0.0;  // exact days-to-jie / 3, no rounding
  int start_civil_year = 0;
  int ordinal = 1;  // 1-based
};

enum class FlowGranularity { Year, Month, Day };

struct FlowingPillar {
  FlowGranularity granularity = FlowGranularity::Year;
  calendrics::CivilDateTime period_start;
  chart::Pillar pillar;
};

struct InteractionFeature {
  enum class Kind {
    StemCombination,    // 合: stem indices five apart
    BranchClash,        // 冲: branch indices six apart
    BranchCombination,  // 六合: the classical pairing table
    TrineHarmony,       // 三合 partners (optional, profile-gated)
  };
  Kind kind;
  analysis::PillarPosition natal_position;
  bool on_stem;  // feature relates the stems (else the branches)
  int natal_index;
  int flowing_index;
};

const char* to_string(InteractionFeature::Kind k);

// Forward for Yang-year males and Yin-year females, backward otherwise.
LuckDirection luck_direction(chart::Stem year_stem, chart::Gender gender);

// Decade pillars stepping from the month pillar in the computed direction.
// Start age is the distance from birth to the adjacent jie in that direction
// at three days per year.
std::vector<LuckPillar> luck_pillars(const chart::FourPillarsChart& chart,
                                     const calendrics::SolarInstant& birth, int count);

FlowingPillar flowing_pillar(FlowGranularity granularity,
                             const calendrics::CivilDateTime& civil,
                             const calendrics::GeoLocation& loc,
                             const chart::ChartConfig& config = {});

std::vector<InteractionFeature> interactions(const chart::FourPillarsChart& chart,
                                             const FlowingPillar& flowing,
                                             const RuleProfile& profile = RuleProfile::defaults());

// True when the two branch indices clash (differ by six).
bool branches_clash(int a, int b);
// True for the classical six-combination pairs.
bool branches_combine(int a, int b);
// True when the two stem indices combine (differ by five).
bool stems_combine(int a, int b);

nlohmann::json to_json(const LuckPillar& p);
nlohmann::json to_json(const FlowingPillar& p);
nlohmann::json to_json(const InteractionFeature& f);

}  // namespace bazi::cycles
