#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bazi/chart.hpp"
#include "bazi/rule_profile.hpp"

#include <json.hpp>

namespace bazi::analysis {

// The ten relational roles between the day master and another stem:
// element relation (same / output / wealth / officer / resource) crossed
// with polarity sameness.
enum class TenGod {
  Peer,              // 比肩
  RobWealth,         // 劫财
  EatingGod,         // 食神
  HurtingOfficer,    // 伤官
  IndirectWealth,    // 偏财
  DirectWealth,      // 正财
  SevenKillings,     // 七杀
  DirectOfficer,     // 正官
  IndirectResource,  // 偏印
  DirectResource,    // 正印
};

const char* glyph(TenGod g);
const char* name_en(TenGod g);

TenGod ten_god(chart::Stem day_master, chart::Stem other);

enum class PillarPosition { Year, Month, Day, Hour };
const char* to_string(PillarPosition p);

struct ShenShaMark {
  std::string rule_id;
  std::string glyph;
  std::string name_en;
  PillarPosition location;  // the pillar whose branch triggered the mark

  bool operator==(const ShenShaMark&) const = default;
  auto operator<=>(const ShenShaMark&) const = default;
};

std::vector<ShenShaMark> shensha_marks(const chart::FourPillarsChart& chart,
                                       const RuleProfile& profile = RuleProfile::defaults());

enum class StrengthCategory { ExtremeWeak, Weak, Balanced, Strong, ExtremeStrong };
const char* to_string(StrengthCategory c);

struct StrengthAssessment {
  double score = 0.0;
  StrengthCategory category = StrengthCategory::Balanced;
  struct Contributions {
    double seasonal = 0.0;
    double roots = 0.0;
    double stem_support = 0.0;
    double drains = 0.0;  // negative
  } contributions;
  std::string seasonal_state;  // wang/xiang/xiu/qiu/si
};

StrengthAssessment day_master_strength(const chart::FourPillarsChart& chart,
                                       const RuleProfile& profile = RuleProfile::defaults());

enum class FollowerVariant {
  Output,   // 从儿
  Wealth,   // 从财
  Officer,  // 从杀
};
const char* glyph(FollowerVariant v);

struct PatternStructure {
  enum class Kind { Regular, Follower, Special };
  Kind kind = Kind::Regular;
  std::optional<TenGod> regular_god;
  std::optional<FollowerVariant> follower;
  std::string special_name;
  std::vector<std::string> basis;  // which month-command stem / threshold fired

  std::string display_name() const;
};

PatternStructure classify_pattern(const chart::FourPillarsChart& chart,
                                  const StrengthAssessment& strength,
                                  const RuleProfile& profile = RuleProfile::defaults());

struct ElementPreference {
  std::vector<chart::Element> favorable;    // 喜
  std::vector<chart::Element> unfavorable;  // 忌

  bool is_favorable(chart::Element e) const;
  bool is_unfavorable(chart::Element e) const;
};

ElementPreference favorable_elements(const chart::FourPillarsChart& chart,
                                     const PatternStructure& pattern,
                                     const StrengthAssessment& strength);

struct SymbolGod {
  PillarPosition position;
  bool from_branch;  // true: the branch's principal hidden stem
  int stem_index;
  TenGod god;
};

struct AnalysisBundle {
  std::vector<SymbolGod> gods;  // non-day-master stems plus branch principals
  std::vector<ShenShaMark> marks;
  StrengthAssessment strength;
  PatternStructure pattern;
  ElementPreference preference;
  chart::ElementTally tally;
};

AnalysisBundle analyze(const chart::FourPillarsChart& chart,
                       const RuleProfile& profile = RuleProfile::defaults());

nlohmann::json to_json(const AnalysisBundle& bundle);

}  // namespace bazi::analysis
