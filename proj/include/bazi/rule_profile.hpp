#pragma once

#include <map>
#include <string>
#include <vector>

#include "bazi/chart.hpp"
#include "bazi/errors.hpp"

#include <json.hpp>

namespace bazi {

// Interpretation tables are a single versioned, swappable asset so that
// alternative schools can be dropped in without code changes. The compiled-in
// default is embedded from data/rule_profile.json at build time.

struct StrengthWeights {
  // Seasonal standing of the day-master element in the month branch.
  double seasonal_wang = 30.0;   // 旺 month commands the element
  double seasonal_xiang = 20.0;  // 相 season generates it
  double seasonal_xiu = 8.0;     // 休 it generates the season
  double seasonal_qiu = 4.0;     // 囚 it controls the season
  double seasonal_si = 0.0;      // 死 season controls it

  double root_same = 20.0;       // hidden stem of the day-master element, per weight
  double root_generator = 10.0;  // hidden stem of its generator, per weight
  double stem_same = 12.0;       // visible supporting stem
  double stem_generator = 8.0;
  double drain_stem = 6.0;       // visible output/wealth/officer stem
  double drain_hidden = 6.0;     // hidden drain, per weight

  double midpoint = 50.0;
  double balanced_halfwidth = 8.0;  // |score - midpoint| within this is Balanced
  double extreme_offset = 35.0;     // beyond midpoint +- this is Extreme
};

struct ShenShaRule {
  std::string id;
  std::string glyph;
  std::string name_en;
  // "day_stem": key is the day stem; map stem index -> trigger branches.
  // "branch_trine": key is the year or day branch's trine (index mod 4);
  // map trine -> single trigger branch.
  std::string key_kind;
  std::map<int, std::vector<int>> mapping;
};

struct TraitRule {
  std::string id;
  std::string key_kind;  // pattern_regular | pattern_follower | pattern_special |
                         // element_dominant | element_absent | shensha
  std::string key;
  std::vector<std::string> tags;
  double weight = 1.0;
};

struct RuleProfile {
  std::string version;
  StrengthWeights strength;
  std::vector<ShenShaRule> shensha_catalog;
  std::vector<TraitRule> trait_lexicon;
  // Scenario domain name -> natal pillar ("year"|"month"|"day"|"hour") whose
  // clash with a flowing pillar downgrades the domain's valence.
  std::map<std::string, std::string> domain_pillar;
  double dominant_element_threshold = 3.0;  // hidden-weighted tally
  double absent_element_threshold = 0.05;
  bool three_harmony_enabled = false;

  static const RuleProfile& defaults();
  static RuleProfile from_json(const nlohmann::json& j);
  static RuleProfile load_file(const std::string& path);
};

namespace detail {
const char* embedded_rule_profile_json();
const char* embedded_rule_knowledge_text();
}

// The static "BaZi rule knowledge" text block used by the second benchmark
// setting; versioned alongside the profile.
std::string rule_knowledge_text();

}  // namespace bazi
