#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bazi/analysis.hpp"
#include "bazi/cycles.hpp"

#include <json.hpp>

namespace bazi::persona {

enum class ScenarioDomain { Wealth, Health, Kinship, Career, Relationship };
const char* to_string(ScenarioDomain d);
std::optional<ScenarioDomain> domain_from_string(const std::string& name);
inline constexpr std::array<ScenarioDomain, 5> kAllDomains = {
    ScenarioDomain::Wealth, ScenarioDomain::Health, ScenarioDomain::Kinship,
    ScenarioDomain::Career, ScenarioDomain::Relationship};

struct TraitDescriptor {
  std::string source;  // lexicon rule id that produced the tag
  std::string tag;
  double weight = 1.0;

  bool operator==(const TraitDescriptor&) const = default;
};

enum class Valence { Adverse, Neutral, Supportive };
const char* to_string(Valence v);

struct TemporalState {
  ScenarioDomain domain = ScenarioDomain::Career;
  int period_year = 0;
  std::vector<std::string> drivers;
  Valence valence = Valence::Neutral;
};

// Everything the prompt needs about temporal dynamics: the luck pillar
// sequence plus (when a period is known) the flowing year.
struct CyclesOutput {
  std::vector<cycles::LuckPillar> luck;
  std::optional<cycles::FlowingPillar> flowing_year;
};

struct QuestionContext {
  std::string text;
  std::vector<std::string> choices;  // rendered as "A."... lines, verbatim
  std::optional<int> period_year;
};

struct PersonaPrompt {
  std::string rendered_text;
  std::string content_hash;  // sha256 of rendered_text
  std::string template_version;
};

inline constexpr const char* kDefaultTemplateVersion = "v1";

// Table-driven stable traits: pattern rows first, then dominant/deficient
// elements, then ShenSha flavor; ordered by weight then lexicon position.
std::vector<TraitDescriptor> personality_features(
    const analysis::AnalysisBundle& bundle,
    const RuleProfile& profile = RuleProfile::defaults());

// Valence of a domain over a one-year window: favorable-element hits minus
// unfavorable ones among the window's luck pillar and flowing year, then one
// downgrade step per clash against the domain's key pillar.
TemporalState scenario_state(const analysis::AnalysisBundle& bundle,
                             const chart::FourPillarsChart& chart, const CyclesOutput& cycles_out,
                             ScenarioDomain domain, int period_year,
                             const RuleProfile& profile = RuleProfile::defaults());

PersonaPrompt render_prompt(const chart::FourPillarsChart& chart,
                            const analysis::AnalysisBundle& bundle,
                            const CyclesOutput& cycles_out,
                            const std::vector<ScenarioDomain>& domains,
                            const std::optional<QuestionContext>& question,
                            const std::string& template_version = kDefaultTemplateVersion,
                            const RuleProfile& profile = RuleProfile::defaults());

// Section builders shared with the benchmark's reduced prompt settings.
std::string render_chart_features(const chart::FourPillarsChart& chart,
                                  const chart::ElementTally& tally);
std::string render_question_block(const QuestionContext& question);

nlohmann::json to_json(const PersonaPrompt& prompt);

}  // namespace bazi::persona
