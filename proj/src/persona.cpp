#include "bazi/persona.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "bazi/digest.hpp"

namespace bazi::persona {
namespace {

using analysis::AnalysisBundle;
using chart::Element;
using chart::FourPillarsChart;
using cycles::FlowingPillar;
using cycles::LuckPillar;

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

const LuckPillar* covering_luck_pillar(const std::vector<LuckPillar>& luck, int year,
                                       int birth_year) {
  for (const LuckPillar& lp : luck) {
    const int end_year = lp.start_civil_year + 10;
    if (year >= lp.start_civil_year && year < end_year) return &lp;
  }
  (void)birth_year;
  return nullptr;
}

struct DriverPillar {
  std::string label;  // "luck-pillar" / "flowing-year"
  chart::Pillar pillar;
};

}  // namespace

const char* to_string(ScenarioDomain d) {
  switch (d) {
    case ScenarioDomain::Wealth: return "Wealth";
    case ScenarioDomain::Health: return "Health";
    case ScenarioDomain::Kinship: return "Kinship";
    case ScenarioDomain::Career: return "Career";
    case ScenarioDomain::Relationship: return "Relationship";
  }
  return "?";
}

std::optional<ScenarioDomain> domain_from_string(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "wealth") return ScenarioDomain::Wealth;
  if (lower == "health") return ScenarioDomain::Health;
  if (lower == "kinship") return ScenarioDomain::Kinship;
  if (lower == "career") return ScenarioDomain::Career;
  if (lower == "relationship" || lower == "relationships") return ScenarioDomain::Relationship;
  return std::nullopt;
}

const char* to_string(Valence v) {
  switch (v) {
    case Valence::Adverse: return "Adverse";
    case Valence::Neutral: return "Neutral";
    case Valence::Supportive: return "Supportive";
  }
  return "?";
}

std::vector<TraitDescriptor> personality_features(const AnalysisBundle& bundle,
                                                  const RuleProfile& profile) {
  struct Hit {
    std::size_t lexicon_index;
    const TraitRule* rule;
  };
  std::vector<Hit> hits;

  auto match = [&](const std::string& kind, const std::string& key) {
    for (std::size_t i = 0; i < profile.trait_lexicon.size(); ++i) {
      const TraitRule& r = profile.trait_lexicon[i];
      if (r.key_kind == kind && r.key == key) hits.push_back({i, &r});
    }
  };

  switch (bundle.pattern.kind) {
    case analysis::PatternStructure::Kind::Regular:
      match("pattern_regular", analysis::glyph(*bundle.pattern.regular_god));
      break;
    case analysis::PatternStructure::Kind::Follower:
      match("pattern_follower", analysis::glyph(*bundle.pattern.follower));
      break;
    case analysis::PatternStructure::Kind::Special:
      match("pattern_special", bundle.pattern.special_name);
      break;
  }

  for (int e = 0; e < 5; ++e) {
    const double weight = bundle.tally.hidden_weighted[static_cast<std::size_t>(e)];
    if (weight >= profile.dominant_element_threshold) {
      match("element_dominant", chart::to_string(static_cast<Element>(e)));
    } else if (weight < profile.absent_element_threshold) {
      match("element_absent", chart::to_string(static_cast<Element>(e)));
    }
  }

  std::vector<std::string> seen_rules;
  for (const analysis::ShenShaMark& mark : bundle.marks) {
    if (std::find(seen_rules.begin(), seen_rules.end(), mark.rule_id) != seen_rules.end()) {
      continue;
    }
    seen_rules.push_back(mark.rule_id);
    match("shensha", mark.rule_id);
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.rule->weight != b.rule->weight) return a.rule->weight > b.rule->weight;
    return a.lexicon_index < b.lexicon_index;
  });

  std::vector<TraitDescriptor> out;
  for (const Hit& h : hits) {
    for (const std::string& tag : h.rule->tags) {
      out.push_back({h.rule->id, tag, h.rule->weight});
    }
  }
  return out;
}

TemporalState scenario_state(const AnalysisBundle& bundle, const FourPillarsChart& chart_in,
                             const CyclesOutput& cycles_out, ScenarioDomain domain,
                             int period_year, const RuleProfile& profile) {
  TemporalState state;
  state.domain = domain;
  state.period_year = period_year;

  std::vector<DriverPillar> drivers;
  if (const LuckPillar* lp = covering_luck_pillar(cycles_out.luck, period_year,
                                                  chart_in.birth.local_true_solar.year)) {
    drivers.push_back({"luck-pillar " + lp->pillar.glyphs(), lp->pillar});
  }
  if (cycles_out.flowing_year) {
    drivers.push_back({"flowing-year " + cycles_out.flowing_year->pillar.glyphs(),
                       cycles_out.flowing_year->pillar});
  }

  // Favorable/unfavorable hits over each driver pillar's stem and branch
  // elements, one unit each; the balance sets the base valence.
  int balance = 0;
  for (const DriverPillar& d : drivers) {
    const Element symbols[2] = {d.pillar.stem().element(), d.pillar.branch().element()};
    for (Element e : symbols) {
      if (bundle.preference.is_favorable(e)) {
        ++balance;
        state.drivers.push_back(d.label + " element " + chart::to_string(e) + " (favorable)");
      } else if (bundle.preference.is_unfavorable(e)) {
        --balance;
        state.drivers.push_back(d.label + " element " + chart::to_string(e) + " (unfavorable)");
      }
    }
  }
  state.valence =
      balance > 0 ? Valence::Supportive : balance < 0 ? Valence::Adverse : Valence::Neutral;

  // One downgrade step per clash against the domain's key natal pillar,
  // saturating at Adverse. Applied after the tally so driver order is
  // irrelevant.
  const auto key_it = profile.domain_pillar.find(to_string(domain));
  const std::string key_name = key_it != profile.domain_pillar.end() ? key_it->second : "day";
  const chart::Pillar& key_pillar = key_name == "year"    ? chart_in.year
                                    : key_name == "month" ? chart_in.month
                                    : key_name == "hour"  ? chart_in.hour
                                                          : chart_in.day;
  int downgrades = 0;
  for (const DriverPillar& d : drivers) {
    if (cycles::branches_clash(d.pillar.branch().index(), key_pillar.branch().index())) {
      ++downgrades;
      state.drivers.push_back(d.label + " branch " + d.pillar.branch().glyph() +
                              " clashes the " + key_name + " pillar branch " +
                              key_pillar.branch().glyph());
    }
  }
  for (int i = 0; i < downgrades; ++i) {
    if (state.valence == Valence::Supportive) {
      state.valence = Valence::Neutral;
    } else {
      state.valence = Valence::Adverse;
    }
  }
  return state;
}

PersonaPrompt render_prompt(const FourPillarsChart& chart_in, const AnalysisBundle& bundle,
                            const CyclesOutput& cycles_out,
                            const std::vector<ScenarioDomain>& domains,
                            const std::optional<QuestionContext>& question,
                            const std::string& template_version, const RuleProfile& profile) {
  if (template_version != "v1") {
    throw ConfigError("unknown persona template version: " + template_version);
  }

  std::ostringstream os;
  os << render_chart_features(chart_in, bundle.tally);

  os << "\n=== Interpretive Reasoning ===\n";
  os << "Ten Gods:";
  for (const analysis::SymbolGod& g : bundle.gods) {
    os << " [" << analysis::to_string(g.position) << (g.from_branch ? " branch " : " stem ")
       << chart::Stem(g.stem_index).glyph() << " -> " << analysis::glyph(g.god) << "]";
  }
  os << "\n";
  os << "Day-master strength: score " << fmt1(bundle.strength.score) << " ("
     << analysis::to_string(bundle.strength.category) << "; seasonal "
     << bundle.strength.seasonal_state << " " << fmt1(bundle.strength.contributions.seasonal)
     << ", roots " << fmt1(bundle.strength.contributions.roots) << ", stem support "
     << fmt1(bundle.strength.contributions.stem_support) << ", drains "
     << fmt1(bundle.strength.contributions.drains) << ")\n";
  os << "Pattern structure: " << bundle.pattern.display_name() << "\n";
  os << "Favorable elements (xi 喜):";
  if (bundle.preference.favorable.empty()) os << " none";
  for (Element e : bundle.preference.favorable) os << " " << chart::to_string(e);
  os << "\nUnfavorable elements (ji 忌):";
  if (bundle.preference.unfavorable.empty()) os << " none";
  for (Element e : bundle.preference.unfavorable) os << " " << chart::to_string(e);
  os << "\n";
  os << "ShenSha marks:";
  if (bundle.marks.empty()) os << " none";
  for (const analysis::ShenShaMark& m : bundle.marks) {
    os << " [" << m.glyph << " " << m.name_en << " at " << analysis::to_string(m.location) << "]";
  }
  os << "\n";

  os << "\n=== Temporal Dynamics ===\n";
  os << "Luck-cycle direction: "
     << cycles::to_string(cycles::luck_direction(chart_in.year.stem(), chart_in.gender)) << "\n";
  for (const LuckPillar& lp : cycles_out.luck) {
    os << "Luck pillar " << lp.ordinal << ": " << lp.pillar.pinyin() << " (" << lp.pillar.glyphs()
       << ") from age " << fmt1(lp.start_age_years) << " (year " << lp.start_civil_year << ")\n";
  }
  if (cycles_out.flowing_year) {
    os << "Flowing year: " << cycles_out.flowing_year->pillar.pinyin() << " ("
       << cycles_out.flowing_year->pillar.glyphs() << ")\n";
  }

  const std::vector<TraitDescriptor> traits = personality_features(bundle, profile);
  for (ScenarioDomain domain : domains) {
    os << "\n=== Scenario: " << to_string(domain) << " ===\n";
    os << "Stable traits:";
    if (traits.empty()) os << " none";
    for (const TraitDescriptor& t : traits) os << " " << t.tag;
    os << "\n";
    if (cycles_out.flowing_year) {
      const int period_year = cycles_out.flowing_year->period_start.year;
      const TemporalState state =
          scenario_state(bundle, chart_in, cycles_out, domain, period_year, profile);
      os << "Period " << state.period_year << " outlook: " << to_string(state.valence) << "\n";
      for (const std::string& d : state.drivers) os << "  driver: " << d << "\n";
    }
  }

  if (question) {
    os << "\n" << render_question_block(*question);
  }

  PersonaPrompt prompt;
  prompt.rendered_text = os.str();
  prompt.content_hash = sha256_hex(prompt.rendered_text);
  prompt.template_version = template_version;
  return prompt;
}

std::string render_chart_features(const chart::FourPillarsChart& chart_in,
                                  const chart::ElementTally& tally) {
  std::ostringstream os;
  const calendrics::CivilDateTime civil = calendrics::from_julian_date(
      chart_in.birth.jd_utc, chart_in.birth.local_true_solar.utc_offset_minutes);

  os << "=== Birth Input ===\n";
  os << "Local birth time: " << civil.iso_with_offset() << "\n";
  os << "Local true solar time: " << chart_in.birth.local_true_solar.iso_local() << "\n";
  os << "Gender: " << chart::to_string(chart_in.gender) << "\n";

  os << "\n=== BaZi Chart (Four Pillars) ===\n";
  const struct {
    const char* label;
    const chart::Pillar& pillar;
  } rows[] = {{"Year ", chart_in.year},
              {"Month", chart_in.month},
              {"Day  ", chart_in.day},
              {"Hour ", chart_in.hour}};
  for (const auto& row : rows) {
    os << row.label << " pillar: " << row.pillar.pinyin() << " (" << row.pillar.glyphs() << ") - "
       << chart::to_string(row.pillar.stem().element()) << " over "
       << chart::to_string(row.pillar.branch().element()) << "\n";
  }
  os << "Day master: " << chart_in.day_master.pinyin() << " (" << chart_in.day_master.glyph()
     << "), " << chart::to_string(chart_in.day_master.polarity()) << " "
     << chart::to_string(chart_in.day_master.element()) << "\n";
  os << "Five-element tally (visible):";
  for (int e = 0; e < 5; ++e) {
    os << " " << chart::to_string(static_cast<Element>(e)) << " "
       << tally.visible[static_cast<std::size_t>(e)];
  }
  os << "\nFive-element tally (hidden-weighted):";
  for (int e = 0; e < 5; ++e) {
    os << " " << chart::to_string(static_cast<Element>(e)) << " "
       << fmt1(tally.hidden_weighted[static_cast<std::size_t>(e)]);
  }
  os << "\n";
  return os.str();
}

std::string render_question_block(const QuestionContext& question) {
  std::ostringstream os;
  os << "=== Question ===\n";
  os << question.text << "\n";
  for (std::size_t i = 0; i < question.choices.size(); ++i) {
    os << static_cast<char>('A' + i) << ". " << question.choices[i] << "\n";
  }
  os << "Answer with the letter of the single best choice.\n";
  return os.str();
}

nlohmann::json to_json(const PersonaPrompt& p) {
  return {{"schema_version", "persona.v1"},
          {"template_version", p.template_version},
          {"content_hash", p.content_hash},
          {"rendered_text", p.rendered_text}};
}

}  // namespace bazi::persona
