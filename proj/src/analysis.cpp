#include "bazi/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bazi::analysis {
namespace {

using chart::Branch;
using chart::Element;
using chart::FourPillarsChart;
using chart::Pillar;
using chart::Stem;

constexpr const char* kTenGodGlyphs[10] = {"比肩", "劫财", "食神", "伤官", "偏财",
                                           "正财", "七杀", "正官", "偏印", "正印"};
constexpr const char* kTenGodNames[10] = {
    "Peer", "Rob Wealth", "Eating God", "Hurting Officer", "Indirect Wealth",
    "Direct Wealth", "Seven Killings", "Direct Officer", "Indirect Resource",
    "Direct Resource"};

std::array<Pillar, 4> pillars_of(const FourPillarsChart& c) {
  return {c.year, c.month, c.day, c.hour};
}

constexpr PillarPosition kPositions[4] = {PillarPosition::Year, PillarPosition::Month,
                                          PillarPosition::Day, PillarPosition::Hour};

// God group of an element relative to the day master: 0 peer, 1 output,
// 2 wealth, 3 officer, 4 resource.
int god_group(Element day_master, Element other) {
  return (static_cast<int>(other) - static_cast<int>(day_master) + 5) % 5;
}

}  // namespace

const char* glyph(TenGod g) { return kTenGodGlyphs[static_cast<int>(g)]; }
const char* name_en(TenGod g) { return kTenGodNames[static_cast<int>(g)]; }

const char* to_string(PillarPosition p) {
  switch (p) {
    case PillarPosition::Year: return "year";
    case PillarPosition::Month: return "month";
    case PillarPosition::Day: return "day";
    case PillarPosition::Hour: return "hour";
  }
  return "?";
}

const char* to_string(StrengthCategory c) {
  switch (c) {
    case StrengthCategory::ExtremeWeak: return "ExtremeWeak";
    case StrengthCategory::Weak: return "Weak";
    case StrengthCategory::Balanced: return "Balanced";
    case StrengthCategory::Strong: return "Strong";
    case StrengthCategory::ExtremeStrong: return "ExtremeStrong";
  }
  return "?";
}

const char* glyph(FollowerVariant v) {
  switch (v) {
    case FollowerVariant::Output: return "从儿";
    case FollowerVariant::Wealth: return "从财";
    case FollowerVariant::Officer: return "从杀";
  }
  return "?";
}

TenGod ten_god(Stem day_master, Stem other) {
  const int group = god_group(day_master.element(), other.element());
  const bool same_polarity = day_master.polarity() == other.polarity();
  // Within each group the same-polarity member comes first (比肩, 食神, 偏财,
  // 七杀, 偏印).
  return static_cast<TenGod>(group * 2 + (same_polarity ? 0 : 1));
}

std::vector<ShenShaMark> shensha_marks(const FourPillarsChart& c, const RuleProfile& profile) {
  std::vector<ShenShaMark> marks;
  const auto pillars = pillars_of(c);

  auto scan_branches = [&](const ShenShaRule& rule, const std::vector<int>& triggers,
                           int skip_position) {
    for (int i = 0; i < 4; ++i) {
      if (i == skip_position) continue;
      const int b = pillars[static_cast<std::size_t>(i)].branch().index();
      if (std::find(triggers.begin(), triggers.end(), b) != triggers.end()) {
        marks.push_back({rule.id, rule.glyph, rule.name_en, kPositions[i]});
      }
    }
  };

  for (const ShenShaRule& rule : profile.shensha_catalog) {
    if (rule.key_kind == "day_stem") {
      const auto it = rule.mapping.find(c.day_master.index());
      if (it != rule.mapping.end()) scan_branches(rule, it->second, -1);
    } else if (rule.key_kind == "branch_trine") {
      // Keyed independently on the year branch and the day branch; the key
      // branch itself does not trigger its own rule.
      for (int key_position : {0, 2}) {
        const int trine = pillars[static_cast<std::size_t>(key_position)].branch().index() % 4;
        const auto it = rule.mapping.find(trine);
        if (it != rule.mapping.end()) scan_branches(rule, it->second, key_position);
      }
    }
  }

  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  return marks;
}

StrengthAssessment day_master_strength(const FourPillarsChart& c, const RuleProfile& profile) {
  const StrengthWeights& w = profile.strength;
  const Element dm = c.day_master.element();
  const Element generator = chart::generated_by(dm);

  StrengthAssessment out;

  // Seasonal standing against the month branch's element.
  const Element season = c.month.branch().element();
  if (season == dm) {
    out.contributions.seasonal = w.seasonal_wang;
    out.seasonal_state = "wang";
  } else if (chart::generates(season) == dm) {
    out.contributions.seasonal = w.seasonal_xiang;
    out.seasonal_state = "xiang";
  } else if (chart::generates(dm) == season) {
    out.contributions.seasonal = w.seasonal_xiu;
    out.seasonal_state = "xiu";
  } else if (chart::controls(dm) == season) {
    out.contributions.seasonal = w.seasonal_qiu;
    out.seasonal_state = "qiu";
  } else {
    out.contributions.seasonal = w.seasonal_si;
    out.seasonal_state = "si";
  }

  const auto pillars = pillars_of(c);
  for (int i = 0; i < 4; ++i) {
    const Pillar& p = pillars[static_cast<std::size_t>(i)];

    // Roots and hidden drains.
    for (const chart::HiddenStem& h : p.branch().hidden_stems()) {
      const Element e = Stem(h.stem_index).element();
      if (e == dm) {
        out.contributions.roots += w.root_same * h.weight;
      } else if (e == generator) {
        out.contributions.roots += w.root_generator * h.weight;
      } else {
        out.contributions.drains -= w.drain_hidden * h.weight;
      }
    }

    // Visible stems other than the day master's own position.
    if (kPositions[i] == PillarPosition::Day) continue;
    const Element e = p.stem().element();
    if (e == dm) {
      out.contributions.stem_support += w.stem_same;
    } else if (e == generator) {
      out.contributions.stem_support += w.stem_generator;
    } else {
      out.contributions.drains -= w.drain_stem;
    }
  }

  out.score = out.contributions.seasonal + out.contributions.roots +
              out.contributions.stem_support + out.contributions.drains;

  const double delta = out.score - w.midpoint;
  if (delta > w.extreme_offset) {
    out.category = StrengthCategory::ExtremeStrong;
  } else if (delta < -w.extreme_offset) {
    out.category = StrengthCategory::ExtremeWeak;
  } else if (delta > w.balanced_halfwidth) {
    out.category = StrengthCategory::Strong;
  } else if (delta < -w.balanced_halfwidth) {
    out.category = StrengthCategory::Weak;
  } else {
    out.category = StrengthCategory::Balanced;
  }
  return out;
}

std::string PatternStructure::display_name() const {
  switch (kind) {
    case Kind::Regular:
      return std::string(analysis::glyph(*regular_god)) + "格";
    case Kind::Follower:
      return std::string(analysis::glyph(*follower)) + "格";
    case Kind::Special:
      return special_name;
  }
  return "?";
}

PatternStructure classify_pattern(const FourPillarsChart& c, const StrengthAssessment& strength,
                                  const RuleProfile&) {
  PatternStructure out;
  const Element dm = c.day_master.element();
  const auto pillars = pillars_of(c);

  if (strength.category == StrengthCategory::ExtremeWeak) {
    // Weighted presence of each drain group: visible stems count 1, hidden
    // stems by weight. Dominant group decides the follower variant; ties
    // resolve output > wealth > officer.
    double group_weight[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      const Pillar& p = pillars[static_cast<std::size_t>(i)];
      if (kPositions[i] != PillarPosition::Day) {
        group_weight[god_group(dm, p.stem().element())] += 1.0;
      }
      for (const chart::HiddenStem& h : p.branch().hidden_stems()) {
        group_weight[god_group(dm, Stem(h.stem_index).element())] += h.weight;
      }
    }
    const double output = group_weight[1], wealth = group_weight[2], officer = group_weight[3];
    if (output + wealth + officer > 0) {
      FollowerVariant variant = FollowerVariant::Output;
      double best = output;
      if (wealth > best) {
        variant = FollowerVariant::Wealth;
        best = wealth;
      }
      if (officer > best) variant = FollowerVariant::Officer;
      out.kind = PatternStructure::Kind::Follower;
      out.follower = variant;
      out.basis.push_back("category ExtremeWeak (score " + std::to_string(strength.score) + ")");
      out.basis.push_back(std::string("dominant drain group ") + glyph(variant) +
                          " weight " + std::to_string(best));
      return out;
    }
    out.basis.push_back("category ExtremeWeak but no drain present; regular rule applies");
  }

  const Stem command = c.month.branch().principal_stem();
  const TenGod command_god = ten_god(c.day_master, command);
  if (command_god != TenGod::Peer && command_god != TenGod::RobWealth) {
    out.kind = PatternStructure::Kind::Regular;
    out.regular_god = command_god;
    out.basis.push_back(std::string("month command ") + command.glyph() + " is " +
                        glyph(command_god) + " to day master " + c.day_master.glyph());
    if (strength.category == StrengthCategory::Balanced) {
      out.basis.push_back("balanced chart: low-confidence classification");
    }
    return out;
  }

  // Peer month command: fall back to the strongest other transparent stem,
  // ranked by the chart's hidden-weighted tally of its element, ties by
  // pillar order year, month, hour.
  out.basis.push_back(std::string("month command ") + command.glyph() + " is " +
                      glyph(command_god) + "; falling back to transparent stems");
  const chart::ElementTally tally = chart::element_tally(c);
  const Stem* best = nullptr;
  double best_weight = -1.0;
  std::array<Stem, 3> others = {c.year.stem(), c.month.stem(), c.hour.stem()};
  for (const Stem& s : others) {
    const TenGod god = ten_god(c.day_master, s);
    if (god == TenGod::Peer || god == TenGod::RobWealth) continue;
    const double weight = tally.hidden_weighted[static_cast<std::size_t>(s.element())];
    if (weight > best_weight) {
      best_weight = weight;
      best = &s;
    }
  }
  if (best != nullptr) {
    out.kind = PatternStructure::Kind::Regular;
    out.regular_god = ten_god(c.day_master, *best);
    out.basis.push_back(std::string("strongest transparent stem ") + best->glyph() +
                        " (element weight " + std::to_string(best_weight) + ")");
    return out;
  }

  // Every transparent stem is a peer: the chart follows its own element.
  out.kind = PatternStructure::Kind::Special;
  out.special_name = "专旺";
  out.basis.push_back("no non-peer transparent stem; chart dominated by its own element");
  return out;
}

bool ElementPreference::is_favorable(Element e) const {
  return std::find(favorable.begin(), favorable.end(), e) != favorable.end();
}

bool ElementPreference::is_unfavorable(Element e) const {
  return std::find(unfavorable.begin(), unfavorable.end(), e) != unfavorable.end();
}

ElementPreference favorable_elements(const FourPillarsChart& c, const PatternStructure& pattern,
                                     const StrengthAssessment& strength) {
  const Element dm = c.day_master.element();
  const Element peer = dm;
  const Element resource = chart::generated_by(dm);
  const Element output = chart::generates(dm);
  const Element wealth = chart::controls(dm);
  const Element officer = chart::controlled_by(dm);

  ElementPreference pref;
  if (pattern.kind == PatternStructure::Kind::Follower) {
    Element followed = output;
    if (pattern.follower == FollowerVariant::Wealth) followed = wealth;
    if (pattern.follower == FollowerVariant::Officer) followed = officer;
    pref.favorable = {followed, chart::generated_by(followed)};
    pref.unfavorable = {chart::controlled_by(followed)};
    if (!pref.is_favorable(resource) && !pref.is_unfavorable(resource) && resource != followed) {
      pref.unfavorable.push_back(resource);
    }
    return pref;
  }

  switch (strength.category) {
    case StrengthCategory::Strong:
    case StrengthCategory::ExtremeStrong:
      pref.favorable = {output, wealth, officer};
      pref.unfavorable = {peer, resource};
      break;
    case StrengthCategory::Weak:
    case StrengthCategory::ExtremeWeak:
      pref.favorable = {peer, resource};
      pref.unfavorable = {output, wealth, officer};
      break;
    case StrengthCategory::Balanced:
      break;  // no pronounced preference
  }
  return pref;
}

AnalysisBundle analyze(const FourPillarsChart& c, const RuleProfile& profile) {
  AnalysisBundle bundle;
  const auto pillars = pillars_of(c);
  for (int i = 0; i < 4; ++i) {
    const Pillar& p = pillars[static_cast<std::size_t>(i)];
    if (kPositions[i] != PillarPosition::Day) {
      bundle.gods.push_back(
          {kPositions[i], false, p.stem().index(), ten_god(c.day_master, p.stem())});
    }
    const Stem principal = p.branch().principal_stem();
    bundle.gods.push_back(
        {kPositions[i], true, principal.index(), ten_god(c.day_master, principal)});
  }
  bundle.marks = shensha_marks(c, profile);
  bundle.strength = day_master_strength(c, profile);
  bundle.pattern = classify_pattern(c, bundle.strength, profile);
  bundle.preference = favorable_elements(c, bundle.pattern, bundle.strength);
  bundle.tally = chart::element_tally(c);
  return bundle;
}

nlohmann::json to_json(const AnalysisBundle& b) {
  nlohmann::json gods = nlohmann::json::array();
  for (const SymbolGod& g : b.gods) {
    gods.push_back({{"position", to_string(g.position)},
                    {"from_branch", g.from_branch},
                    {"stem", chart::Stem(g.stem_index).glyph()},
                    {"god", glyph(g.god)},
                    {"god_en", name_en(g.god)}});
  }
  nlohmann::json marks = nlohmann::json::array();
  for (const ShenShaMark& m : b.marks) {
    marks.push_back({{"rule_id", m.rule_id},
                     {"glyph", m.glyph},
                     {"name_en", m.name_en},
                     {"location", to_string(m.location)}});
  }
  nlohmann::json favorable = nlohmann::json::array(), unfavorable = nlohmann::json::array();
  for (auto e : b.preference.favorable) favorable.push_back(chart::to_string(e));
  for (auto e : b.preference.unfavorable) unfavorable.push_back(chart::to_string(e));

  nlohmann::json visible, hidden;
  for (int e = 0; e < 5; ++e) {
    visible[chart::to_string(static_cast<Element>(e))] =
        b.tally.visible[static_cast<std::size_t>(e)];
    hidden[chart::to_string(static_cast<Element>(e))] =
        b.tally.hidden_weighted[static_cast<std::size_t>(e)];
  }

  return {{"schema_version", "analysis.v1"},
          {"ten_gods", gods},
          {"shensha", marks},
          {"strength",
           {{"score", b.strength.score},
            {"category", to_string(b.strength.category)},
            {"seasonal_state", b.strength.seasonal_state},
            {"contributions",
             {{"seasonal", b.strength.contributions.seasonal},
              {"roots", b.strength.contributions.roots},
              {"stem_support", b.strength.contributions.stem_support},
              {"drains", b.strength.contributions.drains}}}}},
          {"pattern",
           {{"kind",
             b.pattern.kind == PatternStructure::Kind::Regular
                 ? "regular"
                 : b.pattern.kind == PatternStructure::Kind::Follower ? "follower" : "special"},
            {"name", b.pattern.display_name()},
            {"basis", b.pattern.basis}}},
          {"preference", {{"favorable", favorable}, {"unfavorable", unfavorable}}},
          {"element_tally", {{"visible", visible}, {"hidden_weighted", hidden}}}};
}

}  // namespace bazi::analysis
