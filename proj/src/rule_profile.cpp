#include "bazi/rule_profile.hpp"

#include <fstream>
#include <sstream>

namespace bazi {
namespace {

StrengthWeights strength_from_json(const nlohmann::json& j) {
  StrengthWeights w;
  w.seasonal_wang = j.at("seasonal_wang").get<double>();
  w.seasonal_xiang = j.at("seasonal_xiang").get<double>();
  w.seasonal_xiu = j.at("seasonal_xiu").get<double>();
  w.seasonal_qiu = j.at("seasonal_qiu").get<double>();
  w.seasonal_si = j.at("seasonal_si").get<double>();
  w.root_same = j.at("root_same").get<double>();
  w.root_generator = j.at("root_generator").get<double>();
  w.stem_same = j.at("stem_same").get<double>();
  w.stem_generator = j.at("stem_generator").get<double>();
  w.drain_stem = j.at("drain_stem").get<double>();
  w.drain_hidden = j.at("drain_hidden").get<double>();
  w.midpoint = j.at("midpoint").get<double>();
  w.balanced_halfwidth = j.at("balanced_halfwidth").get<double>();
  w.extreme_offset = j.at("extreme_offset").get<double>();
  return w;
}

}  // namespace

RuleProfile RuleProfile::from_json(const nlohmann::json& j) {
  RuleProfile p;
  try {
    p.version = j.at("version").get<std::string>();
    p.strength = strength_from_json(j.at("strength"));
    for (const auto& rule : j.at("shensha")) {
      ShenShaRule r;
      r.id = rule.at("id").get<std::string>();
      r.glyph = rule.at("glyph").get<std::string>();
      r.name_en = rule.at("name_en").get<std::string>();
      r.key_kind = rule.at("key_kind").get<std::string>();
      for (const auto& [key, value] : rule.at("mapping").items()) {
        r.mapping[std::stoi(key)] = value.get<std::vector<int>>();
      }
      p.shensha_catalog.push_back(std::move(r));
    }
    for (const auto& row : j.at("trait_lexicon")) {
      TraitRule t;
      t.id = row.at("id").get<std::string>();
      t.key_kind = row.at("key_kind").get<std::string>();
      t.key = row.at("key").get<std::string>();
      t.tags = row.at("tags").get<std::vector<std::string>>();
      t.weight = row.at("weight").get<double>();
      p.trait_lexicon.push_back(std::move(t));
    }
    p.domain_pillar = j.at("domain_pillar").get<std::map<std::string, std::string>>();
    p.dominant_element_threshold = j.at("dominant_element_threshold").get<double>();
    p.absent_element_threshold = j.at("absent_element_threshold").get<double>();
    p.three_harmony_enabled = j.at("three_harmony_enabled").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rule profile: ") + e.what());
  }
  return p;
}

const RuleProfile& RuleProfile::defaults() {
  static const RuleProfile profile =
      from_json(nlohmann::json::parse(detail::embedded_rule_profile_json()));
  return profile;
}

RuleProfile RuleProfile::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open rule profile: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("rule profile " + path + ": " + e.what());
  }
  return from_json(j);
}

std::string rule_knowledge_text() { return detail::embedded_rule_knowledge_text(); }

}  // namespace bazi
