#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bazi/chart.hpp"
#include "bazi/llm.hpp"
#include "bazi/persona.hpp"

#include <json.hpp>

namespace bazi::bench {

struct Place {
  std::string name;
  calendrics::GeoLocation location;
};

struct Question {
  std::string question_id;
  std::string text;
  std::vector<std::string> choices;
  int gold_index = 0;
  persona::ScenarioDomain dimension = persona::ScenarioDomain::Career;
  std::optional<int> period_year;
};

struct PersonRecord {
  std::string person_id;
  calendrics::CivilDateTime birth;  // local, with utc offset
  chart::Gender gender = chart::Gender::Male;
  Place place;
  std::string country;
  std::vector<Question> questions;
};

struct ValidationIssue {
  std::string path;  // e.g. "persons[3].questions[0].gold_index"
  std::string message;
};

struct DatasetStats {
  int persons = 0;
  int questions = 0;
  int countries = 0;
  int male = 0;
  int female = 0;
  double avg_questions_per_person = 0.0;
  std::map<std::string, int> questions_per_dimension;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  DatasetStats stats;
  bool ok() const { return errors.empty(); }
};

struct Dataset {
  std::vector<PersonRecord> persons;
  ValidationReport report;
};

Dataset load_dataset(const std::string& path);
Dataset dataset_from_json(const nlohmann::json& j);
nlohmann::json dataset_to_json(const std::vector<PersonRecord>& persons);
DatasetStats compute_stats(const std::vector<PersonRecord>& persons);

enum class EvalSetting { VanillaBaZi, BaZiRuleKnowledge, FullModel };
const char* to_string(EvalSetting s);

// Seeded uniform derangement over person ids: nobody keeps their own birth
// data, and the same seed always yields the same plan.
struct ShufflePlan {
  uint64_t seed = 0;
  std::map<std::string, std::string> permutation;  // person -> donor of birth data
};

ShufflePlan make_shuffle(const std::vector<PersonRecord>& records, uint64_t seed);

struct EvalConfig {
  std::string template_version = persona::kDefaultTemplateVersion;
  chart::ChartConfig chart_config;
  int luck_pillar_count = 8;
  bool shuffle_date_only = false;  // default swaps birth datetime and place as a unit
  double invalid_transport_fraction = 0.05;
  std::optional<std::string> cache_dir;
};

struct CellKey {
  std::string model_id;
  EvalSetting setting = EvalSetting::VanillaBaZi;
  bool shuffled = false;

  std::string to_string() const;
  bool operator==(const CellKey&) const = default;
};

struct DimensionScore {
  int n = 0;
  int correct = 0;
  double accuracy_pct() const { return n == 0 ? 0.0 : 100.0 * correct / n; }
};

struct EvalCell {
  CellKey key;
  int n_questions = 0;
  int n_correct = 0;
  int extraction_failures = 0;
  int transport_errors = 0;
  std::map<std::string, DimensionScore> per_dimension;
  std::optional<uint64_t> shuffle_seed;
  std::optional<std::string> baseline_key;   // named baseline cell
  std::optional<double> relative_change_pct; // vs that baseline

  double accuracy_pct() const {
    return n_questions == 0 ? 0.0 : 100.0 * n_correct / n_questions;
  }
};

struct EvalReport {
  std::vector<EvalCell> cells;
  // Reproducibility echo.
  std::string template_version;
  std::string rule_profile_version;
  DatasetStats dataset_stats;
  long cache_hits = 0;
  long cache_misses = 0;
  bool invalid = false;  // more than the allowed fraction of transport errors
  std::vector<std::string> notes;
};

// Stage providers: VanillaBaZi and BaZiRuleKnowledge use `answer` only; the
// FullModel setting runs `knowledge` first and feeds its output to `answer`.
struct StageClients {
  llm::ChatClient* answer = nullptr;
  llm::ChatClient* knowledge = nullptr;
};

EvalReport run_eval(const std::vector<PersonRecord>& records, EvalSetting setting,
                    const std::string& model_id, StageClients clients,
                    const std::optional<ShufflePlan>& shuffle = std::nullopt,
                    const EvalConfig& config = {},
                    const RuleProfile& profile = RuleProfile::defaults());

// Merges single-run reports; relative changes are recomputed against the
// vanilla unshuffled cell of the same model (paper Table 1 semantics) or, for
// a shuffled cell, against its unshuffled counterpart (Tables 2-3).
EvalReport merge_reports(const std::vector<EvalReport>& reports);

// (new - base) / base * 100 at one-decimal display rounding; throws on a
// zero baseline.
double relative_change(double new_pct, double base_pct);

enum class ReportFormat { Json, Csv, Markdown };
std::string render_report(const EvalReport& report, ReportFormat format);
EvalReport report_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const EvalReport& report);

// The prompt-building helper shared by run_eval and the leak-check tests.
struct PromptInputs {
  chart::FourPillarsChart chart;
  analysis::AnalysisBundle bundle;
  persona::CyclesOutput cycles;
};
PromptInputs prepare_inputs(const PersonRecord& person, const chart::ChartConfig& chart_config,
                            int luck_pillar_count, const RuleProfile& profile);
llm::ChatRequest build_request(const PromptInputs& inputs, const Question& question,
                               EvalSetting setting, const std::string& model_id,
                               const EvalConfig& config, const RuleProfile& profile,
                               bool attach_gold);

}  // namespace bazi::bench
