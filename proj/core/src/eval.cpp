#include "bqbench/eval.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

double consensus(const EvalRecord& r) {
  const std::string predicted = normalize(r.predicted);
  const auto matches = std::count_if(r.gold.begin(), r.gold.end(),
                                     [&](const std::string& g) { return normalize(g) == predicted; });
  return std::min(static_cast<double>(matches) / 3.0, 1.0);
}

double exact(const EvalRecord& r) {
  return !r.gold.empty() && normalize(r.predicted) == normalize(r.gold.front()) ? 1.0 : 0.0;
}

void check_records(std::span<const EvalRecord> records) {
  if (records.empty()) throw ConfigError("accuracy of an empty record set is undefined");
  for (const EvalRecord& r : records)
    if (r.gold.empty()) throw InputError("record '" + r.mq_id + "' has no gold answers");
}

double accuracy(std::span<const EvalRecord> records, AccuracyRule rule) {
  return rule == AccuracyRule::kConsensus ? vqa_accuracy(records) : exact_match_accuracy(records);
}

}  // namespace

double vqa_accuracy(std::span<const EvalRecord> records) {
  check_records(records);
  double sum = 0.0;
  for (const EvalRecord& r : records) sum += consensus(r);
  return sum / static_cast<double>(records.size());
}

double exact_match_accuracy(std::span<const EvalRecord> records) {
  check_records(records);
  double sum = 0.0;
  for (const EvalRecord& r : records) sum += exact(r);
  return sum / static_cast<double>(records.size());
}

double r_score(double acc_clean, double acc_noisy, double t) {
  if (!(acc_clean >= 0.0 && acc_clean <= 1.0) || !(acc_noisy >= 0.0 && acc_noisy <= 1.0))
    throw ConfigError("r_score: accuracies must lie in [0, 1]");
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError("r_score: tolerance t must lie in (0, 1]");
  if (acc_clean == 0.0) throw UndefinedRobustnessError("r_score: clean accuracy is 0, relative drop is undefined");
  const double drop = std::max(0.0, acc_clean - acc_noisy) / acc_clean;
  return std::clamp(1.0 - drop / t, 0.0, 1.0);
}

const LevelResult* RobustnessReport::find(std::size_t level) const noexcept {
  for (const LevelResult& l : levels)
    if (l.level == level) return &l;
  return nullptr;
}

std::optional<double> RobustnessReport::acc_clean() const noexcept {
  const LevelResult* clean = find(0);
  if (clean == nullptr) return std::nullopt;
  return clean->accuracy;
}

RobustnessReport evaluate_noisy(std::span<const NoisyQuestion> noisy, const GoldAnswers& gold,
                                const ModelAdapter& adapter, const EvalOptions& options) {
  if (!(options.t > 0.0 && options.t <= 1.0)) throw ConfigError("tolerance t must lie in (0, 1]");

  RobustnessReport report;
  report.t = options.t;
  report.rule = options.rule;

  std::map<std::size_t, std::vector<const NoisyQuestion*>> by_level;
  std::set<std::string> no_gold;
  for (const NoisyQuestion& q : noisy) {
    const auto it = gold.find(q.mq_id);
    if (it == gold.end() || it->second.empty()) {
      no_gold.insert(q.mq_id);
      continue;
    }
    by_level[q.level].push_back(&q);
  }
  report.skipped_missing_gold = no_gold.size();
  if (!no_gold.empty())
    report.warnings.push_back(std::to_string(no_gold.size()) + " main question(s) have no gold answers and were excluded");
  if (!by_level.contains(0)) throw ConfigError("no clean (level 0) questions to evaluate");

  for (const auto& [level, questions] : by_level) {
    std::vector<QueryItem> batch;
    batch.reserve(questions.size());
    for (const NoisyQuestion* q : questions) batch.push_back({q->mq_id, q->image_id, q->text});

    AnswerMap answers;
    try {
      answers = adapter.query(batch);
    } catch (const AdapterError& e) {
      report.complete = false;
      report.error = "level " + std::to_string(level) + ": " + e.what();
      break;
    }

    LevelResult result;
    result.level = level;
    result.records.reserve(questions.size());
    for (const NoisyQuestion* q : questions)
      result.records.push_back({q->mq_id, level, answers.at(q->mq_id), gold.at(q->mq_id)});
    result.accuracy = accuracy(result.records, options.rule);
    report.levels.push_back(std::move(result));
  }

  const std::optional<double> clean = report.acc_clean();
  if (clean && *clean == 0.0)
    report.warnings.push_back("clean accuracy is 0; r_score is undefined at every level");
  for (LevelResult& l : report.levels) {
    if (l.level == 0 || !clean || *clean == 0.0) continue;
    l.r_score = r_score(*clean, l.accuracy, options.t);
  }
  return report;
}

RobustnessReport run_experiment(std::span<const MainQuestion> mqs, std::span<const RankedBQD> ranked,
                                const ModelAdapter& adapter, const ExperimentOptions& options) {
  std::unordered_map<std::string, const RankedBQD*> by_id;
  for (const RankedBQD& r : ranked) by_id.emplace(r.mq_id, &r);

  std::vector<NoisyQuestion> noisy;
  GoldAnswers gold;
  std::size_t missing = 0;
  for (const MainQuestion& mq : mqs) {
    const auto it = by_id.find(mq.question.id());
    if (it == by_id.end()) {
      ++missing;
      continue;
    }
    for (NoisyQuestion& q : noisy_sweep(mq, *it->second, options.levels, options.group_size))
      noisy.push_back(std::move(q));
    if (!mq.answers.empty()) gold.emplace(mq.question.id(), mq.answers);
  }

  RobustnessReport report = evaluate_noisy(noisy, gold, adapter, options.eval);
  report.skipped_missing_ranked = missing;
  if (missing > 0)
    report.warnings.push_back(std::to_string(missing) + " main question(s) have no ranked list and were skipped");
  return report;
}

}  // namespace bqbench
