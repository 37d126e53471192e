#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bqbench/adapter.hpp"
#include "bqbench/noise.hpp"
#include "bqbench/ranker.hpp"
#include "bqbench/text.hpp"

namespace bqbench {

inline constexpr double kDefaultTolerance = 0.2;

struct EvalRecord {
  std::string mq_id;
  std::size_t level = 0;
  std::string predicted;
  std::vector<std::string> gold;
};

// Mean of min(#gold answers equal to the prediction / 3, 1), comparing
// normalized strings. Throws ConfigError on an empty input.
double vqa_accuracy(std::span<const EvalRecord> records);

// Mean of [normalize(predicted) == normalize(gold[0])].
double exact_match_accuracy(std::span<const EvalRecord> records);

// Robustness score in [0, 1]: clamp(1 - d / t, 0, 1) where d is the
// relative accuracy drop max(0, acc_clean - acc_noisy) / acc_clean. An
// accuracy gain scores 1; a relative drop of t or more scores 0.
//
// Throws ConfigError for accuracies outside [0, 1] or t outside (0, 1],
// and UndefinedRobustnessError when acc_clean is 0.
double r_score(double acc_clean, double acc_noisy, double t = kDefaultTolerance);

enum class AccuracyRule { kConsensus, kExactMatch };

struct LevelResult {
  std::size_t level = 0;
  double accuracy = 0.0;
  // Unset for level 0 and whenever the clean accuracy is 0.
  std::optional<double> r_score;
  std::vector<EvalRecord> records;
};

struct RobustnessReport {
  double t = kDefaultTolerance;
  AccuracyRule rule = AccuracyRule::kConsensus;
  // Level 0 (clean) first, then ascending noise levels.
  std::vector<LevelResult> levels;
  // Main questions left out for lack of a ranked list or gold answers.
  std::size_t skipped_missing_ranked = 0;
  std::size_t skipped_missing_gold = 0;
  // False when the adapter failed part way; `error` holds the reason.
  bool complete = true;
  std::string error;
  std::vector<std::string> warnings;

  const LevelResult* find(std::size_t level) const noexcept;
  std::optional<double> acc_clean() const noexcept;
};

struct EvalOptions {
  double t = kDefaultTolerance;
  AccuracyRule rule = AccuracyRule::kConsensus;
};

using GoldAnswers = std::unordered_map<std::string, std::vector<std::string>>;

// Scores noisy questions (level 0 must be present) against gold answers,
// one adapter batch per level. Questions without gold answers are skipped
// and counted. An adapter failure stops the run and returns the levels
// finished so far with complete = false.
RobustnessReport evaluate_noisy(std::span<const NoisyQuestion> noisy, const GoldAnswers& gold,
                                const ModelAdapter& adapter, const EvalOptions& options = {});

struct ExperimentOptions {
  std::size_t levels = 7;
  std::size_t group_size = kDefaultGroupSize;
  EvalOptions eval;
};

// Generates the clean and noisy questions for each main question from its
// ranked list and evaluates them. Main questions without a ranked list are
// skipped and counted.
RobustnessReport run_experiment(std::span<const MainQuestion> mqs, std::span<const RankedBQD> ranked,
                                const ModelAdapter& adapter, const ExperimentOptions& options = {});

}  // namespace bqbench
