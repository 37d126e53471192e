#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bqbench/encoding.hpp"
#include "bqbench/ranker.hpp"
#include "bqbench/text.hpp"

namespace bqbench {

inline constexpr std::size_t kDefaultGroupSize = 3;

// Level L >= 1 selects ranks (L-1)*group_size+1 .. L*group_size. Higher
// levels hold less similar questions and so inject more noise.
struct NoiseLevel {
  std::size_t level = 1;
  std::size_t group_size = kDefaultGroupSize;
};

// A main question with basic questions appended. Level 0 is the clean
// question.
struct NoisyQuestion {
  std::string mq_id;
  std::string image_id;
  std::size_t level = 0;
  std::string text;
  std::vector<std::string> appended_bq_ids;
};

// Highest level a ranked list of this length supports.
std::size_t max_level(const RankedBQD& ranked, std::size_t group_size);

// The group_size entries of `level`, in rank order. Throws RangeError (with
// the maximum feasible level) past the end of the list and ConfigError for
// level 0 or group_size 0.
std::vector<RankedEntry> select_level(const RankedBQD& ranked, NoiseLevel level);

// Raw texts joined by single spaces: mq first, then each basic question.
std::string concat_noise(std::string_view mq_text, std::span<const std::string> bq_texts);
std::string concat_noise(const Question& mq, std::span<const Question> bqs);

NoisyQuestion make_noisy(const MainQuestion& mq, const RankedBQD& ranked, NoiseLevel level);

// Level 0 followed by levels 1..levels.
std::vector<NoisyQuestion> noisy_sweep(const MainQuestion& mq, const RankedBQD& ranked, std::size_t levels,
                                       std::size_t group_size = kDefaultGroupSize);

struct BuildOptions {
  RankingMethod method = RankingMethod::Lasso();
  std::size_t top_k = kDefaultTopK;
  std::size_t group_size = kDefaultGroupSize;
  double lambda_ratio = kDefaultLambdaRatio;
  // LASSO only. When null a TF-IDF encoder over 1- and 2-grams is fit to
  // the pool.
  std::shared_ptr<const Encoder> encoder;
  // Worker threads; 0 means one per hardware thread.
  unsigned jobs = 1;
};

// Result for one main question: either a ranking or the reason it failed.
struct RankOutcome {
  std::string mq_id;
  std::optional<RankedBQD> ranked;
  std::string error;

  bool ok() const noexcept { return ranked.has_value(); }
};

// One outcome per main question, in input order. Errors for a single main
// question (e.g. a degenerate LASSO target) are captured in its outcome;
// configuration errors throw.
std::vector<RankOutcome> build_ranked_bqd(std::span<const Question> mqs, std::span<const Question> pool,
                                          const BuildOptions& options);

}  // namespace bqbench
