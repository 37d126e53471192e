#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bqbench/encoding.hpp"
#include "bqbench/lasso.hpp"
#include "bqbench/metrics.hpp"
#include "bqbench/text.hpp"

namespace bqbench {

inline constexpr std::size_t kDefaultTopK = 21;
inline constexpr double kDefaultLambdaRatio = 0.1;

struct RankedEntry {
  std::string bq_id;
  std::string question;
  double score = 0.0;
};

// Basic questions ranked against one main question: scores in [0, 1],
// non-increasing, ties ordered by bq_id.
struct RankedBQD {
  std::string mq_id;
  std::string method;
  std::size_t top_k = kDefaultTopK;
  std::vector<RankedEntry> entries;
};

// One of the eight ranking methods: LASSO or a similarity metric.
struct RankingMethod {
  bool lasso = true;
  Metric metric = Metric::kBleu1;

  static RankingMethod Lasso() { return {}; }
  static RankingMethod FromMetric(Metric m) { return {false, m}; }
  std::string name() const;
};

std::optional<RankingMethod> parse_method(std::string_view name) noexcept;
// "lasso, bleu1, bleu2, bleu3, bleu4, rouge, cider, meteor"
std::string method_list();

// Ranks by LASSO coefficients: columns are the encoded pool questions, the
// target is the encoded main question. The pool is encoded once; every
// rank() call reuses the columns.
class LassoRanker {
 public:
  LassoRanker(std::vector<Question> pool, std::shared_ptr<const Encoder> encoder);

  // lambda = lambda_ratio * lambda_max. Pool entries sharing the main
  // question's id are excluded. Throws ConfigError for lambda_ratio outside
  // (0, 1) or top_k == 0 and DegenerateRankingError when lambda_max is 0.
  RankedBQD rank(const Question& mq, double lambda_ratio = kDefaultLambdaRatio,
                 std::size_t top_k = kDefaultTopK, const SolveOptions& options = {}) const;

  // The LASSO instance rank() would solve for `mq`, with lambda unset.
  LassoProblem problem_for(const Question& mq) const;

  std::span<const Question> pool() const noexcept { return pool_; }

 private:
  std::vector<Question> pool_;
  std::shared_ptr<const Encoder> encoder_;
  ColumnMatrix columns_;
};

// Ranks by a similarity metric with the main question as reference. For
// cider the IdfTable is computed from the pool at construction.
class MetricRanker {
 public:
  MetricRanker(std::vector<Question> pool, Metric metric);
  MetricRanker(std::vector<Question> pool, Metric metric, std::shared_ptr<const IdfTable> idf);

  RankedBQD rank(const Question& mq, std::size_t top_k = kDefaultTopK) const;

 private:
  std::vector<Question> pool_;
  Metric metric_;
  std::shared_ptr<const IdfTable> idf_;
};

RankedBQD rank_lasso(const Question& mq, std::span<const Question> pool, const Encoder& encoder,
                     double lambda_ratio = kDefaultLambdaRatio, std::size_t top_k = kDefaultTopK);

// Throws ConfigError for cider when `idf` is null.
RankedBQD rank_metric(const Question& mq, std::span<const Question> pool, Metric method,
                      const IdfTable* idf, std::size_t top_k = kDefaultTopK);

// Sorts by score descending then bq_id ascending and truncates to top_k.
void finalize_ranking(RankedBQD& ranked);

// Kendall rank correlation of the entry orders. Both rankings must share
// mq_id and the exact id set (InputError otherwise). Fewer than two
// entries yields 1.
double kendall_tau(const RankedBQD& a, const RankedBQD& b);

// Kendall tau restricted to the ids both rankings contain, in their
// induced order. nullopt when fewer than two ids are shared.
std::optional<double> kendall_tau_common(const RankedBQD& a, const RankedBQD& b);

}  // namespace bqbench
