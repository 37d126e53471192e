#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "bqbench/text.hpp"

namespace bqbench {

// Sentence-level similarity metrics. Every function returns a value in
// [0, 1]. The basic question is the candidate and the main question the
// reference; none of these metrics is symmetric.

// Precision smoothing constant used in place of a zero k-gram precision.
inline constexpr double kBleuEpsilon = 1e-9;
inline constexpr double kRougeBeta = 1.2;

// Cumulative BLEU with brevity penalty. Orders where neither side has any
// k-grams count as a perfect precision; orders where only the candidate is
// too short are smoothed to kBleuEpsilon. Throws ConfigError unless
// 1 <= max_n <= 4.
double bleu(const Question& candidate, const Question& reference, int max_n);

// LCS-based ROUGE-L F-measure with beta = 1.2.
double rouge_l(const Question& candidate, const Question& reference);

// Exact-match METEOR: F = 10PR / (R + 9P) times (1 - 0.5 (chunks/m)^3).
// Alignment maps each candidate token to the leftmost unused equal
// reference token.
double meteor_lite(const Question& candidate, const Question& reference);

// Number of alignment chunks meteor_lite uses; 0 when nothing matches.
std::size_t meteor_chunks(const Tokens& candidate, const Tokens& reference);

// Document frequencies of every 1..n_max-gram over a question corpus.
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(std::size_t n_docs, std::unordered_map<NGram, int> doc_freq);

  std::size_t n_docs() const noexcept { return n_docs_; }
  int doc_freq(const NGram& gram) const;
  // ln((n_docs + 1) / (df + 1)), with df = 0 for unseen grams.
  double idf(const NGram& gram) const;

 private:
  std::size_t n_docs_ = 0;
  std::unordered_map<NGram, int> doc_freq_;
};

// Throws ConfigError on an empty corpus.
IdfTable compute_idf(std::span<const Question> corpus, std::size_t n_max = 4);

// Mean over n = 1..4 of the cosine between TF-IDF n-gram vectors. The usual
// x10 scale is left out so the result stays in [0, 1]; an order where either
// vector is zero contributes 0 but still counts in the 1/4.
double cider(const Question& candidate, const Question& reference, const IdfTable& idf);

enum class Metric { kBleu1, kBleu2, kBleu3, kBleu4, kRouge, kCider, kMeteor };

std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

// Dispatches to the metric above. Throws ConfigError for cider without an
// IdfTable.
double score(Metric method, const Question& candidate, const Question& reference,
             const IdfTable* context = nullptr);

}  // namespace bqbench
