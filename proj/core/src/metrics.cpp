#include "bqbench/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Leftmost-feasible one-to-one alignment: candidate position -> reference
// position, or -1.
std::vector<long> align_exact(const Tokens& candidate, const Tokens& reference) {
  std::vector<long> alignment(candidate.size(), -1);
  std::vector<bool> used(reference.size(), false);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      if (!used[j] && reference[j] == candidate[i]) {
        used[j] = true;
        alignment[i] = static_cast<long>(j);
        break;
      }
    }
  }
  return alignment;
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double bleu(const Question& candidate, const Question& reference, int max_n) {
  if (max_n < 1 || max_n > 4) throw ConfigError("bleu: max_n must be in [1, 4]");
  const Tokens& cand = candidate.tokens();
  const Tokens& ref = reference.tokens();
  if (cand.empty() || ref.empty()) return 0.0;

  double log_sum = 0.0;
  for (int k = 1; k <= max_n; ++k) {
    const auto n = static_cast<std::size_t>(k);
    const NGramCounts cc = ngrams(cand, n);
    const NGramCounts rc = ngrams(ref, n);
    const std::size_t total = cc.total();
    double p = 0.0;
    if (total == 0) {
      p = rc.counts.empty() ? 1.0 : 0.0;
    } else {
      std::size_t clipped = 0;
      for (const auto& [gram, c] : cc.counts) {
        const auto it = rc.counts.find(gram);
        if (it != rc.counts.end()) clipped += static_cast<std::size_t>(std::min(c, it->second));
      }
      p = static_cast<double>(clipped) / static_cast<double>(total);
    }
    log_sum += std::log(p > 0.0 ? p : kBleuEpsilon);
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = std::min(1.0, std::exp(1.0 - r / c));
  return clamp_unit(bp * std::exp(log_sum / max_n));
}

double rouge_l(const Question& candidate, const Question& reference) {
  const Tokens& cand = candidate.tokens();
  const Tokens& ref = reference.tokens();
  const std::size_t lcs = lcs_length(cand, ref);
  if (lcs == 0) return 0.0;
  const double recall = static_cast<double>(lcs) / static_cast<double>(ref.size());
  const double precision = static_cast<double>(lcs) / static_cast<double>(cand.size());
  const double beta2 = kRougeBeta * kRougeBeta;
  return clamp_unit((1.0 + beta2) * recall * precision / (recall + beta2 * precision));
}

std::size_t meteor_chunks(const Tokens& candidate, const Tokens& reference) {
  const std::vector<long> alignment = align_exact(candidate, reference);
  std::size_t chunks = 0;
  for (std::size_t i = 0; i < alignment.size(); ++i) {
    if (alignment[i] < 0) continue;
    const bool continues = i > 0 && alignment[i - 1] >= 0 && alignment[i] == alignment[i - 1] + 1;
    if (!continues) ++chunks;
  }
  return chunks;
}

double meteor_lite(const Question& candidate, const Question& reference) {
  const Tokens& cand = candidate.tokens();
  const Tokens& ref = reference.tokens();
  if (cand.empty() || ref.empty()) return 0.0;

  const NGramCounts cc = ngrams(cand, 1);
  const NGramCounts rc = ngrams(ref, 1);
  std::size_t matches = 0;
  for (const auto& [w, c] : cc.counts) {
    const auto it = rc.counts.find(w);
    if (it != rc.counts.end()) matches += static_cast<std::size_t>(std::min(c, it->second));
  }
  if (matches == 0) return 0.0;

  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(cand.size());
  const double recall = m / static_cast<double>(ref.size());
  const double f_mean = 10.0 * precision * recall / (recall + 9.0 * precision);
  const double frag = static_cast<double>(meteor_chunks(cand, ref)) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return clamp_unit(f_mean * (1.0 - penalty));
}

IdfTable::IdfTable(std::size_t n_docs, std::unordered_map<NGram, int> doc_freq)
    : n_docs_(n_docs), doc_freq_(std::move(doc_freq)) {}

int IdfTable::doc_freq(const NGram& gram) const {
  const auto it = doc_freq_.find(gram);
  return it == doc_freq_.end() ? 0 : it->second;
}

double IdfTable::idf(const NGram& gram) const {
  return std::log((static_cast<double>(n_docs_) + 1.0) /
                  (static_cast<double>(doc_freq(gram)) + 1.0));
}

IdfTable compute_idf(std::span<const Question> corpus, std::size_t n_max) {
  if (corpus.empty()) throw ConfigError("compute_idf: corpus is empty");
  if (n_max == 0) throw ConfigError("compute_idf: n_max must be >= 1");
  std::unordered_map<NGram, int> df;
  for (const Question& q : corpus) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (const auto& [gram, c] : ngrams(q.tokens(), n).counts) ++df[gram];
    }
  }
  return IdfTable(corpus.size(), std::move(df));
}

double cider(const Question& candidate, const Question& reference, const IdfTable& idf) {
  double sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const NGramCounts cc = ngrams(candidate.tokens(), n);
    const NGramCounts rc = ngrams(reference.tokens(), n);
    if (cc.counts.empty() || rc.counts.empty()) continue;

    double cand_norm2 = 0.0;
    double dot = 0.0;
    for (const auto& [gram, c] : cc.counts) {
      const double w = idf.idf(gram);
      const double cw = c * w;
      cand_norm2 += cw * cw;
      const auto it = rc.counts.find(gram);
      if (it != rc.counts.end()) dot += cw * it->second * w;
    }
    double ref_norm2 = 0.0;
    for (const auto& [gram, c] : rc.counts) {
      const double rw = c * idf.idf(gram);
      ref_norm2 += rw * rw;
    }
    if (cand_norm2 <= 0.0 || ref_norm2 <= 0.0) continue;
    sum += clamp_unit(dot / (std::sqrt(cand_norm2) * std::sqrt(ref_norm2)));
  }
  return clamp_unit(sum / 4.0);
}

namespace {
constexpr std::array<std::pair<Metric, std::string_view>, 7> kMetricNames{{
    {Metric::kBleu1, "bleu1"},
    {Metric::kBleu2, "bleu2"},
    {Metric::kBleu3, "bleu3"},
    {Metric::kBleu4, "bleu4"},
    {Metric::kRouge, "rouge"},
    {Metric::kCider, "cider"},
    {Metric::kMeteor, "meteor"},
}};
}  // namespace

std::string_view metric_name(Metric m) noexcept {
  for (const auto& [metric, name] : kMetricNames)
    if (metric == m) return name;
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  for (const auto& [metric, n] : kMetricNames)
    if (n == name) return metric;
  return std::nullopt;
}

double score(Metric method, const Question& candidate, const Question& reference,
             const IdfTable* context) {
  switch (method) {
    case Metric::kBleu1: return bleu(candidate, reference, 1);
    case Metric::kBleu2: return bleu(candidate, reference, 2);
    case Metric::kBleu3: return bleu(candidate, reference, 3);
    case Metric::kBleu4: return bleu(candidate, reference, 4);
    case Metric::kRouge: return rouge_l(candidate, reference);
    case Metric::kMeteor: return meteor_lite(candidate, reference);
    case Metric::kCider:
      if (context == nullptr) throw ConfigError("cider requires an IdfTable built from the pool");
      return cider(candidate, reference, *context);
  }
  throw ConfigError("unknown metric");
}

}  // namespace bqbench
