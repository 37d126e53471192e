#include "bqbench/noise.hpp"

#include "bqbench/error.hpp"
#include "parallel.hpp"

namespace bqbench {

std::size_t max_level(const RankedBQD& ranked, std::size_t group_size) {
  if (group_size == 0) throw ConfigError("group_size must be >= 1");
  return ranked.entries.size() / group_size;
}

std::vector<RankedEntry> select_level(const RankedBQD& ranked, NoiseLevel level) {
  if (level.level == 0) throw ConfigError("noise level must be >= 1 (level 0 is the clean question)");
  const std::size_t highest = max_level(ranked, level.group_size);
  if (level.level > highest)
    throw RangeError("noise level " + std::to_string(level.level) + " is out of range for '" + ranked.mq_id +
                     "': " + std::to_string(ranked.entries.size()) + " ranked entries with group size " +
                     std::to_string(level.group_size) + " allow at most level " + std::to_string(highest));
  const auto first = ranked.entries.begin() + static_cast<std::ptrdiff_t>((level.level - 1) * level.group_size);
  return {first, first + static_cast<std::ptrdiff_t>(level.group_size)};
}

std::string concat_noise(std::string_view mq_text, std::span<const std::string> bq_texts) {
  std::string out(mq_text);
  for (const std::string& t : bq_texts) {
    out.push_back(' ');
    out += t;
  }
  return out;
}

std::string concat_noise(const Question& mq, std::span<const Question> bqs) {
  std::vector<std::string> texts;
  texts.reserve(bqs.size());
  for (const Question& q : bqs) texts.push_back(q.text());
  return concat_noise(mq.text(), texts);
}

NoisyQuestion make_noisy(const MainQuestion& mq, const RankedBQD& ranked, NoiseLevel level) {
  NoisyQuestion out;
  out.mq_id = mq.question.id();
  out.image_id = mq.image_id;
  out.level = level.level;
  if (level.level == 0) {
    out.text = mq.question.text();
    return out;
  }
  std::vector<std::string> texts;
  for (RankedEntry& e : select_level(ranked, level)) {
    texts.push_back(std::move(e.question));
    out.appended_bq_ids.push_back(std::move(e.bq_id));
  }
  out.text = concat_noise(mq.question.text(), texts);
  return out;
}

std::vector<NoisyQuestion> noisy_sweep(const MainQuestion& mq, const RankedBQD& ranked, std::size_t levels,
                                       std::size_t group_size) {
  const std::size_t highest = max_level(ranked, group_size);
  if (levels > highest)
    throw RangeError("requested " + std::to_string(levels) + " noise levels for '" + ranked.mq_id +
                     "' but its ranked list allows at most level " + std::to_string(highest));
  std::vector<NoisyQuestion> out;
  out.reserve(levels + 1);
  for (std::size_t l = 0; l <= levels; ++l) out.push_back(make_noisy(mq, ranked, {l, group_size}));
  return out;
}

std::vector<RankOutcome> build_ranked_bqd(std::span<const Question> mqs, std::span<const Question> pool,
                                          const BuildOptions& options) {
  if (pool.empty()) throw ConfigError("basic-question pool is empty");
  if (options.group_size == 0) throw ConfigError("group_size must be >= 1");
  if (options.top_k < options.group_size)
    throw ConfigError("top_k (" + std::to_string(options.top_k) + ") must be >= group_size (" +
                      std::to_string(options.group_size) + ")");
  if (options.method.lasso && !(options.lambda_ratio > 0.0 && options.lambda_ratio < 1.0))
    throw ConfigError("lambda_ratio must lie in (0, 1)");

  std::vector<Question> pool_copy(pool.begin(), pool.end());
  std::unique_ptr<LassoRanker> lasso;
  std::unique_ptr<MetricRanker> metric;
  if (options.method.lasso) {
    auto encoder = options.encoder ? options.encoder : std::make_shared<const Encoder>(fit_tfidf(pool, 2));
    lasso = std::make_unique<LassoRanker>(std::move(pool_copy), std::move(encoder));
  } else {
    metric = std::make_unique<MetricRanker>(std::move(pool_copy), options.method.metric);
  }

  std::vector<RankOutcome> outcomes(mqs.size());
  detail::parallel_for(mqs.size(), options.jobs, [&](std::size_t i) {
    const Question& mq = mqs[i];
    RankOutcome& out = outcomes[i];
    out.mq_id = mq.id();
    try {
      out.ranked = lasso ? lasso->rank(mq, options.lambda_ratio, options.top_k)
                         : metric->rank(mq, options.top_k);
      if (out.ranked->entries.size() < options.group_size)
        throw RangeError("only " + std::to_string(out.ranked->entries.size()) +
                         " ranked entries, fewer than one noise group");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      out.ranked.reset();
      out.error = e.what();
    }
  });
  return outcomes;
}

}  // namespace bqbench
