#include "bqbench/ranker.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

void check_top_k(std::size_t top_k) {
  if (top_k == 0) throw ConfigError("top_k must be >= 1");
}

std::vector<Question> to_vector(std::span<const Question> pool) {
  return {pool.begin(), pool.end()};
}

double tau_of_orders(const std::vector<std::size_t>& second_positions) {
  const std::size_t n = second_positions.size();
  if (n < 2) return 1.0;
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (second_positions[i] < second_positions[j]) ++concordant;
      else ++discordant;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return static_cast<double>(concordant - discordant) / pairs;
}

}  // namespace

std::string RankingMethod::name() const {
  return lasso ? std::string("lasso") : std::string(metric_name(metric));
}

std::optional<RankingMethod> parse_method(std::string_view name) noexcept {
  if (name == "lasso") return RankingMethod::Lasso();
  if (const auto m = parse_metric(name)) return RankingMethod::FromMetric(*m);
  return std::nullopt;
}

std::string method_list() { return "lasso, bleu1, bleu2, bleu3, bleu4, rouge, cider, meteor"; }

void finalize_ranking(RankedBQD& ranked) {
  std::sort(ranked.entries.begin(), ranked.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.bq_id < b.bq_id;
  });
  if (ranked.entries.size() > ranked.top_k) ranked.entries.resize(ranked.top_k);
}

LassoRanker::LassoRanker(std::vector<Question> pool, std::shared_ptr<const Encoder> encoder)
    : pool_(std::move(pool)), encoder_(std::move(encoder)) {
  if (pool_.empty()) throw ConfigError("lasso ranking: pool is empty");
  if (!encoder_) throw ConfigError("lasso ranking: no encoder");
  std::vector<SparseVector> cols;
  cols.reserve(pool_.size());
  for (const Question& q : pool_) cols.push_back(encoder_->encode_sparse(q));
  columns_ = ColumnMatrix(encoder_->dim(), std::move(cols));
}

LassoProblem LassoRanker::problem_for(const Question& mq) const {
  std::vector<std::uint32_t> keep;
  keep.reserve(pool_.size());
  LassoProblem problem;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    if (pool_[j].id() == mq.id()) continue;
    keep.push_back(static_cast<std::uint32_t>(j));
    problem.column_ids.push_back(pool_[j].id());
  }
  if (keep.empty()) throw RangeError("lasso ranking: pool is empty after excluding '" + mq.id() + "'");
  problem.A = columns_.select(std::move(keep));
  problem.b = encoder_->encode(mq);
  return problem;
}

RankedBQD LassoRanker::rank(const Question& mq, double lambda_ratio, std::size_t top_k,
                            const SolveOptions& options) const {
  if (!(lambda_ratio > 0.0 && lambda_ratio < 1.0)) throw ConfigError("lambda_ratio must lie in (0, 1)");
  check_top_k(top_k);

  LassoProblem problem = problem_for(mq);
  const double lmax = lambda_max(problem.A, problem.b);
  if (lmax <= 0.0)
    throw DegenerateRankingError("main question '" + mq.id() +
                                 "' shares no weighted terms with the pool; every LASSO score would be 0");
  problem.lambda = lambda_ratio * lmax;
  const LassoSolution sol = solve(problem, options);

  double best = 0.0;
  for (double v : sol.x) best = std::max(best, v);

  RankedBQD ranked;
  ranked.mq_id = mq.id();
  ranked.method = "lasso";
  ranked.top_k = top_k;
  ranked.entries.reserve(problem.A.cols());
  std::size_t col = 0;
  for (const Question& q : pool_) {
    if (q.id() == mq.id()) continue;
    const double raw = std::max(sol.x[col++], 0.0);
    ranked.entries.push_back({q.id(), q.text(), best > 0.0 ? raw / best : 0.0});
  }
  finalize_ranking(ranked);
  return ranked;
}

MetricRanker::MetricRanker(std::vector<Question> pool, Metric metric)
    : pool_(std::move(pool)), metric_(metric) {
  if (pool_.empty()) throw ConfigError("metric ranking: pool is empty");
  if (metric_ == Metric::kCider) idf_ = std::make_shared<const IdfTable>(compute_idf(pool_));
}

MetricRanker::MetricRanker(std::vector<Question> pool, Metric metric, std::shared_ptr<const IdfTable> idf)
    : pool_(std::move(pool)), metric_(metric), idf_(std::move(idf)) {
  if (pool_.empty()) throw ConfigError("metric ranking: pool is empty");
  if (metric_ == Metric::kCider && !idf_) throw ConfigError("cider requires an IdfTable built from the pool");
}

RankedBQD MetricRanker::rank(const Question& mq, std::size_t top_k) const {
  check_top_k(top_k);
  RankedBQD ranked;
  ranked.mq_id = mq.id();
  ranked.method = std::string(metric_name(metric_));
  ranked.top_k = top_k;
  ranked.entries.reserve(pool_.size());
  for (const Question& q : pool_) {
    if (q.id() == mq.id()) continue;
    ranked.entries.push_back({q.id(), q.text(), score(metric_, q, mq, idf_.get())});
  }
  finalize_ranking(ranked);
  return ranked;
}

RankedBQD rank_lasso(const Question& mq, std::span<const Question> pool, const Encoder& encoder,
                     double lambda_ratio, std::size_t top_k) {
  const LassoRanker ranker(to_vector(pool), std::make_shared<const Encoder>(encoder));
  return ranker.rank(mq, lambda_ratio, top_k);
}

RankedBQD rank_metric(const Question& mq, std::span<const Question> pool, Metric method, const IdfTable* idf,
                      std::size_t top_k) {
  if (method == Metric::kCider && idf == nullptr) throw ConfigError("cider requires an IdfTable built from the pool");
  std::shared_ptr<const IdfTable> table;
  if (idf != nullptr) table = std::make_shared<const IdfTable>(*idf);
  const MetricRanker ranker(to_vector(pool), method, std::move(table));
  return ranker.rank(mq, top_k);
}

double kendall_tau(const RankedBQD& a, const RankedBQD& b) {
  if (a.mq_id != b.mq_id) throw InputError("kendall_tau: rankings are for different main questions");
  if (a.entries.size() != b.entries.size())
    throw InputError("kendall_tau: rankings for '" + a.mq_id + "' have different id sets");
  std::unordered_map<std::string, std::size_t> pos_b;
  for (std::size_t i = 0; i < b.entries.size(); ++i) pos_b.emplace(b.entries[i].bq_id, i);
  std::vector<std::size_t> order;
  order.reserve(a.entries.size());
  for (const RankedEntry& e : a.entries) {
    const auto it = pos_b.find(e.bq_id);
    if (it == pos_b.end())
      throw InputError("kendall_tau: rankings for '" + a.mq_id + "' have different id sets");
    order.push_back(it->second);
  }
  return tau_of_orders(order);
}

std::optional<double> kendall_tau_common(const RankedBQD& a, const RankedBQD& b) {
  std::unordered_map<std::string, std::size_t> pos_b;
  for (std::size_t i = 0; i < b.entries.size(); ++i) pos_b.emplace(b.entries[i].bq_id, i);
  std::vector<std::size_t> order;
  for (const RankedEntry& e : a.entries) {
    const auto it = pos_b.find(e.bq_id);
    if (it != pos_b.end()) order.push_back(it->second);
  }
  if (order.size() < 2) return std::nullopt;
  return tau_of_orders(order);
}

}  // namespace bqbench
