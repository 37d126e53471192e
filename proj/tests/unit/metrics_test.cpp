#include <cmath>
#include <random>
#include <vector>

#include "bqbench/error.hpp"
#include "bqbench/metrics.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace bqbench;

namespace {

Question q(const std::string& text) { return Question("id", text); }

// Longest common subsequence by brute-force subset enumeration.
std::size_t brute_lcs(const Tokens& a, const Tokens& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::size_t j = 0, len = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask & (std::size_t{1} << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else {
        ++j;
        ++len;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

}  // namespace

TEST_CASE("bleu") {
  SUBCASE("identity is exactly 1") {
    for (const char* text : {"a", "a b", "the cat sat", "is the man walking on the street"}) {
      for (int n = 1; n <= 4; ++n) CHECK(bleu(q(text), q(text), n) == 1.0);
    }
  }
  SUBCASE("brevity penalty with perfect unigram precision") {
    // p1 = 1, BP = exp(1 - 6/3).
    CHECK(bleu(q("the cat sat"), q("the cat sat on the mat"), 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("disjoint vocabularies are epsilon-smoothed") {
    const double v = bleu(q("x y"), q("a b c"), 1);
    CHECK(v > 0.0);
    CHECK(v < 1e-8);
  }
  SUBCASE("empty side scores 0") {
    CHECK(bleu(q(""), q("a b"), 2) == 0.0);
    CHECK(bleu(q("a b"), q(""), 2) == 0.0);
  }
  SUBCASE("max_n outside [1,4] is rejected") {
    CHECK_THROWS_AS(bleu(q("a"), q("a"), 0), ConfigError);
    CHECK_THROWS_AS(bleu(q("a"), q("a"), 5), ConfigError);
  }
  SUBCASE("bleu2 by hand") {
    // cand "the cat the", ref "the cat sat": p1 = (1+1)/3, p2 = 1/2, c = r.
    const double expected = std::exp(0.5 * (std::log(2.0 / 3.0) + std::log(0.5)));
    CHECK(bleu(q("the cat the"), q("the cat sat"), 2) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("rouge_l") {
  CHECK(rouge_l(q("the man is walking"), q("the man is walking")) == 1.0);
  // LCS 2, P = 1, R = 2/3.
  CHECK(rouge_l(q("the cat"), q("the dog cat")) == doctest::Approx(0.7721518987341772).epsilon(1e-12));
  CHECK(rouge_l(q("a b"), q("c d")) == 0.0);
  CHECK(rouge_l(q(""), q("c d")) == 0.0);
}

TEST_CASE("rouge_l matches a brute-force LCS") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Question a = testing::random_token_question(rng, 4, 8, "a");
    const Question b = testing::random_token_question(rng, 4, 8, "b");
    const std::size_t lcs = brute_lcs(a.tokens(), b.tokens());
    double expected = 0.0;
    if (lcs > 0) {
      const double r = static_cast<double>(lcs) / static_cast<double>(b.tokens().size());
      const double p = static_cast<double>(lcs) / static_cast<double>(a.tokens().size());
      expected = 2.44 * r * p / (r + 1.44 * p);
    }
    CHECK(rouge_l(a, b) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("meteor_lite") {
  SUBCASE("identity is a single chunk") {
    for (const char* text : {"a", "a b", "is the man walking"}) {
      const double n = static_cast<double>(q(text).tokens().size());
      CHECK(meteor_lite(q(text), q(text)) == doctest::Approx(1.0 - 0.5 / (n * n * n)).epsilon(1e-12));
      CHECK(meteor_chunks(q(text).tokens(), q(text).tokens()) == 1);
    }
  }
  SUBCASE("swapped pair has two chunks") {
    CHECK(meteor_chunks(q("a b").tokens(), q("b a").tokens()) == 2);
    CHECK(meteor_lite(q("a b"), q("b a")) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("disjoint is zero") { CHECK(meteor_lite(q("a b"), q("c d")) == 0.0); }
  SUBCASE("unmatched candidate tokens split chunks") {
    // cand "a x b", ref "a b": m = 2, chunks 2, P = 2/3, R = 1.
    const double p = 2.0 / 3.0, r = 1.0;
    const double f = 10 * p * r / (r + 9 * p);
    CHECK(meteor_chunks(q("a x b").tokens(), q("a b").tokens()) == 2);
    CHECK(meteor_lite(q("a x b"), q("a b")) == doctest::Approx(f * (1 - 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("compute_idf") {
  const std::vector<Question> corpus{q("a b"), q("a c")};
  const IdfTable idf = compute_idf(corpus);
  CHECK(idf.n_docs() == 2);
  CHECK(idf.doc_freq("a") == 2);
  CHECK(idf.doc_freq("b") == 1);
  CHECK(idf.doc_freq("a b") == 1);
  CHECK(idf.idf("b") == doctest::Approx(std::log(1.5)));
  CHECK(idf.idf("a") == doctest::Approx(0.0));
  CHECK(idf.idf("zzz") == doctest::Approx(std::log(3.0)));

  const std::vector<Question> single{q("x y")};
  CHECK(compute_idf(single).idf("x") == 0.0);
  CHECK_THROWS_AS(compute_idf(std::vector<Question>{}), ConfigError);
}

TEST_CASE("cider") {
  const std::vector<Question> corpus{q("a b c"), q("d e"), q("f g h i")};
  const IdfTable idf = compute_idf(corpus);
  // Every n-gram of "a b c" has df 1 < n_docs, so orders 1..3 are nonzero.
  CHECK(cider(q("a b c"), q("a b c"), idf) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cider(q("f g h i"), q("f g h i"), idf) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cider(q("a b"), q("d e"), idf) == 0.0);

  const std::vector<Question> flat{q("a b"), q("a b")};
  CHECK(cider(q("a b"), q("a b"), compute_idf(flat)) == 0.0);

  SUBCASE("independent of corpus order") {
    const std::vector<Question> reversed{corpus.rbegin(), corpus.rend()};
    const IdfTable other = compute_idf(reversed);
    CHECK(cider(q("a b d"), q("a b c"), idf) == cider(q("a b d"), q("a b c"), other));
  }
}

TEST_CASE("score dispatches on method name") {
  CHECK(parse_metric("bleu3") == Metric::kBleu3);
  CHECK_FALSE(parse_metric("lasso").has_value());
  CHECK(metric_name(Metric::kMeteor) == "meteor");
  CHECK(score(Metric::kBleu1, q("the cat sat"), q("the cat sat on the mat")) ==
        doctest::Approx(0.36787944117144233).epsilon(1e-12));
  CHECK(score(Metric::kRouge, q("a b"), q("a b")) == 1.0);
  const std::vector<Question> corpus{q("a b"), q("c d")};
  const IdfTable idf = compute_idf(corpus);
  CHECK(score(Metric::kCider, q("a b"), q("c d"), &idf) == 0.0);
  CHECK_THROWS_AS(score(Metric::kCider, q("a b"), q("c d")), ConfigError);
}

TEST_CASE("every metric stays in [0,1] on random pairs") {
  std::mt19937_64 rng(3);
  std::vector<Question> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(testing::random_token_question(rng, 20, 12, "c"));
  const IdfTable idf = compute_idf(corpus);
  for (int trial = 0; trial < 2000; ++trial) {
    const Question a = testing::random_token_question(rng, 20, 12, "a");
    const Question b = testing::random_token_question(rng, 20, 12, "b");
    for (Metric m : {Metric::kBleu1, Metric::kBleu2, Metric::kBleu3, Metric::kBleu4, Metric::kRouge, Metric::kCider,
                     Metric::kMeteor}) {
      const double v = score(m, a, b, &idf);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    const std::size_t ch = meteor_chunks(a.tokens(), b.tokens());
    std::size_t m = 0;
    const auto ca = ngrams(a.tokens(), 1);
    const auto cb = ngrams(b.tokens(), 1);
    for (const auto& [w, c] : ca.counts)
      if (cb.counts.contains(w)) m += static_cast<std::size_t>(std::min(c, cb.counts.at(w)));
    if (m >= 1) {
      CHECK(ch >= 1);
      CHECK(ch <= m);
    } else {
      CHECK(ch == 0);
    }
  }
}
