#include <random>

#include "bqbench/error.hpp"
#include "bqbench/text.hpp"
#include "doctest.h"

using namespace bqbench;

TEST_CASE("normalize applies case, terminal and punctuation rules") {
  CHECK(normalize("Is the man walking?") == "is the man walking");
  CHECK(normalize("") == "");
  CHECK(normalize("What  COLOR is it??") == "what color is it");
  CHECK(normalize("  Is it red ?! ") == "is it red");
  CHECK(normalize("What's on the man's hat.") == "what s on the man s hat");
  CHECK(normalize("red,blue;green") == "red blue green");
  CHECK(normalize("???") == "");
}

TEST_CASE("normalize leaves non-ASCII bytes alone") {
  CHECK(normalize("Où est le CAFÉ?") == "où est le cafÉ");
}

TEST_CASE("tokenize splits on spaces") {
  CHECK(tokenize("is the man walking") == Tokens{"is", "the", "man", "walking"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a a a") == Tokens{"a", "a", "a"});
}

TEST_CASE("Question derives tokens from its text") {
  const Question q("q1", "Is the Dog  brown?");
  CHECK(q.id() == "q1");
  CHECK(q.text() == "Is the Dog  brown?");
  CHECK(q.tokens() == Tokens{"is", "the", "dog", "brown"});
}

TEST_CASE("ngrams counts sliding windows") {
  const NGramCounts bi = ngrams({"the", "cat", "sat"}, 2);
  CHECK(bi.n == 2);
  CHECK(bi.counts.size() == 2);
  CHECK(bi.counts.at("the cat") == 1);
  CHECK(bi.counts.at("cat sat") == 1);
  CHECK(ngrams({"a"}, 2).counts.empty());
  const NGramCounts uni = ngrams({"a", "a", "a"}, 1);
  CHECK(uni.counts.size() == 1);
  CHECK(uni.counts.at("a") == 3);
  CHECK_THROWS_AS(ngrams({"a"}, 0), ConfigError);
}

TEST_CASE("text properties hold on random strings") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ  ?.!,'-\t";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int len = std::uniform_int_distribution<int>(0, 30)(rng);
    for (int i = 0; i < len; ++i)
      s.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);

    const std::string once = normalize(s);
    CHECK(normalize(once) == once);
    const Tokens tokens = tokenize(once);
    for (const std::string& t : tokens) CHECK_FALSE(t.empty());
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::size_t expected = tokens.size() >= n ? tokens.size() - n + 1 : 0;
      CHECK(ngrams(tokens, n).total() == expected);
    }
  }
}
