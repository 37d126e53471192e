#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bqbench {

using Tokens = std::vector<std::string>;

// Lowercases ASCII, strips trailing '?', '.', '!', turns every other ASCII
// punctuation character into a space, collapses whitespace and trims.
// Bytes >= 0x80 pass through untouched, so UTF-8 text keeps its scalars.
std::string normalize(std::string_view text);

// Splits normalized text on spaces. Never yields an empty token.
Tokens tokenize(std::string_view normalized);

// A question with a stable id. `tokens` is always tokenize(normalize(text)).
class Question {
 public:
  Question() = default;
  Question(std::string id, std::string text);

  const std::string& id() const noexcept { return id_; }
  const std::string& text() const noexcept { return text_; }
  const Tokens& tokens() const noexcept { return tokens_; }
  bool empty() const noexcept { return tokens_.empty(); }

 private:
  std::string id_;
  std::string text_;
  Tokens tokens_;
};

// An n-gram is keyed by its tokens joined with single spaces. Tokens never
// contain spaces, so the key is a faithful encoding of the tuple.
using NGram = std::string;

struct NGramCounts {
  std::size_t n = 1;
  std::unordered_map<NGram, int> counts;

  // Sum of all counts.
  std::size_t total() const noexcept;
};

// Sliding-window n-gram counts; empty when tokens.size() < n.
// Throws ConfigError for n == 0.
NGramCounts ngrams(const Tokens& tokens, std::size_t n);

}  // namespace bqbench

namespace bqbench {

// A main question as read from an MQ file: the question, the image it is
// asked about (opaque) and up to ten gold answers.
struct MainQuestion {
  Question question;
  std::string image_id;
  std::vector<std::string> answers;
};

}  // namespace bqbench
