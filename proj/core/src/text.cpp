#include "bqbench/text.hpp"

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
         (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e);
}

bool is_terminal(char c) { return c == '?' || c == '.' || c == '!'; }

}  // namespace

std::string normalize(std::string_view text) {
  // Drop trailing whitespace and sentence terminators, in any interleaving.
  std::size_t end = text.size();
  while (end > 0 && (is_space(text[end - 1]) || is_terminal(text[end - 1])))
    --end;

  std::string out;
  out.reserve(end);
  bool pending_space = false;
  for (std::size_t i = 0; i < end; ++i) {
    char c = text[i];
    if (is_space(c) || is_ascii_punct(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

Tokens tokenize(std::string_view normalized) {
  Tokens tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    const std::size_t next = normalized.find(' ', pos);
    const std::size_t stop = next == std::string_view::npos ? normalized.size() : next;
    if (stop > pos) tokens.emplace_back(normalized.substr(pos, stop - pos));
    pos = stop + 1;
  }
  return tokens;
}

Question::Question(std::string id, std::string text)
    : id_(std::move(id)), text_(std::move(text)), tokens_(tokenize(normalize(text_))) {}

std::size_t NGramCounts::total() const noexcept {
  std::size_t sum = 0;
  for (const auto& [gram, c] : counts) sum += static_cast<std::size_t>(c);
  return sum;
}

NGramCounts ngrams(const Tokens& tokens, std::size_t n) {
  if (n == 0) throw ConfigError("ngrams: n must be >= 1");
  NGramCounts out;
  out.n = n;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    NGram key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back(' ');
      key += tokens[i + k];
    }
    ++out.counts[key];
  }
  return out;
}

}  // namespace bqbench
