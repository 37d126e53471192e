#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bqbench {

// One question sent to the model. Ids are unique within a batch.
struct QueryItem {
  std::string id;
  std::string image_id;
  std::string question;
};

using AnswerMap = std::map<std::string, std::string>;

// normalize() of the text up to (not including) the first '?'.
std::string prefix_key(std::string_view question);

// Stable 64-bit hash of a question under a seed (FNV-1a over seed bytes
// followed by the text).
std::uint64_t question_hash(std::string_view question, std::uint64_t seed) noexcept;

// The question-answering model under test, behind a batch interface.
// Every kind is deterministic: the same batch yields the same answers.
class ModelAdapter {
 public:
  enum class Kind { kExternal, kMockConstant, kMockLookup, kMockPrefix, kMockHash };

  // Runs `command request.jsonl response.jsonl` through /bin/sh. Request
  // and response files live in a fresh directory under `work_dir`
  // (the system temp directory when empty) that is removed afterwards.
  static ModelAdapter external(std::string command, std::filesystem::path work_dir = {});
  // Always answers `answer`.
  static ModelAdapter constant(std::string answer);
  // Answers table[item.id], else `fallback`.
  static ModelAdapter lookup(std::unordered_map<std::string, std::string> table, std::string fallback);
  // Answers table[prefix_key(question)], else `fallback`. Table keys are
  // question texts and are passed through prefix_key on construction, so
  // anything appended after the first '?' is ignored.
  static ModelAdapter prefix(const std::unordered_map<std::string, std::string>& table, std::string fallback);
  // Answers answers[question_hash(question, seed) % answers.size()].
  static ModelAdapter hash(std::vector<std::string> answers, std::uint64_t seed);

  Kind kind() const noexcept { return kind_; }

  // Throws InputError for duplicate ids in the batch and AdapterError when
  // an external model fails or breaks the response protocol.
  AnswerMap query(std::span<const QueryItem> batch) const;

 private:
  Kind kind_ = Kind::kMockConstant;
  std::string command_;
  std::filesystem::path work_dir_;
  std::string fallback_;
  std::unordered_map<std::string, std::string> table_;
  std::vector<std::string> answers_;
  std::uint64_t seed_ = 0;

  AnswerMap query_external(std::span<const QueryItem> batch) const;
};

}  // namespace bqbench
