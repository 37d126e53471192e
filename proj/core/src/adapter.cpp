#include "bqbench/adapter.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>

#include "bqbench/error.hpp"
#include "bqbench/text.hpp"
#include "json.hpp"

extern char** environ;

namespace bqbench {

namespace {

using ordered_json = nlohmann::ordered_json;

// Owns a mkdtemp() directory for the lifetime of one external call.
class ScratchDir {
 public:
  explicit ScratchDir(const std::filesystem::path& parent) {
    const std::filesystem::path base = parent.empty() ? std::filesystem::temp_directory_path() : parent;
    std::string pattern = (base / "bqbench-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr)
      throw AdapterError("cannot create scratch directory under " + base.string() + ": " + std::strerror(errno));
    path_ = pattern;
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

int run_shell(const std::string& command, const std::string& request, const std::string& response) {
  // "$@" forwards the two paths as positional arguments without quoting
  // them into the command string.
  const std::string script = command + " \"$@\"";
  std::vector<std::string> args = {"/bin/sh", "-c", script, "sh", request, response};
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", nullptr, nullptr, argv.data(), environ);
  if (rc != 0) throw AdapterError(std::string("cannot launch model command: ") + std::strerror(rc));
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw AdapterError(std::string("waitpid failed: ") + std::strerror(errno));
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

std::string join_ids(const std::set<std::string>& ids) {
  std::string out;
  std::size_t shown = 0;
  for (const std::string& id : ids) {
    if (shown == 10) {
      out += ", ... (" + std::to_string(ids.size()) + " total)";
      break;
    }
    if (shown++ > 0) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

std::string prefix_key(std::string_view question) {
  return normalize(question.substr(0, question.find('?')));
}

std::uint64_t question_hash(std::string_view question, std::uint64_t seed) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : question) mix(static_cast<unsigned char>(c));
  return h;
}

ModelAdapter ModelAdapter::external(std::string command, std::filesystem::path work_dir) {
  if (command.empty()) throw ConfigError("external model command is empty");
  ModelAdapter a;
  a.kind_ = Kind::kExternal;
  a.command_ = std::move(command);
  a.work_dir_ = std::move(work_dir);
  return a;
}

ModelAdapter ModelAdapter::constant(std::string answer) {
  ModelAdapter a;
  a.kind_ = Kind::kMockConstant;
  a.fallback_ = std::move(answer);
  return a;
}

ModelAdapter ModelAdapter::lookup(std::unordered_map<std::string, std::string> table, std::string fallback) {
  ModelAdapter a;
  a.kind_ = Kind::kMockLookup;
  a.table_ = std::move(table);
  a.fallback_ = std::move(fallback);
  return a;
}

ModelAdapter ModelAdapter::prefix(const std::unordered_map<std::string, std::string>& table, std::string fallback) {
  ModelAdapter a;
  a.kind_ = Kind::kMockPrefix;
  for (const auto& [question, answer] : table) a.table_.emplace(prefix_key(question), answer);
  a.fallback_ = std::move(fallback);
  return a;
}

ModelAdapter ModelAdapter::hash(std::vector<std::string> answers, std::uint64_t seed) {
  if (answers.empty()) throw ConfigError("mock_hash needs at least one candidate answer");
  ModelAdapter a;
  a.kind_ = Kind::kMockHash;
  a.answers_ = std::move(answers);
  a.seed_ = seed;
  return a;
}

AnswerMap ModelAdapter::query(std::span<const QueryItem> batch) const {
  std::set<std::string> seen;
  for (const QueryItem& item : batch)
    if (!seen.insert(item.id).second) throw InputError("duplicate id '" + item.id + "' in model batch");

  if (kind_ == Kind::kExternal) return query_external(batch);

  AnswerMap out;
  for (const QueryItem& item : batch) {
    std::string answer;
    switch (kind_) {
      case Kind::kMockConstant:
        answer = fallback_;
        break;
      case Kind::kMockLookup: {
        const auto it = table_.find(item.id);
        answer = it == table_.end() ? fallback_ : it->second;
        break;
      }
      case Kind::kMockPrefix: {
        const auto it = table_.find(prefix_key(item.question));
        answer = it == table_.end() ? fallback_ : it->second;
        break;
      }
      case Kind::kMockHash:
        answer = answers_[question_hash(item.question, seed_) % answers_.size()];
        break;
      case Kind::kExternal:
        break;
    }
    out.emplace(item.id, std::move(answer));
  }
  return out;
}

AnswerMap ModelAdapter::query_external(std::span<const QueryItem> batch) const {
  const ScratchDir scratch(work_dir_);
  const std::filesystem::path request = scratch.path() / "request.jsonl";
  const std::filesystem::path response = scratch.path() / "response.jsonl";
  {
    std::ofstream out(request, std::ios::binary);
    if (!out) throw AdapterError("cannot write request file " + request.string());
    for (const QueryItem& item : batch) {
      ordered_json j;
      j["id"] = item.id;
      j["image_id"] = item.image_id;
      j["question"] = item.question;
      out << j.dump() << '\n';
    }
  }

  const int code = run_shell(command_, request.string(), response.string());
  if (code != 0) throw AdapterError("model command exited with status " + std::to_string(code));

  std::ifstream in(response, std::ios::binary);
  if (!in) throw AdapterError("model command did not write a response file");

  std::set<std::string> expected;
  for (const QueryItem& item : batch) expected.insert(item.id);

  AnswerMap answers;
  std::set<std::string> unknown, duplicate;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw AdapterError("response line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("answer") ||
        !j["answer"].is_string())
      throw AdapterError("response line " + std::to_string(line_no) + ": expected {\"id\": str, \"answer\": str}");
    std::string id = j["id"].get<std::string>();
    if (!expected.contains(id)) {
      unknown.insert(id);
      continue;
    }
    if (!answers.emplace(id, j["answer"].get<std::string>()).second) duplicate.insert(id);
  }

  std::set<std::string> missing;
  for (const std::string& id : expected)
    if (!answers.contains(id)) missing.insert(id);

  std::string problems;
  if (!missing.empty()) problems += " missing ids: " + join_ids(missing) + ";";
  if (!unknown.empty()) problems += " unknown ids: " + join_ids(unknown) + ";";
  if (!duplicate.empty()) problems += " duplicated ids: " + join_ids(duplicate) + ";";
  if (!problems.empty()) throw AdapterError("model response violates the protocol:" + problems);
  return answers;
}

}  // namespace bqbench
