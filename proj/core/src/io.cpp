#include "bqbench/io.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "bqbench/error.hpp"
#include "json.hpp"

namespace bqbench::io {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class LineError {
 public:
  LineError(const std::string& source, std::size_t line) : prefix_(source + ":" + std::to_string(line) + ": ") {}
  [[noreturn]] void fail(const std::string& what) const { throw InputError(prefix_ + what); }

 private:
  std::string prefix_;
};

void for_each_record(std::istream& in, const std::string& source,
                     const std::function<void(const json&, const LineError&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const LineError err(source, line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      err.fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) err.fail("expected a JSON object");
    fn(j, err);
  }
}

std::string get_string(const json& j, const char* key, const LineError& err, bool required = true) {
  const auto it = j.find(key);
  if (it == j.end()) {
    if (required) err.fail(std::string("missing field \"") + key + "\"");
    return {};
  }
  if (!it->is_string()) err.fail(std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

std::vector<std::string> get_string_list(const json& j, const char* key, const LineError& err) {
  const auto it = j.find(key);
  if (it == j.end()) err.fail(std::string("missing field \"") + key + "\"");
  if (!it->is_array()) err.fail(std::string("field \"") + key + "\" must be an array of strings");
  std::vector<std::string> out;
  for (const json& v : *it) {
    if (!v.is_string()) err.fail(std::string("field \"") + key + "\" must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::size_t get_count(const json& j, const char* key, const LineError& err) {
  const auto it = j.find(key);
  if (it == j.end()) err.fail(std::string("missing field \"") + key + "\"");
  if (!it->is_number_integer() || it->get<long long>() < 0)
    err.fail(std::string("field \"") + key + "\" must be a non-negative integer");
  return it->get<std::size_t>();
}

void require_unique(std::unordered_set<std::string>& seen, const std::string& id, const LineError& err) {
  if (id.empty()) err.fail("empty id");
  if (!seen.insert(id).second) err.fail("duplicate id '" + id + "'");
}

template <typename T>
std::vector<T> read_file(const std::filesystem::path& path,
                         std::vector<T> (*reader)(std::istream&, const std::string&)) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return reader(in, path.string());
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

const char* rule_name(AccuracyRule rule) { return rule == AccuracyRule::kConsensus ? "consensus" : "exact"; }

}  // namespace

std::vector<MainQuestion> read_main_questions(std::istream& in, const std::string& source) {
  std::vector<MainQuestion> out;
  std::unordered_set<std::string> seen;
  for_each_record(in, source, [&](const json& j, const LineError& err) {
    std::string id = get_string(j, "id", err);
    require_unique(seen, id, err);
    MainQuestion mq;
    mq.image_id = get_string(j, "image_id", err);
    mq.question = Question(std::move(id), get_string(j, "question", err));
    if (j.contains("answers")) {
      mq.answers = get_string_list(j, "answers", err);
      if (mq.answers.empty() || mq.answers.size() > 10) err.fail("\"answers\" must hold 1 to 10 strings");
    }
    out.push_back(std::move(mq));
  });
  return out;
}

std::vector<Question> read_pool(std::istream& in, const std::string& source) {
  std::vector<Question> out;
  std::unordered_set<std::string> seen;
  for_each_record(in, source, [&](const json& j, const LineError& err) {
    std::string id = get_string(j, "id", err);
    require_unique(seen, id, err);
    out.emplace_back(std::move(id), get_string(j, "question", err));
  });
  return out;
}

std::vector<RankedBQD> read_ranked(std::istream& in, const std::string& source) {
  std::vector<RankedBQD> out;
  std::unordered_set<std::string> seen;
  for_each_record(in, source, [&](const json& j, const LineError& err) {
    RankedBQD r;
    r.mq_id = get_string(j, "mq_id", err);
    require_unique(seen, r.mq_id, err);
    r.method = get_string(j, "method", err);
    r.top_k = get_count(j, "top_k", err);
    const auto entries = j.find("entries");
    if (entries == j.end() || !entries->is_array()) err.fail("field \"entries\" must be an array");
    std::unordered_set<std::string> ids;
    double previous = 1.0;
    for (const json& e : *entries) {
      if (!e.is_object()) err.fail("ranked entry must be an object");
      RankedEntry entry;
      entry.bq_id = get_string(e, "bq_id", err);
      entry.question = get_string(e, "question", err);
      const auto s = e.find("score");
      if (s == e.end() || !s->is_number()) err.fail("ranked entry needs a numeric \"score\"");
      entry.score = s->get<double>();
      if (!(entry.score >= 0.0 && entry.score <= 1.0)) err.fail("score outside [0, 1]");
      if (entry.score > previous) err.fail("scores are not sorted in descending order");
      previous = entry.score;
      if (!ids.insert(entry.bq_id).second) err.fail("bq_id '" + entry.bq_id + "' appears twice");
      r.entries.push_back(std::move(entry));
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<NoisyQuestion> read_noisy(std::istream& in, const std::string& source) {
  std::vector<NoisyQuestion> out;
  for_each_record(in, source, [&](const json& j, const LineError& err) {
    NoisyQuestion q;
    q.mq_id = get_string(j, "mq_id", err);
    q.image_id = get_string(j, "image_id", err);
    q.level = get_count(j, "level", err);
    q.text = get_string(j, "question", err);
    q.appended_bq_ids = get_string_list(j, "appended_bq_ids", err);
    if ((q.level == 0) != q.appended_bq_ids.empty())
      err.fail("level 0 records carry no appended ids and noisy records carry at least one");
    out.push_back(std::move(q));
  });
  return out;
}

std::vector<MainQuestion> read_main_questions(const std::filesystem::path& path) {
  return read_file<MainQuestion>(path, &read_main_questions);
}
std::vector<Question> read_pool(const std::filesystem::path& path) { return read_file<Question>(path, &read_pool); }
std::vector<RankedBQD> read_ranked(const std::filesystem::path& path) {
  return read_file<RankedBQD>(path, &read_ranked);
}
std::vector<NoisyQuestion> read_noisy(const std::filesystem::path& path) {
  return read_file<NoisyQuestion>(path, &read_noisy);
}

std::string to_json_line(const RankedBQD& ranked) {
  ordered_json j;
  j["mq_id"] = ranked.mq_id;
  j["method"] = ranked.method;
  j["top_k"] = ranked.top_k;
  j["entries"] = ordered_json::array();
  for (const RankedEntry& e : ranked.entries) {
    ordered_json entry;
    entry["bq_id"] = e.bq_id;
    entry["question"] = e.question;
    entry["score"] = e.score;
    j["entries"].push_back(std::move(entry));
  }
  return j.dump();
}

std::string to_json_line(const NoisyQuestion& noisy) {
  ordered_json j;
  j["mq_id"] = noisy.mq_id;
  j["image_id"] = noisy.image_id;
  j["level"] = noisy.level;
  j["question"] = noisy.text;
  j["appended_bq_ids"] = noisy.appended_bq_ids;
  return j.dump();
}

void write_ranked(std::ostream& out, const std::vector<RankedBQD>& ranked) {
  for (const RankedBQD& r : ranked) out << to_json_line(r) << '\n';
}

void write_noisy(std::ostream& out, const std::vector<NoisyQuestion>& noisy) {
  for (const NoisyQuestion& q : noisy) out << to_json_line(q) << '\n';
}

void write_report_json(std::ostream& out, const RobustnessReport& report) {
  ordered_json j;
  j["t"] = report.t;
  j["accuracy_rule"] = rule_name(report.rule);
  j["complete"] = report.complete;
  if (!report.error.empty()) j["error"] = report.error;
  const auto clean = report.acc_clean();
  j["acc_clean"] = clean ? ordered_json(*clean) : ordered_json(nullptr);
  ordered_json acc_noisy = ordered_json::object();
  ordered_json scores = ordered_json::object();
  ordered_json counts = ordered_json::object();
  for (const LevelResult& l : report.levels) {
    const std::string key = std::to_string(l.level);
    counts[key] = l.records.size();
    if (l.level == 0) continue;
    acc_noisy[key] = l.accuracy;
    scores[key] = l.r_score ? ordered_json(*l.r_score) : ordered_json(nullptr);
  }
  j["acc_noisy"] = std::move(acc_noisy);
  j["r_score"] = std::move(scores);
  j["counts"] = std::move(counts);
  j["skipped_missing_ranked"] = report.skipped_missing_ranked;
  j["skipped_missing_gold"] = report.skipped_missing_gold;
  j["warnings"] = report.warnings;

  ordered_json levels = ordered_json::array();
  for (const LevelResult& l : report.levels) {
    ordered_json level;
    level["level"] = l.level;
    level["acc"] = l.accuracy;
    level["r_score"] = l.r_score ? ordered_json(*l.r_score) : ordered_json(nullptr);
    level["n_records"] = l.records.size();
    ordered_json records = ordered_json::array();
    for (const EvalRecord& r : l.records) {
      ordered_json rec;
      rec["mq_id"] = r.mq_id;
      rec["predicted"] = r.predicted;
      rec["gold"] = r.gold;
      records.push_back(std::move(rec));
    }
    level["records"] = std::move(records);
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const RobustnessReport& report) {
  out << "level,acc,r_score,n_records\n";
  for (const LevelResult& l : report.levels) {
    out << l.level << ',' << format_double(l.accuracy) << ',';
    if (l.r_score) out << format_double(*l.r_score);
    out << ',' << l.records.size() << '\n';
  }
}

}  // namespace bqbench::io
