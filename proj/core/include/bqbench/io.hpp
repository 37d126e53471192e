#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bqbench/eval.hpp"
#include "bqbench/noise.hpp"
#include "bqbench/ranker.hpp"
#include "bqbench/text.hpp"

// JSON-lines readers and writers for every file the pipeline exchanges.
// Readers throw InputError with "source:line: reason"; writers emit keys in
// a fixed order so equal data always serializes to equal bytes.
namespace bqbench::io {

// {"id", "image_id", "question", "answers"?}. Ids must be unique and
// non-empty; answers, when present, hold 1 to 10 strings.
std::vector<MainQuestion> read_main_questions(std::istream& in, const std::string& source);
// {"id", "question"}.
std::vector<Question> read_pool(std::istream& in, const std::string& source);
std::vector<RankedBQD> read_ranked(std::istream& in, const std::string& source);
std::vector<NoisyQuestion> read_noisy(std::istream& in, const std::string& source);

std::vector<MainQuestion> read_main_questions(const std::filesystem::path& path);
std::vector<Question> read_pool(const std::filesystem::path& path);
std::vector<RankedBQD> read_ranked(const std::filesystem::path& path);
std::vector<NoisyQuestion> read_noisy(const std::filesystem::path& path);

std::string to_json_line(const RankedBQD& ranked);
std::string to_json_line(const NoisyQuestion& noisy);
void write_ranked(std::ostream& out, const std::vector<RankedBQD>& ranked);
void write_noisy(std::ostream& out, const std::vector<NoisyQuestion>& noisy);

// Full report as a pretty-printed JSON document.
void write_report_json(std::ostream& out, const RobustnessReport& report);
// `level,acc,r_score,n_records`, one row per evaluated level; r_score is
// empty where undefined.
void write_report_csv(std::ostream& out, const RobustnessReport& report);

}  // namespace bqbench::io
