#include <random>
#include <sstream>

#include "bqbench/error.hpp"
#include "bqbench/io.hpp"
#include "doctest.h"

using namespace bqbench;

namespace {

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("read_main_questions") {
  std::istringstream in(
      "{\"id\": \"m1\", \"image_id\": \"i1\", \"question\": \"Is it red?\", \"answers\": [\"yes\"]}\n"
      "\n"
      "{\"id\": \"m2\", \"image_id\": \"i2\", \"question\": \"How many?\"}\n");
  const auto mqs = io::read_main_questions(in, "mq.jsonl");
  REQUIRE(mqs.size() == 2);
  CHECK(mqs[0].question.id() == "m1");
  CHECK(mqs[0].question.tokens() == Tokens{"is", "it", "red"});
  CHECK(mqs[0].answers == std::vector<std::string>{"yes"});
  CHECK(mqs[1].answers.empty());
}

TEST_CASE("readers report file and line") {
  CHECK(error_of([] {
          std::istringstream in("{\"id\": \"a\", \"question\": \"x\"}\nnot json\n");
          io::read_pool(in, "pool.jsonl");
        }).starts_with("pool.jsonl:2:"));
  CHECK(error_of([] {
          std::istringstream in("{\"id\": \"a\", \"question\": \"x\"}\n{\"id\": \"a\", \"question\": \"y\"}\n");
          io::read_pool(in, "pool.jsonl");
        }).find("duplicate id 'a'") != std::string::npos);
  CHECK(error_of([] {
          std::istringstream in("{\"id\": \"a\", \"image_id\": \"i\", \"question\": \"x\", \"answers\": []}\n");
          io::read_main_questions(in, "mq");
        }).find("1 to 10") != std::string::npos);
  CHECK(error_of([] {
          std::istringstream in("{\"id\": \"a\"}\n");
          io::read_pool(in, "p");
        }).find("missing field \"question\"") != std::string::npos);
  CHECK(error_of([] {
          std::istringstream in(
              "{\"mq_id\": \"m\", \"method\": \"x\", \"top_k\": 2, \"entries\": ["
              "{\"bq_id\": \"a\", \"question\": \"q\", \"score\": 0.1},"
              "{\"bq_id\": \"b\", \"question\": \"q\", \"score\": 0.5}]}\n");
          io::read_ranked(in, "r");
        }).find("descending") != std::string::npos);
}

TEST_CASE("ranked and noisy records survive a write/read cycle") {
  std::mt19937_64 rng(1);
  std::vector<RankedBQD> ranked;
  std::vector<NoisyQuestion> noisy;
  for (int i = 0; i < 20; ++i) {
    RankedBQD r;
    r.mq_id = "m" + std::to_string(i);
    r.method = "cider";
    r.top_k = 21;
    double s = 1.0;
    for (int k = 0; k < i; ++k) {
      s *= std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      r.entries.push_back({"b" + std::to_string(k), "Question \"" + std::to_string(k) + "\"?", s});
    }
    ranked.push_back(r);
    noisy.push_back({r.mq_id, "img", static_cast<std::size_t>(i % 3), "text\té?", {}});
    if (i % 3 != 0) noisy.back().appended_bq_ids = {"b1", "b2"};
  }
  std::stringstream rs, ns;
  io::write_ranked(rs, ranked);
  io::write_noisy(ns, noisy);
  const auto ranked_back = io::read_ranked(rs, "r");
  const auto noisy_back = io::read_noisy(ns, "n");
  std::stringstream rs2, ns2;
  io::write_ranked(rs2, ranked_back);
  io::write_noisy(ns2, noisy_back);
  CHECK(rs.str() == rs2.str());
  CHECK(ns.str() == ns2.str());
  CHECK(ranked_back[5].entries[3].score == ranked[5].entries[3].score);
}

TEST_CASE("serialized key order is fixed") {
  RankedBQD r{"m", "lasso", 21, {{"b", "Q?", 1.0}}};
  CHECK(io::to_json_line(r) ==
        "{\"mq_id\":\"m\",\"method\":\"lasso\",\"top_k\":21,\"entries\":[{\"bq_id\":\"b\",\"question\":\"Q?\",\"score\":1.0}]}");
  NoisyQuestion q{"m", "i", 1, "Q? B?", {"b"}};
  CHECK(io::to_json_line(q) ==
        "{\"mq_id\":\"m\",\"image_id\":\"i\",\"level\":1,\"question\":\"Q? B?\",\"appended_bq_ids\":[\"b\"]}");
}

TEST_CASE("report CSV") {
  RobustnessReport report;
  report.levels.push_back({0, 0.5, std::nullopt, {{"m", 0, "a", {"a"}}, {"n", 0, "b", {"a"}}}});
  report.levels.push_back({1, 0.25, 0.0, {{"m", 1, "a", {"a"}}, {"n", 1, "b", {"a"}}}});
  std::ostringstream csv;
  io::write_report_csv(csv, report);
  CHECK(csv.str() == "level,acc,r_score,n_records\n0,0.5,,2\n1,0.25,0,2\n");

  std::ostringstream json;
  io::write_report_json(json, report);
  CHECK(json.str().find("\"acc_clean\": 0.5") != std::string::npos);
  CHECK(json.str().find("\"r_score\": {\n    \"1\": 0.0") != std::string::npos);
}
