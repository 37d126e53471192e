#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bqbench/adapter.hpp"
#include "bqbench/encoding.hpp"
#include "bqbench/error.hpp"
#include "bqbench/eval.hpp"
#include "bqbench/io.hpp"
#include "bqbench/noise.hpp"
#include "bqbench/ranker.hpp"

namespace bqbench::cli {

namespace fs = std::filesystem;

namespace {

struct RankConfig {
  std::string method = "lasso";
  std::string pool;
  std::string mq;
  std::string out;
  std::size_t top_k = kDefaultTopK;
  std::size_t group_size = kDefaultGroupSize;
  std::optional<std::size_t> levels;
  double lambda_ratio = kDefaultLambdaRatio;
  std::string encoder = "tfidf";
  unsigned jobs = 0;
  bool strict = false;
};

struct NoiseConfig {
  std::string mq;
  std::string ranked;
  std::string out;
  std::size_t levels = 7;
  std::size_t group_size = kDefaultGroupSize;
  bool strict = false;
};

struct EvalConfig {
  std::string noisy;
  std::string mq;
  std::string model;
  std::string out;
  std::string csv;
  double t = kDefaultTolerance;
  std::string accuracy = "consensus";
  std::uint64_t seed = 0;
  std::string mock_default;
  std::string work_dir;
  bool strict = false;
};

struct CompareConfig {
  std::vector<std::string> files;
  std::string out;
};

void require_input(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing ") + what + " path");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " file not found: " + path);
}

void require_output(const std::string& path) {
  if (path.empty()) throw ConfigError("missing output path");
  const fs::path parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) throw ConfigError("output directory does not exist: " + parent.string());
  if (fs::is_directory(path)) throw ConfigError("output path is a directory: " + path);
}

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a half-written output.
void write_atomically(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw ConfigError("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<Question> mq_questions(const std::vector<MainQuestion>& mqs) {
  std::vector<Question> out;
  out.reserve(mqs.size());
  for (const MainQuestion& m : mqs) out.push_back(m.question);
  return out;
}

// Most frequent gold answer; ties go to the lexicographically smallest.
std::string majority_answer(const std::vector<std::string>& answers) {
  std::map<std::string, int> counts;
  for (const std::string& a : answers) ++counts[a];
  std::string best;
  int best_count = 0;
  for (const auto& [a, c] : counts) {
    if (c > best_count) {
      best = a;
      best_count = c;
    }
  }
  return best;
}

int cmd_rank(const RankConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto method = parse_method(cfg.method);
  if (!method) throw ConfigError("unknown method '" + cfg.method + "'; expected one of: " + method_list());
  require_input(cfg.pool, "pool");
  require_input(cfg.mq, "main-question");
  require_output(cfg.out);
  if (cfg.top_k < cfg.group_size)
    throw ConfigError("--top-k must be at least --group-size");
  if (cfg.levels && *cfg.levels * cfg.group_size > cfg.top_k)
    throw ConfigError("--levels x --group-size exceeds --top-k");
  if (!(cfg.lambda_ratio > 0.0 && cfg.lambda_ratio < 1.0)) throw ConfigError("--lambda-ratio must lie in (0, 1)");

  std::shared_ptr<const Encoder> encoder;
  const std::string external_prefix = "external:";
  const bool external = cfg.encoder.rfind(external_prefix, 0) == 0;
  if (cfg.encoder != "tfidf" && cfg.encoder != "tfidf1" && !external)
    throw ConfigError("--encoder must be tfidf, tfidf1 or external:<path>");
  if (external) require_input(cfg.encoder.substr(external_prefix.size()), "embedding");

  const std::vector<Question> pool = io::read_pool(fs::path(cfg.pool));
  const std::vector<MainQuestion> mqs = io::read_main_questions(fs::path(cfg.mq));
  if (pool.empty()) throw InputError(cfg.pool + ": pool is empty");

  if (method->lasso) {
    if (external)
      encoder = std::make_shared<const Encoder>(load_external(fs::path(cfg.encoder.substr(external_prefix.size()))));
    else
      encoder = std::make_shared<const Encoder>(fit_tfidf(pool, cfg.encoder == "tfidf1" ? 1 : 2));
  }

  BuildOptions options;
  options.method = *method;
  options.top_k = cfg.top_k;
  options.group_size = cfg.group_size;
  options.lambda_ratio = cfg.lambda_ratio;
  options.encoder = encoder;
  options.jobs = cfg.jobs;
  const std::vector<RankOutcome> outcomes = build_ranked_bqd(mq_questions(mqs), pool, options);

  std::string contents;
  std::size_t failed = 0;
  for (const RankOutcome& o : outcomes) {
    if (o.ok()) {
      contents += io::to_json_line(*o.ranked);
      contents += '\n';
    } else {
      ++failed;
      err << "warning: " << o.mq_id << ": " << o.error << '\n';
    }
  }
  write_atomically(cfg.out, contents);
  out << "ranked " << outcomes.size() - failed << " main question(s) with " << method->name() << ", " << failed
      << " failed\n";
  return failed > 0 && cfg.strict ? kPartial : kOk;
}

int cmd_noise(const NoiseConfig& cfg, std::ostream& out, std::ostream& err) {
  require_input(cfg.mq, "main-question");
  require_input(cfg.ranked, "ranked");
  require_output(cfg.out);
  if (cfg.group_size == 0) throw ConfigError("--group-size must be >= 1");

  const std::vector<MainQuestion> mqs = io::read_main_questions(fs::path(cfg.mq));
  const std::vector<RankedBQD> ranked = io::read_ranked(fs::path(cfg.ranked));
  std::map<std::string, const RankedBQD*> by_id;
  for (const RankedBQD& r : ranked) by_id.emplace(r.mq_id, &r);

  std::vector<NoisyQuestion> noisy;
  std::size_t skipped = 0;
  for (const MainQuestion& mq : mqs) {
    const auto it = by_id.find(mq.question.id());
    if (it == by_id.end()) {
      ++skipped;
      err << "warning: " << mq.question.id() << ": no ranked list, skipped\n";
      continue;
    }
    for (NoisyQuestion& q : noisy_sweep(mq, *it->second, cfg.levels, cfg.group_size)) noisy.push_back(std::move(q));
  }

  std::ostringstream contents;
  io::write_noisy(contents, noisy);
  write_atomically(cfg.out, contents.str());
  out << "wrote " << noisy.size() << " question(s) for " << mqs.size() - skipped << " main question(s), "
      << skipped << " skipped\n";
  return skipped > 0 && cfg.strict ? kPartial : kOk;
}

ModelAdapter make_adapter(const EvalConfig& cfg, const std::vector<MainQuestion>& mqs) {
  const std::string& model = cfg.model;
  if (model.rfind("cmd:", 0) == 0) return ModelAdapter::external(model.substr(4), cfg.work_dir);
  if (model.rfind("mock:constant:", 0) == 0) return ModelAdapter::constant(model.substr(14));
  if (model == "mock:lookup") {
    std::unordered_map<std::string, std::string> table;
    for (const MainQuestion& m : mqs)
      if (!m.answers.empty()) table.emplace(m.question.id(), majority_answer(m.answers));
    return ModelAdapter::lookup(std::move(table), cfg.mock_default);
  }
  if (model == "mock:prefix") {
    std::unordered_map<std::string, std::string> table;
    for (const MainQuestion& m : mqs)
      if (!m.answers.empty()) table.emplace(m.question.text(), majority_answer(m.answers));
    return ModelAdapter::prefix(table, cfg.mock_default);
  }
  if (model == "mock:hash") {
    std::set<std::string> vocabulary;
    for (const MainQuestion& m : mqs) vocabulary.insert(m.answers.begin(), m.answers.end());
    if (vocabulary.empty()) throw ConfigError("mock:hash needs gold answers to draw its answer set from");
    return ModelAdapter::hash({vocabulary.begin(), vocabulary.end()}, cfg.seed);
  }
  throw ConfigError("unknown --model '" + model +
                    "'; expected cmd:<command>, mock:constant:<answer>, mock:lookup, mock:prefix or mock:hash");
}

int cmd_eval(const EvalConfig& cfg, std::ostream& out, std::ostream& err) {
  require_input(cfg.noisy, "noisy-question");
  require_input(cfg.mq, "main-question");
  require_output(cfg.out);
  const std::string csv = cfg.csv.empty() ? fs::path(cfg.out).replace_extension(".csv").string() : cfg.csv;
  require_output(csv);
  if (!(cfg.t > 0.0 && cfg.t <= 1.0)) throw ConfigError("--t must lie in (0, 1]");
  if (cfg.accuracy != "consensus" && cfg.accuracy != "exact")
    throw ConfigError("--accuracy must be consensus or exact");
  if (cfg.model.empty()) throw ConfigError("missing --model");

  const std::vector<MainQuestion> mqs = io::read_main_questions(fs::path(cfg.mq));
  const std::vector<NoisyQuestion> noisy = io::read_noisy(fs::path(cfg.noisy));
  const ModelAdapter adapter = make_adapter(cfg, mqs);

  GoldAnswers gold;
  for (const MainQuestion& m : mqs)
    if (!m.answers.empty()) gold.emplace(m.question.id(), m.answers);

  EvalOptions options;
  options.t = cfg.t;
  options.rule = cfg.accuracy == "exact" ? AccuracyRule::kExactMatch : AccuracyRule::kConsensus;
  const RobustnessReport report = evaluate_noisy(noisy, gold, adapter, options);

  std::ostringstream json, table;
  io::write_report_json(json, report);
  io::write_report_csv(table, report);
  write_atomically(cfg.out, json.str());
  write_atomically(csv, table.str());

  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  out << table.str();
  if (!report.complete) {
    err << "error: model adapter failed, report is incomplete: " << report.error << '\n';
    return kAdapter;
  }
  return report.skipped_missing_gold > 0 && cfg.strict ? kPartial : kOk;
}

int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.files.size() < 2) throw ConfigError("compare needs at least two ranked files");
  for (const std::string& f : cfg.files) require_input(f, "ranked");
  if (!cfg.out.empty()) require_output(cfg.out);

  std::vector<std::vector<RankedBQD>> files;
  std::vector<std::string> labels;
  for (const std::string& f : cfg.files) {
    files.push_back(io::read_ranked(fs::path(f)));
    labels.push_back(files.back().empty() ? fs::path(f).stem().string() : files.back().front().method);
  }
  // Fall back to file names when two files carry the same method.
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = fs::path(cfg.files[i]).filename().string();
  }

  std::vector<std::map<std::string, const RankedBQD*>> by_mq(files.size());
  for (std::size_t i = 0; i < files.size(); ++i)
    for (const RankedBQD& r : files[i]) by_mq[i].emplace(r.mq_id, &r);
  std::set<std::string> reference;
  for (const auto& [id, r] : by_mq[0]) reference.insert(id);
  for (std::size_t i = 1; i < files.size(); ++i) {
    std::set<std::string> ids, diff;
    for (const auto& [id, r] : by_mq[i]) ids.insert(id);
    std::set_symmetric_difference(reference.begin(), reference.end(), ids.begin(), ids.end(),
                                  std::inserter(diff, diff.end()));
    if (!diff.empty()) {
      std::string list;
      for (const std::string& id : diff) list += (list.empty() ? "" : ", ") + id;
      throw InputError("main-question sets differ between " + cfg.files[0] + " and " + cfg.files[i] + ": " + list);
    }
  }

  std::ostringstream csv;
  csv << "method";
  for (const std::string& l : labels) csv << ',' << l;
  csv << '\n';
  csv.precision(17);
  for (std::size_t i = 0; i < files.size(); ++i) {
    csv << labels[i];
    for (std::size_t j = 0; j < files.size(); ++j) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const std::string& id : reference) {
        const RankedBQD& a = *by_mq[i].at(id);
        const RankedBQD& b = *by_mq[j].at(id);
        if (const auto tau = kendall_tau_common(a, b)) {
          sum += *tau;
          ++n;
        }
      }
      csv << ',';
      if (n > 0) csv << sum / static_cast<double>(n);
    }
    csv << '\n';
  }
  if (cfg.out.empty()) {
    out << csv.str();
  } else {
    write_atomically(cfg.out, csv.str());
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness benchmark for question-answering models using ranked basic questions as noise"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags given on the command line take precedence");

  RankConfig rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank a basic-question pool against each main question");
  rank_cmd->add_option("--method", rank.method, "lasso, bleu1, bleu2, bleu3, bleu4, rouge, cider or meteor");
  rank_cmd->add_option("--pool", rank.pool, "Pool file (JSON lines)");
  rank_cmd->add_option("--mq", rank.mq, "Main-question file (JSON lines)");
  rank_cmd->add_option("--out", rank.out, "Ranked output file");
  rank_cmd->add_option("--top-k", rank.top_k, "Entries kept per main question")->capture_default_str();
  rank_cmd->add_option("--group-size", rank.group_size, "Basic questions per noise level")->capture_default_str();
  rank_cmd->add_option("--levels", rank.levels, "Check that this many levels fit in --top-k");
  rank_cmd->add_option("--lambda-ratio", rank.lambda_ratio, "LASSO lambda as a fraction of lambda_max")
      ->capture_default_str();
  rank_cmd->add_option("--encoder", rank.encoder, "tfidf (1+2-grams), tfidf1 (1-grams) or external:<path>")
      ->capture_default_str();
  rank_cmd->add_option("--jobs", rank.jobs, "Worker threads (0 = one per processor)")->capture_default_str();
  rank_cmd->add_flag("--strict", rank.strict, "Exit 4 if any main question failed");

  NoiseConfig noise;
  auto* noise_cmd = app.add_subcommand("noise", "Generate clean and noisy questions from ranked lists");
  noise_cmd->add_option("--mq", noise.mq, "Main-question file (JSON lines)");
  noise_cmd->add_option("--ranked", noise.ranked, "Ranked file from `rank`");
  noise_cmd->add_option("--out", noise.out, "Noisy-question output file");
  noise_cmd->add_option("--levels", noise.levels, "Noise levels to emit after the clean level")->capture_default_str();
  noise_cmd->add_option("--group-size", noise.group_size, "Basic questions per level")->capture_default_str();
  noise_cmd->add_flag("--strict", noise.strict, "Exit 4 if any main question was skipped");

  EvalConfig eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on clean and noisy questions and report R_score");
  eval_cmd->add_option("--noisy", eval.noisy, "Noisy-question file from `noise`");
  eval_cmd->add_option("--mq", eval.mq, "Main-question file with gold answers");
  eval_cmd->add_option("--model", eval.model,
                       "cmd:<command>, mock:constant:<answer>, mock:lookup, mock:prefix or mock:hash");
  eval_cmd->add_option("--out", eval.out, "JSON report path");
  eval_cmd->add_option("--csv", eval.csv, "CSV report path (default: --out with .csv)");
  eval_cmd->add_option("--t", eval.t, "R_score tolerance")->capture_default_str();
  eval_cmd->add_option("--accuracy", eval.accuracy, "consensus or exact")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Seed for mock:hash")->capture_default_str();
  eval_cmd->add_option("--mock-default", eval.mock_default, "Fallback answer for mock:lookup and mock:prefix");
  eval_cmd->add_option("--work-dir", eval.work_dir, "Directory for external adapter scratch files");
  eval_cmd->add_flag("--strict", eval.strict, "Exit 4 if any main question lacked gold answers");

  CompareConfig compare;
  auto* compare_cmd = app.add_subcommand("compare", "Mean Kendall tau between ranked files");
  compare_cmd->add_option("files", compare.files, "Ranked files (two or more)");
  compare_cmd->add_option("--out", compare.out, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (rank_cmd->parsed()) return cmd_rank(rank, out, err);
    if (noise_cmd->parsed()) return cmd_noise(noise, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (compare_cmd->parsed()) return cmd_compare(compare, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const AdapterError& e) {
    err << "error: " << e.what() << '\n';
    return kAdapter;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bqbench::cli
