#include "bqbench/encoding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

// Distinct terms of a question up to max_order, with counts.
std::map<std::string, int> term_counts(const Tokens& tokens, int max_order) {
  std::map<std::string, int> counts;
  for (int n = 1; n <= max_order; ++n) {
    for (const auto& [gram, c] : ngrams(tokens, static_cast<std::size_t>(n)).counts)
      counts[gram] += c;
  }
  return counts;
}

void normalize_in_place(SparseVector& v) {
  double sq = 0.0;
  for (double x : v.value) sq += x * x;
  if (sq <= 0.0) {
    v.index.clear();
    v.value.clear();
    return;
  }
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v.value) x *= inv;
}

void normalize_in_place(Vector& v) {
  const double n = norm2(v);
  if (n <= 0.0) return;
  for (double& x : v) x /= n;
}

}  // namespace

double norm2(std::span<const double> v) noexcept {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InputError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

Encoder fit_tfidf(std::span<const Question> corpus, int max_order) {
  if (corpus.empty()) throw ConfigError("fit_tfidf: corpus is empty");
  if (max_order != 1 && max_order != 2)
    throw ConfigError("fit_tfidf: n-gram orders must be {1} or {1,2}");

  std::map<std::string, int> df;
  for (const Question& q : corpus) {
    for (const auto& [term, c] : term_counts(q.tokens(), max_order)) ++df[term];
  }
  if (df.empty()) throw ConfigError("fit_tfidf: corpus contains no terms");

  Encoder enc;
  enc.kind_ = Encoder::Kind::kTfidf;
  enc.max_order_ = max_order;
  enc.dim_ = df.size();
  enc.terms_.reserve(df.size());
  enc.idf_.reserve(df.size());
  enc.vocab_.reserve(df.size());
  const double n_docs = static_cast<double>(corpus.size());
  for (const auto& [term, freq] : df) {
    enc.vocab_.emplace(term, static_cast<std::uint32_t>(enc.terms_.size()));
    enc.terms_.push_back(term);
    enc.idf_.push_back(std::log((n_docs + 1.0) / (static_cast<double>(freq) + 1.0)));
  }
  return enc;
}

SparseVector Encoder::encode_sparse(const Question& q) const {
  SparseVector out;
  if (kind_ == Kind::kExternal) {
    const Vector dense = encode(q);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        out.index.push_back(static_cast<std::uint32_t>(i));
        out.value.push_back(dense[i]);
      }
    }
    return out;
  }

  std::vector<std::pair<std::uint32_t, double>> entries;
  for (const auto& [term, c] : term_counts(q.tokens(), max_order_)) {
    const auto it = vocab_.find(term);
    if (it == vocab_.end()) continue;
    const double w = c * idf_[it->second];
    if (w != 0.0) entries.emplace_back(it->second, w);
  }
  std::sort(entries.begin(), entries.end());
  out.index.reserve(entries.size());
  out.value.reserve(entries.size());
  for (const auto& [i, w] : entries) {
    out.index.push_back(i);
    out.value.push_back(w);
  }
  normalize_in_place(out);
  return out;
}

Vector Encoder::encode(const Question& q) const {
  if (kind_ == Kind::kExternal) {
    const auto it = table_.find(q.id());
    if (it == table_.end()) throw MissingEmbeddingError("no embedding for question id '" + q.id() + "'");
    return it->second;
  }
  Vector dense(dim_, 0.0);
  const SparseVector sparse = encode_sparse(q);
  for (std::size_t k = 0; k < sparse.nnz(); ++k) dense[sparse.index[k]] = sparse.value[k];
  return dense;
}

Encoder load_external(std::istream& in, const std::string& source) {
  Encoder enc;
  enc.kind_ = Encoder::Kind::kExternal;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) fail("expected '<id>\\t<values>'");
    std::string id = line.substr(0, tab);

    Vector values;
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t'))
        fail("malformed number");
      if (!std::isfinite(v)) fail("non-finite value");
      values.push_back(v);
      p = next;
    }
    if (values.empty()) fail("record '" + id + "' has no values");
    if (enc.dim_ == 0) {
      enc.dim_ = values.size();
    } else if (values.size() != enc.dim_) {
      fail("dimension mismatch: expected " + std::to_string(enc.dim_) + ", got " +
           std::to_string(values.size()));
    }
    normalize_in_place(values);
    if (!enc.table_.emplace(id, std::move(values)).second) fail("duplicate id '" + id + "'");
  }
  if (enc.table_.empty()) throw InputError(source + ": embedding file is empty");
  return enc;
}

Encoder load_external(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding file " + path.string());
  return load_external(in, path.string());
}

}  // namespace bqbench
