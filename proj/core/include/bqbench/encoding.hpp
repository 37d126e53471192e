#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bqbench/text.hpp"

namespace bqbench {

using Vector = std::vector<double>;

// Sorted-index sparse vector.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const noexcept { return index.size(); }
  bool empty() const noexcept { return index.empty(); }
};

double norm2(std::span<const double> v) noexcept;

// a.b / (|a| |b|), 0 when either side is the zero vector. Throws InputError
// on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

// Maps questions to unit-length vectors (or the zero vector).
//
// A TF-IDF encoder owns a vocabulary of word 1-grams (and optionally
// 2-grams) indexed in lexicographic order, with idf weights
// ln((n_docs + 1) / (df + 1)). An external encoder owns a table of
// precomputed embeddings keyed by question id.
class Encoder {
 public:
  enum class Kind { kTfidf, kExternal };

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }

  // Dense encoding. External encoders throw MissingEmbeddingError for an
  // unknown id.
  Vector encode(const Question& q) const;
  SparseVector encode_sparse(const Question& q) const;

  // TF-IDF only.
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<double>& idf_weights() const noexcept { return idf_; }
  int max_order() const noexcept { return max_order_; }

  friend Encoder fit_tfidf(std::span<const Question> corpus, int max_order);
  friend Encoder load_external(std::istream& in, const std::string& source);

 private:
  Kind kind_ = Kind::kTfidf;
  std::size_t dim_ = 0;
  int max_order_ = 2;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<double> idf_;
  std::unordered_map<std::string, Vector> table_;
};

// max_order is 1 (unigrams) or 2 (unigrams and bigrams). Throws ConfigError
// on an empty corpus, an out-of-range order, or a corpus with no terms.
Encoder fit_tfidf(std::span<const Question> corpus, int max_order = 2);

// Reads `<id>\t<v1> <v2> ... <vd>` lines. Errors name `source` and the line.
Encoder load_external(std::istream& in, const std::string& source);
Encoder load_external(const std::filesystem::path& path);

}  // namespace bqbench
