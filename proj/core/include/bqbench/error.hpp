#pragma once

#include <stdexcept>
#include <string>

namespace bqbench {

// Base of every error raised by the library. The CLI maps each family onto
// a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or configuration (unknown method, cider without idf, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data: unparsable lines, non-finite matrices, bad dims.
class InputError : public Error {
 public:
  using Error::Error;
};

// A request outside the feasible range, e.g. a noise level past the
// end of a ranked list.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The main question shares nothing with the pool, so every LASSO score
// would be zero.
class DegenerateRankingError : public Error {
 public:
  using Error::Error;
};

class MissingEmbeddingError : public Error {
 public:
  using Error::Error;
};

// acc_clean == 0 leaves the relative accuracy drop undefined.
class UndefinedRobustnessError : public Error {
 public:
  using Error::Error;
};

// The model adapter failed or violated the batch protocol.
class AdapterError : public Error {
 public:
  using Error::Error;
};

}  // namespace bqbench
