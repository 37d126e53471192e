#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bqbench/encoding.hpp"

namespace bqbench {

// A rows x p matrix stored as sparse columns. Copies share the column
// storage; `select` narrows the visible columns without copying them.
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::vector<SparseVector> columns);

  // Builds from dense columns, each of length `rows`. Exact zeros are dropped.
  static ColumnMatrix from_dense(std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return selected_.size(); }
  const SparseVector& column(std::size_t j) const { return (*storage_)[selected_[j]]; }

  // The same storage restricted to the given storage-relative column indices.
  ColumnMatrix select(std::vector<std::uint32_t> columns) const;

 private:
  std::size_t rows_ = 0;
  std::shared_ptr<const std::vector<SparseVector>> storage_;
  std::vector<std::uint32_t> selected_;
};

// minimize (1/2)|Ax - b|^2 + lambda |x|_1 over columns of unit (or zero)
// L2 norm.
struct LassoProblem {
  ColumnMatrix A;
  Vector b;
  double lambda = 0.0;
  std::vector<std::string> column_ids;
};

struct LassoSolution {
  Vector x;
  int iterations = 0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
};

struct SolveOptions {
  double tol = 1e-6;
  int max_iter = 100000;
  double kkt_tol = 1e-5;
  // Called after every sweep with the sweep count and current objective.
  std::function<void(int, double)> on_sweep;
};

// sign(z) max(|z| - gamma, 0).
double soft_threshold(double z, double gamma) noexcept;

// |A^T b|_inf: the smallest lambda whose solution is identically zero.
double lambda_max(const ColumnMatrix& A, std::span<const double> b);

double lasso_objective(const LassoProblem& problem, std::span<const double> x);

// Largest violation of the optimality conditions at x.
double kkt_residual(const LassoProblem& problem, std::span<const double> x);

// Cyclic coordinate descent from x = 0.
//
// Each full sweep visits every column in order; between full sweeps the
// solver cycles over the current nonzero coordinates until they settle.
// It stops after a full sweep whose largest coordinate change is below
// `tol` and whose KKT residual is within `kkt_tol`, or after `max_iter`
// sweeps (full and active-set sweeps both count). Running out of sweeps is
// reported through `converged = false`, not an exception.
//
// Throws InputError for non-finite data, mismatched shapes, out-of-range
// row indices or columns that are neither zero nor unit length.
LassoSolution solve(const LassoProblem& problem, const SolveOptions& options = {});

}  // namespace bqbench
