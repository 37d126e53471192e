#include "bqbench/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "bqbench/error.hpp"

namespace bqbench {

namespace {

constexpr double kUnitNormTolerance = 1e-9;

double dot(const SparseVector& a, std::span<const double> r) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.index.size(); ++k) s += a.value[k] * r[a.index[k]];
  return s;
}

void axpy(double alpha, const SparseVector& a, std::span<double> r) noexcept {
  for (std::size_t k = 0; k < a.index.size(); ++k) r[a.index[k]] += alpha * a.value[k];
}

Vector residual(const LassoProblem& problem, std::span<const double> x) {
  Vector r(problem.b.begin(), problem.b.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) axpy(-x[j], problem.A.column(j), r);
  }
  return r;
}

double objective_from(std::span<const double> r, std::span<const double> x, double lambda) {
  double rr = 0.0;
  for (double v : r) rr += v * v;
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return 0.5 * rr + lambda * l1;
}

double kkt_from(const LassoProblem& problem, std::span<const double> r, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double g = dot(problem.A.column(j), r);
    const double v = x[j] == 0.0 ? std::max(std::abs(g) - problem.lambda, 0.0)
                                 : std::abs(g - problem.lambda * (x[j] > 0.0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

void validate(const LassoProblem& problem) {
  const ColumnMatrix& A = problem.A;
  if (A.rows() == 0 || A.cols() == 0) throw InputError("lasso: matrix must have rows >= 1 and p >= 1");
  if (problem.b.size() != A.rows())
    throw InputError("lasso: target has " + std::to_string(problem.b.size()) + " entries, matrix has " +
                     std::to_string(A.rows()) + " rows");
  if (!std::isfinite(problem.lambda) || problem.lambda < 0.0)
    throw InputError("lasso: lambda must be finite and non-negative");
  for (double v : problem.b)
    if (!std::isfinite(v)) throw InputError("lasso: non-finite value in target");
  for (std::size_t j = 0; j < A.cols(); ++j) {
    const SparseVector& col = A.column(j);
    double sq = 0.0;
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      if (col.index[k] >= A.rows()) throw InputError("lasso: row index out of range in column " + std::to_string(j));
      if (!std::isfinite(col.value[k])) throw InputError("lasso: non-finite value in column " + std::to_string(j));
      sq += col.value[k] * col.value[k];
    }
    if (sq != 0.0 && std::abs(std::sqrt(sq) - 1.0) > kUnitNormTolerance)
      throw InputError("lasso: column " + std::to_string(j) + " is not unit length");
  }
  if (!problem.column_ids.empty() && problem.column_ids.size() != A.cols())
    throw InputError("lasso: column_ids does not match column count");
}

}  // namespace

ColumnMatrix::ColumnMatrix(std::size_t rows, std::vector<SparseVector> columns)
    : rows_(rows),
      storage_(std::make_shared<const std::vector<SparseVector>>(std::move(columns))),
      selected_(storage_->size()) {
  for (std::size_t j = 0; j < selected_.size(); ++j) selected_[j] = static_cast<std::uint32_t>(j);
}

ColumnMatrix ColumnMatrix::from_dense(std::size_t rows, const std::vector<Vector>& columns) {
  std::vector<SparseVector> sparse;
  sparse.reserve(columns.size());
  for (const Vector& c : columns) {
    if (c.size() != rows) throw InputError("ColumnMatrix: column length does not match row count");
    SparseVector s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0.0) {
        s.index.push_back(static_cast<std::uint32_t>(i));
        s.value.push_back(c[i]);
      }
    }
    sparse.push_back(std::move(s));
  }
  return ColumnMatrix(rows, std::move(sparse));
}

ColumnMatrix ColumnMatrix::select(std::vector<std::uint32_t> columns) const {
  for (std::uint32_t c : columns)
    if (!storage_ || c >= storage_->size()) throw InputError("ColumnMatrix: selected column out of range");
  ColumnMatrix out = *this;
  out.selected_ = std::move(columns);
  return out;
}

double soft_threshold(double z, double gamma) noexcept {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double lambda_max(const ColumnMatrix& A, std::span<const double> b) {
  if (b.size() != A.rows()) throw InputError("lambda_max: target length does not match row count");
  double best = 0.0;
  for (std::size_t j = 0; j < A.cols(); ++j) best = std::max(best, std::abs(dot(A.column(j), b)));
  return best;
}

double lasso_objective(const LassoProblem& problem, std::span<const double> x) {
  const Vector r = residual(problem, x);
  return objective_from(r, x, problem.lambda);
}

double kkt_residual(const LassoProblem& problem, std::span<const double> x) {
  const Vector r = residual(problem, x);
  return kkt_from(problem, r, x);
}

LassoSolution solve(const LassoProblem& problem, const SolveOptions& options) {
  validate(problem);
  const ColumnMatrix& A = problem.A;
  const std::size_t p = A.cols();
  const double lambda = problem.lambda;

  std::vector<double> col_sq(p, 0.0);
  for (std::size_t j = 0; j < p; ++j)
    for (double v : A.column(j).value) col_sq[j] += v * v;

  LassoSolution sol;
  sol.x.assign(p, 0.0);
  Vector r = problem.b;
  Vector& x = sol.x;

  auto update = [&](std::size_t j) -> double {
    if (col_sq[j] == 0.0) return 0.0;
    const SparseVector& a = A.column(j);
    const double z = dot(a, r) + x[j] * col_sq[j];
    const double next = soft_threshold(z, lambda) / col_sq[j];
    const double delta = next - x[j];
    if (delta != 0.0) {
      axpy(-delta, a, r);
      x[j] = next;
    }
    return std::abs(delta);
  };
  auto report = [&] {
    ++sol.iterations;
    if (options.on_sweep) options.on_sweep(sol.iterations, objective_from(r, x, lambda));
  };

  std::vector<std::size_t> active;
  while (sol.iterations < options.max_iter) {
    double change = 0.0;
    for (std::size_t j = 0; j < p; ++j) change = std::max(change, update(j));
    report();
    if (change < options.tol) {
      // Refresh the incrementally maintained residual before judging KKT.
      r = residual(problem, x);
      if (kkt_from(problem, r, x) <= options.kkt_tol) {
        sol.converged = true;
        break;
      }
    }

    active.clear();
    for (std::size_t j = 0; j < p; ++j)
      if (x[j] != 0.0) active.push_back(j);
    while (!active.empty() && sol.iterations < options.max_iter) {
      double active_change = 0.0;
      for (std::size_t j : active) active_change = std::max(active_change, update(j));
      report();
      if (active_change < options.tol) break;
    }
  }

  r = residual(problem, x);
  sol.objective = objective_from(r, x, lambda);
  sol.kkt_residual = kkt_from(problem, r, x);
  if (sol.converged && sol.kkt_residual > options.kkt_tol) sol.converged = false;
  return sol;
}

}  // namespace bqbench
