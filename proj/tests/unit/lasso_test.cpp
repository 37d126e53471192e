#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bqbench/error.hpp"
#include "bqbench/lasso.hpp"
#include "doctest.h"
#include "ista_oracle.hpp"

using namespace bqbench;

namespace {

LassoProblem from_dense(const testing::DenseLasso& d) {
  LassoProblem p;
  p.A = ColumnMatrix::from_dense(d.rows, d.columns);
  p.b = d.b;
  p.lambda = d.lambda;
  return p;
}

double l1(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace

TEST_CASE("soft_threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  for (double z : {-2.5, -1e-9, 0.0, 0.7, 1e6}) CHECK(soft_threshold(z, 0.0) == z);
}

TEST_CASE("lambda_max") {
  const ColumnMatrix ortho = ColumnMatrix::from_dense(3, {{1, 0, 0}, {0, 1, 0}});
  CHECK(lambda_max(ortho, Vector{0, 0, 1}) == 0.0);
  const ColumnMatrix same = ColumnMatrix::from_dense(2, {{0.6, 0.8}});
  CHECK(lambda_max(same, Vector{0.6, 0.8}) == doctest::Approx(1.0));
}

TEST_CASE("solve: lambda at or above lambda_max gives exactly zero") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    LassoProblem p = from_dense(testing::random_dense_lasso(rng, 5, 8));
    const double lmax = lambda_max(p.A, p.b);
    for (double scale : {1.0, 1.5}) {
      p.lambda = lmax * scale;
      const LassoSolution sol = solve(p);
      CHECK(sol.converged);
      for (double v : sol.x) CHECK(v == 0.0);
      double bb = 0.0;
      for (double v : p.b) bb += v * v;
      CHECK(sol.objective == doctest::Approx(0.5 * bb).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve: single column equal to the target") {
  LassoProblem p;
  p.A = ColumnMatrix::from_dense(2, {{0.6, 0.8}});
  p.b = {0.6, 0.8};
  p.lambda = 0.25;
  const LassoSolution sol = solve(p);
  CHECK(sol.converged);
  CHECK(sol.x[0] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("solve matches the ISTA oracle on random 6x10 problems") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    testing::DenseLasso d = testing::random_dense_lasso(rng, 6, 10);
    LassoProblem p = from_dense(d);
    const double lmax = lambda_max(p.A, p.b);
    d.lambda = p.lambda = 0.1 * lmax * (1 + trial % 3);
    const testing::IstaResult oracle = testing::ista(d, 1'000'000, 0.0);
    const LassoSolution sol = solve(p);
    CHECK(sol.converged);
    CHECK(std::abs(sol.objective - oracle.objective) <= 1e-6);
    CHECK(sol.objective == doctest::Approx(testing::dense_objective(d, sol.x)).epsilon(1e-9));
  }
}

TEST_CASE("solve: objective never increases across sweeps") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    LassoProblem p = from_dense(testing::random_dense_lasso(rng, 12, 30));
    p.lambda = 0.05 * lambda_max(p.A, p.b);
    double last = std::numeric_limits<double>::infinity();
    int sweeps = 0;
    SolveOptions opts;
    opts.on_sweep = [&](int, double obj) {
      CHECK(obj <= last + 1e-12);
      last = obj;
      ++sweeps;
    };
    const LassoSolution sol = solve(p, opts);
    CHECK(sweeps == sol.iterations);
  }
}

TEST_CASE("solve: converged solutions satisfy KKT; l1 norm shrinks with lambda") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    LassoProblem p = from_dense(testing::random_dense_lasso(rng, 8, 20));
    const double lmax = lambda_max(p.A, p.b);
    double previous_l1 = std::numeric_limits<double>::infinity();
    for (double ratio : {0.02, 0.05, 0.1, 0.3, 0.6, 0.9}) {
      p.lambda = ratio * lmax;
      const LassoSolution sol = solve(p);
      REQUIRE(sol.converged);
      CHECK(sol.kkt_residual <= 1e-5);
      CHECK(kkt_residual(p, sol.x) == doctest::Approx(sol.kkt_residual));
      CHECK(sol.objective == doctest::Approx(lasso_objective(p, sol.x)).epsilon(1e-9));
      CHECK(l1(sol.x) <= previous_l1 + 1e-8);
      previous_l1 = l1(sol.x);
    }
  }
}

TEST_CASE("solve: running out of sweeps is not an error") {
  std::mt19937_64 rng(5);
  LassoProblem p = from_dense(testing::random_dense_lasso(rng, 10, 25));
  p.lambda = 0.01 * lambda_max(p.A, p.b);
  SolveOptions opts;
  opts.max_iter = 1;
  const LassoSolution sol = solve(p, opts);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 1);
}

TEST_CASE("solve: zero columns stay at zero") {
  LassoProblem p;
  p.A = ColumnMatrix::from_dense(2, {{0, 0}, {1, 0}});
  p.b = {1, 0};
  p.lambda = 0.1;
  const LassoSolution sol = solve(p);
  CHECK(sol.x[0] == 0.0);
  CHECK(sol.x[1] == doctest::Approx(0.9));
}

TEST_CASE("solve: input validation") {
  LassoProblem p;
  p.A = ColumnMatrix::from_dense(2, {{1, 0}});
  p.lambda = 0.1;
  p.b = {std::numeric_limits<double>::quiet_NaN(), 0};
  CHECK_THROWS_AS(solve(p), InputError);
  p.b = {1, 0, 0};
  CHECK_THROWS_AS(solve(p), InputError);
  p.b = {1, 0};
  p.A = ColumnMatrix::from_dense(2, {{2, 0}});
  CHECK_THROWS_AS(solve(p), InputError);
  p.A = ColumnMatrix::from_dense(2, {{std::numeric_limits<double>::infinity(), 0}});
  CHECK_THROWS_AS(solve(p), InputError);
}

TEST_CASE("ColumnMatrix::select shares storage") {
  const ColumnMatrix m = ColumnMatrix::from_dense(2, {{1, 0}, {0, 1}, {0.6, 0.8}});
  const ColumnMatrix s = m.select({2, 0});
  CHECK(s.cols() == 2);
  CHECK(s.column(0).value == std::vector<double>{0.6, 0.8});
  CHECK(&s.column(1) == &m.column(0));
  CHECK_THROWS_AS(m.select({3}), InputError);
}
