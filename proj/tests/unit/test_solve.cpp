#include <doctest.h>

#include <random>
#include <sstream>

#include "ascbem/solve.hpp"
#include "ascbem/sparse_matrix.hpp"

using namespace ascbem;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Complex = std::complex<double>;

namespace {

MatrixXcd random_matrix(int n, unsigned seed, double diag) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = {N(rng), N(rng)};
    A(i, i) += diag;
  }
  return A;
}

}  // namespace

TEST_CASE("sparse storage drops exact zeros and multiplies like the dense matrix") {
  MatrixXcd A = random_matrix(30, 1, 0.0);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      if ((i * 7 + j * 3) % 5 == 0) A(i, j) = 0.0;
    }
  }
  const auto S = SparseComplexMatrix::from_dense(A);
  std::size_t nonzero = 0;
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) nonzero += A(i, j) != Complex(0.0);
  }
  CHECK(S.nnz() == nonzero);
  CHECK(S.fill_fraction() == doctest::Approx(nonzero / 900.0));
  CHECK(S.to_dense() == A);
  const VectorXcd x = VectorXcd::Random(30);
  CHECK((S.multiply(x) - A * x).norm() < 1e-12 * (A * x).norm());
}

TEST_CASE("sparse patterns round trip through text") {
  const auto S = SparseComplexMatrix::from_dense(random_matrix(7, 2, 0.0));
  std::stringstream buffer;
  S.write_pattern(buffer);
  std::string header;
  std::getline(buffer, header);
  CHECK(header == "7 49");
  buffer.seekg(0);
  const auto back = SparseComplexMatrix::read_pattern(buffer);
  CHECK(back.to_dense() == S.to_dense());
}

TEST_CASE("CSR construction validates column order") {
  CHECK_THROWS(SparseComplexMatrix(2, {0, 2, 3}, {1, 0, 1}, {1.0, 1.0, 1.0}));
  const SparseComplexMatrix ok(2, {0, 2, 3}, {0, 1, 1}, {1.0, 0.0, 2.0});
  CHECK(ok.nnz() == 2);
}

TEST_CASE("dense and sparse direct solves agree") {
  const MatrixXcd A = random_matrix(40, 3, 10.0);
  const VectorXcd b = VectorXcd::Random(40);
  const SolveReport dense = dense_solve(A, b);
  CHECK((A * dense.x - b).norm() < 1e-12 * b.norm());
  const SolveReport sparse = sparse_solve(SparseComplexMatrix::from_dense(A), b);
  CHECK((sparse.x - dense.x).norm() < 1e-12 * dense.x.norm());
}

TEST_CASE("exactly singular systems raise SolverError") {
  MatrixXcd A = random_matrix(5, 4, 0.0);
  A.row(2).setZero();
  CHECK_THROWS_AS(dense_solve(A, VectorXcd::Ones(5)), SolverError);
  CHECK_THROWS_AS(sparse_solve(SparseComplexMatrix::from_dense(A), VectorXcd::Ones(5)),
                  SolverError);
}

TEST_CASE("GMRES converges to the direct solution with a decreasing history") {
  const MatrixXcd A = random_matrix(60, 5, 20.0);
  const VectorXcd b = VectorXcd::Random(60);
  const SolveReport r = gmres(A, b, 1e-10);
  CHECK(r.converged);
  CHECK(r.method == SolveMethod::gmres);
  CHECK(r.residual <= 1e-10);
  CHECK((A * r.x - b).norm() <= 1.01e-10 * b.norm());
  REQUIRE(r.history.size() == static_cast<std::size_t>(r.iterations));
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] * (1 + 1e-12));
  const SolveReport s = gmres(SparseComplexMatrix::from_dense(A), b, 1e-10);
  CHECK(s.iterations == r.iterations);
}

TEST_CASE("GMRES reports non-convergence when capped") {
  const MatrixXcd A = random_matrix(50, 6, 0.0);
  const SolveReport r = gmres(A, VectorXcd::Ones(50), 1e-12, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(gmres(A, VectorXcd::Zero(50)).x.norm() == 0.0);
}

TEST_CASE("condition numbers of diagonal matrices") {
  MatrixXcd D = MatrixXcd::Zero(4, 4);
  D.diagonal() << 1.0, Complex(0.0, -3.0), 0.5, 2.0;
  CHECK(cond_estimate(D) == doctest::Approx(6.0));
  CHECK(cond_estimate(SparseComplexMatrix::from_dense(D)) == doctest::Approx(6.0));
}
