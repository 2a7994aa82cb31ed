#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ascbem/sparse_matrix.hpp"

namespace ascbem {

enum class SolveMethod { direct, gmres };

std::string_view to_string(SolveMethod method);

struct SolveReport {
  Eigen::VectorXcd x;
  SolveMethod method = SolveMethod::direct;
  int iterations = 0;
  /// ||M x - b|| / ||b|| (0 when b = 0).
  double residual = 0.0;
  double seconds = 0.0;
  bool converged = true;
  /// GMRES: relative residual estimate after each iteration.
  std::vector<double> history;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// LU with partial pivoting. Throws SolverError on an exactly singular pivot.
SolveReport dense_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b);
/// Direct solve of a sparse system by densifying.
SolveReport sparse_solve(const SparseComplexMatrix& M, const Eigen::VectorXcd& b);

/// y = M x for an abstract operator.
using LinearOperator = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Non-restarted GMRES from x0 = 0, modified Gram-Schmidt with one
/// reorthogonalization pass. max_iter <= 0 means the system size. Hitting
/// max_iter is reported through `converged`, not thrown.
SolveReport gmres(const LinearOperator& op, const Eigen::VectorXcd& b,
                  double tol = 1e-5, int max_iter = 0);
SolveReport gmres(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                  double tol = 1e-5, int max_iter = 0);
SolveReport gmres(const SparseComplexMatrix& M, const Eigen::VectorXcd& b,
                  double tol = 1e-5, int max_iter = 0);

inline constexpr int kMaxSvdSize = 6000;

/// 2-norm condition number from a full SVD. Throws std::length_error above
/// kMaxSvdSize.
double cond_estimate(const Eigen::MatrixXcd& M);
double cond_estimate(const SparseComplexMatrix& M);

Eigen::VectorXcd sparse_matvec(const SparseComplexMatrix& M, const Eigen::VectorXcd& x);

}  // namespace ascbem
