#include "ascbem/solve.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace ascbem {

namespace {

using Clock = std::chrono::steady_clock;
using Complex = std::complex<double>;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double relative_residual(const Eigen::VectorXcd& r, const Eigen::VectorXcd& b) {
  const double nb = b.norm();
  return nb > 0.0 ? r.norm() / nb : r.norm();
}

}  // namespace

std::string_view to_string(SolveMethod method) {
  return method == SolveMethod::direct ? "direct" : "gmres";
}

SolveReport dense_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw std::invalid_argument("dense_solve dimension mismatch");
  }
  if (!A.allFinite() || !b.allFinite()) throw SolverError("system has non-finite entries");
  const auto start = Clock::now();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const auto& factors = lu.matrixLU();
  for (Eigen::Index i = 0; i < factors.rows(); ++i) {
    if (factors(i, i) == Complex(0.0, 0.0)) {
      throw SolverError("exactly singular pivot at column " + std::to_string(i));
    }
  }
  SolveReport report;
  report.x = lu.solve(b);
  report.method = SolveMethod::direct;
  report.residual = relative_residual(A * report.x - b, b);
  report.seconds = seconds_since(start);
  return report;
}

SolveReport sparse_solve(const SparseComplexMatrix& M, const Eigen::VectorXcd& b) {
  return dense_solve(M.to_dense(), b);
}

SolveReport gmres(const LinearOperator& op, const Eigen::VectorXcd& b, double tol,
                  int max_iter) {
  const auto start = Clock::now();
  const Eigen::Index n = b.size();
  if (max_iter <= 0) max_iter = static_cast<int>(n);
  SolveReport report;
  report.method = SolveMethod::gmres;
  report.x = Eigen::VectorXcd::Zero(n);
  const double beta = b.norm();
  if (beta == 0.0) {
    report.seconds = seconds_since(start);
    return report;
  }

  std::vector<Eigen::VectorXcd> basis;
  basis.push_back(b / beta);
  // Columns of the rotated Hessenberg matrix; column j has j + 2 entries.
  std::vector<std::vector<Complex>> H;
  std::vector<Complex> g{beta};
  std::vector<double> cs;
  std::vector<Complex> sn;

  int j = 0;
  bool converged = false;
  for (; j < max_iter; ++j) {
    Eigen::VectorXcd w = op(basis[j]);
    if (w.size() != n) throw std::invalid_argument("operator dimension mismatch");
    std::vector<Complex> h(j + 2, Complex{});
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const Complex proj = basis[i].dot(w);
        h[i] += proj;
        w -= proj * basis[i];
      }
    }
    const double h_next = w.norm();
    h[j + 1] = h_next;

    for (int i = 0; i < j; ++i) {
      const Complex a = h[i];
      const Complex c = h[i + 1];
      h[i] = cs[i] * a + sn[i] * c;
      h[i + 1] = -std::conj(sn[i]) * a + cs[i] * c;
    }
    const Complex a = h[j];
    const Complex c = h[j + 1];
    const double nu = std::sqrt(std::norm(a) + std::norm(c));
    if (std::abs(a) == 0.0) {
      cs.push_back(0.0);
      sn.push_back(1.0);
    } else {
      cs.push_back(std::abs(a) / nu);
      sn.push_back((a / std::abs(a)) * std::conj(c) / nu);
    }
    h[j] = cs[j] * a + sn[j] * c;
    h[j + 1] = 0.0;
    g.push_back(-std::conj(sn[j]) * g[j]);
    g[j] = cs[j] * g[j];
    H.push_back(std::move(h));

    const double estimate = std::abs(g[j + 1]) / beta;
    report.history.push_back(estimate);
    if (estimate <= tol) {
      converged = true;
      ++j;
      break;
    }
    if (h_next <= 1e-14 * beta) {
      // Invariant subspace reached: the least-squares solution is exact.
      converged = true;
      ++j;
      break;
    }
    basis.push_back(w / h_next);
  }

  const int m = j;
  std::vector<Complex> y(m);
  for (int i = m - 1; i >= 0; --i) {
    Complex sum = g[i];
    for (int l = i + 1; l < m; ++l) sum -= H[l][i] * y[l];
    y[i] = sum / H[i][i];
  }
  for (int i = 0; i < m; ++i) report.x += y[i] * basis[i];
  report.iterations = m;
  report.residual = relative_residual(op(report.x) - b, b);
  report.converged = converged;
  report.seconds = seconds_since(start);
  return report;
}

SolveReport gmres(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double tol,
                  int max_iter) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw std::invalid_argument("gmres dimension mismatch");
  }
  return gmres([&A](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return A * x; }, b,
               tol, max_iter);
}

SolveReport gmres(const SparseComplexMatrix& M, const Eigen::VectorXcd& b, double tol,
                  int max_iter) {
  if (M.size() != b.size()) throw std::invalid_argument("gmres dimension mismatch");
  return gmres([&M](const Eigen::VectorXcd& x) { return M.multiply(x); }, b, tol,
               max_iter);
}

double cond_estimate(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("cond_estimate needs a square matrix");
  if (M.rows() > kMaxSvdSize) {
    throw std::length_error("matrix too large for a full SVD (N > 6000)");
  }
  if (M.rows() == 0) return 1.0;
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

double cond_estimate(const SparseComplexMatrix& M) {
  if (M.size() > kMaxSvdSize) {
    throw std::length_error("matrix too large for a full SVD (N > 6000)");
  }
  return cond_estimate(M.to_dense());
}

Eigen::VectorXcd sparse_matvec(const SparseComplexMatrix& M, const Eigen::VectorXcd& x) {
  return M.multiply(x);
}

}  // namespace ascbem
