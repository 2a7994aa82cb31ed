#include "ascbem/sparse_matrix.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ascbem {

SparseComplexMatrix::SparseComplexMatrix(int n, std::vector<std::size_t> row_ptr,
                                         std::vector<int> cols,
                                         std::vector<Complex> values)
    : n_(n) {
  if (n < 0 || row_ptr.size() != static_cast<std::size_t>(n) + 1 || row_ptr[0] != 0 ||
      row_ptr.back() != cols.size() || cols.size() != values.size()) {
    throw std::invalid_argument("inconsistent CSR arrays");
  }
  row_ptr_.assign(1, 0);
  row_ptr_.reserve(n + 1);
  cols_.reserve(cols.size());
  values_.reserve(values.size());
  for (int i = 0; i < n; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) throw std::invalid_argument("row pointers decrease");
    int previous = -1;
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      if (cols[e] <= previous || cols[e] >= n) {
        throw std::invalid_argument("CSR columns must be increasing and in range, row " +
                                    std::to_string(i));
      }
      previous = cols[e];
      if (values[e] == Complex(0.0, 0.0)) continue;
      cols_.push_back(cols[e]);
      values_.push_back(values[e]);
    }
    row_ptr_.push_back(cols_.size());
  }
}

SparseComplexMatrix SparseComplexMatrix::from_dense(const Eigen::MatrixXcd& dense) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("matrix must be square");
  const int n = static_cast<int>(dense.rows());
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> cols;
  std::vector<Complex> values;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dense(i, j) == Complex(0.0, 0.0)) continue;
      cols.push_back(j);
      values.push_back(dense(i, j));
    }
    row_ptr.push_back(cols.size());
  }
  return SparseComplexMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

double SparseComplexMatrix::fill_fraction() const {
  if (n_ == 0) return 0.0;
  return static_cast<double>(nnz()) / (static_cast<double>(n_) * n_);
}

Eigen::VectorXcd SparseComplexMatrix::multiply(const Eigen::VectorXcd& x) const {
  if (x.size() != n_) throw std::invalid_argument("sparse matvec dimension mismatch");
  Eigen::VectorXcd y(n_);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_; ++i) {
    // Written out to avoid the NaN-recovery path of std::complex products.
    double re = 0.0;
    double im = 0.0;
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      const Complex a = values_[e];
      const Complex b = x[cols_[e]];
      re += a.real() * b.real() - a.imag() * b.imag();
      im += a.real() * b.imag() + a.imag() * b.real();
    }
    y[i] = Complex(re, im);
  }
  return y;
}

Eigen::MatrixXcd SparseComplexMatrix::to_dense() const {
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) dense(i, cols_[e]) = values_[e];
  }
  return dense;
}

void SparseComplexMatrix::write_pattern(std::ostream& out) const {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << n_ << ' ' << nnz() << '\n';
  for (int i = 0; i < n_; ++i) {
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      out << i << ' ' << cols_[e] << ' ' << values_[e].real() << ' ' << values_[e].imag()
          << '\n';
    }
  }
  out << std::setprecision(static_cast<int>(old_precision));
}

SparseComplexMatrix SparseComplexMatrix::read_pattern(std::istream& in) {
  int n = 0;
  std::size_t count = 0;
  if (!(in >> n >> count) || n < 0) throw std::runtime_error("pattern file: bad header");
  std::vector<std::size_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cols(count);
  std::vector<Complex> values(count);
  int last_row = 0;
  for (std::size_t e = 0; e < count; ++e) {
    int i = 0;
    double re = 0.0;
    double im = 0.0;
    if (!(in >> i >> cols[e] >> re >> im) || i < last_row || i >= n) {
      throw std::runtime_error("pattern file: bad entry " + std::to_string(e));
    }
    last_row = i;
    values[e] = {re, im};
    ++row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseComplexMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

}  // namespace ascbem
