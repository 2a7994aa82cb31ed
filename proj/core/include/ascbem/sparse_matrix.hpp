#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace ascbem {

/// Square complex matrix in compressed-row storage. Exact zeros are never
/// stored.
class SparseComplexMatrix {
 public:
  using Complex = std::complex<double>;

  SparseComplexMatrix() = default;
  /// Takes CSR arrays; drops exact zeros and checks column order per row.
  SparseComplexMatrix(int n, std::vector<std::size_t> row_ptr, std::vector<int> cols,
                      std::vector<Complex> values);

  static SparseComplexMatrix from_dense(const Eigen::MatrixXcd& dense);

  int size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  double fill_fraction() const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<Complex>& values() const { return values_; }
  std::size_t row_nnz(int i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  /// y = M x.
  Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd to_dense() const;

  /// Header "N nnz", then one "i j re im" line per stored entry.
  void write_pattern(std::ostream& out) const;
  static SparseComplexMatrix read_pattern(std::istream& in);

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<Complex> values_;
};

}  // namespace ascbem
