#pragma once

#include <span>
#include <string>
#include <vector>

namespace spca {

// A block of column vectors, stored column-major. Each column is one
// independent run's iterate.
struct VectorBatch {
  int dim = 0;
  int width = 0;
  std::vector<double> values;  // dim * width, column-major

  VectorBatch() = default;
  VectorBatch(int dim_, int width_)
      : dim(dim_), width(width_),
        values(static_cast<std::size_t>(dim_) * width_, 0.0) {}

  double* col(int j) { return values.data() + static_cast<std::size_t>(j) * dim; }
  const double* col(int j) const {
    return values.data() + static_cast<std::size_t>(j) * dim;
  }
  std::span<double> column(int j) { return {col(j), static_cast<std::size_t>(dim)}; }
  std::span<const double> column(int j) const {
    return {col(j), static_cast<std::size_t>(dim)};
  }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * dim + i]; }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * dim + i];
  }

  static VectorBatch from_vector(std::span<const double> v);
};

// The n x p data matrix A. Dense storage is column-major; sparse storage is
// compressed-column with strictly increasing row indices per column.
// Immutable after construction and safe to share across threads.
class DataMatrix {
 public:
  static DataMatrix dense(int n, int p, std::vector<double> values);
  static DataMatrix sparse(int n, int p, std::vector<int> col_ptr,
                           std::vector<int> row_idx, std::vector<double> values);

  int rows() const { return n_; }
  int cols() const { return p_; }
  bool is_sparse() const { return sparse_; }
  std::size_t nnz() const { return values_.size(); }

  double entry(int i, int j) const;
  std::vector<double> column(int j) const;
  const std::vector<double>& column_norms() const { return column_norms_; }
  double frobenius_norm() const;

  // out = A * X. Per output entry, contributions accumulate in ascending
  // index order, so batched and single-column products agree bitwise.
  void mult(const VectorBatch& X, VectorBatch& out) const;
  // out = A^T * Y, same accumulation contract.
  void mult_t(const VectorBatch& Y, VectorBatch& out) const;

  VectorBatch mult(const VectorBatch& X) const;
  VectorBatch mult_t(const VectorBatch& Y) const;
  std::vector<double> mult(std::span<const double> x) const;
  std::vector<double> mult_t(std::span<const double> y) const;

  DataMatrix densified() const;

 private:
  DataMatrix() = default;
  void compute_column_norms();

  int n_ = 0, p_ = 0;
  bool sparse_ = false;
  std::vector<double> values_;
  std::vector<int> col_ptr_;  // sparse only, length p + 1
  std::vector<int> row_idx_;  // sparse only
  std::vector<double> column_norms_;
};

enum class MatrixFormat { auto_detect, matrix_market, csv };

// Parse errors carry the offending line number in the message.
DataMatrix load_matrix(const std::string& path,
                       MatrixFormat format = MatrixFormat::auto_detect,
                       bool csv_skip_header = false);

// Subtracts each column's mean. Sparse inputs are densified (a warning is
// written to stderr, since centering destroys sparsity).
DataMatrix center_columns(const DataMatrix& A);

}  // namespace spca
