#include "spca/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "spca/parallel.hpp"

namespace spca {

VectorBatch VectorBatch::from_vector(std::span<const double> v) {
  VectorBatch b(static_cast<int>(v.size()), 1);
  std::copy(v.begin(), v.end(), b.values.begin());
  return b;
}

DataMatrix DataMatrix::dense(int n, int p, std::vector<double> values) {
  if (n < 1 || p < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  if (values.size() != static_cast<std::size_t>(n) * p)
    throw std::invalid_argument("dense value count does not match n*p");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
  DataMatrix A;
  A.n_ = n;
  A.p_ = p;
  A.sparse_ = false;
  A.values_ = std::move(values);
  A.compute_column_norms();
  return A;
}

DataMatrix DataMatrix::sparse(int n, int p, std::vector<int> col_ptr,
                              std::vector<int> row_idx,
                              std::vector<double> values) {
  if (n < 1 || p < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  if (col_ptr.size() != static_cast<std::size_t>(p) + 1)
    throw std::invalid_argument("column pointer length must be p+1");
  if (col_ptr.front() != 0 || col_ptr.back() != static_cast<int>(values.size()) ||
      row_idx.size() != values.size())
    throw std::invalid_argument("inconsistent sparse structure");
  for (int j = 0; j < p; ++j) {
    if (col_ptr[j + 1] < col_ptr[j])
      throw std::invalid_argument("column pointers must be nondecreasing");
    for (int k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      if (row_idx[k] < 0 || row_idx[k] >= n)
        throw std::invalid_argument("row index out of range");
      if (k > col_ptr[j] && row_idx[k] <= row_idx[k - 1])
        throw std::invalid_argument("row indices must be strictly increasing per column");
    }
  }
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
  DataMatrix A;
  A.n_ = n;
  A.p_ = p;
  A.sparse_ = true;
  A.values_ = std::move(values);
  A.col_ptr_ = std::move(col_ptr);
  A.row_idx_ = std::move(row_idx);
  A.compute_column_norms();
  return A;
}

void DataMatrix::compute_column_norms() {
  column_norms_.assign(p_, 0.0);
  for (int j = 0; j < p_; ++j) {
    double s = 0.0;
    if (sparse_) {
      for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) s += values_[k] * values_[k];
    } else {
      const double* a = values_.data() + static_cast<std::size_t>(j) * n_;
      for (int i = 0; i < n_; ++i) s += a[i] * a[i];
    }
    column_norms_[j] = std::sqrt(s);
  }
}

double DataMatrix::entry(int i, int j) const {
  if (!sparse_) return values_[static_cast<std::size_t>(j) * n_ + i];
  for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
    if (row_idx_[k] == i) return values_[k];
  return 0.0;
}

std::vector<double> DataMatrix::column(int j) const {
  std::vector<double> c(n_, 0.0);
  if (sparse_) {
    for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) c[row_idx_[k]] = values_[k];
  } else {
    const double* a = values_.data() + static_cast<std::size_t>(j) * n_;
    std::copy(a, a + n_, c.begin());
  }
  return c;
}

double DataMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double nj : column_norms_) s += nj * nj;
  return std::sqrt(s);
}

void DataMatrix::mult(const VectorBatch& X, VectorBatch& out) const {
  if (X.dim != p_) throw std::invalid_argument("mult: X.dim must equal p");
  if (out.dim != n_ || out.width != X.width) out = VectorBatch(n_, X.width);
  std::fill(out.values.begin(), out.values.end(), 0.0);
  const int w = X.width;
  if (!sparse_) {
    // Parallel over row chunks; each out(i,j) accumulates over k ascending.
    parallel_for(
        n_,
        [&](int r0, int r1) {
          for (int k = 0; k < p_; ++k) {
            const double* a = values_.data() + static_cast<std::size_t>(k) * n_;
            for (int j = 0; j < w; ++j) {
              const double c = X.at(k, j);
              double* u = out.col(j);
              for (int i = r0; i < r1; ++i) u[i] += c * a[i];
            }
          }
        },
        static_cast<std::size_t>(p_) * w);
  } else {
    // Scatter per column of X; each column is independent.
    parallel_for(
        w,
        [&](int j0, int j1) {
          for (int j = j0; j < j1; ++j) {
            double* u = out.col(j);
            for (int k = 0; k < p_; ++k) {
              const double c = X.at(k, j);
              for (int e = col_ptr_[k]; e < col_ptr_[k + 1]; ++e)
                u[row_idx_[e]] += values_[e] * c;
            }
          }
        },
        nnz());
  }
}

void DataMatrix::mult_t(const VectorBatch& Y, VectorBatch& out) const {
  if (Y.dim != n_) throw std::invalid_argument("mult_t: Y.dim must equal n");
  if (out.dim != p_ || out.width != Y.width) out = VectorBatch(p_, Y.width);
  const int w = Y.width;
  if (!sparse_) {
    parallel_for(
        p_,
        [&](int k0, int k1) {
          for (int k = k0; k < k1; ++k) {
            const double* a = values_.data() + static_cast<std::size_t>(k) * n_;
            for (int j = 0; j < w; ++j) {
              const double* y = Y.col(j);
              double s = 0.0;
              for (int i = 0; i < n_; ++i) s += a[i] * y[i];
              out.at(k, j) = s;
            }
          }
        },
        static_cast<std::size_t>(n_) * w);
  } else {
    parallel_for(
        p_,
        [&](int k0, int k1) {
          for (int k = k0; k < k1; ++k) {
            for (int j = 0; j < w; ++j) {
              const double* y = Y.col(j);
              double s = 0.0;
              for (int e = col_ptr_[k]; e < col_ptr_[k + 1]; ++e)
                s += values_[e] * y[row_idx_[e]];
              out.at(k, j) = s;
            }
          }
        },
        (nnz() / std::max(1, p_) + 1) * w);
  }
}

VectorBatch DataMatrix::mult(const VectorBatch& X) const {
  VectorBatch out(n_, X.width);
  mult(X, out);
  return out;
}

VectorBatch DataMatrix::mult_t(const VectorBatch& Y) const {
  VectorBatch out(p_, Y.width);
  mult_t(Y, out);
  return out;
}

std::vector<double> DataMatrix::mult(std::span<const double> x) const {
  VectorBatch out = mult(VectorBatch::from_vector(x));
  return out.values;
}

std::vector<double> DataMatrix::mult_t(std::span<const double> y) const {
  VectorBatch out = mult_t(VectorBatch::from_vector(y));
  return out.values;
}

DataMatrix DataMatrix::densified() const {
  if (!sparse_) return *this;
  std::vector<double> v(static_cast<std::size_t>(n_) * p_, 0.0);
  for (int j = 0; j < p_; ++j)
    for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
      v[static_cast<std::size_t>(j) * n_ + row_idx_[k]] = values_[k];
  return dense(n_, p_, std::move(v));
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, const std::string& path, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    parse_fail(path, line, "non-numeric token '" + tok + "'");
  }
  if (pos != tok.size()) parse_fail(path, line, "non-numeric token '" + tok + "'");
  return v;
}

DataMatrix load_matrix_market(const std::string& path, std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  std::istringstream hdr(line);
  std::string banner, object, storage, field, symmetry;
  hdr >> banner >> object >> storage >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix")
    parse_fail(path, lineno, "malformed MatrixMarket header");
  for (auto* s : {&storage, &field, &symmetry})
    std::transform(s->begin(), s->end(), s->begin(),
                   [](unsigned char c) { return std::tolower(c); });
  if (storage != "coordinate" && storage != "array")
    parse_fail(path, lineno, "unsupported storage '" + storage + "'");
  if (field != "real" && field != "integer" && field != "double")
    parse_fail(path, lineno, "unsupported field '" + field + "'");
  if (!symmetry.empty() && symmetry != "general")
    parse_fail(path, lineno, "only 'general' symmetry is supported");

  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto first = out.find_first_not_of(" \t\r\n");
      if (first == std::string::npos) continue;
      if (out[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) parse_fail(path, lineno, "missing size line");
  std::istringstream size_line(line);
  long n = 0, p = 0, nz = 0;
  if (storage == "coordinate") {
    if (!(size_line >> n >> p >> nz)) parse_fail(path, lineno, "malformed size line");
  } else {
    if (!(size_line >> n >> p)) parse_fail(path, lineno, "malformed size line");
  }
  if (n < 1 || p < 1) parse_fail(path, lineno, "dimensions must be >= 1");

  if (storage == "coordinate") {
    std::vector<std::tuple<int, int, double>> entries;
    entries.reserve(static_cast<std::size_t>(nz));
    for (long e = 0; e < nz; ++e) {
      if (!next_data_line(line)) parse_fail(path, lineno, "unexpected end of file");
      std::istringstream ls(line);
      std::string si, sj, sv;
      if (!(ls >> si >> sj >> sv)) parse_fail(path, lineno, "malformed coordinate entry");
      const long i = std::lround(parse_number(si, path, lineno));
      const long j = std::lround(parse_number(sj, path, lineno));
      const double v = parse_number(sv, path, lineno);
      if (i < 1 || i > n || j < 1 || j > p)
        parse_fail(path, lineno, "coordinate index out of range");
      entries.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                return std::tie(std::get<0>(a), std::get<1>(a)) <
                       std::tie(std::get<0>(b), std::get<1>(b));
              });
    std::vector<int> col_ptr(static_cast<std::size_t>(p) + 1, 0);
    std::vector<int> rows;
    std::vector<double> vals;
    rows.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      auto [j, i, v] = entries[k];
      if (k > 0 && std::get<0>(entries[k - 1]) == j && std::get<1>(entries[k - 1]) == i)
        throw std::runtime_error(path + ": duplicate coordinate entry (" +
                                 std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      ++col_ptr[j + 1];
      rows.push_back(i);
      vals.push_back(v);
    }
    for (int j = 0; j < p; ++j) col_ptr[j + 1] += col_ptr[j];
    return DataMatrix::sparse(static_cast<int>(n), static_cast<int>(p),
                              std::move(col_ptr), std::move(rows), std::move(vals));
  }

  // array: column-major dense listing
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * p);
  for (long e = 0; e < n * p; ++e) {
    if (!next_data_line(line)) parse_fail(path, lineno, "unexpected end of file");
    std::istringstream ls(line);
    std::string sv;
    while (ls >> sv) values.push_back(parse_number(sv, path, lineno));
  }
  if (values.size() != static_cast<std::size_t>(n) * p)
    parse_fail(path, lineno, "entry count does not match declared dimensions");
  return DataMatrix::dense(static_cast<int>(n), static_cast<int>(p), std::move(values));
}

DataMatrix load_csv(const std::string& path, std::istream& in, bool skip_header) {
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string tok = line.substr(start, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - start);
      const auto a = tok.find_first_not_of(" \t");
      if (a == std::string::npos) parse_fail(path, lineno, "empty field");
      const auto b = tok.find_last_not_of(" \t");
      row.push_back(parse_number(tok.substr(a, b - a + 1), path, lineno));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      parse_fail(path, lineno, "inconsistent row length at line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(width);
  std::vector<double> values(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      values[static_cast<std::size_t>(j) * n + i] = rows[i][j];
  return DataMatrix::dense(n, p, std::move(values));
}

}  // namespace

DataMatrix load_matrix(const std::string& path, MatrixFormat format,
                       bool csv_skip_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  if (format == MatrixFormat::auto_detect) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".mtx")
      format = MatrixFormat::matrix_market;
    else
      format = MatrixFormat::csv;
  }
  if (format == MatrixFormat::matrix_market) return load_matrix_market(path, in);
  return load_csv(path, in, csv_skip_header);
}

DataMatrix center_columns(const DataMatrix& A) {
  const DataMatrix* src = &A;
  DataMatrix densed = A;
  if (A.is_sparse()) {
    std::cerr << "warning: centering densifies a sparse matrix ("
              << A.rows() << "x" << A.cols() << ")\n";
    densed = A.densified();
    src = &densed;
  }
  const int n = src->rows(), p = src->cols();
  std::vector<double> values(static_cast<std::size_t>(n) * p);
  for (int j = 0; j < p; ++j) {
    const std::vector<double> c = src->column(j);
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= n;
    for (int i = 0; i < n; ++i)
      values[static_cast<std::size_t>(j) * n + i] = c[i] - mean;
  }
  return DataMatrix::dense(n, p, std::move(values));
}

}  // namespace spca
