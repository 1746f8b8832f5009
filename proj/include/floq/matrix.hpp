#pragma once

#include <algorithm>
#include <numeric>
#include <type_traits>
#include <vector>

#include "floq/scalar.hpp"

namespace floq {

// Dense square-or-rectangular matrix over an exact rational or floating
// scalar. Column-action convention: matrices act on probability column
// vectors, stochasticity is per-column.
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, T(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
    return r;
  }
  Matrix operator*(const T& s) const {
    Matrix r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
    return r;
  }

  // Zero entries on the left factor are skipped; embedded tensor factors are
  // sparse enough that this matters for the transfer-matrix products.
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product: shape mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (is_zero(a)) continue;
        const T* brow = &o.data_[size_t(k) * o.cols_];
        T* rrow = &r.data_[size_t(i) * o.cols_];
        for (int j = 0; j < o.cols_; ++j) {
          if (!is_zero(brow[j])) rrow[j] += a * brow[j];
        }
      }
    }
    return r;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (int(v.size()) != cols_) throw Error("matrix apply: length mismatch");
    std::vector<T> r(rows_, T(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!is_zero((*this)(i, j))) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  bool is_zero_matrix() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return is_zero(x); });
  }

  T trace() const {
    T s(0);
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
  }

  std::vector<T> column_sums() const {
    std::vector<T> s(cols_, T(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) s[j] += (*this)(i, j);
    return s;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
  }

  int rows_, cols_;
  std::vector<T> data_;
};

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (is_zero(a(i, j))) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          if (!is_zero(b(k, l))) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return r;
}

// Permutation operator P on V(d) x V(d): P |a>|b> = |b>|a>.
template <class T>
Matrix<T> permutation_op(int d) {
  Matrix<T> p(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) p(b * d + a, a * d + b) = T(1);
  return p;
}

namespace detail {
inline std::vector<int> mixed_digits(size_t index, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size());
  for (int k = int(dims.size()) - 1; k >= 0; --k) {
    digits[k] = int(index % dims[k]);
    index /= dims[k];
  }
  return digits;
}
}  // namespace detail

// Embeds an operator acting on the listed tensor factors (in the listed
// order, factors may be non-adjacent or reordered) into the full product
// space with per-factor dimensions dims. Factor 0 is the leftmost tensor
// slot; basis indices are mixed-radix with the leftmost digit most
// significant.
template <class T>
Matrix<T> embed(const Matrix<T>& op, const std::vector<int>& sites, const std::vector<int>& dims) {
  const int n = int(dims.size());
  size_t full_dim = 1;
  for (int d : dims) full_dim *= d;
  size_t op_dim = 1;
  for (int s : sites) {
    if (s < 0 || s >= n) throw Error("embed: site out of range");
    op_dim *= dims[s];
  }
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = i + 1; j < sites.size(); ++j)
      if (sites[i] == sites[j]) throw Error("embed: repeated site");
  if (op.rows() != int(op_dim) || op.cols() != int(op_dim))
    throw Error("embed: operator dimension does not match named sites");

  std::vector<char> on_sites(n, 0);
  for (int s : sites) on_sites[s] = 1;

  Matrix<T> full{int(full_dim), int(full_dim)};
  for (size_t col = 0; col < full_dim; ++col) {
    auto cdig = detail::mixed_digits(col, dims);
    size_t op_col = 0;
    for (int s : sites) op_col = op_col * dims[s] + cdig[s];
    for (int op_row = 0; op_row < op.rows(); ++op_row) {
      if (is_zero(op(op_row, int(op_col)))) continue;
      // rebuild the full row index: op digits on the named sites, column
      // digits elsewhere
      auto rdig = cdig;
      size_t rem = size_t(op_row);
      for (int k = int(sites.size()) - 1; k >= 0; --k) {
        rdig[sites[k]] = int(rem % dims[sites[k]]);
        rem /= dims[sites[k]];
      }
      size_t row = 0;
      for (int k = 0; k < n; ++k) row = row * dims[k] + rdig[k];
      full(int(row), int(col)) = op(op_row, int(op_col));
    }
  }
  return full;
}

// Uniform-local-dimension chain embedding; sites are 1-based as in chain
// notation.
template <class T>
Matrix<T> embed_chain(const Matrix<T>& op, const std::vector<int>& sites1, int chain_length,
                      int dim_local) {
  std::vector<int> sites0;
  for (int s : sites1) {
    if (s < 1 || s > chain_length) throw Error("embed: site out of range");
    sites0.push_back(s - 1);
  }
  return embed(op, sites0, std::vector<int>(chain_length, dim_local));
}

// Trace over the first tensor factor of dimension d0.
template <class T>
Matrix<T> partial_trace_first(const Matrix<T>& op, int d0) {
  if (op.rows() != op.cols()) throw Error("partial trace: non-square");
  if (d0 <= 0 || op.rows() % d0 != 0) throw Error("partial trace: dimension mismatch");
  int rest = op.rows() / d0;
  if (rest == 1 && d0 == op.rows() && d0 == 1) throw Error("partial trace: need at least 2 factors");
  Matrix<T> r(rest, rest);
  for (int k = 0; k < d0; ++k)
    for (int i = 0; i < rest; ++i)
      for (int j = 0; j < rest; ++j) r(i, j) += op(k * rest + i, k * rest + j);
  return r;
}

// Transposition of one factor of a two-site operator on V(d) x V(d).
template <class T>
Matrix<T> partial_transpose(const Matrix<T>& op, int factor, int d) {
  if (op.rows() != d * d || op.cols() != d * d) throw Error("partial transpose: shape");
  Matrix<T> r(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          if (factor == 1)
            r(a * d + b, c * d + e) = op(c * d + b, a * d + e);
          else
            r(a * d + b, c * d + e) = op(a * d + e, c * d + b);
        }
  return r;
}

// Gaussian elimination with partial pivoting; exact over rationals. Reports
// the pivot column on singular input.
template <class T>
Matrix<T> invert(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw Error("invert: non-square");
  const int n = m.rows();
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!is_zero(a(r, col))) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw Error("invert: singular matrix, pivot column " + std::to_string(col));
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    T p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      T f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// Row-reduces the augmented system [A | rhs] and returns the unique solution.
// Throws on inconsistency or rank deficiency; the system may be
// overdetermined.
template <class T>
std::vector<T> solve_unique(const Matrix<T>& a, const std::vector<T>& rhs) {
  if (int(rhs.size()) != a.rows()) throw Error("solve: rhs length mismatch");
  const int rows = a.rows(), cols = a.cols();
  Matrix<T> aug(rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = rhs[i];
  }
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!is_zero(aug(r, col))) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int j = 0; j <= cols; ++j) std::swap(aug(pivot, j), aug(rank, j));
    T p = aug(rank, col);
    for (int j = 0; j <= cols; ++j) aug(rank, j) /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || is_zero(aug(r, col))) continue;
      T f = aug(r, col);
      for (int j = 0; j <= cols; ++j) aug(r, j) -= f * aug(rank, j);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (!is_zero(aug(r, cols))) throw Error("solve: inconsistent system");
  if (rank < cols) throw Error("solve: rank-deficient system");
  std::vector<T> x(cols, T(0));
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = aug(r, cols);
  return x;
}

// Basis of the right null space (columns x with A x = 0).
template <class T>
std::vector<std::vector<T>> kernel_basis(const Matrix<T>& a) {
  const int rows = a.rows(), cols = a.cols();
  Matrix<T> red = a;
  int rank = 0;
  std::vector<int> pivot_of_col(cols, -1);
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (!is_zero(red(r, col))) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int j = 0; j < cols; ++j) std::swap(red(pivot, j), red(rank, j));
    T p = red(rank, col);
    for (int j = 0; j < cols; ++j) red(rank, j) /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || is_zero(red(r, col))) continue;
      T f = red(r, col);
      for (int j = 0; j < cols; ++j) red(r, j) -= f * red(rank, j);
    }
    pivot_of_col[col] = rank;
    ++rank;
  }
  std::vector<std::vector<T>> basis;
  for (int col = 0; col < cols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<T> v(cols, T(0));
    v[col] = T(1);
    for (int j = 0; j < cols; ++j)
      if (pivot_of_col[j] >= 0) v[j] = -red(pivot_of_col[j], col);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
double max_abs_entry(const Matrix<T>& m) {
  double best = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      double x;
      if constexpr (std::is_same_v<T, double>)
        x = std::fabs(m(i, j));
      else
        x = std::fabs(m(i, j).get_d());
      best = std::max(best, x);
    }
  return best;
}

template <class T>
Matrix<T> convert_matrix(const Matrix<Rat>& m) {
  Matrix<T> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = scalar_cast<T>(m(i, j));
  return r;
}

}  // namespace floq
