#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace relaybounds::linalg {

/// Default relative cutoff for treating eigenvalues as zero in pinv().
inline constexpr double kDefaultRankTol = 1e-10;

/// Dense symmetric real matrix in row-major storage.
///
/// Symmetry is enforced at construction: inputs whose (i, j) and (j, i)
/// entries differ are rejected. A 0x0 matrix is allowed and stands for the
/// empty block of a cut (its all-ones quadratic form is 0).
class SymMatrix {
 public:
  SymMatrix() = default;
  /// dim x dim zero matrix.
  explicit SymMatrix(std::size_t dim);
  /// Row-major entries; throws InvalidArgument if not square and symmetric.
  SymMatrix(std::size_t dim, std::vector<double> entries);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix ones(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);
  std::span<const double> data() const { return data_; }

  double trace() const;
  double max_abs() const;
  SymMatrix permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Sorted, duplicate-free list of row/column indices.
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws InvalidArgument unless strictly increasing.
  explicit IndexSet(std::vector<std::size_t> indices);
  IndexSet(std::initializer_list<std::size_t> indices);

  /// {first, first + 1, ..., first + count - 1}
  static IndexSet range(std::size_t first, std::size_t count);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  bool intersects(const IndexSet& other) const;
  IndexSet merged(const IndexSet& other) const;

 private:
  std::vector<std::size_t> indices_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // ascending
  std::vector<double> eigenvectors;  // column-major, dim x dim, column k pairs with eigenvalues[k]
};

SpectralDecomposition spectral(const SymMatrix& m);

/// Eigenvalues in ascending order.
std::vector<double> eigen_sym(const SymMatrix& m);

/// Moore-Penrose pseudoinverse through the spectral decomposition.
/// Eigenvalues with |lambda| <= rank_tol * max|lambda| are dropped.
SymMatrix pinv(const SymMatrix& m, double rank_tol = kDefaultRankTol);

/// Principal block Q[rows, rows].
SymMatrix principal(const SymMatrix& q, const IndexSet& rows);

/// Generalized Schur complement Q_TT - Q_TC pinv(Q_CC) Q_CT.
/// Target and conditioning sets must be disjoint and inside [0, dim).
SymMatrix gen_schur(const SymMatrix& q, const IndexSet& target, const IndexSet& cond,
                    double rank_tol = kDefaultRankTol);

/// 1^T M 1.
double quad_form_ones(const SymMatrix& m);

/// Plain (non-symmetric) product, used by Penrose-condition checks.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t dim);

}  // namespace relaybounds::linalg
