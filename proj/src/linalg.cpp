#include "relaybounds/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "relaybounds/errors.hpp"

namespace relaybounds::linalg {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const SymMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim())};
}

SymMatrix from_eigen(const Eigen::MatrixXd& m) {
  const auto dim = static_cast<std::size_t>(m.rows());
  SymMatrix out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      // Symmetrize away rounding asymmetry of the products.
      out.set(i, j, 0.5 * (m(Eigen::Index(i), Eigen::Index(j)) + m(Eigen::Index(j), Eigen::Index(i))));
    }
  }
  return out;
}

}  // namespace

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> entries) : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw InvalidArgument("SymMatrix: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                          std::to_string(data_.size()));
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      if (data_[i * dim_ + j] != data_[j * dim_ + i]) {
        throw InvalidArgument("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                              ") and (" + std::to_string(j) + "," + std::to_string(i) + ") differ");
      }
    }
  }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> entries;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw InvalidArgument("SymMatrix: rows must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  *this = SymMatrix(rows.size(), std::move(entries));
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::ones(std::size_t dim) {
  SymMatrix m(dim);
  std::fill(m.data_.begin(), m.data_.end(), 1.0);
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SymMatrix SymMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != dim_) throw InvalidArgument("SymMatrix::permuted: permutation size mismatch");
  SymMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out.data_[i * dim_ + j] = (*this)(perm[i], perm[j]);
  }
  return out;
}

IndexSet::IndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) throw InvalidArgument("IndexSet: indices must be strictly increasing");
  }
}

IndexSet::IndexSet(std::initializer_list<std::size_t> indices)
    : IndexSet(std::vector<std::size_t>(indices)) {}

IndexSet IndexSet::range(std::size_t first, std::size_t count) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), first);
  return IndexSet(std::move(idx));
}

bool IndexSet::intersects(const IndexSet& other) const {
  std::size_t a = 0, b = 0;
  while (a < indices_.size() && b < other.indices_.size()) {
    if (indices_[a] == other.indices_[b]) return true;
    if (indices_[a] < other.indices_[b]) ++a; else ++b;
  }
  return false;
}

IndexSet IndexSet::merged(const IndexSet& other) const {
  std::vector<std::size_t> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return IndexSet(std::move(out));
}

SpectralDecomposition spectral(const SymMatrix& m) {
  SpectralDecomposition out;
  if (m.empty()) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(view(m)));
  // Eigen sorts ascending.
  const auto& vals = solver.eigenvalues();
  out.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  out.eigenvectors.assign(vecs.data(), vecs.data() + vecs.size());
  return out;
}

std::vector<double> eigen_sym(const SymMatrix& m) {
  if (m.empty()) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(view(m)), Eigen::EigenvaluesOnly);
  const auto& vals = solver.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

SymMatrix pinv(const SymMatrix& m, double rank_tol) {
  if (!(rank_tol > 0.0)) throw InvalidArgument("pinv: rank_tol must be positive");
  const std::size_t dim = m.dim();
  if (dim == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(view(m)));
  const Eigen::VectorXd& vals = solver.eigenvalues();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const double cutoff = rank_tol * vals.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (std::abs(vals(k)) > cutoff) inv(k) = 1.0 / vals(k);
  }
  return from_eigen(vecs * inv.asDiagonal() * vecs.transpose());
}

SymMatrix principal(const SymMatrix& q, const IndexSet& rows) {
  SymMatrix out(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a] >= q.dim()) throw InvalidArgument("principal: index out of range");
    for (std::size_t b = a; b < rows.size(); ++b) out.set(a, b, q(rows[a], rows[b]));
  }
  return out;
}

SymMatrix gen_schur(const SymMatrix& q, const IndexSet& target, const IndexSet& cond, double rank_tol) {
  if (target.intersects(cond)) throw InvalidArgument("gen_schur: target and conditioning sets overlap");
  for (const auto* set : {&target, &cond}) {
    if (!set->empty() && set->indices().back() >= q.dim()) {
      throw InvalidArgument("gen_schur: index out of range");
    }
  }
  SymMatrix q_tt = principal(q, target);
  if (target.empty() || cond.empty()) return q_tt;

  const auto nt = static_cast<Eigen::Index>(target.size());
  const auto nc = static_cast<Eigen::Index>(cond.size());
  Eigen::MatrixXd q_tc(nt, nc);
  for (Eigen::Index a = 0; a < nt; ++a) {
    for (Eigen::Index b = 0; b < nc; ++b) q_tc(a, b) = q(target[std::size_t(a)], cond[std::size_t(b)]);
  }
  const SymMatrix cc_pinv = pinv(principal(q, cond), rank_tol);
  const Eigen::MatrixXd correction = q_tc * Eigen::MatrixXd(view(cc_pinv)) * q_tc.transpose();
  return from_eigen(Eigen::MatrixXd(view(q_tt)) - correction);
}

double quad_form_ones(const SymMatrix& m) {
  const auto d = m.data();
  return std::accumulate(d.begin(), d.end(), 0.0);
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t dim) {
  std::vector<double> out(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double aik = a[i * dim + k];
      for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] += aik * b[k * dim + j];
    }
  }
  return out;
}

}  // namespace relaybounds::linalg
