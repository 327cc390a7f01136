#include "fpg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fpg/errors.hpp"

namespace fpg {

SparseMatrixCSR SparseMatrixCSR::from_triplets(std::size_t n, std::span<const Triplet> triplets) {
  std::vector<std::size_t> count(n + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n) {
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    ++count[static_cast<std::size_t>(t.row) + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  // Bucket by row, keeping input order inside each row.
  std::vector<std::size_t> order(triplets.size());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (std::size_t k = 0; k < triplets.size(); ++k) order[fill[triplets[k].row]++] = k;

  SparseMatrixCSR m;
  m.n_ = n;
  m.row_offsets_.assign(n + 1, 0);
  m.columns_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto first = order.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) {
      return triplets[a].col < triplets[b].col;
    });
    for (auto it = first; it != last; ++it) {
      const auto& t = triplets[*it];
      if (m.columns_.size() > m.row_offsets_[i] && m.columns_.back() == t.col) {
        m.values_.back() += t.value;
      } else {
        m.columns_.push_back(t.col);
        m.values_.push_back(t.value);
      }
    }
    m.row_offsets_[i + 1] = m.columns_.size();
  }
  return m;
}

SparseMatrixCSR SparseMatrixCSR::identity(std::size_t n) {
  std::vector<Triplet> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = {static_cast<int>(i), static_cast<int>(i), 1.0};
  return from_triplets(n, t);
}

SparseMatrixCSR SparseMatrixCSR::from_dense(std::size_t n, std::span<const double> row_major) {
  if (row_major.size() != n * n) throw DimensionError("from_dense: expected n*n values");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = row_major[i * n + j];
      if (v != 0.0) t.push_back({static_cast<int>(i), static_cast<int>(j), v});
    }
  }
  return from_triplets(n, t);
}

double SparseMatrixCSR::at(std::size_t i, std::size_t j) const {
  const auto first = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = columns_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  return (it != last && *it == static_cast<int>(j)) ? values_[static_cast<std::size_t>(it - columns_.begin())]
                                                     : 0.0;
}

std::vector<double> SparseMatrixCSR::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

bool SparseMatrixCSR::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (at(static_cast<std::size_t>(columns_[k]), i) != values_[k]) return false;
    }
  }
  return true;
}

void matvec(const SparseMatrixCSR& A, std::span<const double> x, std::span<double> y) {
  if (x.size() != A.size() || y.size() != A.size()) {
    throw DimensionError("matvec: matrix is " + std::to_string(A.size()) + " but vectors are " +
                         std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  const auto offsets = A.row_offsets();
  const auto cols = A.columns();
  const auto vals = A.values();
  for (std::size_t i = 0; i < A.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

std::vector<double> matvec(const SparseMatrixCSR& A, std::span<const double> x) {
  std::vector<double> y(A.size());
  matvec(A, x, y);
  return y;
}

SparseMatrixCSR add_scaled(const SparseMatrixCSR& A, double s, const SparseMatrixCSR& B) {
  if (A.size() != B.size()) {
    throw DimensionError("add_scaled: sizes " + std::to_string(A.size()) + " and " +
                         std::to_string(B.size()) + " differ");
  }
  std::vector<SparseMatrixCSR::Triplet> t;
  t.reserve(A.nonzeros() + B.nonzeros());
  // Row-interleaved so each (i, j) sums A first, then s * B.
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
      t.push_back({static_cast<int>(i), A.columns()[k], A.values()[k]});
    }
    for (std::size_t k = B.row_offsets()[i]; k < B.row_offsets()[i + 1]; ++k) {
      t.push_back({static_cast<int>(i), B.columns()[k], s * B.values()[k]});
    }
  }
  return SparseMatrixCSR::from_triplets(A.size(), t);
}

SparseMatrixCSR restrict_to(const SparseMatrixCSR& A, std::span<const int> keep,
                            std::size_t kept_count) {
  if (keep.size() != A.size()) throw DimensionError("restrict_to: mask size mismatch");
  std::vector<SparseMatrixCSR::Triplet> t;
  t.reserve(A.nonzeros());
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (keep[i] < 0) continue;
    for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
      const int j = keep[static_cast<std::size_t>(A.columns()[k])];
      if (j >= 0) t.push_back({keep[i], j, A.values()[k]});
    }
  }
  return SparseMatrixCSR::from_triplets(kept_count, t);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult cg_solve(const SparseMatrixCSR& A, std::span<const double> b, double rtol,
                  std::size_t maxit, Preconditioner precond, std::span<const double> x0) {
  const std::size_t n = A.size();
  if (b.size() != n) throw DimensionError("cg_solve: right-hand side size mismatch");
  if (!x0.empty() && x0.size() != n) throw DimensionError("cg_solve: initial guess size mismatch");
  if (!(rtol > 0.0 && rtol < 1.0)) throw std::domain_error("cg_solve: rtol must lie in (0, 1)");
  if (maxit == 0) maxit = std::max<std::size_t>(10 * n, 10);

  CgResult result;
  result.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), result.x.begin());

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(result.x.begin(), result.x.end(), 0.0);
    return result;
  }

  std::vector<double> inv_diag(n, 1.0);
  if (precond == Preconditioner::Jacobi) {
    const auto d = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d[i] > 0.0)) {
        throw BreakdownError("cg_solve: non-positive diagonal entry, matrix is not SPD", 0,
                             std::numeric_limits<double>::quiet_NaN());
      }
      inv_diag[i] = 1.0 / d[i];
    }
  }

  std::vector<double> r(n), z(n), p(n), Ap(n);
  matvec(A, result.x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  double rnorm = norm2(r);
  result.relative_residual = rnorm / bnorm;
  if (result.relative_residual <= rtol) return result;

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  for (std::size_t it = 1; it <= maxit; ++it) {
    matvec(A, p, Ap);
    const double curvature = dot(p, Ap);
    if (!(curvature > 0.0)) {
      throw BreakdownError("cg_solve: non-positive curvature p^T A p, matrix is not SPD", it,
                           result.relative_residual);
    }
    const double step = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      result.x[i] += step * p[i];
      r[i] -= step * Ap[i];
    }
    rnorm = norm2(r);
    result.iterations = it;
    result.relative_residual = rnorm / bnorm;
    if (result.relative_residual <= rtol) {
      // Confirm with the true residual; the recursive one drifts in long runs.
      matvec(A, result.x, Ap);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
      result.relative_residual = norm2(r) / bnorm;
      if (result.relative_residual <= rtol) return result;
      for (std::size_t i = 0; i < n; ++i) p[i] = inv_diag[i] * r[i];
      rz = dot(r, p);
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("cg_solve: no convergence after " + std::to_string(maxit) +
                        " iterations (relative residual " + std::to_string(result.relative_residual) +
                        ")",
                    maxit, result.relative_residual);
}

}  // namespace fpg
