#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpg {

/// Compressed sparse row matrix, square. Column indices strictly increase within a row.
class SparseMatrixCSR {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseMatrixCSR() = default;

  /// Duplicate (row, col) entries are summed in input order, so identical triplet streams
  /// give bit-identical matrices.
  static SparseMatrixCSR from_triplets(std::size_t n, std::span<const Triplet> triplets);
  static SparseMatrixCSR identity(std::size_t n);
  static SparseMatrixCSR from_dense(std::size_t n, std::span<const double> row_major);

  std::size_t size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }
  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const int> columns() const noexcept { return columns_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry (i, j), zero if not stored.
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  bool is_symmetric() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// y = A x. Throws DimensionError on size mismatch.
std::vector<double> matvec(const SparseMatrixCSR& A, std::span<const double> x);
void matvec(const SparseMatrixCSR& A, std::span<const double> x, std::span<double> y);

/// A + s * B on the union of both patterns.
SparseMatrixCSR add_scaled(const SparseMatrixCSR& A, double s, const SparseMatrixCSR& B);

/// Rows and columns selected by keep[i] >= 0, renumbered to keep[i].
SparseMatrixCSR restrict_to(const SparseMatrixCSR& A, std::span<const int> keep,
                            std::size_t kept_count);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

enum class Preconditioner { None, Jacobi };

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for SPD A until ||b - Ax|| <= rtol ||b||, starting from x0 (zero
/// when empty). maxit == 0 means 10 n. Throws SolverError when maxit is exhausted and
/// BreakdownError if a search direction has p^T A p <= 0.
CgResult cg_solve(const SparseMatrixCSR& A, std::span<const double> b, double rtol = 1e-10,
                  std::size_t maxit = 0, Preconditioner precond = Preconditioner::Jacobi,
                  std::span<const double> x0 = {});

}  // namespace fpg
