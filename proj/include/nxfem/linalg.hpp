#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace nxfem {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> offsets, std::vector<int> columns,
            std::vector<double> values);

  /// Sums duplicate entries. Entries sharing a position are added in input
  /// order, so the result is reproducible.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CsrMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<int>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j), zero if not stored.
  double at(int i, int j) const;
  Vector diagonal() const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += alpha * A x
  void multiply_add(double alpha, std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  /// max |a_ij - a_ji| over stored entries.
  double max_asymmetry() const;
  double max_abs() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Thrown when the iteration budget is exhausted; carries the best iterate.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, Vector best, double residual, int iterations)
      : std::runtime_error(what),
        best_(std::move(best)),
        residual_(residual),
        iterations_(iterations) {}
  const Vector& best_iterate() const { return best_; }
  double relative_residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  Vector best_;
  double residual_;
  int iterations_;
};

/// Thrown when CG meets a non-positive curvature or non-finite arithmetic.
class BreakdownError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Preconditioner { None, Jacobi };

struct PcgOptions {
  double rel_tol = 1e-12;
  int max_iter = 20000;
  Preconditioner preconditioner = Preconditioner::Jacobi;
};

struct SolveResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b||
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Preconditioned CG on an abstract SPD operator. Stops once the recurrence
/// residual drops below rel_tol * ||b||; the reported residual is recomputed
/// from scratch. x0, if non-empty, is the starting guess.
SolveResult pcg_solve(const LinearOperator& apply, const LinearOperator& precondition,
                      std::span<const double> b, double rel_tol, int max_iter,
                      std::span<const double> x0 = {});

SolveResult pcg_solve(const CsrMatrix& a, std::span<const double> b,
                      const PcgOptions& options = {}, std::span<const double> x0 = {});

inline constexpr int kMaxDenseDimension = 2000;

/// Dense Cholesky on A; true iff every pivot is positive. Throws
/// std::invalid_argument above kMaxDenseDimension.
bool dense_spd_check(const CsrMatrix& a);

}  // namespace nxfem
