#include "nxfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nxfem {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> offsets, std::vector<int> columns,
                     std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(offsets)),
      columns_(std::move(columns)),
      values_(std::move(values)) {
  if (offsets_.size() != static_cast<std::size_t>(rows_) + 1 ||
      columns_.size() != values_.size() ||
      static_cast<std::size_t>(offsets_.back()) != values_.size()) {
    throw std::invalid_argument("CsrMatrix: inconsistent storage");
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> columns;
  std::vector<double> values;
  columns.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("CsrMatrix::from_triplets: index out of range");
    }
    double sum = 0.0;
    std::size_t m = k;
    for (; m < triplets.size() && triplets[m].row == t.row && triplets[m].col == t.col; ++m) {
      sum += triplets[m].value;
    }
    columns.push_back(t.col);
    values.push_back(sum);
    ++offsets[static_cast<std::size_t>(t.row) + 1];
    k = m;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return CsrMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1);
  std::iota(offsets.begin(), offsets.end(), 0);
  std::vector<int> columns(static_cast<std::size_t>(n));
  std::iota(columns.begin(), columns.end(), 0);
  return CsrMatrix(n, n, std::move(offsets), std::move(columns),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

double CsrMatrix::at(int i, int j) const {
  const auto begin = columns_.begin() + offsets_[static_cast<std::size_t>(i)];
  const auto end = columns_.begin() + offsets_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

Vector CsrMatrix::diagonal() const {
  Vector d(static_cast<std::size_t>(std::min(rows_, cols_)));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(static_cast<int>(i), static_cast<int>(i));
  return d;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(1.0, x, y);
}

void CsrMatrix::multiply_add(double alpha, std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1];
         ++k) {
      s += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(columns_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(i)] += alpha * s;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

double CsrMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows_; ++i) {
    for (int k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1];
         ++k) {
      const int j = columns_[static_cast<std::size_t>(k)];
      worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(k)] - at(j, i)));
    }
  }
  return worst;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

SolveResult pcg_solve(const LinearOperator& apply, const LinearOperator& precondition,
                      std::span<const double> b, double rel_tol, int max_iter,
                      std::span<const double> x0) {
  const std::size_t n = b.size();
  SolveResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty()) {
    if (x0.size() != n) throw std::invalid_argument("pcg_solve: bad initial guess length");
    std::copy(x0.begin(), x0.end(), out.x.begin());
  }

  const double bnorm = norm2(b);
  if (!std::isfinite(bnorm)) throw BreakdownError("pcg_solve: non-finite right-hand side");
  if (bnorm == 0.0) {
    std::fill(out.x.begin(), out.x.end(), 0.0);
    return out;
  }

  Vector r(n), z(n), p(n), q(n);
  apply(out.x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];

  auto true_residual = [&](const Vector& x) {
    Vector ax(n);
    apply(x, ax);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (b[i] - ax[i]) * (b[i] - ax[i]);
    return std::sqrt(s) / bnorm;
  };

  const double target = rel_tol * bnorm;
  double rnorm = norm2(r);
  if (rnorm <= target) {
    out.relative_residual = true_residual(out.x);
    return out;
  }
  precondition(r, z);
  p = z;
  double rz = dot(r, z);

  int it = 0;
  while (it < max_iter) {
    apply(p, q);
    const double curvature = dot(p, q);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
      throw BreakdownError("pcg_solve: non-positive curvature at iteration " + std::to_string(it));
    }
    const double alpha = rz / curvature;
    axpy(alpha, p, out.x);
    axpy(-alpha, q, r);
    ++it;
    rnorm = norm2(r);
    if (!std::isfinite(rnorm)) throw BreakdownError("pcg_solve: non-finite residual");
    if (rnorm <= target) break;
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  out.iterations = it;
  out.relative_residual = true_residual(out.x);
  if (rnorm > target) {
    throw NonConvergenceError("pcg_solve: no convergence after " + std::to_string(it) +
                                  " iterations",
                              out.x, out.relative_residual, it);
  }
  return out;
}

SolveResult pcg_solve(const CsrMatrix& a, std::span<const double> b, const PcgOptions& options,
                      std::span<const double> x0) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != b.size()) {
    throw std::invalid_argument("pcg_solve: dimension mismatch");
  }
  const LinearOperator apply = [&a](std::span<const double> x, std::span<double> y) {
    a.multiply(x, y);
  };
  LinearOperator precondition;
  if (options.preconditioner == Preconditioner::Jacobi) {
    Vector inv = a.diagonal();
    for (double& d : inv) {
      if (!(d > 0.0)) throw BreakdownError("pcg_solve: non-positive diagonal entry");
      d = 1.0 / d;
    }
    precondition = [inv = std::move(inv)](std::span<const double> r, std::span<double> z) {
      for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv[i] * r[i];
    };
  } else {
    precondition = [](std::span<const double> r, std::span<double> z) {
      std::copy(r.begin(), r.end(), z.begin());
    };
  }
  return pcg_solve(apply, precondition, b, options.rel_tol, options.max_iter, x0);
}

bool dense_spd_check(const CsrMatrix& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("dense_spd_check: matrix is not square");
  if (n > kMaxDenseDimension) {
    throw std::invalid_argument("dense_spd_check: dimension " + std::to_string(n) +
                                " exceeds " + std::to_string(kMaxDenseDimension));
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> l(un * un, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = a.offsets()[static_cast<std::size_t>(i)]; k < a.offsets()[static_cast<std::size_t>(i) + 1];
         ++k) {
      l[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(a.columns()[static_cast<std::size_t>(k)])] =
          a.values()[static_cast<std::size_t>(k)];
    }
  }
  // In-place lower Cholesky, reading only the lower triangle.
  for (std::size_t j = 0; j < un; ++j) {
    double d = l[j * un + j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j * un + k] * l[j * un + k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    l[j * un + j] = ljj;
    for (std::size_t i = j + 1; i < un; ++i) {
      double s = l[i * un + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * un + k] * l[j * un + k];
      l[i * un + j] = s / ljj;
    }
  }
  return true;
}

}  // namespace nxfem
