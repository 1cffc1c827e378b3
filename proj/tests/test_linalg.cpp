#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "nxfem/linalg.hpp"
#include "nxfem/optctl.hpp"

using namespace nxfem;

namespace {

CsrMatrix laplacian_1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return CsrMatrix::from_triplets(n, n, t);
}

}  // namespace

TEST(Csr, FromTripletsSumsDuplicatesAndSorts) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_DOUBLE_EQ(a.at(0, 2), 1.5);
  EXPECT_DOUBLE_EQ(a.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(a.at(1, 1), -1.0);
  EXPECT_DOUBLE_EQ(a.at(1, 0), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = a.offsets()[i] + 1; k < a.offsets()[i + 1]; ++k) {
      EXPECT_LT(a.columns()[k - 1], a.columns()[k]);
    }
  }
}

TEST(Csr, MultiplyAndHelpers) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
  const Vector x{1.0, -1.0};
  const Vector y = a * x;
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], -2.0);
  Vector z{1.0, 1.0};
  a.multiply_add(2.0, x, z);
  EXPECT_DOUBLE_EQ(z[0], 3.0);
  EXPECT_DOUBLE_EQ(z[1], -3.0);
  EXPECT_DOUBLE_EQ(dot(x, x), 2.0);
  EXPECT_DOUBLE_EQ(norm2(Vector{3.0, 4.0}), 5.0);
  EXPECT_EQ(a.max_asymmetry(), 0.0);
  EXPECT_DOUBLE_EQ(a.max_abs(), 3.0);
  EXPECT_EQ(a.diagonal(), (Vector{2.0, 3.0}));
}

TEST(Pcg, IdentitySolvesInOneIteration) {
  const CsrMatrix id = CsrMatrix::identity(5);
  const Vector b{1.0, -2.0, 3.0, 0.5, 7.0};
  for (auto pre : {Preconditioner::None, Preconditioner::Jacobi}) {
    const SolveResult r = pcg_solve(id, b, {1e-12, 100, pre});
    EXPECT_LE(r.iterations, 1);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(r.x[i], b[i], 1e-15);
  }
}

TEST(Pcg, TwoByTwo) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
  const SolveResult r = pcg_solve(a, Vector{3.0, 3.0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-14);
  EXPECT_NEAR(r.x[1], 1.0, 1e-14);
  EXPECT_LE(r.relative_residual, 1e-12);
}

TEST(Pcg, ZeroRightHandSide) {
  const SolveResult r = pcg_solve(laplacian_1d(10), Vector(10, 0.0));
  EXPECT_EQ(r.iterations, 0);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}

TEST(Pcg, ResidualContractAndWarmStart) {
  const int n = 200;
  const CsrMatrix a = laplacian_1d(n);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  Vector b(n);
  for (double& v : b) v = dist(rng);
  const SolveResult r = pcg_solve(a, b, {1e-12, 5000, Preconditioner::Jacobi});
  Vector res = a * r.x;
  for (int i = 0; i < n; ++i) res[i] = b[i] - res[i];
  EXPECT_LE(norm2(res), 1e-12 * norm2(b) * 1.0001);
  EXPECT_NEAR(r.relative_residual, norm2(res) / norm2(b), 1e-15);
  const SolveResult warm = pcg_solve(a, b, {1e-12, 5000, Preconditioner::Jacobi}, r.x);
  EXPECT_LE(warm.iterations, 1);
}

TEST(Pcg, NonConvergenceCarriesBestIterate) {
  const int n = 100;
  const CsrMatrix a = laplacian_1d(n);
  const Vector b(n, 1.0);
  try {
    pcg_solve(a, b, {1e-14, 3, Preconditioner::None});
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), static_cast<std::size_t>(n));
    EXPECT_GT(e.relative_residual(), 1e-14);
    EXPECT_EQ(e.iterations(), 3);
  }
}

TEST(Pcg, IndefiniteOperatorBreaksDown) {
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  EXPECT_THROW(pcg_solve(a, Vector{1.0, 1.0}, {1e-12, 10, Preconditioner::None}), BreakdownError);
}

TEST(Pcg, NonFiniteRightHandSide) {
  EXPECT_THROW(pcg_solve(CsrMatrix::identity(2), Vector{1.0, NAN}), BreakdownError);
}

TEST(DenseSpd, SmallCases) {
  EXPECT_TRUE(dense_spd_check(CsrMatrix::identity(4)));
  const CsrMatrix indefinite = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
  EXPECT_FALSE(dense_spd_check(indefinite));
  EXPECT_TRUE(dense_spd_check(laplacian_1d(50)));
  EXPECT_THROW(dense_spd_check(CsrMatrix::identity(kMaxDenseDimension + 1)), std::invalid_argument);
}

TEST(Pcg, Example1StateSystemAtN32) {
  const ProblemSpec spec = make_example(1);
  const Discretization disc(spec, 32);
  const Vector& b = disc.state_data();
  const SolveResult r = pcg_solve(disc.stiffness().free, b, {1e-12, 50000, Preconditioner::Jacobi});
  EXPECT_LE(r.relative_residual, 1e-12);
  EXPECT_GT(r.iterations, 0);
  // Regression record of the Jacobi-PCG iteration count.
  EXPECT_LT(r.iterations, 2000);
}

TEST(Pcg, JacobiHelpsOnHighContrastSystem) {
  const ProblemSpec spec = make_example(3);
  const Discretization disc(spec, 32);
  const Vector& b = disc.state_data();
  const SolveResult plain = pcg_solve(disc.stiffness().free, b, {1e-12, 100000, Preconditioner::None});
  const SolveResult jacobi = pcg_solve(disc.stiffness().free, b, {1e-12, 100000, Preconditioner::Jacobi});
  EXPECT_LE(jacobi.iterations, 10 * plain.iterations);
}
