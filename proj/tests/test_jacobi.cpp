#include "fuzzymc/jacobi.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace fuzzymc;

TEST_CASE("jacobi_eigen matches the reference solver") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int n : {1, 2, 3, 5, 8, 13, 20}) {
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) m(r, c) = normal(rng);
    const Matrix sym = m + m.transpose();
    const auto ours = jacobi_eigen(sym);
    const Eigen::SelfAdjointEigenSolver<Matrix> ref(sym);
    CHECK(ours.converged);
    CHECK((ours.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + sym.norm()));
    const Matrix recon = ours.vectors * ours.values.asDiagonal() * ours.vectors.transpose();
    CHECK((recon - sym).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + sym.norm()));
    CHECK((ours.vectors.transpose() * ours.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("jacobi_eigen on diagonal and repeated spectra") {
  Matrix d = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  const auto out = jacobi_eigen(d);
  CHECK(out.sweeps == 0);
  CHECK(out.values(0) == 1.0);
  CHECK(out.values(2) == 3.0);

  const Matrix ones = Matrix::Ones(4, 4);
  const auto rank_one = jacobi_eigen(ones);
  CHECK(std::abs(rank_one.values(3) - 4.0) <= 1e-13);
  CHECK(rank_one.values.head(3).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("jacobi_eigen accepts expressions and float scalars") {
  Eigen::Matrix2f m;
  m << 2, 1, 1, 2;
  const auto out = jacobi_eigen(m * 2.0f);
  CHECK(std::abs(out.values(0) - 2.0f) <= 1e-5f);
  CHECK(std::abs(out.values(1) - 6.0f) <= 1e-5f);
  CHECK_THROWS_AS(jacobi_eigen(Matrix(2, 3)), StructuralError);
}
