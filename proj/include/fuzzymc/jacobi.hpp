#pragma once

#include "fuzzymc/types.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fuzzymc {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns, matching values
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic-by-row Jacobi diagonalization of a symmetric matrix. Only the
/// symmetric part of the input is used. Sweeps continue until the
/// off-diagonal Frobenius norm falls below tolerance * ||A||_F.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(
    const Eigen::MatrixBase<Derived>& input,
    typename Derived::Scalar tolerance = Eigen::NumTraits<typename Derived::Scalar>::epsilon(),
    int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = input.rows();
  if (input.cols() != n) throw StructuralError("jacobi_eigen: matrix must be square");

  MatrixS a = (input + input.transpose()) / Scalar(2);
  MatrixS v = MatrixS::Identity(n, n);
  const Scalar scale = a.norm();

  auto off_norm = [&] {
    Scalar s(0);
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) s += Scalar(2) * a(p, q) * a(p, q);
    using std::sqrt;
    return sqrt(s);
  };

  SymmetricEigen<Scalar> out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tolerance * scale) {
      out.converged = true;
      break;
    }
    ++out.sweeps;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
      }
    }
  }
  if (!out.converged && off_norm() <= tolerance * scale) out.converged = true;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index l, Index r) { return a(l, l) < a(r, r); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace fuzzymc
