#pragma once

#include "fuzzymc/chain.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace fuzzymc {

/// exp(A) by scaling and squaring with a Taylor core. The squaring count k is
/// the smallest with ||A / 2^k||_inf <= 1/2.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_exponential(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using MatrixS = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = a.rows();
  if (a.cols() != n) throw StructuralError("matrix_exponential: matrix must be square");

  const Scalar norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  Scalar scaled_norm = norm;
  while (scaled_norm > Scalar(0.5)) {
    scaled_norm /= Scalar(2);
    ++squarings;
  }
  using std::ldexp;
  const MatrixS scaled = a * ldexp(Scalar(1), -squarings);

  MatrixS result = MatrixS::Identity(n, n);
  MatrixS term = MatrixS::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / Scalar(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= Eigen::NumTraits<Scalar>::epsilon() * Scalar(1e-2)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// p_t = exp(tQ).
Matrix heat_kernel(const ReversibleChain& chain, double t);

/// max_x ||p(x,.) - pi||_TV with TV = 1/2 sum_y |p(x,y) - pi(y)|; entries of p
/// below zero are clamped to 0 before measuring.
double max_tv_distance(const Matrix& kernel, const Vector& pi);

struct MixingScan {
  std::vector<double> times;
  std::vector<double> max_tv;
  /// First grid point with max TV <= eps; an upper bracket of t_mix(eps).
  std::optional<double> bracket;
  double step = 0.0;
};

MixingScan tv_mixing_time(const ReversibleChain& chain, double eps, double t_max, double step);

}  // namespace fuzzymc
