#include "fuzzymc/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzymc {

Matrix heat_kernel(const ReversibleChain& chain, double t) {
  if (!(t >= 0.0)) throw DomainError("heat_kernel: t must be nonnegative");
  return matrix_exponential(Matrix(t * chain.generator()));
}

double max_tv_distance(const Matrix& kernel, const Vector& pi) {
  double worst = 0.0;
  for (Index x = 0; x < kernel.rows(); ++x) {
    double tv = 0.0;
    for (Index y = 0; y < kernel.cols(); ++y) tv += std::abs(std::max(kernel(x, y), 0.0) - pi(y));
    worst = std::max(worst, tv / 2.0);
  }
  return worst;
}

MixingScan tv_mixing_time(const ReversibleChain& chain, double eps, double t_max, double step) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("tv_mixing_time: eps must lie in (0,1)");
  if (!(step > 0.0)) throw DomainError("tv_mixing_time: step must be positive");
  if (!(t_max >= 0.0)) throw DomainError("tv_mixing_time: t_max must be nonnegative");

  MixingScan scan;
  scan.step = step;
  const auto points = static_cast<long>(std::floor(t_max / step * (1.0 + 1e-12))) + 1;
  const Matrix one_step = heat_kernel(chain, step);
  Matrix kernel = Matrix::Identity(chain.size(), chain.size());
  for (long k = 0; k < points; ++k) {
    if (k > 0) kernel = kernel * one_step;
    const double t = static_cast<double>(k) * step;
    const double tv = max_tv_distance(kernel, chain.pi());
    scan.times.push_back(t);
    scan.max_tv.push_back(tv);
    if (!scan.bracket && tv <= eps) scan.bracket = t;
  }
  return scan;
}

}  // namespace fuzzymc
