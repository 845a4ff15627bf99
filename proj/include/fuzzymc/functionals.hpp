#pragma once

#include "fuzzymc/chain.hpp"

#include <cmath>

namespace fuzzymc {

template <typename Scalar>
Scalar psi(PsiKind kind, Scalar u, Scalar v) {
  using std::log;
  using std::sqrt;
  switch (kind) {
    case PsiKind::Poincare:
      return (u - v) * (u - v);
    case PsiKind::Mlsi:
      return (u - v) * (log(u) - log(v));
    case PsiKind::Lsi: {
      const Scalar d = sqrt(u) - sqrt(v);
      return d * d;
    }
  }
  return Scalar(0);
}

/// u log u - u + 1, accurate near u = 1 where the direct formula cancels.
template <typename Scalar>
Scalar relative_entropy_kernel(Scalar u) {
  using std::abs;
  using std::log;
  const Scalar d = u - Scalar(1);
  if (abs(d) < Scalar(0.1)) {
    // sum_{k>=2} (-d)^k / (k (k-1))
    Scalar term = d * d;
    Scalar sum(0);
    for (int k = 2; k < 40; ++k) {
      sum += term / Scalar(k * (k - 1));
      term *= -d;
      if (abs(term) < std::numeric_limits<Scalar>::epsilon() * abs(sum) * Scalar(1e-2)) break;
    }
    return sum;
  }
  return u * log(u) - d;
}

template <typename DerivedPi, typename DerivedF>
typename DerivedF::Scalar expectation(const Eigen::MatrixBase<DerivedPi>& pi,
                                      const Eigen::MatrixBase<DerivedF>& f) {
  if (pi.size() != f.size()) throw StructuralError("expectation: dimension mismatch");
  return pi.dot(f);
}

/// Var_pi(f), evaluated around the mean.
template <typename DerivedPi, typename DerivedF>
typename DerivedF::Scalar variance(const Eigen::MatrixBase<DerivedPi>& pi,
                                   const Eigen::MatrixBase<DerivedF>& f) {
  using Scalar = typename DerivedF::Scalar;
  const Scalar m = expectation(pi, f);
  Scalar acc(0);
  for (Index x = 0; x < f.size(); ++x) acc += pi(x) * (f(x) - m) * (f(x) - m);
  return acc;
}

/// Ent_pi(f) for f > 0, written as m * sum pi(x) phi(f(x)/m) with
/// phi(u) = u log u - u + 1 >= 0, so the result is nonnegative term by term.
template <typename DerivedPi, typename DerivedF>
typename DerivedF::Scalar entropy(const Eigen::MatrixBase<DerivedPi>& pi,
                                  const Eigen::MatrixBase<DerivedF>& f) {
  using Scalar = typename DerivedF::Scalar;
  if (pi.size() != f.size()) throw StructuralError("entropy: dimension mismatch");
  for (Index x = 0; x < f.size(); ++x) {
    if (!(f(x) > Scalar(0))) throw DomainError("entropy: f must be strictly positive");
  }
  const Scalar m = expectation(pi, f);
  Scalar acc(0);
  for (Index x = 0; x < f.size(); ++x) acc += pi(x) * relative_entropy_kernel<Scalar>(f(x) / m);
  return m * acc;
}

/// 1/2 sum_{x,y} pi(x) Q(x,y) Psi(f(x), f(y)).
template <typename DerivedPi, typename DerivedQ, typename DerivedF>
typename DerivedF::Scalar dirichlet_form(const Eigen::MatrixBase<DerivedPi>& pi,
                                         const Eigen::MatrixBase<DerivedQ>& generator,
                                         const Eigen::MatrixBase<DerivedF>& f, PsiKind kind) {
  using Scalar = typename DerivedF::Scalar;
  const Index n = f.size();
  if (pi.size() != n || generator.rows() != n || generator.cols() != n) {
    throw StructuralError("dirichlet_form: dimension mismatch");
  }
  if (kind != PsiKind::Poincare) {
    for (Index x = 0; x < n; ++x) {
      if (!(f(x) > Scalar(0))) {
        throw DomainError("dirichlet_form: f must be strictly positive for MLSI/LSI");
      }
    }
  }
  Scalar acc(0);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (x == y || generator(x, y) == Scalar(0)) continue;
      acc += pi(x) * generator(x, y) * psi<Scalar>(kind, f(x), f(y));
    }
  }
  return acc / Scalar(2);
}

template <typename DerivedF>
double dirichlet_form(const ReversibleChain& chain, const Eigen::MatrixBase<DerivedF>& f,
                      PsiKind kind) {
  return dirichlet_form(chain.pi(), chain.generator(), f, kind);
}

/// Var for Poincare, Ent otherwise.
template <typename DerivedPi, typename DerivedF>
typename DerivedF::Scalar global_functional(const Eigen::MatrixBase<DerivedPi>& pi,
                                            const Eigen::MatrixBase<DerivedF>& f, PsiKind kind) {
  return kind == PsiKind::Poincare ? variance(pi, f) : entropy(pi, f);
}

}  // namespace fuzzymc
