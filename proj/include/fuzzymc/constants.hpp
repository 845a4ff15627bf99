#pragma once

#include "fuzzymc/chain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fuzzymc {

struct SpectralGap {
  /// Second-smallest eigenvalue of D^{1/2}(-Q)D^{-1/2}; 0 when reducible,
  /// +inf for a single-state chain.
  double lambda = 0.0;
  bool reducible = false;
  Vector eigenvalues;
  /// Eigenvector of -Q for lambda, normalized to unit L2(pi) norm.
  Vector fiedler;
};

inline constexpr double kReducibilityThreshold = 1e-9;

/// Exact Poincare constant via cyclic Jacobi. Throws DomainError for a
/// chain that fails validation (the symmetrization needs detailed balance).
SpectralGap spectral_gap(const ReversibleChain& chain);
double poincare_constant(const ReversibleChain& chain);

struct RatioOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_iter = 2000;
  double fd_step = 1e-6;
  /// Candidates whose Var/Ent falls below this are treated as constant.
  double min_denominator = 1e-12;
  int stall_window = 20;
  double stall_tolerance = 1e-10;
  unsigned threads = 1;
};

/// Best achieved value of Dirichlet form / (Var or Ent). For MLSI and LSI this
/// is an upper bound on the constant; for Poincare it is the Rayleigh-quotient
/// sanity path.
struct RatioEstimate {
  PsiKind kind = PsiKind::Mlsi;
  double value = kInfinity;
  Vector minimizer;  // f, not its logarithm
  int restarts = 0;
  int valid_restarts = 0;
  int best_restart = -1;
  long iterations = 0;
  std::uint64_t seed = 0;
};

/// Multi-start descent on f = exp(g), g centered under pi (f = g for Poincare),
/// with central finite-difference gradients and backtracking line search.
/// Deterministic in (seed, restart index) and independent of threads.
RatioEstimate ratio_minimize(const ReversibleChain& chain, PsiKind kind,
                             const RatioOptions& options = {});

/// Ratio of the kind's Dirichlet form to its global functional at f.
double functional_ratio(const ReversibleChain& chain, const Vector& f, PsiKind kind);

struct ConstantsReport {
  double lambda = 0.0;
  RatioEstimate alpha_est;
  RatioEstimate rho_est;
  std::vector<std::string> warnings;
};

inline constexpr double kOrderingSlack = 1e-3;

/// lambda exactly, alpha and rho as achieved ratios. A single-state chain
/// reports +inf for all three.
ConstantsReport estimate_constants(const ReversibleChain& chain, const RatioOptions& options = {});

}  // namespace fuzzymc
