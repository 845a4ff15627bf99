#pragma once

#include "fuzzymc/constants.hpp"
#include "fuzzymc/coupling.hpp"
#include "fuzzymc/decomposition.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fuzzymc {

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kDirichletSlackTolerance = 1e-9;
inline constexpr double kPoincareVerdictTolerance = 1e-10;
inline constexpr double kEstimatedVerdictTolerance = 1e-3;
inline constexpr double kMeanPreservationTolerance = 1e-12;

struct IdentityCheck {
  double max_residual = 0.0;
  /// Worst |E_pi_hat f_hat - E_pi f| seen across the trials.
  double max_mean_gap = 0.0;
  int trials = 0;
  bool pass = true;
};

/// |Var_pi f - sum_i pi_hat(i) Var_{pi_i} f - Var_{pi_hat} f_hat| over random
/// standard-normal f.
IdentityCheck check_variance_decomposition(const ReversibleChain& chain,
                                           const FuzzyPartition& partition, int trials,
                                           std::uint64_t seed, unsigned threads = 1);

/// Same for entropy, f log-uniform on [e^-3, e^3].
IdentityCheck check_entropy_decomposition(const ReversibleChain& chain,
                                          const FuzzyPartition& partition, int trials,
                                          std::uint64_t seed, unsigned threads = 1);

/// Residuals for one given f (variance and, when f > 0, entropy).
double variance_decomposition_residual(const DecomposedSystem& system, const ReversibleChain& chain,
                                       const Vector& f);
double entropy_decomposition_residual(const DecomposedSystem& system, const ReversibleChain& chain,
                                      const Vector& f);

struct InequalityCheck {
  PsiKind kind = PsiKind::Poincare;
  double min_slack = kInfinity;
  double chi = kInfinity;
  int trials = 0;
  bool pass = true;
};

/// L f - sum_i pi_hat(i) L_i f - chi L_hat f_hat for one f; the chi term is
/// dropped when chi is +inf (all coupling mass is diagonal, so f_hat is
/// constant across coupled classes).
double dirichlet_slack(const ReversibleChain& chain, const DecomposedSystem& system, double chi,
                       const Vector& f, PsiKind kind);

/// Minimum slack over random f = exp(3 N(0,1)).
InequalityCheck check_dirichlet_inequality(const ReversibleChain& chain,
                                           const FuzzyPartition& partition,
                                           const CouplingSet& couplings, PsiKind kind, int trials,
                                           std::uint64_t seed, unsigned threads = 1);

struct ClassConstant {
  std::string class_id;
  double value = 0.0;
};

struct BoundVerdict {
  PsiKind kind = PsiKind::Poincare;
  double lhs = 0.0;
  double rhs = 0.0;
  double chi = kInfinity;
  double projection_constant = 0.0;
  double projection_term = 0.0;  // chi * projection_constant, inf*0 = 0
  std::vector<ClassConstant> class_constants;
  double tolerance = 0.0;
  bool relative_tolerance = false;
  bool advisory = false;
  bool pass = false;
  double slack = 0.0;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  RatioOptions ratio;
  unsigned threads = 1;
  double poincare_tolerance = kPoincareVerdictTolerance;
};

/// c(Q) >= min{chi c(Q_hat), min_i c(Q_i)}. Poincare uses exact spectral
/// constants; MLSI and LSI compare ratio estimates and are advisory.
BoundVerdict check_theorem_bound(const ReversibleChain& chain, const FuzzyPartition& partition,
                                 const CouplingSet& couplings, PsiKind kind,
                                 const VerifyOptions& options = {});

struct FullReport {
  ValidationReport chain_violations;
  ValidationReport partition_violations;
  std::vector<std::pair<std::string, ValidationReport>> coupling_violations;
  std::optional<DecomposedSystem> system;
  std::optional<IdentityCheck> variance;
  std::optional<IdentityCheck> entropy;
  std::vector<InequalityCheck> dirichlet;
  double chi = kInfinity;
  std::vector<BoundVerdict> verdicts;
  std::vector<std::string> warnings;

  bool valid() const;
  /// True when the instance is valid and the exact Poincare verdict passes.
  bool poincare_passes() const;
};

FullReport full_report(const ReversibleChain& chain, const FuzzyPartition& partition,
                       const CouplingSet& couplings, const VerifyOptions& options = {});

}  // namespace fuzzymc
