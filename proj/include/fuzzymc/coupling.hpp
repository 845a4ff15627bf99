#pragma once

#include "fuzzymc/decomposition.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzymc {

/// One atom of a coupling: mass placed on (x, y) with x in Lambda_i, y in Lambda_j.
/// States are global indices into the chain.
struct CouplingAtom {
  Index x = 0;
  Index y = 0;
  double mass = 0.0;
};

/// A joint law on Lambda_i x Lambda_j with marginals pi_i and pi_j.
struct Coupling {
  Index i = 0;
  Index j = 0;
  std::vector<CouplingAtom> support;

  double total_mass() const;
  Coupling transposed() const;
};

/// Couplings indexed by ordered class pair.
class CouplingSet {
 public:
  CouplingSet() = default;
  explicit CouplingSet(std::vector<Coupling> couplings) : couplings_(std::move(couplings)) {}

  const std::vector<Coupling>& couplings() const { return couplings_; }
  const Coupling* find(Index i, Index j) const;
  void add(Coupling c);

 private:
  std::vector<Coupling> couplings_;
};

/// Raised when a pair with Q_hat(i,j) > 0 has no coupling.
class MissingCouplingError : public std::runtime_error {
 public:
  MissingCouplingError(Index i, Index j, const std::string& what)
      : std::runtime_error(what), i_(i), j_(j) {}
  Index i() const { return i_; }
  Index j() const { return j_; }

 private:
  Index i_;
  Index j_;
};

inline constexpr double kCouplingMassTolerance = 1e-12;
inline constexpr double kCouplingMarginalTolerance = 1e-10;

/// pi_i and pi_j are given on the full state space (zero off Lambda_i, Lambda_j).
/// Atoms outside Lambda_i x Lambda_j are a structural error.
ValidationReport validate_coupling(const Coupling& coupling, const Vector& pi_i, const Vector& pi_j);

Coupling product_coupling(Index i, Index j, const Vector& pi_i, const Vector& pi_j);

/// Product couplings for every ordered pair with Q_hat(i,j) > 0.
CouplingSet product_couplings(const DecomposedSystem& system, Index n_states);

/// Adds kappa_ji as the transpose of kappa_ij wherever only one direction is present.
CouplingSet symmetric_completion(const CouplingSet& couplings);

/// Ordered pairs (i, j), i != j, with Q_hat(i, j) > 0.
std::vector<std::pair<Index, Index>> active_pairs(const DecomposedSystem& system);

struct ChiResult {
  /// Extended real; +inf when no off-diagonal atom exists.
  double value = kInfinity;
  /// Minimizing (x, y, i, j) when value is finite.
  std::optional<std::array<Index, 4>> argmin;
  Index candidates = 0;
  std::vector<std::string> warnings;
};

/// chi = min over atoms with x != y of a_i(x) a_j(y) pi(x) Q(x,y) / (pi_hat(i) Q_hat(i,j) kappa_ij(x,y)),
/// taken over the pairs with Q_hat(i,j) > 0.
ChiResult quality_chi(const ReversibleChain& chain, const FuzzyPartition& partition,
                      const DecomposedSystem& system, const CouplingSet& couplings);

/// chi * c with the convention inf * 0 = 0.
double chi_times(double chi, double constant);

}  // namespace fuzzymc
