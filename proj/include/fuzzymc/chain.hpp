#pragma once

#include "fuzzymc/types.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fuzzymc {

/// Selects the convex kernel of a Dirichlet form and the matching global
/// functional: variance for Poincare, entropy for the two log-Sobolev kinds.
enum class PsiKind { Poincare, Mlsi, Lsi };

std::string_view to_string(PsiKind kind);
PsiKind psi_kind_from_string(std::string_view name);

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kDetailedBalanceTolerance = 1e-10;

/// A finite continuous-time chain given by a generator and a candidate
/// stationary measure. Construction checks shapes only; use validate_chain
/// for the stochastic invariants. Immutable once built.
class ReversibleChain {
 public:
  ReversibleChain(std::vector<std::string> states, Vector pi, Matrix generator);

  Index size() const { return pi_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const Vector& pi() const { return pi_; }
  const Matrix& generator() const { return generator_; }

  Index state_index(std::string_view name) const;

 private:
  std::vector<std::string> states_;
  Vector pi_;
  Matrix generator_;
};

ValidationReport validate_chain(const ReversibleChain& chain,
                                double balance_tolerance = kDetailedBalanceTolerance);

/// Throws DomainError naming the first failed invariant.
void require_valid(const ReversibleChain& chain);

/// Undirected simple graph with named vertices.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<Index, Index>> edges;

  Matrix adjacency() const;
  Index vertex_index(std::string_view name) const;
};

/// Simple random walk: Q(x,y) = 1/d(x) on edges, pi(x) = d(x)/D.
ReversibleChain random_walk_chain(const Matrix& adjacency, std::vector<std::string> names);
ReversibleChain random_walk_chain(const Graph& graph);

/// Connected components of the support graph {Q(x,y) > 0 or Q(y,x) > 0}.
std::vector<Index> component_labels(const Matrix& generator);
bool is_irreducible(const Matrix& generator);

}  // namespace fuzzymc
