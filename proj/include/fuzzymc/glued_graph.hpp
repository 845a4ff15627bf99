#pragma once

#include "fuzzymc/chain.hpp"
#include "fuzzymc/coupling.hpp"
#include "fuzzymc/decomposition.hpp"

#include <string>
#include <vector>

namespace fuzzymc {

/// A connected graph G with a glue set H such that no two members of H are
/// adjacent, and H != G.
struct BaseGraph {
  Graph graph;
  std::vector<Index> glued;  // H, vertex indices into graph

  bool in_glue_set(Index v) const;
};

/// Throws DomainError naming the offending vertex when H has adjacent
/// members, when H covers G, or when G is disconnected.
void validate_base_graph(const BaseGraph& base);

/// Two copies of G with the H vertices identified and the unglued copies of
/// each vertex joined. Copies are named "v#1", "v#2"; glued vertices keep "v".
struct GluedGraph {
  Graph graph;
  std::vector<Index> origin;  // vertex of G behind each vertex of the glued graph
  std::vector<int> copy;      // 1 or 2 for copies, 0 for glued vertices
  Vector degree;
  double total_degree = 0.0;
};

struct GluedInstance {
  GluedGraph glued;
  ReversibleChain chain;  // simple random walk on the glued graph
};

GluedInstance build_glued_graph(const BaseGraph& base);

/// a = (1,0) on the first copy, (0,1) on the second, (1/2,1/2) on H.
/// Classes are named "1" and "2".
FuzzyPartition canonical_partition(const GluedGraph& glued);

/// kappa(h,h) = pi(h) for h in H and kappa((v,1),(v,2)) = 2 pi((v,1)); kappa_21 is
/// its transpose.
CouplingSet canonical_coupling(const GluedGraph& glued, const ReversibleChain& chain);

struct ClosedForm {
  double q_hat_12 = 0.0;
  double chi = 0.0;
  /// chi * lambda(Q_hat) = 2 / (max_{v not in H} d_G(v) + 1).
  double projection_bound = 0.0;
};

ClosedForm closed_form_quantities(const BaseGraph& base);

}  // namespace fuzzymc
