#include "fuzzymc/glued_graph.hpp"

#include <algorithm>
#include <array>

namespace fuzzymc {

bool BaseGraph::in_glue_set(Index v) const {
  return std::find(glued.begin(), glued.end(), v) != glued.end();
}

void validate_base_graph(const BaseGraph& base) {
  const auto n = static_cast<Index>(base.graph.vertices.size());
  const Matrix adjacency = base.graph.adjacency();
  for (const Index h : base.glued) {
    if (h < 0 || h >= n) throw StructuralError("glue vertex index out of range");
  }
  for (const Index h : base.glued) {
    for (const Index k : base.glued) {
      if (adjacency(h, k) != 0.0) {
        throw DomainError("glue set H contains adjacent vertices: " +
                          base.graph.vertices[static_cast<std::size_t>(h)] + " and " +
                          base.graph.vertices[static_cast<std::size_t>(k)]);
      }
    }
  }
  Index unglued = 0;
  for (Index v = 0; v < n; ++v) unglued += base.in_glue_set(v) ? 0 : 1;
  if (unglued == 0) throw DomainError("glue set H must not contain every vertex of G");
  if (!is_irreducible(adjacency)) throw DomainError("base graph G is not connected");
}

GluedInstance build_glued_graph(const BaseGraph& base) {
  validate_base_graph(base);
  const auto n = static_cast<Index>(base.graph.vertices.size());

  GluedGraph out;
  // Index of (v, c) in the glued graph, c in {1, 2}.
  std::vector<std::array<Index, 2>> where(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) {
    const auto& name = base.graph.vertices[static_cast<std::size_t>(v)];
    if (base.in_glue_set(v)) {
      const auto k = static_cast<Index>(out.graph.vertices.size());
      out.graph.vertices.push_back(name);
      out.origin.push_back(v);
      out.copy.push_back(0);
      where[static_cast<std::size_t>(v)] = {k, k};
    }
  }
  for (int c = 1; c <= 2; ++c) {
    for (Index v = 0; v < n; ++v) {
      if (base.in_glue_set(v)) continue;
      const auto k = static_cast<Index>(out.graph.vertices.size());
      out.graph.vertices.push_back(base.graph.vertices[static_cast<std::size_t>(v)] + "#" +
                                   std::to_string(c));
      out.origin.push_back(v);
      out.copy.push_back(c);
      where[static_cast<std::size_t>(v)][static_cast<std::size_t>(c - 1)] = k;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (const auto& [u, v] : base.graph.edges) {
      out.graph.edges.emplace_back(where[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)],
                                   where[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]);
    }
  }
  for (Index v = 0; v < n; ++v) {
    if (base.in_glue_set(v)) continue;
    out.graph.edges.emplace_back(where[static_cast<std::size_t>(v)][0],
                                 where[static_cast<std::size_t>(v)][1]);
  }
  const Matrix adjacency = out.graph.adjacency();
  out.degree = adjacency.rowwise().sum();
  out.total_degree = out.degree.sum();
  auto chain = random_walk_chain(adjacency, out.graph.vertices);
  return GluedInstance{std::move(out), std::move(chain)};
}

FuzzyPartition canonical_partition(const GluedGraph& glued) {
  const auto n = static_cast<Index>(glued.graph.vertices.size());
  Matrix a = Matrix::Zero(n, 2);
  for (Index x = 0; x < n; ++x) {
    switch (glued.copy[static_cast<std::size_t>(x)]) {
      case 0:
        a(x, 0) = 0.5;
        a(x, 1) = 0.5;
        break;
      case 1:
        a(x, 0) = 1.0;
        break;
      default:
        a(x, 1) = 1.0;
        break;
    }
  }
  return FuzzyPartition({"1", "2"}, std::move(a));
}

CouplingSet canonical_coupling(const GluedGraph& glued, const ReversibleChain& chain) {
  const auto n = static_cast<Index>(glued.graph.vertices.size());
  Coupling kappa{0, 1, {}};
  for (Index x = 0; x < n; ++x) {
    const int c = glued.copy[static_cast<std::size_t>(x)];
    if (c == 0) {
      kappa.support.push_back({x, x, chain.pi()(x)});
    } else if (c == 1) {
      for (Index y = 0; y < n; ++y) {
        if (glued.copy[static_cast<std::size_t>(y)] == 2 &&
            glued.origin[static_cast<std::size_t>(y)] == glued.origin[static_cast<std::size_t>(x)]) {
          kappa.support.push_back({x, y, 2.0 * chain.pi()(x)});
        }
      }
    }
  }
  CouplingSet out;
  out.add(kappa.transposed());
  out.add(std::move(kappa));
  return out;
}

ClosedForm closed_form_quantities(const BaseGraph& base) {
  validate_base_graph(base);
  const Vector degree = base.graph.adjacency().rowwise().sum();
  const auto n = static_cast<Index>(base.graph.vertices.size());
  double glued_degree = 0.0;
  double unglued = 0.0;
  double max_unglued_degree = 0.0;
  for (Index v = 0; v < n; ++v) {
    if (base.in_glue_set(v)) {
      glued_degree += degree(v);
    } else {
      unglued += 1.0;
      max_unglued_degree = std::max(max_unglued_degree, degree(v));
    }
  }
  const double total = 2.0 * degree.sum() + 2.0 * unglued;
  ClosedForm out;
  out.q_hat_12 = 2.0 / total * (glued_degree + unglued);
  out.chi = 1.0 / out.q_hat_12 / (max_unglued_degree + 1.0);
  out.projection_bound = 2.0 / (max_unglued_degree + 1.0);
  return out;
}

}  // namespace fuzzymc
