#include "fuzzymc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fuzzymc {

std::string_view to_string(PsiKind kind) {
  switch (kind) {
    case PsiKind::Poincare:
      return "poincare";
    case PsiKind::Mlsi:
      return "mlsi";
    case PsiKind::Lsi:
      return "lsi";
  }
  return "unknown";
}

PsiKind psi_kind_from_string(std::string_view name) {
  if (name == "poincare") return PsiKind::Poincare;
  if (name == "mlsi") return PsiKind::Mlsi;
  if (name == "lsi") return PsiKind::Lsi;
  throw StructuralError("unknown functional kind: " + std::string(name));
}

ReversibleChain::ReversibleChain(std::vector<std::string> states, Vector pi, Matrix generator)
    : states_(std::move(states)), pi_(std::move(pi)), generator_(std::move(generator)) {
  const auto n = static_cast<Index>(states_.size());
  if (pi_.size() != n || generator_.rows() != n || generator_.cols() != n) {
    std::ostringstream msg;
    msg << "chain dimension mismatch: " << n << " states, pi of length " << pi_.size()
        << ", Q of shape " << generator_.rows() << "x" << generator_.cols();
    throw StructuralError(msg.str());
  }
}

Index ReversibleChain::state_index(std::string_view name) const {
  const auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) throw StructuralError("unknown state: " + std::string(name));
  return static_cast<Index>(it - states_.begin());
}

ValidationReport validate_chain(const ReversibleChain& chain, double balance_tolerance) {
  ValidationReport report;
  const Vector& pi = chain.pi();
  const Matrix& q = chain.generator();
  const Index n = chain.size();

  Violation positivity{"pi-positive", -1, -1, 0.0, 0, ""};
  for (Index x = 0; x < n; ++x) {
    if (!(pi(x) > 0.0)) {
      if (positivity.count == 0 || pi(x) < -positivity.magnitude) {
        positivity.row = x;
        positivity.magnitude = -pi(x);
      }
      ++positivity.count;
    }
  }
  if (positivity.count > 0) {
    positivity.detail = "pi(" + chain.states()[static_cast<std::size_t>(positivity.row)] +
                        ") is not strictly positive";
    report.push_back(positivity);
  }

  const double mass = pi.sum();
  if (std::abs(mass - 1.0) > kMassTolerance) {
    report.push_back({"pi-normalized", -1, -1, std::abs(mass - 1.0), 1, "pi does not sum to 1"});
  }

  Violation off_diagonal{"offdiagonal-nonnegative", -1, -1, 0.0, 0, ""};
  Violation row_sum{"row-sum-zero", -1, -1, 0.0, 0, ""};
  Violation balance{"detailed-balance", -1, -1, 0.0, 0, ""};
  for (Index x = 0; x < n; ++x) {
    const double s = q.row(x).sum();
    if (std::abs(s) > kRowSumTolerance) {
      if (std::abs(s) > row_sum.magnitude) {
        row_sum.row = x;
        row_sum.magnitude = std::abs(s);
      }
      ++row_sum.count;
    }
    for (Index y = 0; y < n; ++y) {
      if (x == y) continue;
      if (q(x, y) < 0.0) {
        if (-q(x, y) > off_diagonal.magnitude) {
          off_diagonal.row = x;
          off_diagonal.col = y;
          off_diagonal.magnitude = -q(x, y);
        }
        ++off_diagonal.count;
      }
      if (y > x) {
        const double fwd = pi(x) * q(x, y);
        const double bwd = pi(y) * q(y, x);
        const double gap = std::abs(fwd - bwd);
        if (gap > balance_tolerance * std::max(1.0, std::abs(fwd))) {
          if (gap > balance.magnitude) {
            balance.row = x;
            balance.col = y;
            balance.magnitude = gap;
          }
          ++balance.count;
        }
      }
    }
  }
  if (off_diagonal.count > 0) {
    off_diagonal.detail = "negative off-diagonal rate";
    report.push_back(off_diagonal);
  }
  if (row_sum.count > 0) {
    row_sum.detail = "generator row does not sum to 0";
    report.push_back(row_sum);
  }
  if (balance.count > 0) {
    balance.detail = "pi(x)Q(x,y) != pi(y)Q(y,x)";
    report.push_back(balance);
  }
  return report;
}

void require_valid(const ReversibleChain& chain) {
  const auto report = validate_chain(chain);
  if (!report.empty()) {
    const auto& v = report.front();
    std::ostringstream msg;
    msg << "invalid chain: " << v.invariant << " (" << v.detail << ", magnitude " << v.magnitude
        << ")";
    throw DomainError(msg.str());
  }
}

Matrix Graph::adjacency() const {
  const auto n = static_cast<Index>(vertices.size());
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw StructuralError("edge endpoint out of range");
    if (u == v) throw StructuralError("self-loop at vertex " + vertices[static_cast<std::size_t>(u)]);
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Index Graph::vertex_index(std::string_view name) const {
  const auto it = std::find(vertices.begin(), vertices.end(), name);
  if (it == vertices.end()) throw StructuralError("unknown vertex: " + std::string(name));
  return static_cast<Index>(it - vertices.begin());
}

ReversibleChain random_walk_chain(const Matrix& adjacency, std::vector<std::string> names) {
  const Index n = adjacency.rows();
  if (adjacency.cols() != n || static_cast<Index>(names.size()) != n) {
    throw StructuralError("random_walk_chain: adjacency must be square and match the names");
  }
  for (Index x = 0; x < n; ++x) {
    if (adjacency(x, x) != 0.0) throw StructuralError("random_walk_chain: self-loop at " + names[static_cast<std::size_t>(x)]);
    for (Index y = 0; y < n; ++y) {
      const double a = adjacency(x, y);
      if (a != 0.0 && a != 1.0) throw StructuralError("random_walk_chain: adjacency must be 0/1");
      if (a != adjacency(y, x)) throw StructuralError("random_walk_chain: adjacency is not symmetric");
    }
  }
  const Vector degree = adjacency.rowwise().sum();
  for (Index x = 0; x < n; ++x) {
    if (degree(x) == 0.0) {
      throw DomainError("random_walk_chain: isolated vertex " + names[static_cast<std::size_t>(x)]);
    }
  }
  Matrix q = degree.cwiseInverse().asDiagonal() * adjacency;
  q.diagonal().setConstant(-1.0);
  Vector pi = degree / degree.sum();
  return ReversibleChain(std::move(names), std::move(pi), std::move(q));
}

ReversibleChain random_walk_chain(const Graph& graph) {
  return random_walk_chain(graph.adjacency(), graph.vertices);
}

std::vector<Index> component_labels(const Matrix& generator) {
  const Index n = generator.rows();
  std::vector<Index> label(static_cast<std::size_t>(n), -1);
  Index next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    label[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (Index y = 0; y < n; ++y) {
        if (y == x || label[static_cast<std::size_t>(y)] >= 0) continue;
        if (generator(x, y) > 0.0 || generator(y, x) > 0.0) {
          label[static_cast<std::size_t>(y)] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_irreducible(const Matrix& generator) {
  const auto labels = component_labels(generator);
  return std::all_of(labels.begin(), labels.end(), [](Index l) { return l == 0; });
}

}  // namespace fuzzymc
