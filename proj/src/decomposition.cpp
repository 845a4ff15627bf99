#include "fuzzymc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuzzymc {

FuzzyPartition::FuzzyPartition(std::vector<std::string> classes, Matrix membership)
    : classes_(std::move(classes)), membership_(std::move(membership)) {
  if (membership_.cols() != static_cast<Index>(classes_.size())) {
    std::ostringstream msg;
    msg << "partition dimension mismatch: " << classes_.size() << " classes but membership has "
        << membership_.cols() << " columns";
    throw StructuralError(msg.str());
  }
}

Index FuzzyPartition::class_index(std::string_view id) const {
  const auto it = std::find(classes_.begin(), classes_.end(), id);
  if (it == classes_.end()) throw StructuralError("unknown class: " + std::string(id));
  return static_cast<Index>(it - classes_.begin());
}

std::vector<Index> FuzzyPartition::support(Index i) const {
  if (i < 0 || i >= class_count()) throw StructuralError("class index out of range");
  std::vector<Index> out;
  for (Index x = 0; x < membership_.rows(); ++x) {
    if (membership_(x, i) > 0.0) out.push_back(x);
  }
  return out;
}

ValidationReport validate_partition(const FuzzyPartition& partition, Index n_states) {
  if (partition.state_count() != n_states) {
    std::ostringstream msg;
    msg << "partition has " << partition.state_count() << " rows but the chain has " << n_states
        << " states";
    throw StructuralError(msg.str());
  }
  ValidationReport report;
  const Matrix& a = partition.membership();

  Violation range{"membership-range", -1, -1, 0.0, 0, "membership outside [0,1]"};
  for (Index x = 0; x < a.rows(); ++x) {
    for (Index i = 0; i < a.cols(); ++i) {
      const double excess = std::max(-a(x, i), a(x, i) - 1.0);
      if (excess > 0.0 || std::isnan(a(x, i))) {
        if (range.count == 0 || excess > range.magnitude) {
          range.row = x;
          range.col = i;
          range.magnitude = excess;
        }
        ++range.count;
      }
    }
  }
  if (range.count > 0) report.push_back(range);

  Violation rows{"membership-row-sum", -1, -1, 0.0, 0, "memberships of a state do not sum to 1"};
  for (Index x = 0; x < a.rows(); ++x) {
    const double gap = std::abs(a.row(x).sum() - 1.0);
    if (gap > kMembershipRowTolerance) {
      if (gap > rows.magnitude) {
        rows.row = x;
        rows.magnitude = gap;
      }
      ++rows.count;
    }
  }
  if (rows.count > 0) report.push_back(rows);

  for (Index i = 0; i < a.cols(); ++i) {
    if (!(a.col(i).maxCoeff() > 0.0)) {
      report.push_back({"empty-class", -1, i, 0.0, 1,
                        "class " + partition.classes()[static_cast<std::size_t>(i)] +
                            " has no state with positive membership"});
    }
  }
  return report;
}

FuzzyPartition exact_partition_from_labels(std::span<const std::string> labels,
                                           std::vector<std::string> classes) {
  if (classes.empty()) {
    for (const auto& l : labels) {
      if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
    }
  }
  Matrix a = Matrix::Zero(static_cast<Index>(labels.size()), static_cast<Index>(classes.size()));
  std::vector<bool> used(classes.size(), false);
  for (std::size_t x = 0; x < labels.size(); ++x) {
    const auto it = std::find(classes.begin(), classes.end(), labels[x]);
    if (it == classes.end()) throw StructuralError("label names an undeclared class: " + labels[x]);
    const auto i = static_cast<std::size_t>(it - classes.begin());
    used[i] = true;
    a(static_cast<Index>(x), static_cast<Index>(i)) = 1.0;
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!used[i]) throw StructuralError("class " + classes[i] + " is assigned no state");
  }
  return FuzzyPartition(std::move(classes), std::move(a));
}

namespace {

void require_compatible(const ReversibleChain& chain, const FuzzyPartition& partition) {
  if (partition.state_count() != chain.size()) {
    throw StructuralError("partition rows do not match the chain's state count");
  }
}

}  // namespace

Vector class_measure(const ReversibleChain& chain, const FuzzyPartition& partition) {
  require_compatible(chain, partition);
  return partition.membership().transpose() * chain.pi();
}

Vector restriction_measure(const ReversibleChain& chain, const FuzzyPartition& partition, Index i) {
  require_compatible(chain, partition);
  const auto support = partition.support(i);
  const double mass = partition.membership().col(i).dot(chain.pi());
  Vector out(static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Index x = support[k];
    out(static_cast<Index>(k)) = partition.membership()(x, i) * chain.pi()(x) / mass;
  }
  return out;
}

ReversibleChain projection_chain(const ReversibleChain& chain, const FuzzyPartition& partition) {
  require_compatible(chain, partition);
  const Matrix& a = partition.membership();
  const Vector pi_hat = class_measure(chain, partition);

  // Equilibrium flows pi(x)Q(x,y) with the y = x terms removed.
  Matrix flow = chain.pi().asDiagonal() * chain.generator();
  flow.diagonal().setZero();

  Matrix q_hat = pi_hat.cwiseInverse().asDiagonal() * (a.transpose() * flow * a);
  q_hat.diagonal().setZero();
  q_hat.diagonal() = -q_hat.rowwise().sum();
  return ReversibleChain(partition.classes(), pi_hat, std::move(q_hat));
}

Vector RestrictedChain::restrict(const Vector& f) const {
  Vector out(static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) out(static_cast<Index>(k)) = f(support[k]);
  return out;
}

RestrictedChain restriction_chain(const ReversibleChain& chain, const FuzzyPartition& partition,
                                  Index i) {
  require_compatible(chain, partition);
  auto support = partition.support(i);
  const auto m = static_cast<Index>(support.size());
  const Matrix& a = partition.membership();
  Matrix q = Matrix::Zero(m, m);
  std::vector<std::string> names;
  names.reserve(support.size());
  for (Index r = 0; r < m; ++r) {
    const Index x = support[static_cast<std::size_t>(r)];
    names.push_back(chain.states()[static_cast<std::size_t>(x)]);
    for (Index c = 0; c < m; ++c) {
      if (r == c) continue;
      const Index y = support[static_cast<std::size_t>(c)];
      q(r, c) = a(y, i) * chain.generator()(x, y);
    }
    q(r, r) = -q.row(r).sum();
  }
  Vector pi_i = restriction_measure(chain, partition, i);
  return RestrictedChain{i, std::move(support),
                         ReversibleChain(std::move(names), std::move(pi_i), std::move(q))};
}

Vector project_function(const ReversibleChain& chain, const FuzzyPartition& partition,
                        const Vector& f) {
  require_compatible(chain, partition);
  if (f.size() != chain.size()) throw StructuralError("project_function: f has wrong length");
  const Matrix& a = partition.membership();
  const Vector pi_hat = class_measure(chain, partition);
  Vector weighted = chain.pi().cwiseProduct(f);
  return (a.transpose() * weighted).cwiseQuotient(pi_hat);
}

Vector DecomposedSystem::embedded_measure(Index i, Index n_states) const {
  const auto& r = restrictions.at(static_cast<std::size_t>(i));
  Vector out = Vector::Zero(n_states);
  for (std::size_t k = 0; k < r.support.size(); ++k) {
    out(r.support[k]) = r.chain.pi()(static_cast<Index>(k));
  }
  return out;
}

Vector DecomposedSystem::project(const Vector& f) const {
  Vector out(class_count());
  for (Index i = 0; i < class_count(); ++i) {
    const auto& r = restrictions[static_cast<std::size_t>(i)];
    out(i) = r.chain.pi().dot(r.restrict(f));
  }
  return out;
}

DecomposedSystem decompose(const ReversibleChain& chain, const FuzzyPartition& partition) {
  const auto report = validate_partition(partition, chain.size());
  if (!report.empty()) {
    throw DomainError("invalid fuzzy partition: " + report.front().invariant + " (" +
                      report.front().detail + ")");
  }
  DecomposedSystem system{class_measure(chain, partition), projection_chain(chain, partition), {}};
  for (Index i = 0; i < partition.class_count(); ++i) {
    system.restrictions.push_back(restriction_chain(chain, partition, i));
  }
  return system;
}

}  // namespace fuzzymc
