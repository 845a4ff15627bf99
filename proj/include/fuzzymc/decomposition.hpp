#pragma once

#include "fuzzymc/chain.hpp"

#include <span>
#include <string>
#include <vector>

namespace fuzzymc {

/// Membership map a(x, i) in [0, 1]: one row per state, one column per class.
/// Construction checks shapes only; validate_partition checks the two
/// membership conditions (unit rows, no empty class).
class FuzzyPartition {
 public:
  FuzzyPartition(std::vector<std::string> classes, Matrix membership);

  Index class_count() const { return static_cast<Index>(classes_.size()); }
  Index state_count() const { return membership_.rows(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const Matrix& membership() const { return membership_; }
  Index class_index(std::string_view id) const;

  /// Lambda_i = {x : a_i(x) > 0}, exact comparison, ascending state order.
  std::vector<Index> support(Index i) const;

 private:
  std::vector<std::string> classes_;
  Matrix membership_;
};

inline constexpr double kMembershipRowTolerance = 1e-12;

ValidationReport validate_partition(const FuzzyPartition& partition, Index n_states);

/// 0/1 membership from one label per state. Classes default to the labels in
/// order of first appearance; when given explicitly, each must be used.
FuzzyPartition exact_partition_from_labels(std::span<const std::string> labels,
                                           std::vector<std::string> classes = {});

/// pi_hat(i) = sum_x a_i(x) pi(x).
Vector class_measure(const ReversibleChain& chain, const FuzzyPartition& partition);

/// pi_i on Lambda_i (compact indexing, same order as partition.support(i)).
Vector restriction_measure(const ReversibleChain& chain, const FuzzyPartition& partition, Index i);

/// Q_hat with off-diagonal (1/pi_hat(i)) sum_x sum_{y != x} a_i(x) a_j(y) pi(x) Q(x,y),
/// returned as a chain on the class ids with stationary measure pi_hat.
ReversibleChain projection_chain(const ReversibleChain& chain, const FuzzyPartition& partition);

/// Q_i on Lambda_i together with the map from local to global state indices.
struct RestrictedChain {
  Index class_index = 0;
  std::vector<Index> support;
  ReversibleChain chain;

  /// f restricted to Lambda_i.
  Vector restrict(const Vector& f) const;
};

/// Q_i(x,y) = a_i(y) Q(x,y) for x != y on Lambda_i, rows completed to zero.
RestrictedChain restriction_chain(const ReversibleChain& chain, const FuzzyPartition& partition,
                                  Index i);

/// f_hat(i) = E_{pi_i}[f restricted to Lambda_i].
Vector project_function(const ReversibleChain& chain, const FuzzyPartition& partition,
                        const Vector& f);

/// All derived objects of one (chain, partition) pair.
struct DecomposedSystem {
  Vector pi_hat;
  ReversibleChain projection;
  std::vector<RestrictedChain> restrictions;

  Index class_count() const { return pi_hat.size(); }
  const Matrix& q_hat() const { return projection.generator(); }
  /// pi_i extended by zero to the full state space.
  Vector embedded_measure(Index i, Index n_states) const;
  /// f_hat computed from the stored restriction measures.
  Vector project(const Vector& f) const;
};

DecomposedSystem decompose(const ReversibleChain& chain, const FuzzyPartition& partition);

}  // namespace fuzzymc
