#pragma once

#include "fuzzymc/chain.hpp"

#include <cstdint>
#include <optional>

namespace fuzzymc {

/// Search region for the brute-force ratio oracle. For MLSI/LSI the free
/// coordinates are log10 f(x) with f(0) = 1; for Poincare they are f(x) with
/// f(0) = 0 (the quotient is invariant under shifts and scaling).
struct GridSpec {
  double log10_min = -6.0;
  double log10_max = 6.0;
  /// Full-grid resolution per free coordinate, by state count (2, 3, 4).
  Index points_2 = 100000;
  Index points_3 = 2001;
  Index points_4 = 121;
  /// Random cloud size for chains with more than 4 states.
  Index random_samples = 1000000;
  /// Zoom passes around the incumbent: each shrinks the box by zoom_factor
  /// and resamples it (grid for <= 4 states, random otherwise).
  int zoom_levels = 12;
  double zoom_factor = 0.2;
  Index zoom_samples = 100000;
  std::uint64_t seed = 0;
  double min_denominator = 1e-12;
};

struct OracleResult {
  double value = kInfinity;
  Vector minimizer;
  Index evaluations = 0;
};

/// Derivative-free minimization of the same ratio that ratio_minimize targets,
/// by exhaustive grids and random clouds only. Returns nullopt when no
/// non-constant candidate exists (single-state chain).
std::optional<OracleResult> brute_force_ratio_oracle(const ReversibleChain& chain, PsiKind kind,
                                                     const GridSpec& grid = {});

}  // namespace fuzzymc
