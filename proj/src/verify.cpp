#include "fuzzymc/verify.hpp"

#include "fuzzymc/functionals.hpp"
#include "fuzzymc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fuzzymc {

namespace {

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    0x7665u};
  return std::mt19937_64(seq);
}

double mean_gap(const DecomposedSystem& system, const ReversibleChain& chain, const Vector& f,
                const Vector& f_hat) {
  const double mean = chain.pi().dot(f);
  return std::abs(system.pi_hat.dot(f_hat) - mean) / std::max(1.0, std::abs(mean));
}

template <typename Sampler, typename Residual>
IdentityCheck run_identity_check(const ReversibleChain& chain, const FuzzyPartition& partition,
                                 int trials, std::uint64_t seed, unsigned threads, Sampler sample,
                                 Residual residual) {
  const auto system = decompose(chain, partition);
  std::vector<double> residuals(static_cast<std::size_t>(trials), 0.0);
  std::vector<double> gaps(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, threads, [&](Index t) {
    auto engine = trial_engine(seed, static_cast<std::uint64_t>(t));
    const Vector f = sample(engine, chain.size());
    residuals[static_cast<std::size_t>(t)] = residual(system, chain, f);
    gaps[static_cast<std::size_t>(t)] = mean_gap(system, chain, f, system.project(f));
  });
  IdentityCheck check;
  check.trials = trials;
  for (int t = 0; t < trials; ++t) {
    check.max_residual = std::max(check.max_residual, residuals[static_cast<std::size_t>(t)]);
    check.max_mean_gap = std::max(check.max_mean_gap, gaps[static_cast<std::size_t>(t)]);
  }
  check.pass = check.max_residual <= kIdentityTolerance &&
               check.max_mean_gap <= kMeanPreservationTolerance;
  return check;
}

}  // namespace

double variance_decomposition_residual(const DecomposedSystem& system, const ReversibleChain& chain,
                                       const Vector& f) {
  double within = 0.0;
  for (Index i = 0; i < system.class_count(); ++i) {
    const auto& r = system.restrictions[static_cast<std::size_t>(i)];
    within += system.pi_hat(i) * variance(r.chain.pi(), r.restrict(f));
  }
  const double between = variance(system.pi_hat, system.project(f));
  return std::abs(variance(chain.pi(), f) - within - between);
}

double entropy_decomposition_residual(const DecomposedSystem& system, const ReversibleChain& chain,
                                      const Vector& f) {
  double within = 0.0;
  for (Index i = 0; i < system.class_count(); ++i) {
    const auto& r = system.restrictions[static_cast<std::size_t>(i)];
    within += system.pi_hat(i) * entropy(r.chain.pi(), r.restrict(f));
  }
  const double between = entropy(system.pi_hat, system.project(f));
  return std::abs(entropy(chain.pi(), f) - within - between);
}

IdentityCheck check_variance_decomposition(const ReversibleChain& chain,
                                           const FuzzyPartition& partition, int trials,
                                           std::uint64_t seed, unsigned threads) {
  return run_identity_check(
      chain, partition, trials, seed, threads,
      [](std::mt19937_64& engine, Index n) {
        std::normal_distribution<double> normal;
        Vector f(n);
        for (Index x = 0; x < n; ++x) f(x) = normal(engine);
        return f;
      },
      variance_decomposition_residual);
}

IdentityCheck check_entropy_decomposition(const ReversibleChain& chain,
                                          const FuzzyPartition& partition, int trials,
                                          std::uint64_t seed, unsigned threads) {
  return run_identity_check(
      chain, partition, trials, seed, threads,
      [](std::mt19937_64& engine, Index n) {
        std::uniform_real_distribution<double> exponent(-3.0, 3.0);
        Vector f(n);
        for (Index x = 0; x < n; ++x) f(x) = std::exp(exponent(engine));
        return f;
      },
      entropy_decomposition_residual);
}

double dirichlet_slack(const ReversibleChain& chain, const DecomposedSystem& system, double chi,
                       const Vector& f, PsiKind kind) {
  double restricted = 0.0;
  for (Index i = 0; i < system.class_count(); ++i) {
    const auto& r = system.restrictions[static_cast<std::size_t>(i)];
    restricted += system.pi_hat(i) * dirichlet_form(r.chain, r.restrict(f), kind);
  }
  double projected = 0.0;
  if (std::isfinite(chi)) {
    projected = chi_times(chi, dirichlet_form(system.projection, system.project(f), kind));
  }
  return dirichlet_form(chain, f, kind) - restricted - projected;
}

InequalityCheck check_dirichlet_inequality(const ReversibleChain& chain,
                                           const FuzzyPartition& partition,
                                           const CouplingSet& couplings, PsiKind kind, int trials,
                                           std::uint64_t seed, unsigned threads) {
  const auto system = decompose(chain, partition);
  InequalityCheck check;
  check.kind = kind;
  check.trials = trials;
  check.chi = quality_chi(chain, partition, system, couplings).value;
  std::vector<double> slacks(static_cast<std::size_t>(trials), kInfinity);
  parallel_for(trials, threads, [&](Index t) {
    auto engine = trial_engine(seed, static_cast<std::uint64_t>(t));
    std::normal_distribution<double> normal;
    Vector f(chain.size());
    for (Index x = 0; x < f.size(); ++x) f(x) = std::exp(3.0 * normal(engine));
    slacks[static_cast<std::size_t>(t)] = dirichlet_slack(chain, system, check.chi, f, kind);
  });
  for (const double s : slacks) check.min_slack = std::min(check.min_slack, s);
  check.pass = trials == 0 || check.min_slack >= -kDirichletSlackTolerance;
  return check;
}

namespace {

double constant_of(const ReversibleChain& chain, PsiKind kind, const RatioOptions& options) {
  if (chain.size() == 1) return kInfinity;
  if (kind == PsiKind::Poincare) return poincare_constant(chain);
  return ratio_minimize(chain, kind, options).value;
}

}  // namespace

BoundVerdict check_theorem_bound(const ReversibleChain& chain, const FuzzyPartition& partition,
                                 const CouplingSet& couplings, PsiKind kind,
                                 const VerifyOptions& options) {
  const auto system = decompose(chain, partition);
  BoundVerdict verdict;
  verdict.kind = kind;
  verdict.chi = quality_chi(chain, partition, system, couplings).value;
  verdict.lhs = constant_of(chain, kind, options.ratio);
  verdict.projection_constant = constant_of(system.projection, kind, options.ratio);
  verdict.projection_term = chi_times(verdict.chi, verdict.projection_constant);

  double class_min = kInfinity;
  for (const auto& r : system.restrictions) {
    const double c = constant_of(r.chain, kind, options.ratio);
    verdict.class_constants.push_back({partition.classes()[static_cast<std::size_t>(r.class_index)], c});
    class_min = std::min(class_min, c);
    if (r.chain.size() > 1 && !is_irreducible(r.chain.generator())) {
      verdict.notes.push_back("restriction chain of class " +
                              partition.classes()[static_cast<std::size_t>(r.class_index)] +
                              " is reducible; its constant is 0");
    }
  }
  if (system.projection.size() > 1 && !is_irreducible(system.q_hat())) {
    verdict.notes.push_back("projection chain is reducible; its constant is 0");
  }
  verdict.rhs = std::min(verdict.projection_term, class_min);

  if (kind == PsiKind::Poincare) {
    verdict.tolerance = options.poincare_tolerance;
    verdict.pass = verdict.lhs == kInfinity || verdict.lhs >= verdict.rhs - verdict.tolerance;
    std::ostringstream note;
    note << "exact spectral constants; absolute tolerance " << verdict.tolerance;
    verdict.notes.push_back(note.str());
  } else {
    verdict.tolerance = kEstimatedVerdictTolerance;
    verdict.relative_tolerance = true;
    verdict.advisory = true;
    verdict.pass = verdict.lhs == kInfinity || verdict.lhs >= verdict.rhs * (1.0 - verdict.tolerance);
    verdict.notes.push_back(
        "advisory: both sides are ratio-minimization upper bounds; relative tolerance 1e-3");
  }
  verdict.slack = (std::isinf(verdict.lhs) && std::isinf(verdict.rhs)) ? 0.0 : verdict.lhs - verdict.rhs;
  return verdict;
}

bool FullReport::valid() const {
  if (!chain_violations.empty() || !partition_violations.empty()) return false;
  return std::all_of(coupling_violations.begin(), coupling_violations.end(),
                     [](const auto& entry) { return entry.second.empty(); });
}

bool FullReport::poincare_passes() const {
  if (!valid()) return false;
  return std::any_of(verdicts.begin(), verdicts.end(), [](const BoundVerdict& v) {
    return v.kind == PsiKind::Poincare && v.pass;
  });
}

FullReport full_report(const ReversibleChain& chain, const FuzzyPartition& partition,
                       const CouplingSet& couplings, const VerifyOptions& options) {
  FullReport report;
  report.chain_violations = validate_chain(chain);
  report.partition_violations = validate_partition(partition, chain.size());
  if (!report.chain_violations.empty() || !report.partition_violations.empty()) {
    report.warnings.push_back("instance failed validation; decomposition skipped");
    return report;
  }

  report.system = decompose(chain, partition);
  const auto& system = *report.system;
  const auto& classes = partition.classes();
  for (const auto& c : couplings.couplings()) {
    const std::string key = classes.at(static_cast<std::size_t>(c.i)) + "->" +
                            classes.at(static_cast<std::size_t>(c.j));
    report.coupling_violations.emplace_back(
        key, validate_coupling(c, system.embedded_measure(c.i, chain.size()),
                               system.embedded_measure(c.j, chain.size())));
    if (!report.coupling_violations.back().second.empty()) {
      report.warnings.push_back("coupling " + key + " fails its marginal constraints");
    }
  }

  const auto chi = quality_chi(chain, partition, system, couplings);
  report.chi = chi.value;
  for (const auto& w : chi.warnings) report.warnings.push_back(w);

  if (partition.class_count() == 1) {
    report.warnings.push_back("single class: the projection chain is trivial and the bound reduces to the restriction");
  }
  if (chi.value == 0.0) {
    report.warnings.push_back("chi = 0: the bound is vacuous (right-hand side is 0)");
  }
  if (!validate_chain(system.projection).empty()) {
    report.warnings.push_back("projection chain fails chain validation");
  }
  for (const auto& r : system.restrictions) {
    if (!validate_chain(r.chain).empty()) {
      report.warnings.push_back("restriction chain of class " + classes[static_cast<std::size_t>(r.class_index)] +
                                " fails chain validation");
    }
  }

  report.variance = check_variance_decomposition(chain, partition, options.trials, options.seed,
                                                 options.threads);
  report.entropy = check_entropy_decomposition(chain, partition, options.trials, options.seed,
                                               options.threads);
  for (const auto kind : {PsiKind::Poincare, PsiKind::Mlsi, PsiKind::Lsi}) {
    report.dirichlet.push_back(check_dirichlet_inequality(chain, partition, couplings, kind,
                                                          options.trials, options.seed,
                                                          options.threads));
  }
  for (const auto kind : {PsiKind::Poincare, PsiKind::Mlsi, PsiKind::Lsi}) {
    auto verdict = check_theorem_bound(chain, partition, couplings, kind, options);
    if (kind == PsiKind::Poincare) {
      for (const auto& note : verdict.notes) {
        if (note.find("reducible") != std::string::npos) report.warnings.push_back(note);
      }
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

}  // namespace fuzzymc
