#include "fuzzymc/constants.hpp"

#include "fuzzymc/functionals.hpp"
#include "fuzzymc/jacobi.hpp"
#include "fuzzymc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fuzzymc {

SpectralGap spectral_gap(const ReversibleChain& chain) {
  require_valid(chain);
  const Index n = chain.size();
  SpectralGap gap;
  if (n == 1) {
    gap.lambda = kInfinity;
    gap.eigenvalues = Vector::Zero(1);
    gap.fiedler = Vector::Zero(1);
    return gap;
  }
  const Vector root = chain.pi().cwiseSqrt();
  const Matrix sym = root.asDiagonal() * (-chain.generator()) * root.cwiseInverse().asDiagonal();
  const auto eig = jacobi_eigen(sym);
  gap.eigenvalues = eig.values;
  gap.lambda = eig.values(1);
  if (gap.lambda < kReducibilityThreshold) {
    gap.lambda = 0.0;
    gap.reducible = true;
  }
  Vector v = eig.vectors.col(1).cwiseQuotient(root);
  v /= std::sqrt(chain.pi().dot(v.cwiseAbs2()));
  for (Index x = 0; x < n; ++x) {
    if (std::abs(v(x)) > 1e-12) {
      if (v(x) < 0.0) v = -v;
      break;
    }
  }
  gap.fiedler = std::move(v);
  return gap;
}

double poincare_constant(const ReversibleChain& chain) { return spectral_gap(chain).lambda; }

double functional_ratio(const ReversibleChain& chain, const Vector& f, PsiKind kind) {
  const double den = global_functional(chain.pi(), f, kind);
  return dirichlet_form(chain, f, kind) / den;
}

namespace {

std::mt19937_64 restart_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6d63u};
  return std::mt19937_64(seq);
}

// The ratio as a function of the log-coordinates g (f = exp(g)), or of f itself
// for Poincare. Pair kernels are written in g so that near-constant f keeps
// full relative accuracy.
class RatioObjective {
 public:
  RatioObjective(const ReversibleChain& chain, PsiKind kind, double min_denominator)
      : pi_(chain.pi()), kind_(kind), min_denominator_(min_denominator) {
    Matrix flow = chain.pi().asDiagonal() * chain.generator();
    flow.diagonal().setZero();
    weights_ = (flow + flow.transpose()) / 2.0;
  }

  PsiKind kind() const { return kind_; }

  Vector to_f(const Vector& g) const {
    return kind_ == PsiKind::Poincare ? g : Vector(g.array().exp().matrix());
  }

  void center(Vector& g) const {
    g.array() -= pi_.dot(g);
    if (kind_ == PsiKind::Poincare) {
      const double norm = std::sqrt(pi_.dot(g.cwiseAbs2()));
      if (norm > 0.0) g /= norm;
    }
  }

  double pair(double gx, double gy) const {
    const double d = gx - gy;
    switch (kind_) {
      case PsiKind::Poincare:
        return d * d;
      case PsiKind::Mlsi:
        return std::exp(gy) * std::expm1(d) * d;
      case PsiKind::Lsi: {
        const double e = std::expm1(d / 2.0);
        return std::exp(gy) * e * e;
      }
    }
    return 0.0;
  }

  double numerator(const Vector& g) const {
    double acc = 0.0;
    for (Index y = 1; y < g.size(); ++y)
      for (Index x = 0; x < y; ++x)
        if (weights_(x, y) != 0.0) acc += weights_(x, y) * pair(g(x), g(y));
    return acc;
  }

  double denominator(const Vector& g) const {
    if (kind_ == PsiKind::Poincare) return variance(pi_, g);
    return entropy(pi_, Vector(g.array().exp().matrix()));
  }

  bool admissible(const Vector& g) const {
    return kind_ == PsiKind::Poincare || g.cwiseAbs().maxCoeff() <= 300.0;
  }

  double value(const Vector& g) const {
    if (!admissible(g)) return kInfinity;
    const double den = denominator(g);
    if (!(den >= min_denominator_)) return kInfinity;
    return numerator(g) / den;
  }

  // Central differences with step h, updating only the terms that touch x.
  Vector gradient(Vector g, double h) const {
    const Index n = g.size();
    const double base_num = numerator(g);
    Vector grad = Vector::Zero(n);
    for (Index x = 0; x < n; ++x) {
      const double gx = g(x);
      double side[2] = {kInfinity, kInfinity};
      for (int s = 0; s < 2; ++s) {
        const double shifted = gx + (s == 0 ? h : -h);
        double delta = 0.0;
        for (Index y = 0; y < n; ++y) {
          if (y == x || weights_(x, y) == 0.0) continue;
          delta += weights_(x, y) * (pair(shifted, g(y)) - pair(gx, g(y)));
        }
        g(x) = shifted;
        if (admissible(g)) {
          const double den = denominator(g);
          if (den >= min_denominator_) side[s] = (base_num + delta) / den;
        }
        g(x) = gx;
      }
      if (std::isfinite(side[0]) && std::isfinite(side[1])) grad(x) = (side[0] - side[1]) / (2.0 * h);
    }
    return grad;
  }

 private:
  Vector pi_;
  PsiKind kind_;
  double min_denominator_;
  Matrix weights_;
};

struct RestartOutcome {
  double value = kInfinity;
  Vector g;
  long iterations = 0;
};

RestartOutcome descend(const RatioObjective& objective, Vector g, const RatioOptions& options) {
  RestartOutcome out;
  objective.center(g);
  double current = objective.value(g);
  if (!std::isfinite(current)) return out;

  std::vector<double> history{current};
  double step = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Vector grad = objective.gradient(g, options.fd_step);
    const double grad_sq = grad.squaredNorm();
    if (!(grad_sq > 0.0)) break;
    const double grad_norm = std::sqrt(grad_sq);
    if (step == 0.0) step = 0.1 * std::max(g.norm(), 1e-8) / grad_norm;
    step *= 2.0;

    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving) {
      Vector trial = g - step * grad;
      objective.center(trial);
      const double value = objective.value(trial);
      if (value <= current - 1e-4 * step * grad_sq) {
        g = std::move(trial);
        current = value;
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    ++out.iterations;
    if (!accepted) break;
    history.push_back(current);
    const auto window = static_cast<std::size_t>(options.stall_window);
    if (history.size() > window) {
      const double earlier = history[history.size() - 1 - window];
      if (earlier - current <= options.stall_tolerance * std::abs(current)) break;
    }
  }
  out.value = current;
  out.g = std::move(g);
  return out;
}

std::vector<Vector> informed_starts(const ReversibleChain& chain, PsiKind kind) {
  std::vector<Vector> starts;
  if (kind == PsiKind::Poincare) return starts;
  const Index n = chain.size();
  const auto labels = component_labels(chain.generator());
  if (std::any_of(labels.begin(), labels.end(), [](Index l) { return l != 0; })) {
    // A component indicator has zero Dirichlet form.
    Vector g(n);
    for (Index x = 0; x < n; ++x) g(x) = labels[static_cast<std::size_t>(x)] == 0 ? 1.0 : 0.0;
    starts.push_back(std::move(g));
  }
  // Near-constant perturbations along the spectral-gap eigenvector approach the
  // small-perturbation limits 2*lambda (MLSI) and lambda/2 (LSI); larger
  // amplitudes seed the interior.
  const Vector v = spectral_gap(chain).fiedler;
  for (const double amplitude : {1e-4, -1e-4, 1.0, -1.0}) starts.push_back(amplitude * v);
  return starts;
}

}  // namespace

RatioEstimate ratio_minimize(const ReversibleChain& chain, PsiKind kind, const RatioOptions& options) {
  if (options.restarts < 1) throw DomainError("ratio_minimize: restarts must be at least 1");
  require_valid(chain);
  const Index n = chain.size();
  const RatioObjective objective(chain, kind, options.min_denominator);
  const auto informed = informed_starts(chain, kind);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(options.restarts));
  parallel_for(options.restarts, options.threads, [&](Index r) {
    Vector g;
    if (static_cast<std::size_t>(r) < informed.size()) {
      g = informed[static_cast<std::size_t>(r)];
    } else {
      auto engine = restart_engine(options.seed, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal;
      std::uniform_real_distribution<double> amplitude(0.05, 3.0);
      const double scale = kind == PsiKind::Poincare ? 1.0 : amplitude(engine);
      g.resize(n);
      for (Index x = 0; x < n; ++x) g(x) = scale * normal(engine);
    }
    outcomes[static_cast<std::size_t>(r)] = descend(objective, std::move(g), options);
  });

  RatioEstimate best;
  best.kind = kind;
  best.restarts = options.restarts;
  best.seed = options.seed;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const auto& o = outcomes[r];
    best.iterations += o.iterations;
    if (!std::isfinite(o.value)) continue;
    const Vector f = objective.to_f(o.g);
    double value = kInfinity;
    try {
      value = functional_ratio(chain, f, kind);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(value)) continue;
    ++best.valid_restarts;
    if (value < best.value) {
      best.value = value;
      best.minimizer = f;
      best.best_restart = static_cast<int>(r);
    }
  }
  if (best.valid_restarts == 0) throw DomainError("ratio_minimize: no valid candidate");
  return best;
}

ConstantsReport estimate_constants(const ReversibleChain& chain, const RatioOptions& options) {
  ConstantsReport report;
  if (chain.size() == 1) {
    require_valid(chain);
    report.lambda = kInfinity;
    report.alpha_est.kind = PsiKind::Mlsi;
    report.rho_est.kind = PsiKind::Lsi;
    for (auto* est : {&report.alpha_est, &report.rho_est}) {
      est->value = kInfinity;
      est->minimizer = Vector::Ones(1);
      est->seed = options.seed;
    }
    report.warnings.push_back("single-state chain: every functional vanishes, constants are +inf");
    return report;
  }
  const auto gap = spectral_gap(chain);
  report.lambda = gap.lambda;
  if (gap.reducible) report.warnings.push_back("chain is reducible: all three constants are 0");
  report.alpha_est = ratio_minimize(chain, PsiKind::Mlsi, options);
  report.rho_est = ratio_minimize(chain, PsiKind::Lsi, options);

  const double alpha = report.alpha_est.value;
  const double rho = report.rho_est.value;
  if (2.0 * report.lambda < alpha * (1.0 - kOrderingSlack)) {
    std::ostringstream msg;
    msg << "ordering 2*lambda >= alpha_est violated beyond slack: 2*lambda = " << 2.0 * report.lambda
        << ", alpha_est = " << alpha;
    report.warnings.push_back(msg.str());
  }
  if (alpha < 4.0 * rho * (1.0 - kOrderingSlack)) {
    std::ostringstream msg;
    msg << "ordering alpha_est >= 4*rho_est violated beyond slack: alpha_est = " << alpha
        << ", 4*rho_est = " << 4.0 * rho;
    report.warnings.push_back(msg.str());
  }
  return report;
}

}  // namespace fuzzymc
