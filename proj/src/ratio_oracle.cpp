#include "fuzzymc/ratio_oracle.hpp"

#include "fuzzymc/functionals.hpp"

#include <cmath>
#include <random>

namespace fuzzymc {

namespace {

class OracleSearch {
 public:
  OracleSearch(const ReversibleChain& chain, PsiKind kind, double min_denominator)
      : chain_(chain), kind_(kind), min_denominator_(min_denominator), f_(chain.size()) {
    f_(0) = kind == PsiKind::Poincare ? 0.0 : 1.0;
  }

  void evaluate(const Vector& params) {
    for (Index k = 0; k < params.size(); ++k) {
      f_(k + 1) = kind_ == PsiKind::Poincare ? params(k) : std::pow(10.0, params(k));
    }
    ++result.evaluations;
    if (kind_ != PsiKind::Poincare && !(f_.minCoeff() > 0.0 && std::isfinite(f_.maxCoeff()))) return;
    const double den = global_functional(chain_.pi(), f_, kind_);
    if (!(den >= min_denominator_)) return;
    const double value = dirichlet_form(chain_, f_, kind_) / den;
    if (value < result.value) {
      result.value = value;
      result.minimizer = f_;
      best_params = params;
    }
  }

  // Full tensor grid with `points` nodes per axis on [lo, hi]^d.
  void grid(const Vector& lo, const Vector& hi, Index points) {
    const Index d = lo.size();
    std::vector<Index> counter(static_cast<std::size_t>(d), 0);
    Vector params(d);
    while (true) {
      for (Index k = 0; k < d; ++k) {
        const double u = points == 1 ? 0.5 : static_cast<double>(counter[static_cast<std::size_t>(k)]) /
                                                 static_cast<double>(points - 1);
        params(k) = lo(k) + u * (hi(k) - lo(k));
      }
      evaluate(params);
      Index k = 0;
      while (k < d && ++counter[static_cast<std::size_t>(k)] == points) {
        counter[static_cast<std::size_t>(k)] = 0;
        ++k;
      }
      if (k == d) break;
    }
  }

  void cloud(const Vector& lo, const Vector& hi, Index samples, std::mt19937_64& engine) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector params(lo.size());
    for (Index s = 0; s < samples; ++s) {
      for (Index k = 0; k < lo.size(); ++k) params(k) = lo(k) + unit(engine) * (hi(k) - lo(k));
      evaluate(params);
    }
  }

  OracleResult result;
  Vector best_params;

 private:
  const ReversibleChain& chain_;
  PsiKind kind_;
  double min_denominator_;
  Vector f_;
};

}  // namespace

std::optional<OracleResult> brute_force_ratio_oracle(const ReversibleChain& chain, PsiKind kind,
                                                     const GridSpec& grid) {
  const Index n = chain.size();
  if (n < 2) return std::nullopt;
  const Index d = n - 1;
  const double lo_value = kind == PsiKind::Poincare ? -1.0 : grid.log10_min;
  const double hi_value = kind == PsiKind::Poincare ? 1.0 : grid.log10_max;
  Vector lo = Vector::Constant(d, lo_value);
  Vector hi = Vector::Constant(d, hi_value);

  OracleSearch search(chain, kind, grid.min_denominator);
  std::mt19937_64 engine(grid.seed);
  const bool full_grid = n <= 4;
  if (full_grid) {
    const Index points = n == 2 ? grid.points_2 : (n == 3 ? grid.points_3 : grid.points_4);
    search.grid(lo, hi, points);
  } else {
    search.cloud(lo, hi, grid.random_samples, engine);
  }
  if (!std::isfinite(search.result.value)) return std::nullopt;

  double half_width = (hi_value - lo_value) / 2.0;
  for (int level = 0; level < grid.zoom_levels; ++level) {
    half_width *= grid.zoom_factor;
    const Vector center = search.best_params;
    const Vector zoom_lo = center.array() - half_width;
    const Vector zoom_hi = center.array() + half_width;
    if (full_grid) {
      auto per_axis = static_cast<Index>(
          std::floor(std::pow(static_cast<double>(grid.zoom_samples), 1.0 / static_cast<double>(d))));
      if (per_axis % 2 == 0) ++per_axis;  // keep the incumbent on the grid
      search.grid(zoom_lo, zoom_hi, std::max<Index>(per_axis, 3));
    } else {
      search.cloud(zoom_lo, zoom_hi, grid.zoom_samples, engine);
    }
  }
  return search.result;
}

}  // namespace fuzzymc
