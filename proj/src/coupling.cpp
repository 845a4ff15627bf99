#include "fuzzymc/coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace fuzzymc {

double Coupling::total_mass() const {
  double m = 0.0;
  for (const auto& atom : support) m += atom.mass;
  return m;
}

Coupling Coupling::transposed() const {
  Coupling out{j, i, {}};
  out.support.reserve(support.size());
  for (const auto& atom : support) out.support.push_back({atom.y, atom.x, atom.mass});
  return out;
}

const Coupling* CouplingSet::find(Index i, Index j) const {
  for (const auto& c : couplings_) {
    if (c.i == i && c.j == j) return &c;
  }
  return nullptr;
}

void CouplingSet::add(Coupling c) {
  if (find(c.i, c.j) != nullptr) throw StructuralError("duplicate coupling for a class pair");
  couplings_.push_back(std::move(c));
}

ValidationReport validate_coupling(const Coupling& coupling, const Vector& pi_i, const Vector& pi_j) {
  const Index n = pi_i.size();
  if (pi_j.size() != n) throw StructuralError("validate_coupling: measure length mismatch");
  Vector row = Vector::Zero(n);
  Vector col = Vector::Zero(n);
  ValidationReport report;
  Violation nonpositive{"coupling-mass-positive", -1, -1, 0.0, 0, "atom with nonpositive mass"};
  for (const auto& atom : coupling.support) {
    if (atom.x < 0 || atom.x >= n || atom.y < 0 || atom.y >= n) {
      throw StructuralError("coupling atom index out of range");
    }
    if (!(pi_i(atom.x) > 0.0) || !(pi_j(atom.y) > 0.0)) {
      std::ostringstream msg;
      msg << "coupling atom (" << atom.x << "," << atom.y << ") lies outside the class supports";
      throw StructuralError(msg.str());
    }
    if (!(atom.mass > 0.0)) {
      if (nonpositive.count == 0 || -atom.mass > nonpositive.magnitude) {
        nonpositive.row = atom.x;
        nonpositive.col = atom.y;
        nonpositive.magnitude = -atom.mass;
      }
      ++nonpositive.count;
    }
    row(atom.x) += atom.mass;
    col(atom.y) += atom.mass;
  }
  if (nonpositive.count > 0) report.push_back(nonpositive);

  const double mass_gap = std::abs(coupling.total_mass() - 1.0);
  if (mass_gap > kCouplingMassTolerance) {
    report.push_back({"coupling-total-mass", -1, -1, mass_gap, 1, "total mass differs from 1"});
  }
  auto check_marginal = [&](const Vector& got, const Vector& want, const char* name,
                            bool is_row) {
    Violation v{name, -1, -1, 0.0, 0, is_row ? "x-marginal differs from pi_i" : "y-marginal differs from pi_j"};
    for (Index s = 0; s < n; ++s) {
      const double gap = std::abs(got(s) - want(s));
      if (gap > kCouplingMarginalTolerance) {
        if (gap > v.magnitude) {
          v.magnitude = gap;
          (is_row ? v.row : v.col) = s;
        }
        ++v.count;
      }
    }
    if (v.count > 0) report.push_back(v);
  };
  check_marginal(row, pi_i, "coupling-first-marginal", true);
  check_marginal(col, pi_j, "coupling-second-marginal", false);
  return report;
}

Coupling product_coupling(Index i, Index j, const Vector& pi_i, const Vector& pi_j) {
  Coupling out{i, j, {}};
  for (Index x = 0; x < pi_i.size(); ++x) {
    if (!(pi_i(x) > 0.0)) continue;
    for (Index y = 0; y < pi_j.size(); ++y) {
      if (!(pi_j(y) > 0.0)) continue;
      out.support.push_back({x, y, pi_i(x) * pi_j(y)});
    }
  }
  return out;
}

std::vector<std::pair<Index, Index>> active_pairs(const DecomposedSystem& system) {
  std::vector<std::pair<Index, Index>> pairs;
  const Matrix& q_hat = system.q_hat();
  for (Index i = 0; i < q_hat.rows(); ++i) {
    for (Index j = 0; j < q_hat.cols(); ++j) {
      if (i != j && q_hat(i, j) > 0.0) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

CouplingSet product_couplings(const DecomposedSystem& system, Index n_states) {
  CouplingSet out;
  for (const auto& [i, j] : active_pairs(system)) {
    out.add(product_coupling(i, j, system.embedded_measure(i, n_states),
                             system.embedded_measure(j, n_states)));
  }
  return out;
}

CouplingSet symmetric_completion(const CouplingSet& couplings) {
  CouplingSet out = couplings;
  for (const auto& c : couplings.couplings()) {
    if (out.find(c.j, c.i) == nullptr) out.add(c.transposed());
  }
  return out;
}

ChiResult quality_chi(const ReversibleChain& chain, const FuzzyPartition& partition,
                      const DecomposedSystem& system, const CouplingSet& couplings) {
  const Matrix& a = partition.membership();
  const Matrix& q = chain.generator();
  const Vector& pi = chain.pi();
  const Matrix& q_hat = system.q_hat();
  ChiResult result;
  bool left_edge_set = false;

  const auto pairs = active_pairs(system);
  for (const auto& [i, j] : pairs) {
    const Coupling* kappa = couplings.find(i, j);
    if (kappa == nullptr) {
      std::ostringstream msg;
      msg << "no coupling supplied for classes (" << partition.classes()[static_cast<std::size_t>(i)]
          << ", " << partition.classes()[static_cast<std::size_t>(j)] << ") although Q_hat > 0";
      throw MissingCouplingError(i, j, msg.str());
    }
    for (const auto& atom : kappa->support) {
      if (atom.x == atom.y || !(atom.mass > 0.0)) continue;
      const double denominator = system.pi_hat(i) * q_hat(i, j) * atom.mass;
      if (!(denominator >= 1e-300)) {
        throw StructuralError("quality_chi: denominator underflow; coupling or partition malformed");
      }
      const double numerator = a(atom.x, i) * a(atom.y, j) * pi(atom.x) * q(atom.x, atom.y);
      if (q(atom.x, atom.y) == 0.0) left_edge_set = true;
      const double ratio = numerator / denominator;
      ++result.candidates;
      if (ratio < result.value) {
        result.value = ratio;
        result.argmin = std::array<Index, 4>{atom.x, atom.y, i, j};
      }
    }
  }

  for (const auto& c : couplings.couplings()) {
    if (std::find(pairs.begin(), pairs.end(), std::pair<Index, Index>{c.i, c.j}) == pairs.end()) {
      result.warnings.push_back("coupling for classes (" +
                                partition.classes()[static_cast<std::size_t>(c.i)] + ", " +
                                partition.classes()[static_cast<std::size_t>(c.j)] +
                                ") ignored: Q_hat is not positive there");
    }
  }
  if (left_edge_set) {
    result.warnings.push_back(
        "coupling support contains pairs with Q(x,y) = 0; chi is 0 and the projection term vanishes");
  }
  if (result.candidates == 0) {
    result.warnings.push_back("no off-diagonal coupling mass; chi is +inf");
  }
  return result;
}

double chi_times(double chi, double constant) {
  if (constant == 0.0 || chi == 0.0) return 0.0;
  return chi * constant;
}

}  // namespace fuzzymc
