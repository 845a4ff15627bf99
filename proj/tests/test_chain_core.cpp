#include "fuzzymc/chain.hpp"
#include "fuzzymc/functionals.hpp"
#include "fuzzymc/semigroup.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fuzzymc;
using namespace fuzzymc::testing;

TEST_CASE("validate_chain accepts the symmetric two-state chain") {
  CHECK(validate_chain(two_state(1.0, 1.0)).empty());
}

TEST_CASE("validate_chain reports detailed balance at the worst pair") {
  Matrix q(2, 2);
  q << -1, 1, 2, -2;
  Vector pi(2);
  pi << 0.5, 0.5;
  const auto report = validate_chain(ReversibleChain({"0", "1"}, pi, q));
  REQUIRE(report.size() == 1);
  CHECK(report[0].invariant == "detailed-balance");
  CHECK(report[0].row == 0);
  CHECK(report[0].col == 1);
  CHECK(near(report[0].magnitude, 0.5, 1e-15));
}

TEST_CASE("validate_chain reports a row that does not sum to zero") {
  Matrix q(2, 2);
  q << -1, 1.1, 1, -1;
  Vector pi(2);
  pi << 0.5, 0.5;
  const auto report = validate_chain(ReversibleChain({"0", "1"}, pi, q));
  const auto it = std::find_if(report.begin(), report.end(),
                               [](const Violation& v) { return v.invariant == "row-sum-zero"; });
  REQUIRE(it != report.end());
  CHECK(it->row == 0);
  CHECK(near(it->magnitude, 0.1, 1e-12));
}

TEST_CASE("validate_chain flags nonpositive pi, bad mass and negative rates") {
  Matrix q(2, 2);
  q << 1, -1, 1, -1;
  Vector pi(2);
  pi << 0.0, 0.9;
  const auto report = validate_chain(ReversibleChain({"0", "1"}, pi, q));
  auto has = [&](const char* name) {
    return std::any_of(report.begin(), report.end(), [&](const Violation& v) { return v.invariant == name; });
  };
  CHECK(has("pi-positive"));
  CHECK(has("pi-normalized"));
  CHECK(has("offdiagonal-nonnegative"));
}

TEST_CASE("chain construction rejects dimension mismatch") {
  CHECK_THROWS_AS(ReversibleChain({"0", "1"}, Vector::Ones(3) / 3.0, Matrix::Zero(2, 2)), StructuralError);
  CHECK_THROWS_AS(ReversibleChain({"0", "1"}, Vector::Ones(2) / 2.0, Matrix::Zero(2, 3)), StructuralError);
}

TEST_CASE("random_walk_chain on small graphs") {
  SUBCASE("single edge") {
    Matrix adj(2, 2);
    adj << 0, 1, 1, 0;
    const auto chain = random_walk_chain(adj, {"u", "v"});
    CHECK(chain.pi().isApprox(Vector::Constant(2, 0.5)));
    CHECK(chain.generator()(0, 1) == 1.0);
    CHECK(chain.generator()(0, 0) == -1.0);
  }
  SUBCASE("triangle") {
    Matrix adj = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    const auto chain = random_walk_chain(adj, {"a", "b", "c"});
    for (Index x = 0; x < 3; ++x) {
      CHECK(near(chain.pi()(x), 1.0 / 3.0, 1e-15));
      for (Index y = 0; y < 3; ++y)
        if (x != y) CHECK(chain.generator()(x, y) == 0.5);
    }
    CHECK(validate_chain(chain).empty());
  }
  SUBCASE("path a-b-c") {
    Matrix adj(3, 3);
    adj << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    const auto chain = random_walk_chain(adj, {"a", "b", "c"});
    CHECK(near(chain.pi()(0), 0.25, 1e-15));
    CHECK(near(chain.pi()(1), 0.5, 1e-15));
    CHECK(near(chain.pi()(2), 0.25, 1e-15));
    CHECK(chain.generator()(0, 1) == 1.0);
    CHECK(chain.generator()(1, 0) == 0.5);
    CHECK(chain.generator()(1, 2) == 0.5);
    CHECK(validate_chain(chain).empty());
  }
}

TEST_CASE("random_walk_chain rejects isolated vertices and asymmetric adjacency") {
  Matrix isolated = Matrix::Zero(3, 3);
  isolated(0, 1) = isolated(1, 0) = 1;
  CHECK_THROWS_AS(random_walk_chain(isolated, {"a", "b", "c"}), DomainError);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(random_walk_chain(asym, {"a", "b"}), StructuralError);
}

TEST_CASE("dirichlet_form examples") {
  const auto chain = two_state(1.0, 1.0);
  for (const auto kind : {PsiKind::Poincare, PsiKind::Mlsi, PsiKind::Lsi}) {
    CHECK(dirichlet_form(chain, Vector::Constant(2, 3.0), kind) == 0.0);
  }
  Vector f(2);
  f << 0.0, 1.0;
  CHECK(near(dirichlet_form(chain, f, PsiKind::Poincare), 0.5, 1e-15));
  f << 1.0, std::exp(1.0);
  CHECK(near(dirichlet_form(chain, f, PsiKind::Mlsi), (std::exp(1.0) - 1.0) / 2.0, 1e-15));
  f << 1.0, -1.0;
  CHECK_THROWS_AS(dirichlet_form(chain, f, PsiKind::Lsi), DomainError);
  CHECK_THROWS_AS(dirichlet_form(chain, f, PsiKind::Mlsi), DomainError);
}

TEST_CASE("variance and entropy examples") {
  Vector half(2);
  half << 0.5, 0.5;
  Vector f(2);
  f << 0.0, 1.0;
  CHECK(near(variance(half, f), 0.25, 1e-16));
  CHECK(variance(half, Vector::Constant(2, 7.0)) == 0.0);
  Vector path(3);
  path << 0.25, 0.5, 0.25;
  Vector g(3);
  g << 0.0, 1.0, 2.0;
  CHECK(near(variance(path, g), 0.5, 1e-15));

  const double e = std::exp(1.0);
  f << 1.0, e;
  const double expected = 0.5 * e - (1.0 + e) / 2.0 * std::log((1.0 + e) / 2.0);
  CHECK(near(entropy(half, f), expected, 1e-15));
  CHECK(entropy(half, Vector::Constant(2, 4.0)) == 0.0);
  CHECK(entropy(Vector::Ones(1), Vector::Constant(1, 5.0)) == 0.0);
  f << 1.0, 0.0;
  CHECK_THROWS_AS(entropy(half, f), DomainError);
}

TEST_CASE("entropy stays accurate for nearly constant functions") {
  Vector pi(2);
  pi << 0.5, 0.5;
  const double d = 1e-7;
  Vector f(2);
  f << 1.0 - d, 1.0 + d;
  // Ent ~ Var/2 for f close to 1: d^2/2 up to O(d^4).
  CHECK(rel_near(entropy(pi, f), d * d / 2.0, 1e-8));
}

TEST_CASE("functional properties on random chains") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const auto chain = random_chain(rng, 2 + trial % 7, 0.7);
    const Index n = chain.size();
    Vector f(n);
    for (Index x = 0; x < n; ++x) f(x) = normal(rng);

    // Poincare form against <-Qf, f>_pi.
    const double inner = -(chain.pi().cwiseProduct(chain.generator() * f)).dot(f);
    CHECK(near(dirichlet_form(chain, f, PsiKind::Poincare), inner, 1e-10 * std::max(1.0, std::abs(inner))));

    // Variance against its pair form.
    double pairs = 0.0;
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        pairs += chain.pi()(x) * chain.pi()(y) * (f(x) - f(y)) * (f(x) - f(y));
    CHECK(near(variance(chain.pi(), f), pairs / 2.0, 1e-12));

    // Shift and scale behaviour.
    const double c = 0.5 + std::abs(normal(rng));
    CHECK(near(dirichlet_form(chain, Vector(f.array() + 3.0), PsiKind::Poincare),
               dirichlet_form(chain, f, PsiKind::Poincare), 1e-10));
    CHECK(rel_near(dirichlet_form(chain, Vector(c * f), PsiKind::Poincare),
                   c * c * dirichlet_form(chain, f, PsiKind::Poincare), 1e-12));
    const Vector pos = f.array().exp();
    CHECK(rel_near(dirichlet_form(chain, Vector(c * pos), PsiKind::Mlsi),
                   c * dirichlet_form(chain, pos, PsiKind::Mlsi), 1e-12));
    CHECK(rel_near(dirichlet_form(chain, Vector(c * pos), PsiKind::Lsi),
                   c * dirichlet_form(chain, pos, PsiKind::Lsi), 1e-12));

    const double ent = entropy(chain.pi(), pos);
    CHECK(ent >= 0.0);
    CHECK(dirichlet_form(chain, pos, PsiKind::Mlsi) >= 0.0);
    CHECK(dirichlet_form(chain, pos, PsiKind::Lsi) >= 0.0);
    CHECK(near(entropy(chain.pi(), Vector::Constant(n, c)), 0.0, 1e-10));
  }
}

TEST_CASE("heat kernel examples") {
  const auto chain = two_state(1.0, 1.0);
  CHECK(heat_kernel(chain, 0.0).isApprox(Matrix::Identity(2, 2)));
  const Matrix p1 = heat_kernel(chain, 1.0);
  CHECK(near(p1(0, 0), (1.0 + std::exp(-2.0)) / 2.0, 1e-14));
  const Matrix p_large = heat_kernel(chain, 40.0);
  CHECK(near(p_large(0, 0), 0.5, 1e-12));
  CHECK(near(p_large(1, 0), 0.5, 1e-12));
  CHECK_THROWS_AS(heat_kernel(chain, -1.0), DomainError);
}

TEST_CASE("heat kernel properties on random chains") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto chain = random_chain(rng, 2 + trial % 6, 0.6);
    const double s = time(rng), t = time(rng);
    const Matrix ps = heat_kernel(chain, s), pt = heat_kernel(chain, t);
    const Matrix pst = heat_kernel(chain, s + t);
    CHECK((ps.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
    CHECK(ps.minCoeff() >= -1e-12);
    CHECK((ps * pt - pst).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((pst - spectral_heat_kernel(chain, s + t)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("tv mixing bracket") {
  const auto chain = two_state(1.0, 1.0);
  SUBCASE("closed form curve and bracket") {
    const auto scan = tv_mixing_time(chain, 0.25, 2.0, 0.01);
    for (std::size_t k = 0; k < scan.times.size(); ++k) {
      CHECK(near(scan.max_tv[k], 0.5 * std::exp(-2.0 * scan.times[k]), 1e-9));
    }
    REQUIRE(scan.bracket.has_value());
    // TV(t) = e^{-2t}/2 <= 1/4 first at t = log(2)/2 ~ 0.3466.
    CHECK(near(*scan.bracket, 0.35, 1e-12));
  }
  SUBCASE("loose threshold passes at t = 0") {
    const auto scan = tv_mixing_time(chain, 0.999, 1.0, 0.1);
    REQUIRE(scan.bracket.has_value());
    CHECK(*scan.bracket == 0.0);
  }
  SUBCASE("short horizon is not reached") {
    CHECK_FALSE(tv_mixing_time(chain, 0.01, 0.5, 0.1).bracket.has_value());
  }
  SUBCASE("disconnected chain never mixes") {
    Matrix q = Matrix::Zero(4, 4);
    q << -1, 1, 0, 0, 1, -1, 0, 0, 0, 0, -1, 1, 0, 0, 1, -1;
    const ReversibleChain split({"a", "b", "c", "d"}, Vector::Constant(4, 0.25), q);
    CHECK_FALSE(tv_mixing_time(split, 0.1, 20.0, 0.5).bracket.has_value());
  }
  CHECK_THROWS_AS(tv_mixing_time(chain, 1.5, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(tv_mixing_time(chain, 0.5, 1.0, 0.0), DomainError);
}
