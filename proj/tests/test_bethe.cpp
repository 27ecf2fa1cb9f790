#include <doctest.h>

#include <random>

#include "gaudin_pair/bethe.hpp"
#include "gaudin_pair/polynomial.hpp"
#include "support/dense_model.hpp"

using namespace gaudin_pair;

namespace {

LevelScheme two_level() {
  return make_scheme({{1, 0.0, std::sqrt(0.2)}, {1, 0.0, std::sqrt(0.8)}}, 1.0, Mode::degenerate);
}

LevelScheme richardson_pair(double g) { return make_scheme({{1, 0.0, 1.0}, {1, 1.0, 1.0}}, g, Mode::reduced); }

SolverOptions fast_options() {
  SolverOptions o;
  o.seeds_per_pair = 24;
  return o;
}

}  // namespace

TEST_CASE("companion roots of a known quartic") {
  // (x - 1)(x + 2)(x^2 + 9)
  const Polynomial<double> p = multiply(multiply(Polynomial<double>{-1.0, 1.0}, Polynomial<double>{2.0, 1.0}),
                                        Polynomial<double>{9.0, 0.0, 1.0});
  auto roots = companion_roots(p);
  REQUIRE(roots.size() == 4);
  for (auto& r : roots) r = polish_root(p, r);
  const std::vector<Complex> expected{1.0, -2.0, Complex(0.0, 3.0), Complex(0.0, -3.0)};
  CHECK(same_roots(roots, expected, 1e-12));
  CHECK(companion_roots(Polynomial<double>{3.0}).empty());
  CHECK(std::abs(evaluate(p, Complex(0.0, 3.0))) < 1e-12);
}

TEST_CASE("one-pair generic root sits at the charge-weighted pole average") {
  const LevelScheme s = two_level();
  // Omega_1/(a_1 - x) + Omega_2/(a_2 - x) = 0 for Omega = (1, 1), a = (5, 1.25).
  const double oracle = (1.0 * 1.25 + 1.0 * 5.0) / 2.0;
  CHECK(oracle == doctest::Approx(3.125));
  const SolveReport report = solve({s, Family::degenerate_generic, 1, fast_options()});
  REQUIRE(report.solutions.size() == 1);
  CHECK(std::abs(report.solutions[0].roots[0] - 3.125) < 1e-10);
  const Complex root[] = {3.125};
  CHECK(bae_residual(s, Family::degenerate_generic, root) < 1e-14);
  const Complex perturbed[] = {3.125 + 1e-3};
  CHECK(bae_residual(s, Family::degenerate_generic, perturbed) > 1e-6);
}

TEST_CASE("a single level has no generic one-pair root") {
  const LevelScheme s = make_scheme({{2, 0.0, 1.0}}, 1.0, Mode::degenerate);
  CHECK(solve({s, Family::degenerate_generic, 1, fast_options()}).solutions.empty());
}

TEST_CASE("zero class: one pair needs no unknowns, two pairs put z at 2") {
  const LevelScheme s = two_level();
  const SolveReport one = solve({s, Family::degenerate_zero, 1, fast_options()});
  REQUIRE(one.solutions.size() == 1);
  CHECK(one.solutions[0].roots.empty());

  const SolveReport two = solve({s, Family::degenerate_zero, 2, fast_options()});
  REQUIRE(two.solutions.size() == 1);
  CHECK(std::abs(two.solutions[0].roots[0] - 2.0) < 1e-10);
  // -1/2/(5-z) - 1/2/(5/4-z) - 1/z at z = 2.
  const double direct = -0.5 / 3.0 - 0.5 / (1.25 - 2.0) - 0.5;
  CHECK(std::abs(direct) < 1e-15);
}

TEST_CASE("bae_residual rejects roots on poles, on zero and coincident") {
  const LevelScheme s = two_level();
  const Complex on_pole[] = {5.0};
  const Complex on_zero[] = {0.0};
  const Complex twins[] = {2.0, 2.0};
  CHECK_THROWS_AS(bae_residual(s, Family::degenerate_generic, on_pole), DomainError);
  CHECK_THROWS_AS(bae_residual(s, Family::degenerate_zero, on_zero), DomainError);
  CHECK_NOTHROW(bae_residual(s, Family::degenerate_generic, on_zero));
  CHECK_THROWS_AS(bae_residual(s, Family::degenerate_generic, twins), DomainError);
}

TEST_CASE("solver preconditions") {
  const LevelScheme s = two_level();
  CHECK_THROWS_AS(solve({s, Family::degenerate_generic, 2, fast_options()}), DomainError);
  CHECK_THROWS_AS(solve({s, Family::degenerate_zero, 3, fast_options()}), DomainError);
  CHECK_THROWS_AS(solve({s, Family::richardson, 1, fast_options()}), DomainError);
  CHECK_THROWS_AS(solve({richardson_pair(0.1), Family::degenerate_generic, 1, fast_options()}), DomainError);
}

TEST_CASE("canonical ordering and permutation-invariant comparison") {
  BetheSolution s{Family::degenerate_generic, {Complex(2.0, 1.0), Complex(-1.0), Complex(2.0, -1.0)}, 0.0, true};
  const BetheSolution c = canonicalize(s);
  CHECK(c.roots[0] == Complex(-1.0));
  CHECK(c.roots[1] == Complex(2.0, -1.0));
  CHECK(c.roots[2] == Complex(2.0, 1.0));
  CHECK(same_roots(s.roots, c.roots));
  const std::vector<Complex> other{Complex(2.0, 1.0), Complex(-1.0), Complex(2.0, -1.0 + 1e-6)};
  CHECK_FALSE(same_roots(s.roots, other));
}

TEST_CASE("Newton converges from a nearby start and refuses runaway starts") {
  const LevelScheme s = two_level();
  const BaeSystem system = bae_system(s, Family::degenerate_generic);
  const NewtonResult near = newton_solve(system, {Complex(3.0, 0.1)}, 100, 1e-12);
  CHECK(near.converged);
  CHECK(std::abs(near.roots[0] - 3.125) < 1e-10);
  const NewtonResult far = newton_solve(system, {Complex(-1e9, 0.0)}, 100, 1e-12);
  CHECK_FALSE(far.converged);
}

TEST_CASE("analytic Jacobian matches finite differences") {
  const LevelScheme s = make_scheme({{2, 0.0, 0.3}, {1, 0.0, 0.6}, {3, 0.0, 0.9}}, 1.0, Mode::degenerate);
  const BaeSystem system = bae_system(s, Family::degenerate_zero);
  const std::vector<Complex> x{Complex(0.7, 0.2), Complex(-1.3, 0.5), Complex(4.1, -0.3)};
  const ComplexMatrix jac = bae_jacobian<Complex>(system, x);
  const double h = 1e-6;
  for (std::size_t l = 0; l < x.size(); ++l) {
    auto plus = x, minus = x;
    plus[l] += h;
    minus[l] -= h;
    const ComplexVector fd =
        (bae_equations<Complex>(system, plus) - bae_equations<Complex>(system, minus)) / (2.0 * h);
    CHECK((fd - jac.col(static_cast<Index>(l))).norm() < 1e-6);
  }
}

TEST_CASE("weak-coupling Richardson roots sit next to twice the level energies") {
  const LevelScheme s = richardson_pair(1e-6);
  const SolveReport report = solve({s, Family::richardson, 1, fast_options()});
  REQUIRE(report.solutions.size() == 2);
  CHECK(std::abs(report.solutions[0].roots[0] - 0.0) < 1e-4);
  CHECK(std::abs(report.solutions[1].roots[0] - 2.0) < 1e-4);
  // First order: xi = 2 eps_j - G d Omega_j.
  CHECK(std::abs(report.solutions[0].roots[0] - (-0.5e-6)) < 1e-11);
}

TEST_CASE("weak-coupling start polynomial reproduces the first-order shift") {
  const LevelScheme s = make_scheme({{3, 0.0, 1.0}, {2, 1.0, 1.0}}, 0.2, Mode::reduced);
  const std::vector<int> occupation{1, 2};
  const auto roots = richardson_weak_coupling_roots(s, occupation, 1e-7);
  REQUIRE(roots.size() == 3);
  const double gd = 1e-7 / 2.0;
  CHECK(std::abs(roots[0] - (0.0 - gd * 3.0)) < 1e-12);
  // Two roots near 2 with sum 2*2 - 2 gd (Omega - 1).
  CHECK(std::abs(roots[1] + roots[2] - (4.0 - 2.0 * gd * (2 - 1))) < 1e-12);
}

TEST_CASE("one Richardson solution per configuration on random reduced schemes") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const LevelScheme s = dense_model::random_scheme(rng, Mode::reduced, 2 + trial % 2, 2);
    for (int n = 1; n <= s.max_pairs(); ++n) {
      const SolveReport report = solve({s, Family::richardson, n, fast_options()});
      CHECK(report.failures == 0);
      CHECK(static_cast<Index>(report.solutions.size()) == build_basis(s, n)->dimension());
      for (const auto& sol : report.solutions) CHECK(sol.residual < 1e-8 * (1.0 + 1.0 / (2.0 * s.g / s.size())));
    }
  }
}

TEST_CASE("solutions are deterministic across runs and thread counts") {
  const LevelScheme s = make_scheme({{1, 0.0, 0.3}, {2, 0.0, 0.5}, {1, 0.0, 0.8}}, 0.7, Mode::degenerate);
  SolverOptions one = fast_options();
  one.threads = 1;
  SolverOptions four = one;
  four.threads = 4;
  const SolveReport a = solve({s, Family::degenerate_generic, 2, one});
  const SolveReport b = solve({s, Family::degenerate_generic, 2, four});
  const SolveReport c = solve({s, Family::degenerate_generic, 2, one});
  REQUIRE(a.solutions.size() == b.solutions.size());
  REQUIRE(a.solutions.size() == c.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) {
    CHECK(a.solutions[i].roots == b.solutions[i].roots);
    CHECK(a.solutions[i].roots == c.solutions[i].roots);
  }
}

TEST_CASE("worker thread resolution") {
  CHECK(worker_threads(3) == 3);
  CHECK(worker_threads(0) >= 1);
}
