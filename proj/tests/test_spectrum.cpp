#include <doctest.h>

#include <random>

#include "gaudin_pair/oracle.hpp"
#include "gaudin_pair/spectrum.hpp"
#include "support/dense_model.hpp"

using namespace gaudin_pair;
using dense_model::CMat;
using dense_model::CVec;

namespace {

LevelScheme two_level() {
  return make_scheme({{1, 0.0, std::sqrt(0.2)}, {1, 0.0, std::sqrt(0.8)}}, 1.0, Mode::degenerate);
}

SolverOptions fast_options() {
  SolverOptions o;
  o.seeds_per_pair = 24;
  return o;
}

/// Dense S^+(x) of the degenerate model.
CMat dense_field(const LevelScheme& s, const dense_model::Model& m, Complex x, bool raise = true) {
  CMat f = CMat::Zero(m.dim, m.dim);
  for (int j = 0; j < s.size(); ++j)
    f += s.levels[j].c / (1.0 - s.c_squared(j) * x) * (raise ? m.plus[j] : m.minus[j]);
  return f;
}

double rayleigh(const CMat& op, const CVec& v) { return (v.dot(op * v) / v.squaredNorm()).real(); }

CVec dense_vacuum(const dense_model::Model& m) {
  CVec v = CVec::Zero(m.dim);
  v(0) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("empty-shell eigenvalues on the two-level scheme") {
  const LevelScheme s = two_level();
  const auto m = dense_model::model(s);
  const auto p = dense_model::degenerate_invariants(s, m);
  const auto e0 = empty_shell_eigenvalues(s);
  // Frozen from the dense Rayleigh quotients.
  CHECK(rayleigh(p[0], dense_vacuum(m)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(rayleigh(p[1], dense_vacuum(m)) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(e0[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(e0[1] == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("closed forms match dense Rayleigh quotients for one pair") {
  const LevelScheme s = two_level();
  const auto m = dense_model::model(s);
  const auto p = dense_model::degenerate_invariants(s, m);
  const CVec talmi = dense_field(s, m, 0.0) * dense_vacuum(m);
  const CVec generic = dense_field(s, m, 3.125) * dense_vacuum(m);

  const auto lambda = invariant_eigenvalues(s, StateClass::talmi_zero, {});
  const Complex x[] = {3.125};
  const auto mu = invariant_eigenvalues(s, StateClass::generic, x);
  for (int j = 0; j < 2; ++j) {
    CHECK(lambda[j] == doctest::Approx(rayleigh(p[j], talmi)).epsilon(1e-12));
    CHECK(mu[j] == doctest::Approx(rayleigh(p[j], generic)).epsilon(1e-12));
  }
  CHECK(lambda[0] == doctest::Approx(-1.0 / 3.0));
  CHECK(lambda[1] == doctest::Approx(-7.0 / 6.0));
  CHECK(mu[0] == doctest::Approx(-2.0));
  CHECK(mu[1] == doctest::Approx(0.5));
  CHECK(energy_from_invariants(s, lambda) == doctest::Approx(-1.0));
  CHECK(std::abs(energy_from_invariants(s, mu)) < 1e-14);
}

TEST_CASE("records on the two-level scheme") {
  const LevelScheme s = two_level();
  const OperatorSet ops = build_operator_set(s, build_basis(s, 1));
  const EigenRecord talmi = make_record(ops, StateClass::talmi_zero, {});
  CHECK(talmi.sector == 1);
  CHECK(talmi.energy == doctest::Approx(-1.0));
  CHECK(talmi.max_residual() < 1e-12);

  const Complex x[] = {3.125};
  const EigenRecord generic = make_record(ops, StateClass::generic, x);
  CHECK(std::abs(generic.energy) < 1e-12);
  CHECK(generic.max_residual() < 1e-12);
  CHECK(generic.norm > 0.0);

  const OperatorSet vacuum_ops = build_operator_set(s, build_basis(s, 0));
  const EigenRecord empty = make_record(vacuum_ops, StateClass::empty, {});
  CHECK(empty.energy == 0.0);
  CHECK(empty.invariant_eigenvalues[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("the two-pair zero-class product vanishes on the two-level scheme") {
  const LevelScheme s = two_level();
  const Complex z[] = {2.0};
  // S^+(0) S^+(2) |0> computed densely.
  const auto m = dense_model::model(s);
  const CVec product = dense_field(s, m, 0.0) * dense_field(s, m, 2.0) * dense_vacuum(m);
  CHECK(product.norm() < 1e-14);
  CHECK_THROWS_AS(build_bethe_state(s, build_basis(s), StateClass::talmi_zero, z), VerificationError);
}

TEST_CASE("the hole state built from z = 2 is the one-pair generic state") {
  const LevelScheme s = two_level();
  const Complex z[] = {2.0};
  const StateVector hole = build_bethe_state(s, build_basis(s, 1), StateClass::hole_zero, z);
  CHECK(*hole.basis->sector() == 1);
  CHECK(bethe_sector(s, StateClass::hole_zero, 1) == 1);
  const auto e = invariant_eigenvalues(s, StateClass::hole_zero, z);
  CHECK(e[0] == doctest::Approx(-2.0));
  CHECK(e[1] == doctest::Approx(0.5));

  const Complex x[] = {3.125};
  const StateVector generic = build_bethe_state(s, build_basis(s, 1), StateClass::generic, x);
  CHECK(ray_distance(hole.amplitudes, generic.amplitudes) < 1e-10);
}

TEST_CASE("build_bethe_state validates its basis") {
  const LevelScheme s = two_level();
  CHECK_THROWS_AS(build_bethe_state(s, build_basis(s, 2), StateClass::talmi_zero, {}), DomainError);
  const Complex x[] = {3.125};
  CHECK_THROWS_AS(build_bethe_state(s, build_basis(s), StateClass::full, x), DomainError);
  const LevelScheme r = make_scheme({{1, 0.0, 1.0}, {1, 1.0, 1.0}}, 0.1, Mode::reduced);
  CHECK_THROWS_AS(build_bethe_state(r, build_basis(r, 1), StateClass::generic, x), DomainError);
  // Embedded result on the unrestricted basis.
  const StateVector v = build_bethe_state(s, build_basis(s), StateClass::generic, x);
  CHECK(v.amplitudes.size() == 4);
}

TEST_CASE("hole map of the talmi state lands on the full shell") {
  const LevelScheme s = two_level();
  const EigenRecord talmi = make_record(build_operator_set(s, build_basis(s, 1)), StateClass::talmi_zero, {});
  const HoleImage image = hole_sector_map(s, talmi);
  REQUIRE(image.image.has_value());
  CHECK(image.image->sector == 2);
  CHECK(image.image->state_class == StateClass::full);
  CHECK(image.ray_distance < 1e-10);
  for (int j = 0; j < 2; ++j)
    CHECK(image.image->invariant_eigenvalues[j] == doctest::Approx(talmi.invariant_eigenvalues[j]).epsilon(1e-12));

  const Complex x[] = {3.125};
  const EigenRecord generic = make_record(build_operator_set(s, build_basis(s, 1)), StateClass::generic, x);
  const HoleImage none = hole_sector_map(s, generic);
  CHECK_FALSE(none.image.has_value());
  CHECK(none.image_norm < 1e-10);
}

TEST_CASE("hole map on a three-level scheme preserves invariant eigenvalues") {
  const LevelScheme s = make_scheme({{1, 0.0, 0.3}, {2, 0.0, 0.5}, {1, 0.0, 0.8}}, 0.7, Mode::degenerate);
  const SolveReport zero = solve({s, Family::degenerate_zero, 2, fast_options()});
  REQUIRE(zero.solutions.size() == 3);
  const OperatorSet ops = build_operator_set(s, build_basis(s, 2));
  for (const auto& sol : zero.solutions) {
    const EigenRecord rec = make_record(ops, StateClass::talmi_zero, sol.roots);
    const HoleImage image = hole_sector_map(s, rec);
    REQUIRE(image.image.has_value());
    CHECK(image.image->sector == 3);
    CHECK(image.ray_distance < 1e-8);
    CHECK(image.image->max_residual() < 1e-10);
  }
}

TEST_CASE("two-level spectrum has four records covering the space") {
  const LevelScheme s = two_level();
  SpectrumReport report = build_spectrum(s, 0, 2, fast_options());
  REQUIRE(report.records.size() == 4);
  CHECK(report.records[0].state_class == StateClass::empty);
  CHECK(report.records[1].state_class == StateClass::talmi_zero);
  CHECK(report.records[2].state_class == StateClass::generic);
  CHECK(report.records[3].state_class == StateClass::full);
  CHECK(report.records[3].energy == doctest::Approx(-1.0));
  compare_with_oracle(report);
  CHECK(report.coverage_fraction == doctest::Approx(1.0));
  CHECK_FALSE(report.solver_exhausted);
  CHECK_THROWS_AS(build_spectrum(s, 0, 3, fast_options()), DomainError);
}

TEST_CASE("Richardson energies agree with the magnet reconstruction") {
  const LevelScheme s = make_scheme({{2, 0.0, 1.0}, {1, 0.4, 1.0}, {1, 1.1, 1.0}}, 0.6, Mode::reduced);
  const SpectrumReport report = build_spectrum(s, 0, s.max_pairs(), fast_options());
  REQUIRE_FALSE(report.records.empty());
  for (const auto& r : report.records) {
    CHECK(energy_from_magnets(s, r.invariant_eigenvalues) == doctest::Approx(r.energy).epsilon(1e-9));
    CHECK(r.max_residual() < 1e-8);
  }
}

TEST_CASE("ray distance ignores scale and phase") {
  ComplexVector a(3);
  a << Complex(1.0, 2.0), Complex(-0.5, 0.1), Complex(0.0, 3.0);
  CHECK(ray_distance(a, Complex(0.0, -2.5) * a) < 1e-15);
  ComplexVector b = a;
  b(0) += 1e-12;
  CHECK(ray_distance(a, b) > 1e-14);
  CHECK(ray_distance(a, b) < 1e-12);
  CHECK(ray_distance(a, ComplexVector::Zero(3)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("state class names round-trip") {
  for (StateClass c : {StateClass::empty, StateClass::talmi_zero, StateClass::generic, StateClass::hole_zero,
                       StateClass::full, StateClass::richardson})
    CHECK(parse_state_class(to_string(c)) == c);
  CHECK_THROWS_AS(parse_state_class("mystery"), DomainError);
}
