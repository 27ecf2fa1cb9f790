#include "gaudin_pair/operators.hpp"

#include <cmath>
#include <numbers>

namespace gaudin_pair {

double relative_commutator_norm(const LinearOperator& a, const LinearOperator& b) {
  if (!a.is_square() || !b.is_square() || !a.domain->same_space(*b.domain))
    throw DomainError("commutator needs square operators on one basis");
  return relative_commutator_norm(a.matrix, b.matrix);
}

double hermiticity_defect(const LinearOperator& a) {
  if (!a.is_square()) throw DomainError("hermiticity check needs a square operator");
  return hermiticity_defect(a.matrix);
}

double difference_norm(const LinearOperator& a, const LinearOperator& b) {
  return (a - b).matrix.norm();
}

LinearOperator pair_hop(const BasisPtr& basis, int j, int k) {
  const LinearOperator lower = ladder_operator(basis, k, -1);
  return ladder_operator(lower.codomain, j, +1) * lower;
}

LinearOperator pair_hop_reversed(const BasisPtr& basis, int j, int k) {
  const LinearOperator raise = ladder_operator(basis, k, +1);
  return ladder_operator(raise.codomain, j, -1) * raise;
}

LinearOperator spin_dot(const BasisPtr& basis, int j, int k) {
  return weight_operator(basis, j) * weight_operator(basis, k) +
         Complex(0.5) * (pair_hop(basis, j, k) + pair_hop_reversed(basis, j, k));
}

namespace {

void require_scheme_basis(const LevelScheme& scheme, const BasisPtr& basis) {
  if (basis->omegas() != scheme.omegas()) throw DomainError("basis was not built from this scheme");
}

}  // namespace

LinearOperator build_hamiltonian(const LevelScheme& scheme, const BasisPtr& basis) {
  require_scheme_basis(scheme, basis);
  const int n = scheme.size();
  LinearOperator h = zero_operator(basis, basis);
  if (scheme.mode != Mode::degenerate) {
    for (int j = 0; j < n; ++j) {
      const auto& level = scheme.levels[j];
      h = h + Complex(2.0 * level.epsilon) * weight_operator(basis, j) +
          Complex(level.epsilon * level.omega) * identity_operator(basis);
    }
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      h = h - Complex(scheme.g * scheme.levels[j].c * scheme.levels[k].c) * pair_hop(basis, j, k);
  return h;
}

std::vector<LinearOperator> build_gaudin_magnets(const LevelScheme& scheme, const BasisPtr& basis) {
  require_scheme_basis(scheme, basis);
  if (scheme.mode != Mode::reduced) throw DomainError("Gaudin magnets need a reduced-mode scheme");
  const int n = scheme.size();
  const double gd = scheme.g * scheme.level_spacing();
  std::vector<LinearOperator> magnets;
  magnets.reserve(n);
  for (int j = 0; j < n; ++j) {
    LinearOperator r = weight_operator(basis, j);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double gap = scheme.levels[j].epsilon - scheme.levels[k].epsilon;
      if (std::abs(gap) <= kDistinctnessTolerance) throw DomainError("coincident level energies");
      r = r - Complex(gd / gap) * spin_dot(basis, j, k);
    }
    magnets.push_back(std::move(r));
  }
  return magnets;
}

std::vector<LinearOperator> build_degenerate_invariants(const LevelScheme& scheme,
                                                        const BasisPtr& basis) {
  require_scheme_basis(scheme, basis);
  if (scheme.mode != Mode::degenerate)
    throw DomainError("degenerate invariants need a degenerate-mode scheme");
  const int n = scheme.size();
  std::vector<LinearOperator> invariants;
  invariants.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double cj = scheme.levels[j].c;
    LinearOperator p = Complex(-1.0) * pair_hop(basis, j, j);
    const LinearOperator sz_j = weight_operator(basis, j);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double ck = scheme.levels[k].c;
      const double denom = ck * ck - cj * cj;
      if (std::abs(denom) <= kDistinctnessTolerance) throw DomainError("coincident c_j^2");
      p = p + Complex(2.0 * ck * ck / denom) * (sz_j * weight_operator(basis, k)) +
          Complex(cj * ck / denom) * (pair_hop(basis, j, k) + pair_hop(basis, k, j));
    }
    invariants.push_back(std::move(p));
  }
  return invariants;
}

OperatorSet build_operator_set(const LevelScheme& scheme, const BasisPtr& basis) {
  OperatorSet set{scheme, basis, build_hamiltonian(scheme, basis), {}, pair_number_operator(scheme, basis)};
  if (scheme.mode == Mode::reduced)
    set.invariants = build_gaudin_magnets(scheme, basis);
  else if (scheme.mode == Mode::degenerate)
    set.invariants = build_degenerate_invariants(scheme, basis);
  return set;
}

namespace {

std::vector<Complex> field_coefficients(const LevelScheme& scheme, const PairFieldParams& params) {
  const int n = scheme.size();
  std::vector<Complex> coeffs(n);
  if (const auto* field = std::get_if<DegenerateField>(&params)) {
    for (int j = 0; j < n; ++j) {
      const Complex denom = 1.0 - scheme.c_squared(j) * field->x;
      if (std::abs(denom) <= kPoleTolerance)
        throw DomainError("S(x) parameter sits on the pole 1/c_j^2 of level " + std::to_string(j + 1));
      coeffs[j] = scheme.levels[j].c / denom;
    }
  } else if (const auto* field = std::get_if<RichardsonField>(&params)) {
    for (int j = 0; j < n; ++j) {
      const Complex denom = 2.0 * scheme.levels[j].epsilon - field->xi;
      if (std::abs(denom) <= kPoleTolerance)
        throw DomainError("J(xi) parameter sits on the pole 2 eps_j of level " + std::to_string(j + 1));
      coeffs[j] = 1.0 / denom;
    }
  } else {
    const auto& gaudin = std::get<GaudinField>(params);
    if (static_cast<int>(gaudin.alphas.size()) != n)
      throw DomainError("Gaudin realization needs one alpha per level");
    for (int j = 0; j < n; ++j) {
      const Complex denom = gaudin.alphas[j] - gaudin.lambda;
      if (std::abs(denom) <= kPoleTolerance)
        throw DomainError("J(alpha; lambda) parameter sits on alpha_" + std::to_string(j + 1));
      coeffs[j] = 1.0 / denom;
    }
  }
  return coeffs;
}

}  // namespace

LinearOperator build_pair_field(const LevelScheme& scheme, const BasisPtr& basis,
                                const PairFieldParams& params, FieldSign sign) {
  require_scheme_basis(scheme, basis);
  const auto coeffs = field_coefficients(scheme, params);
  const int direction = sign == FieldSign::raise ? 1 : (sign == FieldSign::lower ? -1 : 0);
  LinearOperator field = zero_operator(basis, shifted_basis(basis, direction));
  for (int j = 0; j < scheme.size(); ++j) {
    const LinearOperator generator =
        direction == 0 ? weight_operator(basis, j) : ladder_operator(basis, j, direction);
    field = field + coeffs[j] * generator;
  }
  return field;
}

LinearOperator build_half_rotation_T(const LevelScheme& scheme, const BasisPtr& basis) {
  require_scheme_basis(scheme, basis);
  if (basis->sector()) throw DomainError("T mixes pair sectors; use the unrestricted basis");
  // Per level, exp(-i pi S_x) |s, m> = exp(-i pi s) |s, -m>.
  Complex phase = 1.0;
  for (const auto& level : scheme.levels)
    phase *= std::polar(1.0, -std::numbers::pi * 0.5 * level.omega);

  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(basis->dimension()));
  std::vector<int> mirrored(basis->levels());
  for (Index col = 0; col < basis->dimension(); ++col) {
    const auto occ = basis->occupation(col);
    for (int j = 0; j < basis->levels(); ++j) mirrored[j] = basis->omegas()[j] - occ[j];
    entries.emplace_back(*basis->find(mirrored), col, phase);
  }
  SparseMatrix matrix(basis->dimension(), basis->dimension());
  matrix.setFromTriplets(entries.begin(), entries.end());
  return {basis, basis, std::move(matrix)};
}

LinearOperator build_symmetry_B(const LevelScheme& scheme, const BasisPtr& basis) {
  if (scheme.mode != Mode::degenerate) throw DomainError("B is defined for degenerate-mode schemes");
  const LinearOperator t = build_half_rotation_T(scheme, basis);
  return t.adjoint() * build_pair_field(scheme, basis, DegenerateField{0.0}, FieldSign::lower);
}

}  // namespace gaudin_pair
