#ifndef GAUDIN_PAIR_OPERATORS_HPP
#define GAUDIN_PAIR_OPERATORS_HPP

#include <variant>
#include <vector>

#include "gaudin_pair/hilbert.hpp"

namespace gaudin_pair {

// ---------------------------------------------------------------------------
// Matrix helpers, generic over the scalar type.

template <typename Scalar>
Eigen::SparseMatrix<Scalar> commutator(const Eigen::SparseMatrix<Scalar>& a,
                                       const Eigen::SparseMatrix<Scalar>& b) {
  return Eigen::SparseMatrix<Scalar>(a * b - b * a);
}

/// ||[A,B]||_F / (||A||_F ||B||_F); zero when either operand vanishes.
template <typename Scalar>
double relative_commutator_norm(const Eigen::SparseMatrix<Scalar>& a,
                                const Eigen::SparseMatrix<Scalar>& b) {
  const double scale = a.norm() * b.norm();
  if (scale == 0.0) return 0.0;
  return commutator(a, b).norm() / scale;
}

/// ||A - A^dagger||_F / max(1, ||A||_F).
template <typename Scalar>
double hermiticity_defect(const Eigen::SparseMatrix<Scalar>& a) {
  const Eigen::SparseMatrix<Scalar> adj = a.adjoint();
  return (a - adj).norm() / std::max(1.0, static_cast<double>(a.norm()));
}

double relative_commutator_norm(const LinearOperator& a, const LinearOperator& b);
double hermiticity_defect(const LinearOperator& a);
/// Frobenius norm of a - b.
double difference_norm(const LinearOperator& a, const LinearOperator& b);

// ---------------------------------------------------------------------------
// Bilinear building blocks on a number-conserving basis.

/// S_j^+ S_k^- as an operator basis -> basis.
LinearOperator pair_hop(const BasisPtr& basis, int j, int k);
/// S_j^- S_k^+ as an operator basis -> basis.
LinearOperator pair_hop_reversed(const BasisPtr& basis, int j, int k);
/// S_j . S_k = S_j^0 S_k^0 + (S_j^+ S_k^- + S_j^- S_k^+)/2.
LinearOperator spin_dot(const BasisPtr& basis, int j, int k);

// ---------------------------------------------------------------------------

struct OperatorSet {
  LevelScheme scheme;
  BasisPtr basis;
  LinearOperator hamiltonian;
  /// R_j (reduced mode) or P_j (degenerate mode); empty in general mode.
  std::vector<LinearOperator> invariants;
  LinearOperator number_op;
};

/// H = sum_j eps_j (2 S_j^0 + Omega_j) - |G| (sum_j c_j S_j^+)(sum_k c_k S_k^-).
/// The kinetic term is dropped in degenerate mode.
LinearOperator build_hamiltonian(const LevelScheme& scheme, const BasisPtr& basis);

/// Rational Gaudin magnets R_j of the reduced model.
std::vector<LinearOperator> build_gaudin_magnets(const LevelScheme& scheme, const BasisPtr& basis);

/// Commuting invariants P_j of the degenerate model.
std::vector<LinearOperator> build_degenerate_invariants(const LevelScheme& scheme, const BasisPtr& basis);

OperatorSet build_operator_set(const LevelScheme& scheme, const BasisPtr& basis);

enum class FieldSign { raise, lower, weight };

/// S^{+/-}(x) = sum_j c_j / (1 - c_j^2 x) S_j^{+/-}.
struct DegenerateField {
  Complex x;
};
/// J^{+/-,0}(xi) = sum_j S_j / (2 eps_j - xi).
struct RichardsonField {
  Complex xi;
};
/// J^{+/-,0}(alpha; lambda) = sum_j S_j / (alpha_j - lambda).
struct GaudinField {
  std::vector<double> alphas;
  Complex lambda;
};

using PairFieldParams = std::variant<DegenerateField, RichardsonField, GaudinField>;

/// Distance below which a field parameter counts as sitting on a pole.
inline constexpr double kPoleTolerance = 1e-12;

LinearOperator build_pair_field(const LevelScheme& scheme, const BasisPtr& basis,
                                const PairFieldParams& params, FieldSign sign);

/// Particle-hole map T = exp(-i pi sum_j (S_j^+ + S_j^-)/2). Unrestricted
/// basis only.
LinearOperator build_half_rotation_T(const LevelScheme& scheme, const BasisPtr& basis);

/// B = T^dagger S^-(0). Unrestricted basis, degenerate mode.
LinearOperator build_symmetry_B(const LevelScheme& scheme, const BasisPtr& basis);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_OPERATORS_HPP
