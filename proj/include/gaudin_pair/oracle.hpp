#ifndef GAUDIN_PAIR_ORACLE_HPP
#define GAUDIN_PAIR_ORACLE_HPP

// Brute-force ground truth: dense diagonalization of pair sectors, joint
// eigenbases of the invariant family, commutator audits and the off-shell
// action identities of the Bethe construction.

#include <span>
#include <string>
#include <vector>

#include "gaudin_pair/operators.hpp"
#include "gaudin_pair/spectrum.hpp"

namespace gaudin_pair {

inline constexpr Index kDefaultDimensionCap = 4096;
inline constexpr double kDegeneracyTolerance = 1e-8;

struct OracleSpectrum {
  int sector = 0;
  RealVector energies;                ///< <v|H|v> per joint eigenvector
  RealMatrix invariant_eigenvalues;   ///< dimension x n
  ComplexMatrix joint_basis;          ///< columns are joint eigenvectors
  std::vector<int> energy_multiplicities;
  double max_residual = 0.0;          ///< worst ||I v - e v|| over operators
  double orthonormality_defect = 0.0;
};

/// Restricts a number-conserving operator on the unrestricted basis to a
/// sector basis.
LinearOperator restrict_to_sector(const LinearOperator& op, const BasisPtr& sector_basis);

/// Dense Hermitian eigendecomposition of H in the sector followed by
/// degeneracy resolution with the invariants in fixed order. `ops` may live
/// on the unrestricted basis or on the sector itself.
OracleSpectrum exact_diagonalize_sector(const OperatorSet& ops, int sector,
                                        Index dimension_cap = kDefaultDimensionCap);

struct AuditEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// true: value must stay below tolerance; false: informational entries
  /// that must exceed it (particle-hole asymmetry).
  bool must_vanish = true;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  /// Throws VerificationError listing the failures.
  void require_passed() const;
};

inline constexpr double kCommutatorTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kAsymmetryThreshold = 1e-6;

/// Pairwise relative commutator norms of the invariant family, H and N,
/// hermiticity, reconstruction identities and, on the unrestricted basis of a
/// degenerate scheme, the B symmetry and the [P_j, T] asymmetry.
AuditReport commutator_audit(const OperatorSet& ops);

/// Defining relations of the rational Gaudin algebra for the realization
/// J(alpha; lambda) at the given (lambda, mu) pairs; returns the worst
/// absolute Frobenius deviation.
double gaudin_algebra_deviation(const LevelScheme& scheme, const BasisPtr& basis,
                                const std::vector<double>& alphas,
                                std::span<const std::pair<Complex, Complex>> points);

/// ||S^{+/-}(x) - (J(1/c; sqrt x) + J(1/c; -sqrt x))/2||_F for both signs.
double basis_change_deviation(const LevelScheme& scheme, const BasisPtr& basis, Complex x);

struct OffshellCheck {
  double deviation = 0.0;
  /// x_k (sum_{l != k} 2/(x_k - x_l) + sum_j Omega_j/(1/c_j^2 - x_k)).
  std::vector<Complex> remainder_coefficients;
};

/// ||P_j S^+(x)|0> - (E_j^(0) - Omega_j/(1 - c_j^2 x)) S^+(x)|0>
///   - x (sum_j' Omega_j'/(1/c_j'^2 - x)) c_j S_j^+/(1 - c_j^2 x) |0>||.
OffshellCheck offshell_action_check(const LevelScheme& scheme, const BasisPtr& basis, int level, Complex x);

/// N-pair version: diagonal term plus one remainder per root.
OffshellCheck multi_pair_offshell_check(const LevelScheme& scheme, const BasisPtr& basis, int level,
                                        std::span<const Complex> roots);

/// Matches every record against the joint oracle tuples (energy, e_1..e_n)
/// of its sector within `tolerance` and fills coverage. Sectors above the
/// dimension cap are skipped with a note.
void compare_with_oracle(SpectrumReport& report, double tolerance = 1e-8,
                         Index dimension_cap = kDefaultDimensionCap);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_ORACLE_HPP
