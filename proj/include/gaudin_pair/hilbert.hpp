#ifndef GAUDIN_PAIR_HILBERT_HPP
#define GAUDIN_PAIR_HILBERT_HPP

// Seniority-zero pair space: one su(2) quasispin irrep of spin Omega_j/2 per
// level, realized directly through angular-momentum matrix elements.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaudin_pair/types.hpp"

namespace gaudin_pair {

enum class Mode { general, reduced, degenerate };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

/// One single-particle level. `omega` is the pair capacity (j + 1/2 for a
/// nuclear orbit with no unpaired particles).
struct Level {
  int omega = 1;
  double epsilon = 0.0;
  double c = 1.0;
};

/// Scheme invariant violation. Carries the name of the broken invariant and
/// the offending level (0-based, -1 when the whole scheme is at fault).
class SchemeError : public DomainError {
 public:
  SchemeError(std::string invariant, int level, const std::string& what)
      : DomainError(what), invariant_(std::move(invariant)), level_(level) {}

  const std::string& invariant() const noexcept { return invariant_; }
  int level() const noexcept { return level_; }

 private:
  std::string invariant_;
  int level_;
};

/// Minimum separation of c_j^2 (degenerate) or epsilon_j (reduced).
inline constexpr double kDistinctnessTolerance = 1e-9;

struct LevelScheme {
  std::vector<Level> levels;
  double g = 0.0;  ///< |G|
  Mode mode = Mode::general;
  /// Factor applied to the raw amplitudes so that sum c_j^2 = 1.
  double normalization_scale = 1.0;

  int size() const { return static_cast<int>(levels.size()); }
  int max_pairs() const;
  /// Level spacing d = 1/n of the reduced model.
  double level_spacing() const { return 1.0 / static_cast<double>(size()); }
  std::vector<int> omegas() const;
  double c_squared(int j) const { return levels[j].c * levels[j].c; }
};

/// Validates and normalizes a scheme. Throws SchemeError naming the violated
/// invariant and level.
LevelScheme make_scheme(std::vector<Level> levels, double g, Mode mode);

/// Deterministic (lexicographic) enumeration of weight tuples, optionally
/// restricted to a fixed total pair number. States are stored as level
/// occupations N_j = m_j + Omega_j/2.
class QuasispinBasis {
 public:
  /// `sector` outside [0, sum Omega] yields an empty basis; use build_basis
  /// for the validated entry point.
  QuasispinBasis(std::vector<int> omegas, std::optional<int> sector);

  Index dimension() const { return dimension_; }
  int levels() const { return static_cast<int>(omegas_.size()); }
  const std::vector<int>& omegas() const { return omegas_; }
  std::optional<int> sector() const { return sector_; }
  int max_pairs() const { return max_pairs_; }

  std::span<const int> occupation(Index state) const {
    return {occupations_.data() + state * levels(), static_cast<std::size_t>(levels())};
  }
  double weight(Index state, int level) const {
    return occupation(state)[level] - 0.5 * omegas_[level];
  }
  int pair_count(Index state) const;
  std::optional<Index> find(std::span<const int> occupation) const;

  bool same_space(const QuasispinBasis& other) const {
    return omegas_ == other.omegas_ && sector_ == other.sector_;
  }

 private:
  std::vector<int> omegas_;
  std::optional<int> sector_;
  int max_pairs_ = 0;
  Index dimension_ = 0;
  std::vector<int> occupations_;
  std::vector<Index> lookup_;  // mixed-radix product index -> state, -1 if absent
};

using BasisPtr = std::shared_ptr<const QuasispinBasis>;

BasisPtr build_basis(const LevelScheme& scheme, std::optional<int> sector = std::nullopt);

/// Basis of the sector shifted by `delta` pairs (the unrestricted basis maps
/// to itself). Out-of-range sectors give an empty basis.
BasisPtr shifted_basis(const BasisPtr& basis, int delta);

struct StateVector {
  BasisPtr basis;
  ComplexVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Sparse operator from `domain` to `codomain` (square when they coincide).
struct LinearOperator {
  BasisPtr domain;
  BasisPtr codomain;
  SparseMatrix matrix;

  bool is_square() const { return domain->same_space(*codomain); }
  LinearOperator adjoint() const;
};

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator*(Complex s, const LinearOperator& a);
StateVector operator*(const LinearOperator& a, const StateVector& v);

LinearOperator identity_operator(const BasisPtr& basis);
LinearOperator zero_operator(const BasisPtr& domain, const BasisPtr& codomain);

/// su(2) ladder S_j^{+} (`direction` = +1) or S_j^{-} (-1) acting on `domain`.
/// The codomain is the neighbouring sector for sector bases.
LinearOperator ladder_operator(const BasisPtr& domain, int level, int direction);
/// Diagonal S_j^0.
LinearOperator weight_operator(const BasisPtr& basis, int level);

struct LevelGenerators {
  LinearOperator raise;   ///< S_j^+
  LinearOperator lower;   ///< S_j^-
  LinearOperator weight;  ///< S_j^0
};

std::vector<LevelGenerators> quasispin_generators(const LevelScheme& scheme, const BasisPtr& basis);

/// Total pair number sum_j (S_j^0 + Omega_j/2).
LinearOperator pair_number_operator(const LevelScheme& scheme, const BasisPtr& basis);

/// All levels empty. Requires an unrestricted basis or sector 0.
StateVector vacuum_state(const BasisPtr& basis);
/// All levels fully occupied. Requires an unrestricted basis or sector N_max.
StateVector full_shell_state(const BasisPtr& basis);

/// Embeds a sector state into the unrestricted basis `full`.
StateVector embed(const StateVector& state, const BasisPtr& full);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_HILBERT_HPP
