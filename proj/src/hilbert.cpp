#include "gaudin_pair/hilbert.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gaudin_pair {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::general: return "general";
    case Mode::reduced: return "reduced";
    case Mode::degenerate: return "degenerate";
  }
  return "general";
}

Mode parse_mode(const std::string& text) {
  if (text == "general") return Mode::general;
  if (text == "reduced") return Mode::reduced;
  if (text == "degenerate") return Mode::degenerate;
  throw DomainError("unknown mode '" + text + "' (expected general, reduced or degenerate)");
}

int LevelScheme::max_pairs() const {
  int total = 0;
  for (const auto& level : levels) total += level.omega;
  return total;
}

std::vector<int> LevelScheme::omegas() const {
  std::vector<int> out;
  out.reserve(levels.size());
  for (const auto& level : levels) out.push_back(level.omega);
  return out;
}

LevelScheme make_scheme(std::vector<Level> levels, double g, Mode mode) {
  if (levels.empty()) throw SchemeError("level_count", -1, "scheme needs at least one level");
  if (!std::isfinite(g) || g < 0.0)
    throw SchemeError("coupling", -1, "coupling g must be finite and nonnegative");

  double sum_sq = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const auto& level = levels[j];
    const int idx = static_cast<int>(j);
    if (level.omega < 1)
      throw SchemeError("omega_positive", idx,
                        "level " + std::to_string(j + 1) + ": pair capacity omega must be >= 1");
    if (!std::isfinite(level.epsilon))
      throw SchemeError("epsilon_finite", idx,
                        "level " + std::to_string(j + 1) + ": epsilon must be finite");
    if (!std::isfinite(level.c) || level.c <= 0.0)
      throw SchemeError("c_positive", idx,
                        "level " + std::to_string(j + 1) + ": amplitude c must be finite and > 0");
    sum_sq += level.c * level.c;
  }

  LevelScheme scheme;
  scheme.normalization_scale = 1.0 / std::sqrt(sum_sq);
  for (auto& level : levels) level.c *= scheme.normalization_scale;
  scheme.levels = std::move(levels);
  scheme.g = g;
  scheme.mode = mode;

  const int n = scheme.size();
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      const auto& a = scheme.levels[j];
      const auto& b = scheme.levels[k];
      if (mode == Mode::reduced) {
        if (std::abs(a.c - b.c) > kDistinctnessTolerance)
          throw SchemeError("reduced_equal_c", j,
                            "level " + std::to_string(j + 1) +
                                ": reduced mode requires all c equal");
        if (std::abs(a.epsilon - b.epsilon) <= kDistinctnessTolerance)
          throw SchemeError("reduced_distinct_epsilon", j,
                            "level " + std::to_string(j + 1) + " and level " +
                                std::to_string(k + 1) +
                                ": reduced mode requires pairwise distinct epsilon");
      } else if (mode == Mode::degenerate) {
        if (std::abs(a.epsilon - b.epsilon) > kDistinctnessTolerance)
          throw SchemeError("degenerate_equal_epsilon", j,
                            "level " + std::to_string(j + 1) +
                                ": degenerate mode requires all epsilon equal");
        if (std::abs(a.c * a.c - b.c * b.c) <= kDistinctnessTolerance)
          throw SchemeError("degenerate_distinct_c", j,
                            "level " + std::to_string(j + 1) + " and level " +
                                std::to_string(k + 1) +
                                ": degenerate mode requires pairwise distinct c^2");
      }
    }
  }
  return scheme;
}

QuasispinBasis::QuasispinBasis(std::vector<int> omegas, std::optional<int> sector)
    : omegas_(std::move(omegas)), sector_(sector) {
  max_pairs_ = std::accumulate(omegas_.begin(), omegas_.end(), 0);
  const int n = levels();
  Index product = 1;
  for (int omega : omegas_) product *= omega + 1;
  lookup_.assign(static_cast<std::size_t>(product), -1);

  // Odometer over occupations, last level fastest: lexicographic in m.
  std::vector<int> occ(n, 0);
  for (Index flat = 0; flat < product; ++flat) {
    const int total = std::accumulate(occ.begin(), occ.end(), 0);
    if (!sector_ || *sector_ == total) {
      lookup_[flat] = dimension_++;
      occupations_.insert(occupations_.end(), occ.begin(), occ.end());
    }
    for (int j = n - 1; j >= 0; --j) {
      if (++occ[j] <= omegas_[j]) break;
      occ[j] = 0;
    }
  }
}

int QuasispinBasis::pair_count(Index state) const {
  const auto occ = occupation(state);
  return std::accumulate(occ.begin(), occ.end(), 0);
}

std::optional<Index> QuasispinBasis::find(std::span<const int> occupation) const {
  Index flat = 0;
  for (int j = 0; j < levels(); ++j) {
    if (occupation[j] < 0 || occupation[j] > omegas_[j]) return std::nullopt;
    flat = flat * (omegas_[j] + 1) + occupation[j];
  }
  const Index idx = lookup_[flat];
  if (idx < 0) return std::nullopt;
  return idx;
}

BasisPtr build_basis(const LevelScheme& scheme, std::optional<int> sector) {
  if (sector && (*sector < 0 || *sector > scheme.max_pairs())) {
    std::ostringstream msg;
    msg << "pair sector " << *sector << " outside [0, " << scheme.max_pairs() << "]";
    throw DomainError(msg.str());
  }
  return std::make_shared<const QuasispinBasis>(scheme.omegas(), sector);
}

BasisPtr shifted_basis(const BasisPtr& basis, int delta) {
  if (!basis->sector() || delta == 0) return basis;
  return std::make_shared<const QuasispinBasis>(basis->omegas(), *basis->sector() + delta);
}

namespace {

void require_same(const QuasispinBasis& a, const QuasispinBasis& b, const char* what) {
  if (!a.same_space(b)) throw DomainError(std::string("basis mismatch in ") + what);
}

}  // namespace

LinearOperator LinearOperator::adjoint() const {
  return {codomain, domain, SparseMatrix(matrix.adjoint())};
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  require_same(*a.domain, *b.domain, "operator+");
  require_same(*a.codomain, *b.codomain, "operator+");
  return {a.domain, a.codomain, a.matrix + b.matrix};
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  require_same(*a.domain, *b.domain, "operator-");
  require_same(*a.codomain, *b.codomain, "operator-");
  return {a.domain, a.codomain, a.matrix - b.matrix};
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  require_same(*a.domain, *b.codomain, "operator*");
  return {b.domain, a.codomain, (a.matrix * b.matrix).pruned()};
}

LinearOperator operator*(Complex s, const LinearOperator& a) {
  return {a.domain, a.codomain, s * a.matrix};
}

StateVector operator*(const LinearOperator& a, const StateVector& v) {
  require_same(*a.domain, *v.basis, "operator application");
  return {a.codomain, a.matrix * v.amplitudes};
}

LinearOperator identity_operator(const BasisPtr& basis) {
  SparseMatrix id(basis->dimension(), basis->dimension());
  id.setIdentity();
  return {basis, basis, std::move(id)};
}

LinearOperator zero_operator(const BasisPtr& domain, const BasisPtr& codomain) {
  return {domain, codomain, SparseMatrix(codomain->dimension(), domain->dimension())};
}

LinearOperator ladder_operator(const BasisPtr& domain, int level, int direction) {
  if (level < 0 || level >= domain->levels()) throw DomainError("level index out of range");
  if (direction != 1 && direction != -1) throw DomainError("ladder direction must be +1 or -1");
  BasisPtr codomain = shifted_basis(domain, direction);
  const double s = 0.5 * domain->omegas()[level];

  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(domain->dimension()));
  std::vector<int> occ(domain->levels());
  for (Index col = 0; col < domain->dimension(); ++col) {
    const auto src = domain->occupation(col);
    occ.assign(src.begin(), src.end());
    const double m = domain->weight(col, level);
    occ[level] += direction;
    const auto row = codomain->find(occ);
    if (!row) continue;
    const double element = std::sqrt(s * (s + 1.0) - m * (m + direction));
    entries.emplace_back(*row, col, element);
  }
  SparseMatrix matrix(codomain->dimension(), domain->dimension());
  matrix.setFromTriplets(entries.begin(), entries.end());
  return {domain, std::move(codomain), std::move(matrix)};
}

LinearOperator weight_operator(const BasisPtr& basis, int level) {
  if (level < 0 || level >= basis->levels()) throw DomainError("level index out of range");
  SparseMatrix matrix(basis->dimension(), basis->dimension());
  matrix.reserve(Eigen::VectorXi::Constant(basis->dimension(), 1));
  for (Index i = 0; i < basis->dimension(); ++i) {
    const double m = basis->weight(i, level);
    if (m != 0.0) matrix.insert(i, i) = m;
  }
  matrix.makeCompressed();
  return {basis, basis, std::move(matrix)};
}

std::vector<LevelGenerators> quasispin_generators(const LevelScheme& scheme, const BasisPtr& basis) {
  if (basis->omegas() != scheme.omegas()) throw DomainError("basis was not built from this scheme");
  std::vector<LevelGenerators> out;
  out.reserve(scheme.levels.size());
  for (int j = 0; j < scheme.size(); ++j)
    out.push_back({ladder_operator(basis, j, +1), ladder_operator(basis, j, -1), weight_operator(basis, j)});
  return out;
}

LinearOperator pair_number_operator(const LevelScheme& scheme, const BasisPtr& basis) {
  if (basis->omegas() != scheme.omegas()) throw DomainError("basis was not built from this scheme");
  SparseMatrix matrix(basis->dimension(), basis->dimension());
  matrix.reserve(Eigen::VectorXi::Constant(basis->dimension(), 1));
  for (Index i = 0; i < basis->dimension(); ++i) {
    const int count = basis->pair_count(i);
    if (count != 0) matrix.insert(i, i) = static_cast<double>(count);
  }
  matrix.makeCompressed();
  return {basis, basis, std::move(matrix)};
}

namespace {

StateVector extremal_state(const BasisPtr& basis, bool full) {
  const int target = full ? basis->max_pairs() : 0;
  if (basis->sector() && *basis->sector() != target)
    throw DomainError(full ? "full shell requires the unrestricted basis or sector N_max"
                           : "vacuum requires the unrestricted basis or sector 0");
  std::vector<int> occ(basis->levels(), 0);
  if (full) occ = basis->omegas();
  StateVector v{basis, ComplexVector::Zero(basis->dimension())};
  v.amplitudes(*basis->find(occ)) = 1.0;
  return v;
}

}  // namespace

StateVector vacuum_state(const BasisPtr& basis) { return extremal_state(basis, false); }

StateVector full_shell_state(const BasisPtr& basis) { return extremal_state(basis, true); }

StateVector embed(const StateVector& state, const BasisPtr& full) {
  if (full->sector()) throw DomainError("embedding target must be the unrestricted basis");
  if (full->omegas() != state.basis->omegas()) throw DomainError("embedding across different schemes");
  StateVector out{full, ComplexVector::Zero(full->dimension())};
  for (Index i = 0; i < state.basis->dimension(); ++i)
    out.amplitudes(*full->find(state.basis->occupation(i))) = state.amplitudes(i);
  return out;
}

}  // namespace gaudin_pair
