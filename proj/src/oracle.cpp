#include "gaudin_pair/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gaudin_pair {

LinearOperator restrict_to_sector(const LinearOperator& op, const BasisPtr& sector_basis) {
  if (op.domain->sector() || !op.is_square())
    throw DomainError("restriction needs a square operator on the unrestricted basis");
  const QuasispinBasis& full = *op.domain;
  std::vector<Index> to_full(sector_basis->dimension());
  std::vector<Index> to_sector(full.dimension(), -1);
  for (Index i = 0; i < sector_basis->dimension(); ++i) {
    to_full[i] = *full.find(sector_basis->occupation(i));
    to_sector[to_full[i]] = i;
  }
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Index col = 0; col < sector_basis->dimension(); ++col) {
    for (SparseMatrix::InnerIterator it(op.matrix, to_full[col]); it; ++it) {
      const Index row = to_sector[it.row()];
      if (row >= 0) entries.emplace_back(row, col, it.value());
    }
  }
  SparseMatrix matrix(sector_basis->dimension(), sector_basis->dimension());
  matrix.setFromTriplets(entries.begin(), entries.end());
  return {sector_basis, sector_basis, std::move(matrix)};
}

namespace {

struct SectorOperators {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> invariants;
};

SectorOperators sector_operators(const OperatorSet& ops, const BasisPtr& sector_basis) {
  SectorOperators out;
  if (ops.basis->sector()) {
    if (*ops.basis->sector() != *sector_basis->sector())
      throw DomainError("operator set lives on sector " + std::to_string(*ops.basis->sector()) +
                        ", not " + std::to_string(*sector_basis->sector()));
    out.hamiltonian = ComplexMatrix(ops.hamiltonian.matrix);
    for (const auto& op : ops.invariants) out.invariants.emplace_back(op.matrix);
    return out;
  }
  out.hamiltonian = ComplexMatrix(restrict_to_sector(ops.hamiltonian, sector_basis).matrix);
  for (const auto& op : ops.invariants)
    out.invariants.emplace_back(restrict_to_sector(op, sector_basis).matrix);
  return out;
}

/// Contiguous runs of sorted eigenvalues separated by gaps above `tolerance`.
std::vector<std::pair<Index, Index>> clusters(const RealVector& sorted, double tolerance) {
  std::vector<std::pair<Index, Index>> runs;
  Index start = 0;
  for (Index i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted(i) - sorted(i - 1) > tolerance) {
      runs.emplace_back(start, i - start);
      start = i;
    }
  }
  return runs;
}

}  // namespace

OracleSpectrum exact_diagonalize_sector(const OperatorSet& ops, int sector, Index dimension_cap) {
  const BasisPtr sector_basis = build_basis(ops.scheme, sector);
  if (sector_basis->dimension() > dimension_cap) {
    std::ostringstream msg;
    msg << "sector " << sector << " has dimension " << sector_basis->dimension() << " above the dense cap "
        << dimension_cap << "; use fewer levels or smaller capacities";
    throw DomainError(msg.str());
  }
  const SectorOperators mats = sector_operators(ops, sector_basis);
  const Index dim = sector_basis->dimension();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(mats.hamiltonian);
  ComplexMatrix basis = solver.eigenvectors();
  // Blocks of columns still degenerate under every operator applied so far.
  std::vector<std::pair<Index, Index>> blocks = clusters(solver.eigenvalues(), kDegeneracyTolerance);

  OracleSpectrum out;
  out.sector = sector;
  for (const auto& block : blocks) out.energy_multiplicities.push_back(static_cast<int>(block.second));

  for (const auto& op : mats.invariants) {
    std::vector<std::pair<Index, Index>> refined;
    for (const auto& [start, size] : blocks) {
      if (size == 1) {
        refined.emplace_back(start, size);
        continue;
      }
      const ComplexMatrix v = basis.middleCols(start, size);
      const ComplexMatrix projected = v.adjoint() * op * v;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> sub(0.5 * (projected + projected.adjoint()));
      basis.middleCols(start, size) = v * sub.eigenvectors();
      for (const auto& [s, n] : clusters(sub.eigenvalues(), kDegeneracyTolerance)) refined.emplace_back(start + s, n);
    }
    blocks = std::move(refined);
  }

  const Index n_ops = static_cast<Index>(mats.invariants.size());
  out.joint_basis = basis;
  out.energies.resize(dim);
  out.invariant_eigenvalues.resize(dim, n_ops);
  for (Index col = 0; col < dim; ++col) {
    const ComplexVector v = basis.col(col);
    const ComplexVector hv = mats.hamiltonian * v;
    out.energies(col) = v.dot(hv).real();
    out.max_residual = std::max(out.max_residual, (hv - out.energies(col) * v).norm());
    for (Index j = 0; j < n_ops; ++j) {
      const ComplexVector pv = mats.invariants[j] * v;
      const double e = v.dot(pv).real();
      out.invariant_eigenvalues(col, j) = e;
      out.max_residual = std::max(out.max_residual, (pv - e * v).norm());
    }
  }
  out.orthonormality_defect = (basis.adjoint() * basis - ComplexMatrix::Identity(dim, dim)).norm();
  return out;
}

void AuditReport::require_passed() const {
  if (passed()) return;
  std::string msg = "operator audit failed:";
  for (const auto& f : failures) msg += "\n  " + f;
  throw VerificationError(msg);
}

namespace {

struct Auditor {
  AuditReport report;

  void vanish(std::string name, double value, double tolerance) {
    record({std::move(name), value, tolerance, true});
  }
  void exceed(std::string name, double value, double threshold) {
    record({std::move(name), value, threshold, false});
  }
  void record(AuditEntry entry) {
    const bool ok = entry.must_vanish ? entry.value < entry.tolerance : entry.value > entry.tolerance;
    if (!ok) {
      std::ostringstream msg;
      msg.precision(3);
      msg << entry.name << " = " << entry.value << (entry.must_vanish ? " >= " : " <= ") << entry.tolerance;
      report.failures.push_back(msg.str());
    }
    report.entries.push_back(std::move(entry));
  }
};

std::string label(char symbol, int j) { return std::string(1, symbol) + "_" + std::to_string(j + 1); }

}  // namespace

AuditReport commutator_audit(const OperatorSet& ops) {
  const LevelScheme& scheme = ops.scheme;
  const auto& inv = ops.invariants;
  const int n = static_cast<int>(inv.size());
  const char symbol = scheme.mode == Mode::reduced ? 'R' : 'P';
  Auditor audit;

  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      audit.vanish("[" + label(symbol, j) + "," + label(symbol, k) + "]", relative_commutator_norm(inv[j], inv[k]),
                   kCommutatorTolerance);
  for (int j = 0; j < n; ++j) {
    audit.vanish("[" + label(symbol, j) + ",H]", relative_commutator_norm(inv[j], ops.hamiltonian),
                 kCommutatorTolerance);
    audit.vanish("[" + label(symbol, j) + ",N]", relative_commutator_norm(inv[j], ops.number_op),
                 kCommutatorTolerance);
  }
  audit.vanish("[H,N]", relative_commutator_norm(ops.hamiltonian, ops.number_op), kCommutatorTolerance);

  audit.vanish("hermiticity(H)", hermiticity_defect(ops.hamiltonian), kHermiticityTolerance);
  for (int j = 0; j < n; ++j)
    audit.vanish("hermiticity(" + label(symbol, j) + ")", hermiticity_defect(inv[j]), kHermiticityTolerance);

  const BasisPtr& basis = ops.basis;
  const LinearOperator& num = ops.number_op;
  if (scheme.mode == Mode::degenerate) {
    LinearOperator rebuilt = zero_operator(basis, basis);
    LinearOperator total = zero_operator(basis, basis);
    for (int j = 0; j < n; ++j) {
      rebuilt = rebuilt + Complex(scheme.g * scheme.c_squared(j)) * inv[j];
      total = total + inv[j];
    }
    audit.vanish("H - G sum c_j^2 P_j", difference_norm(ops.hamiltonian, rebuilt), kIdentityTolerance);

    double omega_sum = 0.0;
    double cross = 0.0;
    for (int j = 0; j < scheme.size(); ++j) {
      omega_sum += scheme.levels[j].omega;
      for (int k = 0; k < scheme.size(); ++k)
        if (k != j) cross += scheme.levels[j].omega * scheme.levels[k].omega;
    }
    const LinearOperator quadratic = num * num - Complex(omega_sum + 1.0) * num +
                                     Complex(0.25 * cross) * identity_operator(basis);
    audit.vanish("sum P_j - quadratic(N)", difference_norm(total, quadratic), kIdentityTolerance);

    if (!basis->sector()) {
      const LinearOperator b = build_symmetry_B(scheme, basis);
      const LinearOperator t = build_half_rotation_T(scheme, basis);
      double asymmetry = 0.0;
      for (int j = 0; j < n; ++j) {
        audit.vanish("[" + label(symbol, j) + ",B]", relative_commutator_norm(inv[j], b), kCommutatorTolerance);
        asymmetry = std::max(asymmetry, relative_commutator_norm(inv[j], t));
      }
      audit.vanish("[H,B]", relative_commutator_norm(ops.hamiltonian, b), kCommutatorTolerance);
      audit.exceed("max_j [P_j,T]", asymmetry, kAsymmetryThreshold);
    }
  } else if (scheme.mode == Mode::reduced) {
    const double gd = scheme.g * scheme.level_spacing();
    LinearOperator rebuilt = zero_operator(basis, basis);
    LinearOperator sum_r = zero_operator(basis, basis);
    double constant = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto& level = scheme.levels[j];
      const double s = 0.5 * level.omega;
      rebuilt = rebuilt + Complex(2.0 * level.epsilon - gd) * inv[j];
      sum_r = sum_r + inv[j];
      constant += level.epsilon * level.omega - gd * s * (s + 1.0);
    }
    rebuilt = rebuilt + Complex(gd) * (sum_r * sum_r) + Complex(constant) * identity_operator(basis);
    audit.vanish("H - H(R)", difference_norm(ops.hamiltonian, rebuilt), kIdentityTolerance);

    double half_omega = 0.0;
    for (const auto& level : scheme.levels) half_omega += 0.5 * level.omega;
    audit.vanish("N - sum (R_j + Omega_j/2)",
                 difference_norm(num, sum_r + Complex(half_omega) * identity_operator(basis)), kIdentityTolerance);
  }
  return audit.report;
}

double gaudin_algebra_deviation(const LevelScheme& scheme, const BasisPtr& basis, const std::vector<double>& alphas,
                                std::span<const std::pair<Complex, Complex>> points) {
  if (basis->sector()) throw DomainError("Gaudin algebra checks need the unrestricted basis");
  double worst = 0.0;
  for (const auto& [lambda, mu] : points) {
    if (std::abs(lambda - mu) <= kPoleTolerance) throw DomainError("Gaudin algebra check needs lambda != mu");
    auto field = [&](Complex z, FieldSign sign) {
      return build_pair_field(scheme, basis, GaudinField{alphas, z}, sign).matrix;
    };
    const SparseMatrix zl = field(lambda, FieldSign::weight), zm = field(mu, FieldSign::weight);
    const SparseMatrix pl = field(lambda, FieldSign::raise), pm = field(mu, FieldSign::raise);
    const SparseMatrix ml = field(lambda, FieldSign::lower), mm = field(mu, FieldSign::lower);
    const Complex inv = 1.0 / (lambda - mu);

    const SparseMatrix r1 = commutator(zl, pm) - inv * (pl - pm);
    const SparseMatrix r2 = commutator(zl, mm) + inv * (ml - mm);
    const SparseMatrix r3 = commutator(pl, mm) - 2.0 * inv * (zl - zm);
    const SparseMatrix r4 = commutator(zl, zm);
    const SparseMatrix r5 = commutator(pl, pm);
    const SparseMatrix r6 = commutator(ml, mm);
    for (const SparseMatrix* r : {&r1, &r2, &r3, &r4, &r5, &r6}) worst = std::max(worst, double(r->norm()));
  }
  return worst;
}

double basis_change_deviation(const LevelScheme& scheme, const BasisPtr& basis, Complex x) {
  std::vector<double> inverse_c(scheme.size());
  for (int j = 0; j < scheme.size(); ++j) inverse_c[j] = 1.0 / scheme.levels[j].c;
  const Complex root = std::sqrt(x);
  double worst = 0.0;
  for (FieldSign sign : {FieldSign::raise, FieldSign::lower}) {
    const SparseMatrix direct = build_pair_field(scheme, basis, DegenerateField{x}, sign).matrix;
    const SparseMatrix split = build_pair_field(scheme, basis, GaudinField{inverse_c, root}, sign).matrix +
                               build_pair_field(scheme, basis, GaudinField{inverse_c, -root}, sign).matrix;
    worst = std::max(worst, double((direct - Complex(0.5) * split).norm()));
  }
  return worst;
}

OffshellCheck multi_pair_offshell_check(const LevelScheme& scheme, const BasisPtr& basis, int level,
                                        std::span<const Complex> roots) {
  if (scheme.mode != Mode::degenerate) throw DomainError("off-shell identities concern degenerate-mode schemes");
  if (level < 0 || level >= scheme.size()) throw DomainError("level index out of range");
  const int n_roots = static_cast<int>(roots.size());
  if (n_roots < 1 || n_roots > scheme.max_pairs()) throw DomainError("off-shell check needs 1 <= N <= N_max roots");
  if (basis->omegas() != scheme.omegas()) throw DomainError("basis does not belong to the scheme");
  if (basis->sector() && *basis->sector() != n_roots)
    throw DomainError("basis sector does not match the number of roots");
  for (int k = 0; k < n_roots; ++k) {
    for (int j = 0; j < scheme.size(); ++j)
      if (std::abs(1.0 / scheme.c_squared(j) - roots[k]) <= 1e-8)
        throw DomainError("root " + std::to_string(k + 1) + " sits on the pole 1/c_j^2 of level " +
                          std::to_string(j + 1));
    for (int l = 0; l < k; ++l)
      if (std::abs(roots[k] - roots[l]) <= 1e-8) throw DomainError("off-shell check needs distinct roots");
  }

  const BasisPtr target = build_basis(scheme, n_roots);
  const LinearOperator p = build_degenerate_invariants(scheme, target)[level];
  const StateVector vacuum = vacuum_state(build_basis(scheme, 0));
  const StateVector psi = apply_pair_fields(scheme, vacuum, roots, FieldSign::raise);

  const double cj2 = scheme.c_squared(level);
  const double omega_j = scheme.levels[level].omega;
  Complex diagonal = empty_shell_eigenvalues(scheme)[level];
  for (const Complex x : roots) diagonal -= omega_j / (1.0 - cj2 * x);

  ComplexVector residual = (p * psi).amplitudes - diagonal * psi.amplitudes;
  double scale = std::max(1.0, psi.norm());

  OffshellCheck out;
  for (int k = 0; k < n_roots; ++k) {
    const Complex x = roots[k];
    Complex bracket = 0.0;
    for (int l = 0; l < n_roots; ++l)
      if (l != k) bracket += 2.0 / (x - roots[l]);
    for (int j = 0; j < scheme.size(); ++j) bracket += double(scheme.levels[j].omega) / (1.0 / scheme.c_squared(j) - x);
    const Complex coefficient = x * bracket;
    out.remainder_coefficients.push_back(coefficient);

    std::vector<Complex> others;
    for (int l = 0; l < n_roots; ++l)
      if (l != k) others.push_back(roots[l]);
    StateVector rest = apply_pair_fields(scheme, vacuum, others, FieldSign::raise);
    const LinearOperator raise = ladder_operator(rest.basis, level, +1);
    const StateVector term = Complex(scheme.levels[level].c / (1.0 - cj2 * x)) * raise * rest;
    residual -= coefficient * term.amplitudes;
    scale = std::max(scale, std::abs(coefficient) * term.norm());
  }
  out.deviation = residual.norm() / scale;
  return out;
}

OffshellCheck offshell_action_check(const LevelScheme& scheme, const BasisPtr& basis, int level, Complex x) {
  const Complex roots[] = {x};
  return multi_pair_offshell_check(scheme, basis, level, roots);
}

void compare_with_oracle(SpectrumReport& report, double tolerance, Index dimension_cap) {
  const LevelScheme& scheme = report.scheme;
  report.coverage.clear();
  Index total_dim = 0;
  Index total_matched = 0;
  for (int sector = report.first_sector; sector <= report.last_sector; ++sector) {
    const BasisPtr basis = build_basis(scheme, sector);
    SectorCoverage cov{sector, basis->dimension(), 0, 0, 0};
    std::vector<EigenRecord*> records;
    for (auto& r : report.records)
      if (r.sector == sector) records.push_back(&r);
    cov.records = static_cast<int>(records.size());
    if (basis->dimension() > dimension_cap) {
      report.notes.push_back("sector " + std::to_string(sector) + ": above the oracle dimension cap, not compared");
      report.coverage.push_back(cov);
      continue;
    }
    const OracleSpectrum oracle = exact_diagonalize_sector(build_operator_set(scheme, basis), sector, dimension_cap);
    std::vector<bool> used(static_cast<std::size_t>(basis->dimension()), false);
    for (EigenRecord* r : records) {
      bool matched = false;
      for (Index col = 0; col < basis->dimension() && !matched; ++col) {
        if (used[col]) continue;
        double diff = std::abs(oracle.energies(col) - r->energy);
        for (std::size_t j = 0; j < r->invariant_eigenvalues.size(); ++j)
          diff = std::max(diff, std::abs(oracle.invariant_eigenvalues(col, static_cast<Index>(j)) -
                                         r->invariant_eigenvalues[j]));
        if (diff < tolerance) {
          used[col] = true;
          matched = true;
        }
      }
      r->oracle_match = matched;
      if (matched)
        ++cov.matched;
      else
        ++cov.unmatched_records;
    }
    total_dim += cov.dimension;
    total_matched += cov.matched;
    report.coverage.push_back(cov);
  }
  report.coverage_fraction = total_dim == 0 ? 0.0 : double(total_matched) / double(total_dim);
}

}  // namespace gaudin_pair
