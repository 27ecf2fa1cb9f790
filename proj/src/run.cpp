#include "gaudin_pair/run.hpp"

#include <ostream>
#include <random>

#include "gaudin_pair/report.hpp"

namespace gaudin_pair {

namespace {

bool csv(const RunConfig& config) { return config.format == OutputFormat::csv; }

void add_entry(AuditReport& audit, std::string name, double value, double tolerance) {
  if (!(value < tolerance)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << name << " = " << value << " >= " << tolerance;
    audit.failures.push_back(msg.str());
  }
  audit.entries.push_back({std::move(name), value, tolerance, true});
}

/// Operator audit plus sampled off-shell, algebra and oracle consistency checks.
AuditReport full_audit(const RunConfig& config) {
  const LevelScheme& scheme = config.scheme;
  const BasisPtr full = build_basis(scheme);
  AuditReport audit = commutator_audit(build_operator_set(scheme, full));

  std::mt19937_64 rng(config.solver.seed);
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  auto random_point = [&] { return Complex(uniform(rng), uniform(rng)); };

  std::vector<std::pair<Complex, Complex>> points;
  for (int i = 0; i < 5; ++i) points.emplace_back(random_point(), random_point());
  std::vector<double> alphas;
  if (scheme.mode == Mode::reduced)
    for (const auto& level : scheme.levels) alphas.push_back(2.0 * level.epsilon);
  else
    for (const auto& level : scheme.levels) alphas.push_back(1.0 / level.c);
  add_entry(audit, "Gaudin algebra relations", gaudin_algebra_deviation(scheme, full, alphas, points),
            kIdentityTolerance);

  if (scheme.mode == Mode::degenerate) {
    double basis_change = 0.0;
    double offshell = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Complex x = random_point();
      basis_change = std::max(basis_change, basis_change_deviation(scheme, full, x));
      for (int j = 0; j < scheme.size(); ++j)
        offshell = std::max(offshell, offshell_action_check(scheme, full, j, x).deviation);
    }
    add_entry(audit, "S(x) basis change", basis_change, kIdentityTolerance);
    add_entry(audit, "off-shell action, one pair", offshell, kIdentityTolerance);
    if (scheme.max_pairs() >= 2) {
      const std::vector<Complex> roots{random_point(), random_point()};
      double multi = 0.0;
      for (int j = 0; j < scheme.size(); ++j)
        multi = std::max(multi, multi_pair_offshell_check(scheme, full, j, roots).deviation);
      add_entry(audit, "off-shell action, two pairs", multi, kIdentityTolerance);
    }
  }

  const PairRange range = config.pair_range();
  for (int sector = range.first; sector <= range.last; ++sector) {
    const BasisPtr basis = build_basis(scheme, sector);
    const OracleSpectrum oracle = exact_diagonalize_sector(build_operator_set(scheme, basis), sector);
    const std::string tag = "sector " + std::to_string(sector) + " ";
    add_entry(audit, tag + "joint eigenbasis orthonormality", oracle.orthonormality_defect, 1e-10);
    add_entry(audit, tag + "joint eigen-equation residual", oracle.max_residual, 1e-8);
    double mismatch = 0.0;
    for (Index i = 0; i < oracle.energies.size(); ++i) {
      double rebuilt = 0.0;
      if (scheme.mode == Mode::degenerate) {
        for (int j = 0; j < scheme.size(); ++j) rebuilt += scheme.g * scheme.c_squared(j) * oracle.invariant_eigenvalues(i, j);
        mismatch = std::max(mismatch, std::abs(rebuilt - oracle.energies(i)));
      } else if (scheme.mode == Mode::reduced) {
        for (int j = 0; j < scheme.size(); ++j) rebuilt += oracle.invariant_eigenvalues(i, j) + 0.5 * scheme.levels[j].omega;
        mismatch = std::max(mismatch, std::abs(rebuilt - sector));
      }
    }
    if (scheme.mode != Mode::general)
      add_entry(audit, tag + (scheme.mode == Mode::degenerate ? "E - G sum c^2 e" : "N - sum (r + Omega/2)"),
                mismatch, 1e-9);
  }
  return audit;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const AuditReport audit = full_audit(config);
  write_audit(out, audit, csv(config));
  for (const auto& f : audit.failures) diag << "verification failure: " << f << '\n';
  return audit.passed() ? kExitOk : kExitVerificationFailed;
}

std::vector<std::pair<Family, StateClass>> families_for(const LevelScheme& scheme, int pairs) {
  if (pairs < 1) return {};
  if (scheme.mode == Mode::reduced) return {{Family::richardson, StateClass::richardson}};
  if (scheme.mode == Mode::degenerate && 2 * pairs <= scheme.max_pairs())
    return {{Family::degenerate_zero, StateClass::talmi_zero}, {Family::degenerate_generic, StateClass::generic}};
  return {};
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const LevelScheme& scheme = config.scheme;
  const PairRange range = config.pair_range();
  std::vector<CsvRow> rows;
  std::vector<EigenRecord> table;
  bool exhausted = false;
  for (int pairs = range.first; pairs <= range.last; ++pairs) {
    const auto families = families_for(scheme, pairs);
    if (families.empty()) {
      diag << "N = " << pairs << ": no Bethe equations to solve\n";
      continue;
    }
    bool any = false;
    for (const auto& [family, state_class] : families) {
      const SolveReport solved = solve({scheme, family, pairs, config.solver});
      for (const auto& w : solved.warnings) diag << "N = " << pairs << ", " << to_string(family) << ": " << w << '\n';
      any = any || !(solved.attempts > 0 && solved.failures == solved.attempts && solved.solutions.empty());
      for (const auto& solution : solved.solutions) {
        EigenRecord record;
        record.sector = bethe_sector(scheme, state_class, static_cast<int>(solution.roots.size()));
        record.state_class = state_class;
        record.roots = solution.roots;
        record.invariant_eigenvalues = invariant_eigenvalues(scheme, state_class, solution.roots);
        record.energy = energy_from_invariants(scheme, record.invariant_eigenvalues, solution.roots);
        auto record_csv = record_rows(record);
        for (auto& row : record_csv) row.residual = solution.residual;
        rows.insert(rows.end(), record_csv.begin(), record_csv.end());
        table.push_back(std::move(record));
      }
    }
    if (!any) exhausted = true;
  }
  if (csv(config))
    write_csv(out, scheme.size(), rows);
  else
    write_record_table(out, table);
  return exhausted ? kExitSolverExhausted : kExitOk;
}

void perturb(SpectrumReport& report, double shift, std::ostream& diag) {
  std::vector<EigenRecord> moved;
  for (auto& record : report.records) {
    if (record.roots.empty()) {
      moved.push_back(std::move(record));
      continue;
    }
    std::vector<Complex> roots = record.roots;
    for (auto& z : roots) z += shift;
    const OperatorSet ops = build_operator_set(report.scheme, build_basis(report.scheme, record.sector));
    try {
      moved.push_back(make_record(ops, record.state_class, roots));
    } catch (const std::exception& err) {
      diag << "perturbed " << to_string(record.state_class) << " record in sector " << record.sector
           << " dropped: " << err.what() << '\n';
    }
  }
  report.records = std::move(moved);
}

/// Builds and oracle-checks the spectrum; returns the exit code of the gate.
int checked_spectrum(const RunConfig& config, SpectrumReport& report, std::ostream& diag) {
  const PairRange range = config.pair_range();
  report = build_spectrum(config.scheme, range.first, range.last, config.solver);
  if (config.perturb_roots != 0.0) perturb(report, config.perturb_roots, diag);
  compare_with_oracle(report);
  for (const auto& note : report.notes) diag << note << '\n';

  bool failed = false;
  for (const auto& record : report.records) {
    if (record.max_residual() > kRecordResidualGate) {
      diag << "sector " << record.sector << " " << to_string(record.state_class) << " record: residual "
           << record.max_residual() << " above " << kRecordResidualGate << '\n';
      failed = true;
    }
    if (record.oracle_match && !*record.oracle_match) {
      diag << "sector " << record.sector << " " << to_string(record.state_class)
           << " record matches no oracle eigenvalue tuple\n";
      failed = true;
    }
  }
  diag << "oracle coverage " << 100.0 * report.coverage_fraction << "%\n";
  if (failed) return kExitVerificationFailed;
  if (report.solver_exhausted) return kExitSolverExhausted;
  return kExitOk;
}

int run_spectrum(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  SpectrumReport report;
  const int status = checked_spectrum(config, report, diag);
  if (csv(config)) {
    std::vector<CsvRow> rows;
    for (const auto& record : report.records) {
      auto r = record_rows(record);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    write_csv(out, config.scheme.size(), rows);
  } else {
    write_record_table(out, report.records);
  }
  return status;
}

int run_oracle(const RunConfig& config, std::ostream& out) {
  const PairRange range = config.pair_range();
  std::vector<OracleSpectrum> spectra;
  std::vector<CsvRow> rows;
  for (int sector = range.first; sector <= range.last; ++sector) {
    spectra.push_back(
        exact_diagonalize_sector(build_operator_set(config.scheme, build_basis(config.scheme, sector)), sector));
    auto r = oracle_rows(spectra.back());
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (csv(config))
    write_csv(out, config.scheme.size(), rows);
  else
    write_oracle_table(out, spectra);
  return kExitOk;
}

int run_compare(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  SpectrumReport report;
  const int status = checked_spectrum(config, report, diag);
  write_coverage(out, report, csv(config));
  return status;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  for (const auto& line : config.log) diag << line << '\n';
  try {
    switch (config.command) {
      case Command::verify: return run_verify(config, out, diag);
      case Command::solve: return run_solve(config, out, diag);
      case Command::spectrum: return run_spectrum(config, out, diag);
      case Command::oracle: return run_oracle(config, out);
      case Command::compare: return run_compare(config, out, diag);
    }
  } catch (const VerificationError& err) {
    diag << "verification failure: " << err.what() << '\n';
    return kExitVerificationFailed;
  } catch (const DomainError& err) {
    diag << "error: " << err.what() << '\n';
    return kExitVerificationFailed;
  }
  return kExitOk;
}

}  // namespace gaudin_pair
