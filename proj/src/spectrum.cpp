#include "gaudin_pair/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaudin_pair {

std::string to_string(StateClass state_class) {
  switch (state_class) {
    case StateClass::empty: return "empty";
    case StateClass::talmi_zero: return "talmi_zero";
    case StateClass::generic: return "generic";
    case StateClass::hole_zero: return "hole_zero";
    case StateClass::full: return "full";
    case StateClass::richardson: return "richardson";
  }
  return "empty";
}

StateClass parse_state_class(const std::string& text) {
  for (auto c : {StateClass::empty, StateClass::talmi_zero, StateClass::generic, StateClass::hole_zero,
                 StateClass::full, StateClass::richardson})
    if (to_string(c) == text) return c;
  throw DomainError("unknown state class '" + text + "'");
}

int bethe_sector(const LevelScheme& scheme, StateClass state_class, int root_count) {
  switch (state_class) {
    case StateClass::empty: return 0;
    case StateClass::talmi_zero: return root_count + 1;
    case StateClass::generic:
    case StateClass::richardson: return root_count;
    case StateClass::hole_zero: return scheme.max_pairs() - root_count;
    case StateClass::full: return scheme.max_pairs();
  }
  return 0;
}

double EigenRecord::max_residual() const {
  double worst = energy_residual;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

std::vector<double> empty_shell_eigenvalues(const LevelScheme& scheme) {
  const int n = scheme.size();
  std::vector<double> e0(n, 0.0);
  if (scheme.mode == Mode::degenerate) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (k != j)
          e0[j] += 0.5 * scheme.levels[j].omega * scheme.levels[k].omega /
                   (1.0 - scheme.c_squared(j) / scheme.c_squared(k));
  } else if (scheme.mode == Mode::reduced) {
    const double gd = scheme.g * scheme.level_spacing();
    for (int j = 0; j < n; ++j) {
      e0[j] = -0.5 * scheme.levels[j].omega;
      for (int k = 0; k < n; ++k)
        if (k != j)
          e0[j] -= 0.25 * gd * scheme.levels[j].omega * scheme.levels[k].omega /
                   (scheme.levels[j].epsilon - scheme.levels[k].epsilon);
    }
  } else {
    throw DomainError("empty-shell invariant eigenvalues need reduced or degenerate mode");
  }
  return e0;
}

namespace {

constexpr double kImaginaryTolerance = 1e-9;

double real_part_checked(Complex value, const char* what) {
  if (std::abs(value.imag()) > kImaginaryTolerance * std::max(1.0, std::abs(value.real()))) {
    std::ostringstream msg;
    msg << what << " has imaginary part " << value.imag() << " (roots not a conjugation-closed set?)";
    throw VerificationError(msg.str());
  }
  return value.real();
}

void require_class_mode(const LevelScheme& scheme, StateClass state_class) {
  const bool degenerate_class = state_class == StateClass::talmi_zero || state_class == StateClass::generic ||
                                state_class == StateClass::hole_zero;
  if (degenerate_class && scheme.mode != Mode::degenerate)
    throw DomainError(to_string(state_class) + " states need a degenerate-mode scheme");
  if (state_class == StateClass::richardson && scheme.mode != Mode::reduced)
    throw DomainError("richardson states need a reduced-mode scheme");
}

void require_off_pole(double pole, Complex root) {
  if (std::abs(root - pole) <= 1e-8 * std::max(1.0, std::abs(pole)))
    throw DomainError("Bethe root sits on a pole");
}

}  // namespace

std::vector<double> invariant_eigenvalues(const LevelScheme& scheme, StateClass state_class,
                                          std::span<const Complex> roots) {
  require_class_mode(scheme, state_class);
  const int n = scheme.size();
  const std::vector<double> e0 = empty_shell_eigenvalues(scheme);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double omega = scheme.levels[j].omega;
    Complex value = e0[j];
    switch (state_class) {
      case StateClass::empty: break;
      case StateClass::full: value -= omega; break;
      case StateClass::talmi_zero:
      case StateClass::hole_zero:
        value -= omega;
        [[fallthrough]];
      case StateClass::generic:
        for (const Complex x : roots) {
          require_off_pole(1.0 / scheme.c_squared(j), x);
          value -= omega / (1.0 - scheme.c_squared(j) * x);
        }
        break;
      case StateClass::richardson: {
        const double gd = scheme.g * scheme.level_spacing();
        for (const Complex xi : roots) {
          require_off_pole(2.0 * scheme.levels[j].epsilon, xi);
          value += gd * omega / (2.0 * scheme.levels[j].epsilon - xi);
        }
        break;
      }
    }
    out[j] = real_part_checked(value, "invariant eigenvalue");
  }
  return out;
}

double energy_from_invariants(const LevelScheme& scheme, std::span<const double> eigenvalues,
                              std::span<const Complex> roots) {
  if (static_cast<int>(eigenvalues.size()) != scheme.size())
    throw DomainError("need one invariant eigenvalue per level");
  if (scheme.mode == Mode::degenerate) {
    double energy = 0.0;
    for (int j = 0; j < scheme.size(); ++j) energy += scheme.g * scheme.c_squared(j) * eigenvalues[j];
    return energy;
  }
  if (scheme.mode == Mode::reduced) {
    Complex sum = 0.0;
    for (const Complex xi : roots) sum += xi;
    return real_part_checked(sum, "Richardson energy");
  }
  throw DomainError("energy reconstruction needs reduced or degenerate mode");
}

double energy_from_magnets(const LevelScheme& scheme, std::span<const double> eigenvalues) {
  if (scheme.mode != Mode::reduced) throw DomainError("magnet reconstruction needs reduced mode");
  const double gd = scheme.g * scheme.level_spacing();
  double total = 0.0;
  double energy = 0.0;
  for (int j = 0; j < scheme.size(); ++j) {
    const auto& level = scheme.levels[j];
    const double s = 0.5 * level.omega;
    energy += (2.0 * level.epsilon - gd) * eigenvalues[j] - gd * s * (s + 1.0) + level.epsilon * level.omega;
    total += eigenvalues[j];
  }
  return energy + gd * total * total;
}

namespace {

PairFieldParams field_params(const LevelScheme& scheme, Complex parameter) {
  if (scheme.mode == Mode::degenerate) return DegenerateField{parameter};
  if (scheme.mode == Mode::reduced) return RichardsonField{parameter};
  throw DomainError("pair fields need reduced or degenerate mode");
}

double column_norm(const SparseMatrix& m) {
  double worst = 0.0;
  for (Index col = 0; col < m.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) sum += std::abs(it.value());
    worst = std::max(worst, sum);
  }
  return worst;
}

struct Product {
  StateVector state;
  double scale = 1.0;  // product of factor 1-norms
};

Product apply_with_scale(const LevelScheme& scheme, StateVector start, std::span<const Complex> parameters,
                         FieldSign sign) {
  Product out{std::move(start), 1.0};
  for (auto it = parameters.rbegin(); it != parameters.rend(); ++it) {
    const LinearOperator field = build_pair_field(scheme, out.state.basis, field_params(scheme, *it), sign);
    out.scale *= std::max(column_norm(field.matrix), 1e-300);
    out.state = field * out.state;
  }
  return out;
}

}  // namespace

StateVector apply_pair_fields(const LevelScheme& scheme, StateVector start, std::span<const Complex> parameters,
                              FieldSign sign) {
  return apply_with_scale(scheme, std::move(start), parameters, sign).state;
}

StateVector build_bethe_state(const LevelScheme& scheme, const BasisPtr& basis, StateClass state_class,
                              std::span<const Complex> roots) {
  require_class_mode(scheme, state_class);
  if ((state_class == StateClass::empty || state_class == StateClass::full) && !roots.empty())
    throw DomainError(to_string(state_class) + " states take no roots");
  const int sector = bethe_sector(scheme, state_class, static_cast<int>(roots.size()));
  if (sector < 0 || sector > scheme.max_pairs())
    throw DomainError("Bethe state would leave the pair space (sector " + std::to_string(sector) + ")");
  if (basis->sector() && *basis->sector() != sector)
    throw DomainError("basis sector " + std::to_string(*basis->sector()) + " does not hold a " +
                      to_string(state_class) + " state of sector " + std::to_string(sector));

  std::vector<Complex> parameters(roots.begin(), roots.end());
  StateVector start;
  FieldSign sign = FieldSign::raise;
  switch (state_class) {
    case StateClass::empty:
    case StateClass::talmi_zero:
    case StateClass::generic:
    case StateClass::richardson: start = vacuum_state(build_basis(scheme, 0)); break;
    case StateClass::hole_zero:
    case StateClass::full:
      start = full_shell_state(build_basis(scheme, scheme.max_pairs()));
      sign = FieldSign::lower;
      break;
  }
  if (state_class == StateClass::talmi_zero) parameters.insert(parameters.begin(), Complex(0.0));

  Product product = apply_with_scale(scheme, start, parameters, sign);
  const double norm = product.state.norm();
  if (!(norm > 1e-10 * product.scale))
    throw VerificationError("Bethe product of class " + to_string(state_class) + " vanishes (norm " +
                            std::to_string(norm) + ")");
  if (parameters.size() >= 2) {
    std::vector<Complex> reversed(parameters.rbegin(), parameters.rend());
    const StateVector other = apply_pair_fields(scheme, start, reversed, sign);
    if ((other.amplitudes - product.state.amplitudes).norm() > 1e-10 * product.scale)
      throw VerificationError("pair-field factors failed to commute");
  }
  if (!basis->sector()) return embed(product.state, basis);
  return product.state;
}

EigenRecord make_record(const OperatorSet& ops, StateClass state_class, std::span<const Complex> roots) {
  const LevelScheme& scheme = ops.scheme;
  EigenRecord record;
  record.state_class = state_class;
  record.roots.assign(roots.begin(), roots.end());
  record.sector = bethe_sector(scheme, state_class, static_cast<int>(roots.size()));
  record.state = build_bethe_state(scheme, ops.basis, state_class, roots);
  record.norm = record.state.norm();

  if (scheme.mode == Mode::general) {
    if (state_class == StateClass::full) {
      for (const auto& level : scheme.levels)
        record.energy += (2.0 * level.epsilon - scheme.g * level.c * level.c) * level.omega;
    }
  } else {
    record.invariant_eigenvalues = invariant_eigenvalues(scheme, state_class, roots);
    if (scheme.mode == Mode::reduced && state_class == StateClass::empty)
      record.energy = 0.0;
    else
      record.energy = energy_from_invariants(scheme, record.invariant_eigenvalues, roots);
  }

  const ComplexVector& psi = record.state.amplitudes;
  for (std::size_t j = 0; j < ops.invariants.size(); ++j) {
    const ComplexVector image = ops.invariants[j].matrix * psi;
    record.residuals.push_back((image - record.invariant_eigenvalues[j] * psi).norm() / record.norm);
  }
  record.energy_residual = (ops.hamiltonian.matrix * psi - record.energy * psi).norm() / record.norm;
  return record;
}

double ray_distance(const ComplexVector& a, const ComplexVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::sqrt(2.0);
  const Complex overlap = a.dot(b);
  const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0);
  return (a / na - phase * b / nb).norm();
}

namespace {

ComplexVector restrict_vector(const StateVector& full_state, const BasisPtr& sector_basis) {
  ComplexVector out(sector_basis->dimension());
  for (Index i = 0; i < sector_basis->dimension(); ++i)
    out(i) = full_state.amplitudes(*full_state.basis->find(sector_basis->occupation(i)));
  return out;
}

}  // namespace

HoleImage hole_sector_map(const LevelScheme& scheme, const EigenRecord& record) {
  if (record.state_class != StateClass::talmi_zero && record.state_class != StateClass::generic)
    throw DomainError("hole map applies to talmi_zero or generic records");
  const int n_pairs = record.sector;
  if (record.state_class == StateClass::talmi_zero && 2 * n_pairs > scheme.max_pairs())
    throw DomainError("hole map of a talmi_zero record needs N <= N_max/2");

  const BasisPtr full = build_basis(scheme);
  const StateVector psi = record.state.basis->sector() ? embed(record.state, full) : record.state;
  const StateVector image = build_symmetry_B(scheme, full) * psi;

  HoleImage out;
  out.image_norm = image.norm() / psi.norm();
  if (record.state_class == StateClass::generic) return out;
  if (!(out.image_norm > 1e-10))
    throw VerificationError("B annihilated a talmi_zero state it should map to a hole state");

  const int hole_sector = scheme.max_pairs() - n_pairs + 1;
  const BasisPtr sector_basis = build_basis(scheme, hole_sector);
  const OperatorSet ops = build_operator_set(scheme, sector_basis);
  const StateClass hole_class = record.roots.empty() ? StateClass::full : StateClass::hole_zero;
  EigenRecord hole = make_record(ops, hole_class, record.roots);
  out.ray_distance = ray_distance(restrict_vector(image, sector_basis), hole.state.amplitudes);
  out.image = std::move(hole);
  return out;
}

namespace {

struct SectorBuilder {
  const LevelScheme& scheme;
  const SolverOptions& options;
  SpectrumReport& report;

  void add(const OperatorSet& ops, StateClass state_class, const std::vector<Complex>& roots) {
    try {
      report.records.push_back(make_record(ops, state_class, roots));
    } catch (const VerificationError& err) {
      report.notes.push_back("sector " + std::to_string(*ops.basis->sector()) + ": skipped " +
                             to_string(state_class) + " candidate: " + err.what());
    }
  }

  /// Adds one record per solution; returns false when every seed failed.
  bool add_solutions(const OperatorSet& ops, Family family, int pair_count, StateClass state_class) {
    const SolveReport solved = solve({scheme, family, pair_count, options});
    for (const auto& w : solved.warnings)
      report.notes.push_back("sector " + std::to_string(*ops.basis->sector()) + ": " + to_string(family) + ": " + w);
    for (const auto& solution : solved.solutions) add(ops, state_class, solution.roots);
    return !(solved.attempts > 0 && solved.failures == solved.attempts && solved.solutions.empty());
  }
};

}  // namespace

SpectrumReport build_spectrum(const LevelScheme& scheme, int first_sector, int last_sector,
                              const SolverOptions& options) {
  const int n_max = scheme.max_pairs();
  if (first_sector < 0 || last_sector > n_max || first_sector > last_sector)
    throw DomainError("pair range must satisfy 0 <= first <= last <= " + std::to_string(n_max));

  SpectrumReport report;
  report.scheme = scheme;
  report.first_sector = first_sector;
  report.last_sector = last_sector;
  SectorBuilder builder{scheme, options, report};
  for (int sector = first_sector; sector <= last_sector; ++sector) {
    const OperatorSet ops = build_operator_set(scheme, build_basis(scheme, sector));
    if (sector == 0) {
      builder.add(ops, StateClass::empty, {});
      continue;
    }
    switch (scheme.mode) {
      case Mode::reduced:
        if (!builder.add_solutions(ops, Family::richardson, sector, StateClass::richardson))
          report.solver_exhausted = true;
        break;
      case Mode::degenerate:
        if (sector == n_max) {
          builder.add(ops, StateClass::full, {});
        } else if (2 * sector <= n_max) {
          const bool zero = builder.add_solutions(ops, Family::degenerate_zero, sector, StateClass::talmi_zero);
          const bool generic =
              builder.add_solutions(ops, Family::degenerate_generic, sector, StateClass::generic);
          if (!zero && !generic) report.solver_exhausted = true;
        } else {
          const int particle_label = n_max - sector + 1;
          if (!builder.add_solutions(ops, Family::degenerate_zero, particle_label, StateClass::hole_zero))
            report.solver_exhausted = true;
        }
        break;
      case Mode::general:
        if (sector == n_max)
          builder.add(ops, StateClass::full, {});
        else
          report.notes.push_back("sector " + std::to_string(sector) + ": no Bethe family in general mode");
        break;
    }
  }
  std::stable_sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
    if (a.sector != b.sector) return a.sector < b.sector;
    return a.energy < b.energy;
  });
  return report;
}

}  // namespace gaudin_pair
