#ifndef GAUDIN_PAIR_SPECTRUM_HPP
#define GAUDIN_PAIR_SPECTRUM_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaudin_pair/bethe.hpp"
#include "gaudin_pair/operators.hpp"

namespace gaudin_pair {

/// Eigenstate families. `talmi_zero` carries the S^+(0) factor, `hole_zero`
/// is built on the full shell with S^-(z_k) factors, `richardson` is the
/// reduced-mode J^+(xi_k) product.
enum class StateClass { empty, talmi_zero, generic, hole_zero, full, richardson };

std::string to_string(StateClass state_class);
StateClass parse_state_class(const std::string& text);

/// Pair sector of the Bethe state of `state_class` with `root_count` roots.
int bethe_sector(const LevelScheme& scheme, StateClass state_class, int root_count);

struct EigenRecord {
  int sector = 0;
  StateClass state_class = StateClass::empty;
  std::vector<Complex> roots;
  std::vector<double> invariant_eigenvalues;
  double energy = 0.0;
  /// Unnormalized Bethe product on the sector basis.
  StateVector state;
  double norm = 0.0;
  /// ||I_j psi - e_j psi|| / ||psi|| per invariant.
  std::vector<double> residuals;
  /// ||H psi - E psi|| / ||psi||.
  double energy_residual = 0.0;
  std::optional<bool> oracle_match;

  double max_residual() const;
};

/// E_j^(0): invariant eigenvalues on the empty shell.
std::vector<double> empty_shell_eigenvalues(const LevelScheme& scheme);

/// Closed-form invariant eigenvalues (lambda_j, mu_j, E_j^(N), ...) for a
/// validated root list. Zero and hole classes take the z_k only; the fixed
/// root at 0 is implied.
std::vector<double> invariant_eigenvalues(const LevelScheme& scheme, StateClass state_class,
                                          std::span<const Complex> roots);

/// Energy from invariant eigenvalues: |G| sum_j c_j^2 e_j (degenerate) or
/// sum_k xi_k (reduced, taken from the roots).
double energy_from_invariants(const LevelScheme& scheme, std::span<const double> eigenvalues,
                              std::span<const Complex> roots = {});

/// Reduced-mode energy rebuilt from Gaudin magnet eigenvalues through the
/// quadratic Hamiltonian identity.
double energy_from_magnets(const LevelScheme& scheme, std::span<const double> eigenvalues);

/// Applies pair fields S^{+/-}(x) (degenerate) or J^{+/-}(xi) (reduced), last
/// parameter first, to `start`. No vanishing or ordering checks.
StateVector apply_pair_fields(const LevelScheme& scheme, StateVector start,
                              std::span<const Complex> parameters, FieldSign sign);

/// Bethe product for the class. `basis` is either the unrestricted basis or
/// the target sector. Throws VerificationError when the product vanishes or
/// depends on factor order.
StateVector build_bethe_state(const LevelScheme& scheme, const BasisPtr& basis, StateClass state_class,
                              std::span<const Complex> roots);

/// Builds the state, evaluates the closed forms and the residuals against
/// the sector operators `ops` (built on the record's sector basis).
EigenRecord make_record(const OperatorSet& ops, StateClass state_class, std::span<const Complex> roots);

struct HoleImage {
  /// hole_zero (or full) record for talmi input; empty for generic input.
  std::optional<EigenRecord> image;
  /// ||B psi|| / ||psi||.
  double image_norm = 0.0;
  /// Ray distance between B psi and the directly built hole state.
  double ray_distance = 0.0;
};

/// Image of a particle record under B = T^dagger S^-(0).
HoleImage hole_sector_map(const LevelScheme& scheme, const EigenRecord& record);

/// min over phases of ||a/|a| - e^{i phi} b/|b|||.
double ray_distance(const ComplexVector& a, const ComplexVector& b);

struct SectorCoverage {
  int sector = 0;
  Index dimension = 0;
  Index matched = 0;
  int records = 0;
  int unmatched_records = 0;
};

struct SpectrumReport {
  LevelScheme scheme;
  int first_sector = 0;
  int last_sector = 0;
  std::vector<EigenRecord> records;  ///< sorted by (sector, energy)
  std::vector<SectorCoverage> coverage;
  double coverage_fraction = 0.0;
  std::vector<std::string> notes;
  /// True when every family's solver failed on every seed in some sector.
  bool solver_exhausted = false;
};

/// Solves every Bethe family relevant to sectors [first, last] and assembles
/// the records. Particle classes fill sectors up to N_max/2, hole classes the
/// sectors above.
SpectrumReport build_spectrum(const LevelScheme& scheme, int first_sector, int last_sector,
                              const SolverOptions& options);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_SPECTRUM_HPP
