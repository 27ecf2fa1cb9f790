#ifndef GAUDIN_PAIR_BETHE_HPP
#define GAUDIN_PAIR_BETHE_HPP

// Numerical solution of the Bethe ansatz equations of the reduced
// (Richardson) and degenerate pairing models.
//
// All three systems share one electrostatic form. For unknowns x_k,
//
//   F_k = sum_j w_j / (a_j - x_k) + C - q / x_k - sum_{l != k} 1 / (x_k - x_l) = 0
//
// with poles a_j, weights w_j = -Omega_j/2, and
//   richardson          a_j = 2 eps_j,  C = 1/(2 |G| d), q = 0
//   degenerate_generic  a_j = 1/c_j^2,  C = 0,           q = 0
//   degenerate_zero     a_j = 1/c_j^2,  C = 0,           q = 1  (fixed root at 0)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaudin_pair/hilbert.hpp"

namespace gaudin_pair {

enum class Family { richardson, degenerate_generic, degenerate_zero };

std::string to_string(Family family);

struct SolverOptions {
  int seeds_per_pair = 64;
  int max_iterations = 200;
  double newton_tolerance = 1e-11;
  double separation_tolerance = 1e-8;
  std::uint64_t seed = 20080613;
  /// Worker threads; 0 reads GAUDIN_PAIR_THREADS (default 1).
  int threads = 0;
};

/// Resolves the worker count: explicit request, else GAUDIN_PAIR_THREADS, else 1.
int worker_threads(int requested);

struct BetheProblem {
  LevelScheme scheme;
  Family family = Family::degenerate_generic;
  int pair_count = 1;
  SolverOptions options;
};

struct BetheSolution {
  Family family = Family::degenerate_generic;
  /// N roots (richardson, generic) or the N-1 z_k of the zero class.
  std::vector<Complex> roots;
  double residual = 0.0;
  bool converged = false;
};

struct SolveReport {
  std::vector<BetheSolution> solutions;  ///< canonical, deduplicated, sorted
  int attempts = 0;
  int failures = 0;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Equation system.

struct BaeSystem {
  std::vector<double> poles;
  std::vector<double> weights;
  Complex constant = 0.0;
  double origin_charge = 0.0;
};

BaeSystem bae_system(const LevelScheme& scheme, Family family);
/// Richardson system at an arbitrary (possibly complex) coupling |G|.
BaeSystem richardson_system(const LevelScheme& scheme, Complex coupling);

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bae_equations(const BaeSystem& system,
                                                       std::span<const Scalar> roots) {
  const Index n = static_cast<Index>(roots.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f(n);
  for (Index k = 0; k < n; ++k) {
    const Scalar x = roots[k];
    Scalar value = Scalar(system.constant);
    for (std::size_t j = 0; j < system.poles.size(); ++j)
      value += Scalar(system.weights[j]) / (Scalar(system.poles[j]) - x);
    if (system.origin_charge != 0.0) value -= Scalar(system.origin_charge) / x;
    for (Index l = 0; l < n; ++l)
      if (l != k) value -= Scalar(1) / (x - roots[l]);
    f(k) = value;
  }
  return f;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> bae_jacobian(const BaeSystem& system,
                                                                   std::span<const Scalar> roots) {
  const Index n = static_cast<Index>(roots.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac(n, n);
  for (Index k = 0; k < n; ++k) {
    const Scalar x = roots[k];
    Scalar diag = Scalar(0);
    for (std::size_t j = 0; j < system.poles.size(); ++j) {
      const Scalar d = Scalar(system.poles[j]) - x;
      diag += Scalar(system.weights[j]) / (d * d);
    }
    if (system.origin_charge != 0.0) diag += Scalar(system.origin_charge) / (x * x);
    for (Index l = 0; l < n; ++l) {
      if (l == k) continue;
      const Scalar d = x - roots[l];
      const Scalar term = Scalar(1) / (d * d);
      diag += term;
      jac(k, l) = -term;
    }
    jac(k, k) = diag;
  }
  return jac;
}

/// Largest sum of term magnitudes over the equations; the natural scale of
/// the residual in floating point.
double bae_term_scale(const BaeSystem& system, std::span<const Complex> roots);

/// Max-norm residual of the family's equations. Throws DomainError when a
/// root lies within `pole_tolerance` of a pole (or of 0 for the zero class)
/// or two roots coincide.
double bae_residual(const LevelScheme& scheme, Family family, std::span<const Complex> roots,
                    double pole_tolerance = 1e-8);

/// Roots sorted by (real, imaginary) with ties in the real part resolved
/// within the separation tolerance.
BetheSolution canonicalize(BetheSolution solution, double tolerance = 1e-8);
/// Permutation-invariant equality within `tolerance`, entrywise.
bool same_roots(std::span<const Complex> a, std::span<const Complex> b, double tolerance = 1e-8);

// ---------------------------------------------------------------------------
// Solvers.

struct NewtonResult {
  std::vector<Complex> roots;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton iteration on the complex unknowns with steps clipped to half
/// the distance to the nearest pole or neighbouring root. Converged means
/// residual <= tolerance * max(1, term scale).
NewtonResult newton_solve(const BaeSystem& system, std::vector<Complex> start, int max_iterations,
                          double tolerance);

/// Checks distinctness, pole clearance and residual of a candidate.
bool admissible(const BaeSystem& system, std::span<const Complex> roots, double residual_tolerance,
                double separation_tolerance);

/// Weak-coupling start of a Richardson path: roots clustered around 2 eps_j,
/// N_j per level, at coupling |G| (possibly complex).
std::vector<Complex> richardson_weak_coupling_roots(const LevelScheme& scheme,
                                                    std::span<const int> occupation, Complex coupling);

struct RichardsonPath {
  std::vector<int> occupation;
  std::vector<Complex> roots;
  double residual = 0.0;
  int steps = 0;
  bool converged = false;
};

/// Continues one weak-coupling configuration from |G| ~ 0 to the scheme's |G|
/// along a complex detour that avoids the real-axis root collisions.
RichardsonPath track_richardson(const LevelScheme& scheme, std::span<const int> occupation,
                                const SolverOptions& options);

SolveReport solve_richardson(const BetheProblem& problem);
SolveReport solve_degenerate_generic(const BetheProblem& problem);
SolveReport solve_degenerate_zero(const BetheProblem& problem);
/// Dispatches on problem.family.
SolveReport solve(const BetheProblem& problem);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_BETHE_HPP
