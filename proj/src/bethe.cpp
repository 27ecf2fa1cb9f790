#include "gaudin_pair/bethe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "gaudin_pair/polynomial.hpp"

namespace gaudin_pair {

std::string to_string(Family family) {
  switch (family) {
    case Family::richardson: return "richardson";
    case Family::degenerate_generic: return "degenerate_generic";
    case Family::degenerate_zero: return "degenerate_zero";
  }
  return "richardson";
}

int worker_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GAUDIN_PAIR_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<int>(std::min<long>(value, 256));
  }
  return 1;
}

namespace {

/// Runs task(i) for i in [0, count) on up to `threads` workers. Each task
/// writes only its own output slot, so the merge afterwards is ordered.
template <typename Task>
void parallel_for(int count, int threads, Task&& task) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) task(i);
    });
  for (auto& worker : pool) worker.join();
}

bool finite(std::span<const Complex> roots) {
  return std::all_of(roots.begin(), roots.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double nearest_obstacle(const BaeSystem& system, std::span<const Complex> roots, std::size_t k) {
  double dmin = std::numeric_limits<double>::infinity();
  for (double pole : system.poles) dmin = std::min(dmin, std::abs(roots[k] - pole));
  if (system.origin_charge != 0.0) dmin = std::min(dmin, std::abs(roots[k]));
  for (std::size_t l = 0; l < roots.size(); ++l)
    if (l != k) dmin = std::min(dmin, std::abs(roots[k] - roots[l]));
  return dmin;
}

double max_abs(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Roots beyond this radius are runaways: every term of the equations decays
/// there, so small residuals stop meaning anything.
double escape_radius(const BaeSystem& system) {
  double reach = 1.0;
  double charge = 0.0;
  for (std::size_t j = 0; j < system.poles.size(); ++j) {
    reach = std::max(reach, std::abs(system.poles[j]));
    charge += std::abs(system.weights[j]);
  }
  if (std::abs(system.constant) > 0.0) reach += 2.0 * charge / std::abs(system.constant);
  return 1e3 * reach;
}

/// Residual that rounding of the roots alone produces: 4 eps sum_l |J_kl| |x_l|.
double rounding_floor(const BaeSystem& system, std::span<const Complex> roots) {
  const ComplexMatrix jac = bae_jacobian<Complex>(system, roots);
  double floor = 0.0;
  for (Index k = 0; k < jac.rows(); ++k) {
    double sum = 0.0;
    for (Index l = 0; l < jac.cols(); ++l) sum += std::abs(jac(k, l)) * std::max(1.0, std::abs(roots[l]));
    floor = std::max(floor, sum);
  }
  return 4.0 * std::numeric_limits<double>::epsilon() * floor;
}

bool small_enough(const BaeSystem& system, std::span<const Complex> roots, double residual, double tolerance) {
  return residual <= tolerance * std::max(1.0, bae_term_scale(system, roots)) + rounding_floor(system, roots);
}

bool escaped(const BaeSystem& system, std::span<const Complex> roots) {
  const double radius = escape_radius(system);
  return std::any_of(roots.begin(), roots.end(), [radius](Complex z) { return std::abs(z) > radius; });
}

}  // namespace

BaeSystem bae_system(const LevelScheme& scheme, Family family) {
  if (family == Family::richardson) return richardson_system(scheme, scheme.g);
  BaeSystem system;
  for (int j = 0; j < scheme.size(); ++j) {
    system.poles.push_back(1.0 / scheme.c_squared(j));
    system.weights.push_back(-0.5 * scheme.levels[j].omega);
  }
  system.origin_charge = family == Family::degenerate_zero ? 1.0 : 0.0;
  return system;
}

BaeSystem richardson_system(const LevelScheme& scheme, Complex coupling) {
  if (coupling == Complex(0.0)) throw DomainError("Richardson equations need a nonzero coupling");
  BaeSystem system;
  for (const auto& level : scheme.levels) {
    system.poles.push_back(2.0 * level.epsilon);
    system.weights.push_back(-0.5 * level.omega);
  }
  system.constant = 1.0 / (2.0 * coupling * scheme.level_spacing());
  return system;
}

double bae_term_scale(const BaeSystem& system, std::span<const Complex> roots) {
  double scale = 0.0;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    double sum = std::abs(system.constant);
    for (std::size_t j = 0; j < system.poles.size(); ++j)
      sum += std::abs(system.weights[j] / (system.poles[j] - roots[k]));
    if (system.origin_charge != 0.0) sum += std::abs(system.origin_charge / roots[k]);
    for (std::size_t l = 0; l < roots.size(); ++l)
      if (l != k) sum += 1.0 / std::abs(roots[k] - roots[l]);
    scale = std::max(scale, sum);
  }
  return scale;
}

double bae_residual(const LevelScheme& scheme, Family family, std::span<const Complex> roots,
                    double pole_tolerance) {
  const BaeSystem system = bae_system(scheme, family);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    for (std::size_t j = 0; j < system.poles.size(); ++j)
      if (std::abs(roots[k] - system.poles[j]) <= pole_tolerance)
        throw DomainError("root " + std::to_string(k + 1) + " lies on the pole of level " +
                          std::to_string(j + 1));
    if (system.origin_charge != 0.0 && std::abs(roots[k]) <= pole_tolerance)
      throw DomainError("zero-class root " + std::to_string(k + 1) + " lies on the fixed root 0");
    for (std::size_t l = 0; l < k; ++l)
      if (std::abs(roots[k] - roots[l]) <= pole_tolerance)
        throw DomainError("roots " + std::to_string(l + 1) + " and " + std::to_string(k + 1) +
                          " coincide");
  }
  return max_abs(bae_equations<Complex>(system, roots));
}

namespace {

bool canonical_less(Complex a, Complex b, double tolerance) {
  if (std::abs(a.real() - b.real()) > tolerance) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool lexicographic_less(const std::vector<Complex>& a, const std::vector<Complex>& b, double tolerance) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::abs(a[i] - b[i]) <= tolerance) continue;
    return canonical_less(a[i], b[i], tolerance);
  }
  return a.size() < b.size();
}

}  // namespace

BetheSolution canonicalize(BetheSolution solution, double tolerance) {
  std::stable_sort(solution.roots.begin(), solution.roots.end(),
                   [tolerance](Complex a, Complex b) { return canonical_less(a, b, tolerance); });
  return solution;
}

bool same_roots(std::span<const Complex> a, std::span<const Complex> b, double tolerance) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Complex z : a) {
    bool matched = false;
    for (std::size_t i = 0; i < b.size() && !matched; ++i) {
      if (!used[i] && std::abs(z - b[i]) <= tolerance) used[i] = matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

NewtonResult newton_solve(const BaeSystem& system, std::vector<Complex> start, int max_iterations,
                          double tolerance) {
  NewtonResult result;
  result.roots = std::move(start);
  auto& roots = result.roots;
  if (roots.empty()) {
    result.converged = true;
    return result;
  }
  if (!finite(roots)) return result;

  ComplexVector f = bae_equations<Complex>(system, roots);
  double residual = max_abs(f);
  for (int it = 0; it <= max_iterations; ++it) {
    result.iterations = it;
    result.residual = residual;
    if (!std::isfinite(residual) || escaped(system, roots)) return result;
    if (small_enough(system, roots, residual, tolerance)) {
      result.converged = true;
      return result;
    }
    if (it == max_iterations) break;

    const ComplexMatrix jac = bae_jacobian<Complex>(system, roots);
    const ComplexVector step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) return result;

    double factor = 1.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const double len = std::abs(step(static_cast<Index>(k)));
      const double room = 0.5 * nearest_obstacle(system, roots, k);
      if (len > room && len > 0.0) factor = std::min(factor, room / len);
    }

    std::vector<Complex> trial(roots.size());
    ComplexVector trial_f;
    double trial_residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 10; ++attempt) {
      for (std::size_t k = 0; k < roots.size(); ++k) trial[k] = roots[k] + factor * step(static_cast<Index>(k));
      trial_f = bae_equations<Complex>(system, trial);
      trial_residual = max_abs(trial_f);
      if (trial_residual < residual) break;
      factor *= 0.5;
    }
    roots = trial;
    f = std::move(trial_f);
    residual = trial_residual;
  }
  result.residual = residual;
  return result;
}

bool admissible(const BaeSystem& system, std::span<const Complex> roots, double residual_tolerance,
                double separation_tolerance) {
  if (!finite(roots) || escaped(system, roots)) return false;
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (nearest_obstacle(system, roots, k) <= separation_tolerance) return false;
  const double residual = max_abs(bae_equations<Complex>(system, roots));
  return small_enough(system, roots, residual, residual_tolerance);
}

namespace {

/// Adds a converged candidate (and its conjugate) to the deduplicated set.
void merge_candidate(const BaeSystem& system, Family family, const std::vector<Complex>& roots,
                     const SolverOptions& options, std::vector<BetheSolution>& out) {
  if (!admissible(system, roots, options.newton_tolerance, options.separation_tolerance)) return;
  auto add = [&](std::vector<Complex> candidate) {
    for (const auto& existing : out)
      if (same_roots(existing.roots, candidate, options.separation_tolerance)) return;
    BetheSolution solution{family, std::move(candidate), 0.0, true};
    solution.residual = max_abs(bae_equations<Complex>(system, solution.roots));
    out.push_back(canonicalize(std::move(solution), options.separation_tolerance));
  };
  add(roots);
  std::vector<Complex> conj(roots.size());
  std::transform(roots.begin(), roots.end(), conj.begin(), [](Complex z) { return std::conj(z); });
  // Real coefficients make the conjugate a solution too; polish it so the
  // stored digits do not depend on which member of the pair was found first.
  const NewtonResult polished = newton_solve(system, conj, 20, options.newton_tolerance);
  if (polished.converged && admissible(system, polished.roots, options.newton_tolerance,
                                       options.separation_tolerance))
    add(polished.roots);
}

void sort_solutions(std::vector<BetheSolution>& solutions, double tolerance) {
  std::stable_sort(solutions.begin(), solutions.end(), [tolerance](const auto& a, const auto& b) {
    return lexicographic_less(a.roots, b.roots, tolerance);
  });
}

void finish(SolveReport& report, const char* what, double tolerance) {
  sort_solutions(report.solutions, tolerance);
  if (report.solutions.empty())
    report.warnings.push_back(std::string(what) + ": no admissible solution found");
}

void require_mode(const BetheProblem& problem, Mode mode, const char* what) {
  if (problem.scheme.mode != mode)
    throw DomainError(std::string(what) + " needs a " + to_string(mode) + "-mode scheme");
}

/// Single-unknown systems reduce to polynomials after clearing denominators:
/// sum_j Omega_j prod_{i != j}(a_i - x) [* x] + 2 q prod_i (a_i - x) = 0.
std::vector<Complex> single_root_candidates(const BaeSystem& system) {
  const std::size_t n = system.poles.size();
  Polynomial<double> numerator{0.0};
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial<double> term{-2.0 * system.weights[j]};  // Omega_j
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) term = multiply(term, Polynomial<double>{system.poles[i], -1.0});
    if (numerator.size() < term.size()) numerator.resize(term.size(), 0.0);
    for (std::size_t d = 0; d < term.size(); ++d) numerator[d] += term[d];
  }
  if (system.origin_charge != 0.0) {
    numerator = multiply(numerator, Polynomial<double>{0.0, 1.0});
    Polynomial<double> all{2.0 * system.origin_charge};
    for (std::size_t i = 0; i < n; ++i) all = multiply(all, Polynomial<double>{system.poles[i], -1.0});
    if (numerator.size() < all.size()) numerator.resize(all.size(), 0.0);
    for (std::size_t d = 0; d < all.size(); ++d) numerator[d] += all[d];
  }
  std::vector<Complex> roots = companion_roots(numerator);
  for (auto& r : roots) r = polish_root(numerator, r);
  return roots;
}

SolveReport multistart(const BetheProblem& problem, const BaeSystem& system, int unknowns) {
  const auto& opt = problem.options;
  SolveReport report;
  if (unknowns == 0) {
    report.attempts = 1;
    report.solutions.push_back({problem.family, {}, 0.0, true});
    return report;
  }

  double radius = 1.0;
  double spacing = std::numeric_limits<double>::infinity();
  std::vector<double> anchors = system.poles;
  if (system.origin_charge != 0.0) anchors.push_back(0.0);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    radius = std::max(radius, 1.5 * std::abs(anchors[i]) + 1.0);
    for (std::size_t k = 0; k < i; ++k) spacing = std::min(spacing, std::abs(anchors[i] - anchors[k]));
  }
  if (!std::isfinite(spacing)) spacing = 1.0;

  const int seeds = std::max(1, opt.seeds_per_pair * unknowns);
  std::vector<NewtonResult> results(static_cast<std::size_t>(seeds));
  parallel_for(seeds, worker_threads(opt.threads), [&](int idx) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(problem.family), static_cast<std::uint32_t>(unknowns),
                      static_cast<std::uint32_t>(idx)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> start(static_cast<std::size_t>(unknowns));
    if (idx % 2 == 0) {
      std::uniform_int_distribution<std::size_t> pick(0, anchors.size() - 1);
      for (auto& z : start) {
        const double spread = spacing * (0.05 + 0.45 * unit(rng));
        z = anchors[pick(rng)] + spread * Complex(normal(rng), normal(rng));
      }
    } else {
      for (auto& z : start)
        z = std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    }
    results[static_cast<std::size_t>(idx)] =
        newton_solve(system, std::move(start), opt.max_iterations, opt.newton_tolerance);
  });

  report.attempts = seeds;
  if (unknowns == 1) {
    for (const Complex root : single_root_candidates(system)) {
      const NewtonResult polished = newton_solve(system, {root}, opt.max_iterations, opt.newton_tolerance);
      if (polished.converged) merge_candidate(system, problem.family, polished.roots, opt, report.solutions);
    }
  }
  for (const auto& result : results) {
    if (!result.converged) {
      ++report.failures;
      continue;
    }
    merge_candidate(system, problem.family, result.roots, opt, report.solutions);
  }
  return report;
}

}  // namespace

SolveReport solve_degenerate_generic(const BetheProblem& problem) {
  require_mode(problem, Mode::degenerate, "degenerate_generic");
  const int n_max = problem.scheme.max_pairs();
  if (problem.pair_count < 1 || 2 * problem.pair_count > n_max)
    throw DomainError("degenerate_generic needs 1 <= N <= N_max/2 (N_max = " + std::to_string(n_max) + ")");
  const BaeSystem system = bae_system(problem.scheme, Family::degenerate_generic);
  SolveReport report = multistart(problem, system, problem.pair_count);
  finish(report, "degenerate_generic", problem.options.separation_tolerance);
  return report;
}

SolveReport solve_degenerate_zero(const BetheProblem& problem) {
  require_mode(problem, Mode::degenerate, "degenerate_zero");
  const int n_max = problem.scheme.max_pairs();
  if (problem.pair_count < 1 || problem.pair_count > n_max)
    throw DomainError("degenerate_zero needs 1 <= N <= N_max (N_max = " + std::to_string(n_max) + ")");
  const BaeSystem system = bae_system(problem.scheme, Family::degenerate_zero);
  SolveReport report = multistart(problem, system, problem.pair_count - 1);
  finish(report, "degenerate_zero", problem.options.separation_tolerance);
  return report;
}

std::vector<Complex> richardson_weak_coupling_roots(const LevelScheme& scheme,
                                                    std::span<const int> occupation, Complex coupling) {
  // Near 2 eps_j, xi = 2 eps_j + 2 g d u with the k cluster offsets u the
  // roots of p solving u p'' - (Omega + 2u) p' + 2k p = 0.
  std::vector<Complex> roots;
  const double d = scheme.level_spacing();
  for (int j = 0; j < scheme.size(); ++j) {
    const int k = occupation[j];
    if (k == 0) continue;
    const int omega = scheme.levels[j].omega;
    if (k > omega) throw DomainError("occupation exceeds the level capacity");
    Polynomial<double> p(static_cast<std::size_t>(k) + 1, 0.0);
    p[k] = 1.0;
    for (int m = k - 1; m >= 0; --m)
      p[m] = p[m + 1] * (m + 1) * (omega - m) / (2.0 * (k - m));
    for (const Complex u : companion_roots(p))
      roots.push_back(2.0 * scheme.levels[j].epsilon + 2.0 * coupling * d * polish_root(p, u));
  }
  return roots;
}

RichardsonPath track_richardson(const LevelScheme& scheme, std::span<const int> occupation,
                                const SolverOptions& options) {
  if (scheme.mode != Mode::reduced) throw DomainError("Richardson tracking needs a reduced-mode scheme");
  if (!(scheme.g > 0.0)) throw DomainError("Richardson tracking needs |G| > 0");
  RichardsonPath path;
  path.occupation.assign(occupation.begin(), occupation.end());

  double spacing = std::numeric_limits<double>::infinity();
  int omega_max = 1;
  for (int j = 0; j < scheme.size(); ++j) {
    omega_max = std::max(omega_max, scheme.levels[j].omega);
    for (int k = 0; k < j; ++k)
      spacing = std::min(spacing, 2.0 * std::abs(scheme.levels[j].epsilon - scheme.levels[k].epsilon));
  }
  if (!std::isfinite(spacing)) spacing = 1.0;
  const double d = scheme.level_spacing();
  const double g_target = scheme.g;
  const double g_start = std::min(1e-2 * g_target, 1e-4 * spacing / (d * omega_max));

  // Complex detour: the imaginary excursion vanishes at both ends.
  constexpr double kDetour = 0.4;
  auto coupling_at = [&](double tau) {
    const double modulus = std::exp((1.0 - tau) * std::log(g_start) + tau * std::log(g_target));
    return modulus * Complex(1.0, kDetour * std::sin(std::numbers::pi * tau));
  };

  NewtonResult current =
      newton_solve(richardson_system(scheme, coupling_at(0.0)),
                   richardson_weak_coupling_roots(scheme, occupation, coupling_at(0.0)), 50, 1e-12);
  if (!current.converged) return path;

  std::vector<Complex> previous;
  double tau = 0.0;
  double tau_previous = 0.0;
  double dtau = 0.01;
  const double path_tolerance = 1e-10;
  while (tau < 1.0) {
    const double next = std::min(1.0, tau + dtau);
    std::vector<Complex> predicted = current.roots;
    if (!previous.empty() && tau > tau_previous) {
      const double ratio = (next - tau) / (tau - tau_previous);
      for (std::size_t k = 0; k < predicted.size(); ++k)
        predicted[k] += ratio * (current.roots[k] - previous[k]);
    }
    const BaeSystem system = richardson_system(scheme, coupling_at(next));
    NewtonResult corrected = newton_solve(system, predicted, 12, path_tolerance);

    bool accepted = corrected.converged;
    if (accepted) {
      // Path-jumping guard: the correction must stay small against the
      // local root/pole separation.
      for (std::size_t k = 0; k < predicted.size() && accepted; ++k) {
        const double room = nearest_obstacle(system, corrected.roots, k);
        if (std::abs(corrected.roots[k] - predicted[k]) > 0.25 * room) accepted = false;
      }
    }
    ++path.steps;
    if (!accepted) {
      dtau *= 0.5;
      if (dtau < 1e-9) return path;
      continue;
    }
    previous = std::move(current.roots);
    tau_previous = tau;
    current = std::move(corrected);
    tau = next;
    if (current.iterations <= 4) dtau = std::min(0.1, dtau * 1.6);
  }

  const BaeSystem target = richardson_system(scheme, g_target);
  const NewtonResult polished =
      newton_solve(target, current.roots, options.max_iterations, options.newton_tolerance);
  path.roots = polished.roots;
  path.residual = polished.residual;
  path.converged = polished.converged &&
                   admissible(target, polished.roots, options.newton_tolerance, options.separation_tolerance);
  return path;
}

SolveReport solve_richardson(const BetheProblem& problem) {
  require_mode(problem, Mode::reduced, "richardson");
  const int n_max = problem.scheme.max_pairs();
  if (problem.pair_count < 1 || problem.pair_count > n_max)
    throw DomainError("richardson needs 1 <= N <= N_max (N_max = " + std::to_string(n_max) + ")");

  // One weak-coupling configuration per occupation tuple of the sector.
  const BasisPtr configurations = build_basis(problem.scheme, problem.pair_count);
  const int count = static_cast<int>(configurations->dimension());
  std::vector<RichardsonPath> paths(static_cast<std::size_t>(count));
  parallel_for(count, worker_threads(problem.options.threads), [&](int idx) {
    paths[static_cast<std::size_t>(idx)] =
        track_richardson(problem.scheme, configurations->occupation(idx), problem.options);
  });

  SolveReport report;
  report.attempts = count;
  const BaeSystem system = bae_system(problem.scheme, Family::richardson);
  for (const auto& path : paths) {
    if (!path.converged) {
      ++report.failures;
      continue;
    }
    const std::size_t before = report.solutions.size();
    BetheSolution solution{Family::richardson, path.roots,
                           max_abs(bae_equations<Complex>(system, path.roots)), true};
    bool duplicate = false;
    for (const auto& existing : report.solutions)
      if (same_roots(existing.roots, solution.roots, problem.options.separation_tolerance)) duplicate = true;
    if (!duplicate) report.solutions.push_back(canonicalize(std::move(solution), problem.options.separation_tolerance));
    if (report.solutions.size() == before)
      report.warnings.push_back("two continuation paths merged into one solution");
  }
  if (report.failures > 0)
    report.warnings.push_back(std::to_string(report.failures) + " continuation path(s) failed");
  finish(report, "richardson", problem.options.separation_tolerance);
  return report;
}

SolveReport solve(const BetheProblem& problem) {
  switch (problem.family) {
    case Family::richardson: return solve_richardson(problem);
    case Family::degenerate_generic: return solve_degenerate_generic(problem);
    case Family::degenerate_zero: return solve_degenerate_zero(problem);
  }
  throw DomainError("unknown Bethe family");
}

}  // namespace gaudin_pair
