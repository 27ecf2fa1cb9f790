#ifndef GAUDIN_PAIR_POLYNOMIAL_HPP
#define GAUDIN_PAIR_POLYNOMIAL_HPP

#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gaudin_pair/types.hpp"

namespace gaudin_pair {

/// Coefficients stored lowest degree first: p(x) = sum_i coeffs[i] x^i.
template <typename Scalar>
using Polynomial = std::vector<Scalar>;

template <typename Scalar>
Polynomial<Scalar> multiply(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  if (a.empty() || b.empty()) return {};
  Polynomial<Scalar> out(a.size() + b.size() - 1, Scalar(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

/// Drops leading coefficients with |c| <= tol * max|c|.
template <typename Scalar>
Polynomial<Scalar> trimmed(Polynomial<Scalar> p, double tol = 1e-14) {
  double scale = 0.0;
  for (const auto& c : p) scale = std::max(scale, static_cast<double>(std::abs(c)));
  while (!p.empty() && std::abs(p.back()) <= tol * scale) p.pop_back();
  return p;
}

template <typename Scalar>
std::complex<double> evaluate(const Polynomial<Scalar>& p, std::complex<double> x) {
  std::complex<double> acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + std::complex<double>(*it);
  return acc;
}

/// Roots from the eigenvalues of the companion matrix of the monic
/// normalization of p. Constant (or empty) polynomials have no roots.
template <typename Scalar>
std::vector<Complex> companion_roots(const Polynomial<Scalar>& coeffs) {
  const Polynomial<Scalar> p = trimmed(coeffs);
  if (p.size() <= 1) return {};
  const Index degree = static_cast<Index>(p.size()) - 1;
  const Complex lead = p.back();
  ComplexMatrix companion = ComplexMatrix::Zero(degree, degree);
  for (Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < degree; ++i) companion(i, degree - 1) = -Complex(p[i]) / lead;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) throw VerificationError("companion eigensolver failed");
  const auto& values = solver.eigenvalues();
  return {values.begin(), values.end()};
}

/// Newton polish of a root of p; returns the refined root.
Complex polish_root(const Polynomial<double>& p, Complex root, int iterations = 8);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_POLYNOMIAL_HPP
