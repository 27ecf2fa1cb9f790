#ifndef GAUDIN_PAIR_TESTS_DENSE_MODEL_HPP
#define GAUDIN_PAIR_TESTS_DENSE_MODEL_HPP

// Independent dense reference model built from Kronecker products of
// single-level spin matrices. Shares no code with the library beyond the
// LevelScheme data it reads.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "gaudin_pair/hilbert.hpp"

namespace dense_model {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

struct Spin {
  CMat plus, minus, z;
};

/// Spin-omega/2 matrices on occupation states n = 0..omega (m = n - omega/2).
inline Spin spin(int omega) {
  const int d = omega + 1;
  const double s = 0.5 * omega;
  Spin out{CMat::Zero(d, d), CMat::Zero(d, d), CMat::Zero(d, d)};
  for (int n = 0; n < d; ++n) {
    const double m = n - s;
    out.z(n, n) = m;
    if (n + 1 < d) out.plus(n + 1, n) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  out.minus = out.plus.adjoint();
  return out;
}

/// Places `op` on `level`; level 0 is the most significant tensor factor.
inline CMat on_level(const std::vector<int>& omegas, int level, const CMat& op) {
  CMat result = CMat::Identity(1, 1);
  for (int j = 0; j < static_cast<int>(omegas.size()); ++j) {
    const CMat factor = j == level ? op : CMat::Identity(omegas[j] + 1, omegas[j] + 1);
    result = Eigen::kroneckerProduct(result, factor).eval();
  }
  return result;
}

struct Model {
  std::vector<int> omegas;
  std::vector<CMat> plus, minus, z;
  CMat number;
  long dim = 1;
};

inline Model model(const gaudin_pair::LevelScheme& scheme) {
  Model m;
  m.omegas = scheme.omegas();
  for (int w : m.omegas) m.dim *= w + 1;
  m.number = CMat::Zero(m.dim, m.dim);
  for (int j = 0; j < scheme.size(); ++j) {
    const Spin s = spin(m.omegas[j]);
    m.plus.push_back(on_level(m.omegas, j, s.plus));
    m.minus.push_back(on_level(m.omegas, j, s.minus));
    m.z.push_back(on_level(m.omegas, j, s.z));
    m.number += m.z.back() + 0.5 * m.omegas[j] * CMat::Identity(m.dim, m.dim);
  }
  return m;
}

inline CMat hamiltonian(const gaudin_pair::LevelScheme& scheme, const Model& m) {
  CMat h = CMat::Zero(m.dim, m.dim);
  CMat pair_plus = CMat::Zero(m.dim, m.dim);
  for (int j = 0; j < scheme.size(); ++j) {
    if (scheme.mode != gaudin_pair::Mode::degenerate)
      h += scheme.levels[j].epsilon * (2.0 * m.z[j] + m.omegas[j] * CMat::Identity(m.dim, m.dim));
    pair_plus += scheme.levels[j].c * m.plus[j];
  }
  return h - scheme.g * pair_plus * pair_plus.adjoint();
}

/// Degenerate-model invariants written directly from their defining sums.
inline std::vector<CMat> degenerate_invariants(const gaudin_pair::LevelScheme& scheme, const Model& m) {
  std::vector<CMat> out;
  const int n = scheme.size();
  for (int j = 0; j < n; ++j) {
    CMat p = -m.plus[j] * m.minus[j];
    const double a = scheme.c_squared(j);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double b = scheme.c_squared(k);
      p += 2.0 * b / (b - a) * m.z[j] * m.z[k];
      p += scheme.levels[j].c * scheme.levels[k].c / (b - a) * (m.plus[j] * m.minus[k] + m.plus[k] * m.minus[j]);
    }
    out.push_back(p);
  }
  return out;
}

/// Rational Gaudin magnets with coupling G d, d = 1/n.
inline std::vector<CMat> gaudin_magnets(const gaudin_pair::LevelScheme& scheme, const Model& m) {
  std::vector<CMat> out;
  const int n = scheme.size();
  const double gd = scheme.g / n;
  for (int j = 0; j < n; ++j) {
    CMat r = m.z[j];
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const CMat dot = m.z[j] * m.z[k] + 0.5 * (m.plus[j] * m.minus[k] + m.minus[j] * m.plus[k]);
      r -= gd / (scheme.levels[j].epsilon - scheme.levels[k].epsilon) * dot;
    }
    out.push_back(r);
  }
  return out;
}

/// Indices of the full tensor basis with exactly `pairs` pairs, increasing.
inline std::vector<long> sector_indices(const Model& m, int pairs) {
  std::vector<long> idx;
  for (long i = 0; i < m.dim; ++i)
    if (std::abs(m.number(i, i).real() - pairs) < 1e-9) idx.push_back(i);
  return idx;
}

inline CMat restrict(const CMat& a, const std::vector<long>& idx) {
  CMat out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = a(idx[r], idx[c]);
  return out;
}

/// Random scheme with distinct c_j^2 (degenerate) or eps_j (reduced).
inline gaudin_pair::LevelScheme random_scheme(std::mt19937_64& rng, gaudin_pair::Mode mode, int levels,
                                              int max_omega = 3) {
  std::uniform_int_distribution<int> omega(1, max_omega);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<gaudin_pair::Level> out;
  for (int j = 0; j < levels; ++j) {
    gaudin_pair::Level level;
    level.omega = omega(rng);
    if (mode == gaudin_pair::Mode::degenerate) {
      level.c = 0.2 + 0.8 * (j + 0.2 + 0.6 * unit(rng)) / levels;
    } else {
      level.epsilon = j + 0.1 + 0.8 * unit(rng);
    }
    out.push_back(level);
  }
  const double g = 0.3 + 1.2 * unit(rng);
  return gaudin_pair::make_scheme(out, g, mode);
}

}  // namespace dense_model

#endif  // GAUDIN_PAIR_TESTS_DENSE_MODEL_HPP
