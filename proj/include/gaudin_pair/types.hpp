#ifndef GAUDIN_PAIR_TYPES_HPP
#define GAUDIN_PAIR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace gaudin_pair {

using Complex = std::complex<double>;
using Index = Eigen::Index;

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Raised when an input lies outside the domain of an operation
/// (sector out of range, parameter at a pole, mode mismatch, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical identity that must hold does not.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_TYPES_HPP
