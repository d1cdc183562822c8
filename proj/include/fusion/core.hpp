#pragma once

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>

namespace fusion {

using Index = Eigen::Index;
using cdouble = std::complex<double>;

/// The two ground fields supported by the library.
template <typename S>
concept FieldScalar = std::same_as<S, double> || std::same_as<S, cdouble>;

template <typename S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

template <typename S>
inline constexpr bool is_complex_v = std::same_as<S, cdouble>;

/// Largest ambient dimension accepted by the dense kernels.
inline constexpr Index kMaxAmbientDim = 4096;

/// Input violates a documented precondition or schema.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operator that must be inverted is singular (e.g. the family is not a frame).
class SingularOperator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural precondition (such as minimality) does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical thresholds shared by the predicates and certificates.
struct Tolerances {
  double rank = 1e-10;      // singular values below rank * sigma_max count as zero
  double frame = 1e-10;     // frame iff lambda_min > frame * lambda_max
  double check = 1e-9;      // Parseval, resolution and reconstruction checks
  double slack = 1e-8;      // certificate inequalities pass iff slack >= -slack
  double subspace = 1e-8;   // subspace equality and intersection
};

}  // namespace fusion
