#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdrecon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e^{a t} by scaling and squaring with a degree-13 Pade approximant.
Matrix mat_exp(const Matrix& a, double t = 1.0);

/// Orthonormal basis of the invariant subspace belonging to eigenvalues with
/// negative real part (continuous=true) or modulus < 1 (continuous=false).
/// Returns the first k Schur vectors after reordering; `count` receives k.
/// Throws NumericalError when LAPACK fails.
Matrix stable_invariant_subspace(const Matrix& m, bool continuous, int* count,
                                 CVector* eigenvalues = nullptr);

/// Generalized eigenvalues of the pencil (a, e) as (alpha, beta) pairs,
/// lambda = alpha / beta. Throws NumericalError when LAPACK fails.
void generalized_eigenvalues(const Matrix& a, const Matrix& e, CVector* alpha, Vector* beta);

/// Monic characteristic polynomial coefficients (descending powers).
std::vector<double> charpoly(const Matrix& a);

/// Monic polynomial with the given roots (descending powers). Conjugate
/// pairs give real coefficients; imaginary round-off is dropped.
std::vector<double> poly_from_roots(const std::vector<Complex>& roots);

/// Roots of a polynomial (descending powers) via companion eigenvalues.
/// Leading zeros are stripped; a constant polynomial has no roots.
std::vector<Complex> poly_roots(const std::vector<double>& coeffs);

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);
Complex poly_eval(const std::vector<double>& coeffs, Complex z);

bool all_finite(const Matrix& m);

/// Largest singular value.
double sigma_max(const CMatrix& m);
double sigma_max(const Matrix& m);

}  // namespace sdrecon
