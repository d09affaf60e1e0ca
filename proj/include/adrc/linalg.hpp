#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adrc/matrix.hpp"

namespace adrc::linalg {

// Numerical thresholds shared by the solvers below.
struct Tolerances {
  double pivot = 1e-12;          // relative to the largest |entry| of the system
  double symmetry = 1e-10;       // accepted |S - S^T| for symmetric routines
  double jacobi_off_diag = 1e-12;
  double care_residual = 1e-9;   // Frobenius defect of the Riccati equation
  double newton_step = 1e-13;    // relative change that ends Newton-Kleinman
  int newton_max_iterations = 100;
  double routh_zero = 1e-12;     // relative magnitude treated as a zero pivot
};

inline constexpr Tolerances kTolerances{};

// Gaussian elimination with partial pivoting. Throws NumericError when a pivot
// falls below the pivot tolerance.
Vector solve_linear(const Matrix& m, std::span<const double> b);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k is the eigenvector of values[k]
};

// Cyclic Jacobi rotations. Throws ValidationError for asymmetric input.
SymmetricEigen eigen_symmetric(const Matrix& s);
double min_eigenvalue_symmetric(const Matrix& s);

// Solves F^T X + X F = -Q via the vectorized n^2 x n^2 system.
// Throws NumericError if F is not Hurwitz (singular operator, or X not
// positive semidefinite for positive semidefinite Q).
Matrix solve_lyapunov(const Matrix& f, const Matrix& q);

// The integrator chain pair: A has ones on the superdiagonal, B = e_n.
Matrix chain_a(std::size_t n);
Matrix chain_b(std::size_t n);

struct RiccatiSolution {
  Matrix p;
  Vector k;  // K = -B^T P, the last row of P negated
  double residual = 0.0;
  int iterations = 0;
};

// Frobenius norm of A^T P + P A - mu0 P B B^T P + I for the chain pair.
double care_residual(const Matrix& p, double mu0);

// Solves A^T P + P A - mu0 P B B^T P = -I for the chain pair by
// Newton-Kleinman iteration started from the gain that places every
// closed-loop pole at -1.
RiccatiSolution solve_care(std::size_t n, double mu0);

enum class RouthVerdict { Hurwitz, NotHurwitz, Indeterminate };

// `coeffs` are descending and monic: {1, a1, ..., aq} for
// lambda^q + a1 lambda^(q-1) + ... + aq.
RouthVerdict routh_hurwitz(std::span<const double> coeffs);
inline bool hurwitz_check(std::span<const double> coeffs) {
  return routh_hurwitz(coeffs) == RouthVerdict::Hurwitz;
}

// Leading principal minors all positive.
bool positive_definite(const Matrix& s);

}  // namespace adrc::linalg
