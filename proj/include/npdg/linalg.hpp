#pragma once

#include "npdg/types.hpp"

namespace npdg::linalg {

struct PowerIterationOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
};

/// Largest singular value by power iteration on the Gram matrix, started
/// from the normalized all-ones vector. Falls back to unit basis vectors if
/// the start vector lies in the null space. Deterministic.
double spectral_norm(const Matrix& m, const PowerIterationOptions& options = {});

double frobenius_norm(const Matrix& m);

/// Largest real part over the eigenvalues of a square matrix.
double spectral_abscissa(const Matrix& m);

/// True if every eigenvalue has real part below -margin.
bool is_hurwitz(const Matrix& m, double margin = 1e-12);

/// Solves A^T X + X A + C = 0 through the n^2 x n^2 Kronecker system.
/// The result is symmetrized when C is symmetric.
Matrix solve_lyapunov(const Matrix& a, const Matrix& c);

Matrix symmetrize(const Matrix& m);

/// ||M - M^T||_2 <= 1e-10 (1 + ||M||_2)
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

bool all_finite(const Matrix& m);

}  // namespace npdg::linalg
