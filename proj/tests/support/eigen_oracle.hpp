#pragma once

// Reference eigenvalues for small matrices: characteristic polynomial from
// principal minors (cofactor expansion), roots by Durand-Kerner iteration.

#include "nicholson/common.hpp"

#include <complex>
#include <vector>

namespace oracle {

/// Coefficients of det(lambda I - M), highest degree first (leading 1).
std::vector<double> characteristic_polynomial(const nicholson::Matrix& m);

/// Determinant by cofactor expansion along the first row.
double cofactor_determinant(const nicholson::Matrix& m);

/// All eigenvalues of m (n <= 8). Throws NumericError without convergence.
std::vector<std::complex<double>> eigen_oracle(const nicholson::Matrix& m, double tol = 1e-14);

/// Largest real part among the oracle eigenvalues.
double max_real_part(const nicholson::Matrix& m);

}  // namespace oracle
