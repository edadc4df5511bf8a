#pragma once

// Dense-free kernels for real symmetric tridiagonal matrices with diagonal
// `diag` (length N) and off-diagonal `offdiag` (length N - 1).

#include <cstddef>
#include <span>
#include <vector>

namespace squeeze::tridiag {

enum class Accumulate {
  none,       // eigenvalues only, O(N^2)
  first_row,  // eigenvalues plus the first component of every eigenvector, O(N^2)
  full,       // complete orthonormal eigenvectors, O(N^3)
};

struct Eigensystem {
  std::vector<double> values;  // ascending
  // Accumulate::full: column-major N x N, column k pairs with values[k].
  // Accumulate::first_row: length N, entry k is the first component of vector k.
  std::vector<double> vectors;
};

// Implicit-shift QL iteration. Throws ConvergenceError naming the index of the
// eigenvalue that failed to converge within the iteration budget.
Eigensystem implicit_ql(std::span<const double> diag, std::span<const double> offdiag,
                        Accumulate mode = Accumulate::none);

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
// `offdiag_sq` holds the squared couplings.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag_sq, double x);

// Interval [lo, hi] containing every eigenvalue.
struct Bounds {
  double lo;
  double hi;
};
Bounds gershgorin(std::span<const double> diag, std::span<const double> offdiag);

// k-th smallest eigenvalue (0-based) by bisection inside [lo, hi]. For a zero
// diagonal the result carries high relative accuracy even for tiny eigenvalues.
double bisect_eigenvalue(std::span<const double> diag, std::span<const double> offdiag_sq,
                         std::size_t k, double lo, double hi);

// Unit eigenvector for an accurate eigenvalue `lambda`, from the twisted
// factorization T - lambda = N_r Delta_r N_r^T with the twist index r chosen
// where |gamma_r| is smallest.
std::vector<double> twisted_eigenvector(std::span<const double> diag,
                                        std::span<const double> offdiag, double lambda);

}  // namespace squeeze::tridiag
