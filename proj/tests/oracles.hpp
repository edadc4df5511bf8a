#pragma once

// Reference computations that share no code with the library: exact integer
// couplings, 50-digit Sturm bisection on the characteristic polynomial, and a
// long double Taylor scaling-and-squaring exponential of the physical matrix.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;
using cld = std::complex<long double>;

// prod_{k=1..n} (n j + k) as an exact integer (caller keeps it below 2^64).
inline std::uint64_t coupling_sq(int n, std::uint64_t j) {
  std::uint64_t p = 1;
  for (int k = 1; k <= n; ++k) p *= static_cast<std::uint64_t>(n) * j + k;
  return p;
}

inline big coupling_sq_big(int n, std::uint64_t j) {
  big p = 1;
  for (int k = 1; k <= n; ++k) p *= big(static_cast<std::uint64_t>(n) * j + k);
  return p;
}

inline big kerr_big(std::uint64_t m, int order, double strength) {
  if (order == 0) return 0;
  big p = strength;
  for (int k = 0; k < order; ++k) p *= big(static_cast<long long>(m) - k);
  return order == 4 ? p / 24 : p;
}

// Eigenvalues of the Jacobi matrix by bisection on the Sturm sequence of the
// leading principal minors p_k(x) = (d_k - x) p_{k-1} - t_{k-1}^2 p_{k-2}.
inline std::vector<double> jacobi_roots(int n, int dim, int order = 0, double strength = 0.0) {
  std::vector<big> d(dim), t2(dim > 0 ? dim - 1 : 0);
  big bound = 0;
  for (int j = 0; j < dim; ++j) {
    d[j] = kerr_big(static_cast<std::uint64_t>(n) * j, order, strength);
    if (j + 1 < dim) t2[j] = coupling_sq_big(n, j);
  }
  for (int j = 0; j < dim; ++j) {
    big r = abs(d[j]);
    if (j > 0) r += sqrt(t2[j - 1]);
    if (j + 1 < dim) r += sqrt(t2[j]);
    if (r > bound) bound = r;
  }
  bound += 1;
  // Inertia of T - x I from the pivots q_k = p_k / p_{k-1}; a zero pivot is
  // nudged off zero, which does not change the count for nearby x.
  const big tiny = big(1e-45) * bound;
  auto below = [&](const big& x) {
    int count = 0;
    big q = d[0] - x;
    for (int k = 0;; ++k) {
      if (q == 0) q = -tiny;
      if (q < 0) ++count;
      if (k + 1 == dim) break;
      q = (d[k + 1] - x) - t2[k] / q;
    }
    return count;
  };
  std::vector<double> roots;
  for (int k = 0; k < dim; ++k) {
    big lo = -bound, hi = bound;
    for (int it = 0; it < 200; ++it) {
      big mid = (lo + hi) / 2;
      if (below(mid) > k) hi = mid; else lo = mid;
    }
    roots.push_back(static_cast<double>((lo + hi) / 2));
  }
  return roots;
}

// Dense physical Hamiltonian: H(j+1, j) = i t_j, H(j, j+1) = -i t_j, H(j, j) = d_j.
using Dense = std::vector<std::vector<cld>>;

inline Dense physical_matrix(int n, int dim, int order = 0, double strength = 0.0) {
  Dense h(dim, std::vector<cld>(dim, 0));
  for (int j = 0; j < dim; ++j) {
    h[j][j] = static_cast<long double>(kerr_big(static_cast<std::uint64_t>(n) * j, order, strength));
    if (j + 1 < dim) {
      const long double t = std::sqrt(static_cast<long double>(coupling_sq_big(n, j)));
      h[j + 1][j] = cld(0, t);
      h[j][j + 1] = cld(0, -t);
    }
  }
  return h;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const std::size_t m = a.size();
  Dense c(m, std::vector<cld>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (a[i][k] == cld(0)) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

// exp(-i r H) e_0 by Taylor series on exp(-i r H / 2^s) followed by s squarings.
inline std::vector<cld> evolve_vacuum(const Dense& h, long double r) {
  const std::size_t m = h.size();
  long double norm = 0;
  for (std::size_t i = 0; i < m; ++i) {
    long double row = 0;
    for (std::size_t j = 0; j < m; ++j) row += std::abs(h[i][j]);
    norm = std::max(norm, row);
  }
  int s = 0;
  long double scaled = norm * std::abs(r);
  while (scaled > 0.25L) {
    scaled /= 2;
    ++s;
  }
  const cld factor = cld(0, -r) / std::pow(2.0L, s);
  Dense a(m, std::vector<cld>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i][j] = factor * h[i][j];
  Dense result(m, std::vector<cld>(m, 0)), term(m, std::vector<cld>(m, 0));
  for (std::size_t i = 0; i < m; ++i) result[i][i] = term[i][i] = 1;
  for (int k = 1; k <= 30; ++k) {
    term = multiply(term, a);
    for (auto& row : term)
      for (auto& v : row) v /= static_cast<long double>(k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) result[i][j] += term[i][j];
  }
  for (int k = 0; k < s; ++k) result = multiply(result, result);
  std::vector<cld> psi(m);
  for (std::size_t i = 0; i < m; ++i) psi[i] = result[i][0];
  return psi;
}

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// det(x I - A) = sum_k c[k] x^k with c[m] = 1.
inline std::vector<cld> char_poly(const Dense& a) {
  const std::size_t m = a.size();
  std::vector<cld> c(m + 1, 0);
  c[m] = 1;
  Dense mk(m, std::vector<cld>(m, 0));
  for (std::size_t k = 1; k <= m; ++k) {
    Dense prod = multiply(a, mk);
    for (std::size_t i = 0; i < m; ++i) prod[i][i] += c[m - k + 1];
    mk = prod;
    Dense amk = multiply(a, mk);
    cld tr = 0;
    for (std::size_t i = 0; i < m; ++i) tr += amk[i][i];
    c[m - k] = -tr / static_cast<long double>(k);
  }
  return c;
}

}  // namespace oracle
