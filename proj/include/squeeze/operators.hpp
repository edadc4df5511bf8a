#pragma once

// Truncated generalized-squeezing Hamiltonians in Jacobi (real symmetric
// tridiagonal) form.
//
// The order-n squeezing generator i[(a^dag)^n - a^n] leaves the span of
// {|0>, |n>, |2n>, ...} invariant. Restricted to the first `dim` of those
// states it is tridiagonal with off-diagonal entries +-i t_j. Conjugating with
// D = diag(i^j) turns it into the real matrix T with positive couplings t_j;
// the vacuum and the photon-number observable are unchanged by D.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace squeeze {

struct KerrSpec {
  int order = 2;          // h in (a^dag)^h a^h; only 2 and 4 are supported
  double strength = 0.0;  // K for h = 2, K_4 for h = 4 (1/4! applied internally)

  void validate() const;
};

struct TruncationSpec {
  int n = 1;                 // photons created per group
  std::size_t dim = 1;       // number of kept basis states |n*j>, j < dim
  std::optional<KerrSpec> kerr;

  void validate() const;
  // Photon number of basis state j.
  std::uint64_t photons(std::size_t j) const { return static_cast<std::uint64_t>(n) * j; }
};

struct JacobiMatrix {
  std::vector<double> diag;     // length dim
  std::vector<double> offdiag;  // length dim - 1, strictly positive

  static constexpr std::string_view gauge_note =
      "physical H = D T D^dagger with D = diag(i^j); vacuum and photon number are gauge invariant";

  std::size_t size() const noexcept { return diag.size(); }
  bool has_diagonal() const noexcept;
  // Gershgorin-type bound max|d| + 2 max t >= spectral radius.
  double norm_bound() const noexcept;
};

// t_j = sqrt((n j + 1)(n j + 2)...(n j + n)). Evaluated as a direct product
// while it fits comfortably in a double, otherwise as exp of half a log sum.
double squeezing_coupling(int n, std::uint64_t j);

// Diagonal Kerr energy of the Fock state |m>: 0, K m(m-1), or K_4/4! m(m-1)(m-2)(m-3).
double kerr_diagonal(std::uint64_t m, const std::optional<KerrSpec>& kerr);

JacobiMatrix build_hamiltonian(const TruncationSpec& spec);

// Edge-of-truncation estimate of Kerr versus squeezing strength, with every
// ladder operator replaced by sqrt(nN): c (nN)^h / (nN)^(n/2). Values above 1
// mean the Kerr term dominates at the truncation edge.
double dominance_ratio(const TruncationSpec& spec);

}  // namespace squeeze
