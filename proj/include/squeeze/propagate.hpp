#pragma once

// Evolution of the vacuum under a truncated Hamiltonian, psi(r) = exp(-i T r) e_0,
// sampled on the grid r_k = k * dr, and the mean photon number along it.
//
// All state vectors are expressed in the Jacobi (gauged) frame; the physical
// amplitudes differ by the phases i^j, which leave photon numbers unchanged.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "squeeze/operators.hpp"

namespace squeeze {

using State = std::vector<std::complex<double>>;

enum class Method {
  spectral,   // eigen-expansion of the vacuum; exact phases for any r
  chebyshev,  // per-step Chebyshev expansion, O(dim) memory
  powering,   // dense one-step propagator applied repeatedly
  automatic,  // spectral up to kAutoSpectralMaxDim, then chebyshev when affordable
};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

inline constexpr std::size_t kAutoSpectralMaxDim = 4096;
inline constexpr std::size_t kPoweringMaxDim = 8192;

struct PropagationConfig {
  double r_max = 2.0;
  double dr = 0.01;
  Method method = Method::automatic;
  bool record_states = false;
  // Upper limit on Chebyshev terms for a single step.
  std::size_t max_series_terms = 2'000'000;

  void validate() const;
};

struct Trajectory {
  std::vector<double> r_grid;
  std::vector<double> photon_number;
  std::vector<double> norm_drift;  // | ||psi(r)|| - 1 |
  std::optional<std::vector<State>> states;
  Method method_used = Method::spectral;

  std::size_t size() const noexcept { return r_grid.size(); }
  double max_photon() const noexcept;
};

// r_k = k * dr for k = 0..K, K = r_max / dr rounded when it is within 1e-9
// (relative) of an integer and truncated otherwise.
std::vector<double> make_grid(double r_max, double dr);

Trajectory propagate_vacuum(const JacobiMatrix& h, const TruncationSpec& spec,
                            const PropagationConfig& cfg);

// Evolves the vacuum to each value in `r_values`, which may be negative.
// chebyshev steps between consecutive values; powering needs r_values[k] = k * step.
Trajectory evolve_vacuum(const JacobiMatrix& h, const TruncationSpec& spec,
                         std::span<const double> r_values, Method method,
                         bool record_states = false,
                         std::size_t max_series_terms = PropagationConfig{}.max_series_terms);

// sum_j n j |psi_j|^2 for a state normalised to within 1e-6.
double photon_number(std::span<const std::complex<double>> state, int n);

// Chebyshev expansion of exp(-i x y) for y in [-1, 1]: the coefficients
// (2 - delta_k0) (-i)^k J_k(x), truncated once the Bessel tail drops below 1e-18.
std::vector<std::complex<double>> chebyshev_coefficients(double x);

// Number of terms the Chebyshev expansion needs for argument |x|.
std::size_t chebyshev_series_length(double x);

// Half-width of the symmetric spectral interval used by the Chebyshev
// propagator: 1.05 (max|d| + 2 max t).
double chebyshev_half_width(const JacobiMatrix& h);

}  // namespace squeeze
