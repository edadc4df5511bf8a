#pragma once

// Spectra of truncated squeezing Hamiltonians and the analyses built on them:
// +-pairing, zero modes, smallest positive eigenvalues, power-law fits of the
// low-lying levels, large-eigenvalue scaling with truncation size, and vacuum
// localization of the central eigenvectors.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "squeeze/operators.hpp"

namespace squeeze {

// Column-major set of unit eigenvectors.
struct EigenvectorSet {
  std::size_t dim = 0;
  std::vector<double> data;  // dim * dim

  std::span<const double> column(std::size_t k) const { return {data.data() + k * dim, dim}; }
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::optional<EigenvectorSet> eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double max_abs() const noexcept;
};

// Relative threshold below which |lambda| / max|lambda| counts as a zero mode.
inline constexpr double kZeroModeThreshold = 1e-12;

SpectrumResult spectrum(const JacobiMatrix& h, bool want_vectors = false);

// max_k |lambda_k + lambda_{N-1-k}| / max|lambda|.
double symmetry_defect(const SpectrumResult& s);

// Eigenvalues with |lambda| <= kZeroModeThreshold * max|lambda|.
std::size_t count_zero_modes(const SpectrumResult& s);

// Smallest eigenvalue above the zero-mode threshold. Throws if none exists.
double smallest_positive(const SpectrumResult& s);

// Smallest spacing between consecutive eigenvalues.
double min_gap(const SpectrumResult& s);

// Largest ratio |lambda_k| / (lambda_{k+1} - lambda_k); small values mean every
// level is resolved relative to its own magnitude.
double max_relative_crowding(const SpectrumResult& s);

// Straight-line least squares fit in log-log coordinates: y = alpha x^gamma.
struct PowerLawFit {
  double alpha = 0.0;
  double gamma = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> index_range{0.0, 0.0};  // smallest and largest x used
  std::size_t points = 0;
};

PowerLawFit fit_log_log(std::span<const double> x, std::span<const double> y,
                        std::size_t min_points = 8);

// Window over the positive half of the spectrum, measured in level index j
// from the centre. Odd dimensions put the zero mode at j = 0 and the k-th
// positive level at j = k; even dimensions put it at j = k - 1/2, which is
// where interlacing places it between the odd-dimension levels.
struct FitWindow {
  double j_min = 10.0;
  double j_max = 60.0;
};

struct LevelSeries {
  std::vector<double> index;  // j
  std::vector<double> energy;  // E_j > 0
};

LevelSeries positive_levels(const SpectrumResult& s);

PowerLawFit fit_power_law(const SpectrumResult& s, FitWindow window = {});

// Merges the non-negative levels of two spectra whose dimensions differ by one
// in ascending order (they interlace) and fits E = alpha j^gamma with the
// merged position J mapped to j = J / 2.
PowerLawFit interleaved_fit(const SpectrumResult& a, const SpectrumResult& b,
                            FitWindow window = {});

struct ScalingReport {
  std::vector<std::size_t> dims;
  std::vector<double> largest;         // index dim - 1
  std::vector<double> three_quarter;   // index floor(3 dim / 4)
  std::vector<double> eleven_twentieth;  // index floor(11 dim / 20)
  PowerLawFit largest_fit;
  PowerLawFit three_quarter_fit;
  PowerLawFit eleven_twentieth_fit;
};

// Power-law fits of three large eigenvalues against truncation size for the
// Kerr-free order-n Hamiltonian. `dims` must be ascending, even and >= 3 entries.
ScalingReport largest_eigenvalue_scaling(int n, std::span<const std::size_t> dims);

struct VacuumOverlap {
  std::size_t first_index = 0;  // eigenvalue index of weights[0]
  std::vector<double> weights;  // |<e_0|v_k>|^2 inside the window
  double total = 0.0;           // sum over the whole spectrum
};

// Vacuum weights of the eigenvectors within `half_width` of the spectrum centre.
VacuumOverlap vacuum_overlap_profile(const SpectrumResult& s, std::size_t half_width);

// Eigenpairs carrying the vacuum: eigenvalues refined by bisection and vectors
// from twisted factorizations, kept only where the vacuum weight exceeds
// `weight_cutoff`. Cost is O(N^2) for the screening pass plus O(N) per kept mode.
struct VacuumModes {
  std::size_t dim = 0;
  std::vector<double> eigenvalues;
  std::vector<double> weights;  // first components c_k (signed)
  std::vector<std::vector<double>> vectors;
  double discarded_weight = 0.0;
};

VacuumModes vacuum_modes(const JacobiMatrix& h, double weight_cutoff = 1e-26);

// Smallest positive eigenvalue against even truncation sizes, extrapolated by
// fitting log(lambda(N) - lambda_inf) against log N and choosing lambda_inf in
// [0, min lambda) to maximise r^2.
struct Extrapolation {
  std::vector<std::size_t> dims;
  std::vector<double> smallest;
  double lambda_inf = 0.0;
  PowerLawFit fit;  // of lambda(N) - lambda_inf
};

Extrapolation extrapolate_smallest(int n, std::span<const std::size_t> dims);

}  // namespace squeeze
