#pragma once

// Figure-level experiments built from propagation runs: even/odd truncation
// comparisons, Kerr-strength sweeps with a regulation verdict per strength,
// threshold detection, and fixed-dimension panels over many strengths.
//
// Independent runs go through a bounded worker pool; results are stored by job
// index so reports never depend on scheduling order.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "squeeze/operators.hpp"
#include "squeeze/propagate.hpp"

namespace squeeze {

struct ExperimentOptions {
  double r_max = 2.0;
  double dr = 0.01;
  Method method = Method::automatic;
  std::size_t jobs = 0;  // 0 = hardware concurrency
  // Agreement tolerance: max(relative_tolerance * max photon, absolute_floor).
  double relative_tolerance = 1e-2;
  double absolute_floor = 1e-3;
};

// Runs fn(0) .. fn(count - 1) on at most `jobs` threads. The first exception
// (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// sup_k |a_k - b_k| over a common grid.
double sup_distance(std::span<const double> a, std::span<const double> b);

struct PairDistance {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  double distance = 0.0;
};

struct ParityReport {
  int n = 0;
  std::optional<KerrSpec> kerr;
  std::array<std::size_t, 4> dims{};  // N, N+1, sN, sN+1
  std::vector<double> r_grid;
  std::vector<std::vector<double>> photon_number;  // aligned with dims
  std::array<double, 4> max_photon{};
  PairDistance even_even;
  PairDistance odd_odd;
  PairDistance even_odd;        // N vs N+1
  PairDistance even_odd_large;  // sN vs sN+1

  double max_even() const { return std::max(max_photon[0], max_photon[2]); }
  double max_odd() const { return std::max(max_photon[1], max_photon[3]); }
};

// Trajectories at dims {N, N+1, scale N, scale N + 1}. N must be even and >= 100.
ParityReport parity_experiment(int n, std::size_t N, const std::optional<KerrSpec>& kerr,
                               const ExperimentOptions& opts = {}, std::size_t scale = 4);

struct SweepPoint {
  double strength = 0.0;
  std::vector<std::vector<double>> photon_number;  // aligned with SweepReport::dims
  std::vector<double> dominance;                   // dominance_ratio per dim
  std::vector<PairDistance> distances;             // every pair of dims
  double max_photon = 0.0;
  double tolerance = 0.0;
  bool regulated = false;
  // First grid value where the dims stop agreeing; empty when they agree throughout.
  std::optional<double> divergence_onset;
  // Largest photon number and oscillation period on the first dim.
  double amplitude = 0.0;
  std::optional<double> period;
};

struct SweepReport {
  int n = 0;
  int order = 2;
  std::vector<std::size_t> dims;
  std::vector<double> strengths;
  std::vector<double> r_grid;
  std::vector<SweepPoint> points;  // aligned with strengths
};

// Needs strictly increasing strengths and at least one pair of adjacent dims.
SweepReport kerr_sweep(int n, int order, std::span<const double> strengths,
                       std::span<const std::size_t> dims, const ExperimentOptions& opts = {});

struct Threshold {
  double unregulated = 0.0;
  double regulated = 0.0;
  double midpoint = 0.0;
  // Strength at which dominance_ratio = 1 for the smallest dim.
  double analytic = 0.0;
};

// Brackets the last change from unregulated to regulated. Throws when the
// sweep never flips, listing the verdicts.
Threshold threshold_detect(const SweepReport& report);

// Strength solving dominance_ratio = 1 at (n, dim, order).
double analytic_threshold(int n, std::size_t dim, int order);

// Trajectories at `dim` for each strength, each spot-checked against dim + 1.
// Throws naming the first strength whose two curves disagree.
SweepReport variable_k_panel(int n, int order, std::span<const double> strengths, std::size_t dim,
                             const ExperimentOptions& opts = {});

// Largest value, and mean spacing of upward crossings of the series mean
// (needs two crossings).
double series_amplitude(std::span<const double> y);
std::optional<double> series_period(std::span<const double> r, std::span<const double> y);

}  // namespace squeeze
