#include "squeeze/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "squeeze/error.hpp"
#include "squeeze/tridiagonal.hpp"

namespace squeeze {

double SpectrumResult::max_abs() const noexcept {
  double m = 0.0;
  for (double v : eigenvalues) m = std::max(m, std::abs(v));
  return m;
}

SpectrumResult spectrum(const JacobiMatrix& h, bool want_vectors) {
  auto sys = tridiag::implicit_ql(h.diag, h.offdiag,
                                  want_vectors ? tridiag::Accumulate::full
                                               : tridiag::Accumulate::none);
  SpectrumResult out;
  out.eigenvalues = std::move(sys.values);
  if (want_vectors) out.eigenvectors = EigenvectorSet{h.size(), std::move(sys.vectors)};
  return out;
}

double symmetry_defect(const SpectrumResult& s) {
  const double scale = s.max_abs();
  if (scale == 0.0) return 0.0;
  const std::size_t n = s.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(s.eigenvalues[k] + s.eigenvalues[n - 1 - k]));
  }
  return worst / scale;
}

std::size_t count_zero_modes(const SpectrumResult& s) {
  const double tol = kZeroModeThreshold * s.max_abs();
  return static_cast<std::size_t>(std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                                                [tol](double v) { return std::abs(v) <= tol; }));
}

double smallest_positive(const SpectrumResult& s) {
  const double tol = kZeroModeThreshold * s.max_abs();
  auto it = std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), tol);
  if (it == s.eigenvalues.end()) throw InvalidArgument("spectrum has no positive eigenvalue");
  return *it;
}

double min_gap(const SpectrumResult& s) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    gap = std::min(gap, s.eigenvalues[k + 1] - s.eigenvalues[k]);
  }
  return gap;
}

double max_relative_crowding(const SpectrumResult& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double mag = std::max(std::abs(s.eigenvalues[k]), std::abs(s.eigenvalues[k + 1]));
    worst = std::max(worst, mag / (s.eigenvalues[k + 1] - s.eigenvalues[k]));
  }
  return worst;
}

PowerLawFit fit_log_log(std::span<const double> x, std::span<const double> y,
                        std::size_t min_points) {
  if (x.size() != y.size()) throw InvalidArgument("fit_log_log: x and y differ in length");
  if (x.size() < min_points) {
    throw InvalidArgument("power-law fit needs at least " + std::to_string(min_points) +
                          " points, got " + std::to_string(x.size()));
  }
  const std::size_t m = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidArgument("power-law fit needs strictly positive data");
    }
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    const double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("power-law fit needs at least two distinct x values");
  PowerLawFit fit;
  fit.gamma = sxy / sxx;
  fit.alpha = std::exp(my - fit.gamma * mx);
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  fit.index_range = {*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end())};
  fit.points = m;
  return fit;
}

LevelSeries positive_levels(const SpectrumResult& s) {
  const double tol = kZeroModeThreshold * s.max_abs();
  const double offset = s.size() % 2 == 0 ? 0.5 : 0.0;
  LevelSeries out;
  std::size_t k = 0;
  for (double v : s.eigenvalues) {
    if (v <= tol) continue;
    ++k;
    out.index.push_back(static_cast<double>(k) - offset);
    out.energy.push_back(v);
  }
  return out;
}

namespace {

PowerLawFit fit_window(const LevelSeries& levels, FitWindow window) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < levels.index.size(); ++i) {
    if (levels.index[i] >= window.j_min && levels.index[i] <= window.j_max) {
      x.push_back(levels.index[i]);
      y.push_back(levels.energy[i]);
    }
  }
  return fit_log_log(x, y, 8);
}

std::vector<double> non_negative_levels(const SpectrumResult& s) {
  const double tol = kZeroModeThreshold * s.max_abs();
  std::vector<double> out;
  for (double v : s.eigenvalues) {
    if (v >= -tol) out.push_back(std::abs(v) <= tol ? 0.0 : v);
  }
  return out;
}

}  // namespace

PowerLawFit fit_power_law(const SpectrumResult& s, FitWindow window) {
  return fit_window(positive_levels(s), window);
}

PowerLawFit interleaved_fit(const SpectrumResult& a, const SpectrumResult& b,
                            FitWindow window) {
  const std::size_t da = a.size();
  const std::size_t db = b.size();
  if (std::max(da, db) - std::min(da, db) != 1) {
    throw InvalidArgument("interleaved_fit needs dimensions that differ by one");
  }
  std::vector<double> merged = non_negative_levels(a);
  const auto other = non_negative_levels(b);
  merged.insert(merged.end(), other.begin(), other.end());
  std::sort(merged.begin(), merged.end());
  LevelSeries levels;
  for (std::size_t pos = 0; pos < merged.size(); ++pos) {
    if (merged[pos] <= 0.0) continue;
    levels.index.push_back(0.5 * static_cast<double>(pos));
    levels.energy.push_back(merged[pos]);
  }
  return fit_window(levels, window);
}

ScalingReport largest_eigenvalue_scaling(int n, std::span<const std::size_t> dims) {
  if (dims.size() < 3) throw InvalidArgument("eigenvalue scaling needs at least 3 dimensions");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] % 2 != 0 || dims[i] < 2) {
      throw InvalidArgument("eigenvalue scaling uses even dimensions only, got " +
                            std::to_string(dims[i]));
    }
    if (i > 0 && dims[i] <= dims[i - 1]) {
      throw InvalidArgument("eigenvalue scaling dimensions must be ascending");
    }
  }
  ScalingReport rep;
  rep.dims.assign(dims.begin(), dims.end());
  std::vector<double> x;
  for (std::size_t dim : dims) {
    const auto h = build_hamiltonian({n, dim, std::nullopt});
    const auto ev = tridiag::implicit_ql(h.diag, h.offdiag).values;
    rep.largest.push_back(ev[dim - 1]);
    rep.three_quarter.push_back(ev[3 * dim / 4]);
    rep.eleven_twentieth.push_back(ev[11 * dim / 20]);
    x.push_back(static_cast<double>(dim));
  }
  rep.largest_fit = fit_log_log(x, rep.largest, 3);
  rep.three_quarter_fit = fit_log_log(x, rep.three_quarter, 3);
  rep.eleven_twentieth_fit = fit_log_log(x, rep.eleven_twentieth, 3);
  return rep;
}

VacuumOverlap vacuum_overlap_profile(const SpectrumResult& s, std::size_t half_width) {
  if (!s.eigenvectors) throw InvalidArgument("vacuum_overlap_profile needs eigenvectors");
  const auto& vecs = *s.eigenvectors;
  const std::size_t n = s.size();
  const double centre = 0.5 * static_cast<double>(n - 1);
  const double w = static_cast<double>(half_width);
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(centre - w)));
  const auto last =
      static_cast<std::size_t>(std::min(static_cast<double>(n - 1), std::ceil(centre + w)));
  VacuumOverlap out;
  out.first_index = first;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = vecs.column(k)[0];
    out.total += c * c;
    if (k >= first && k <= last) out.weights.push_back(c * c);
  }
  return out;
}

VacuumModes vacuum_modes(const JacobiMatrix& h, double weight_cutoff) {
  const std::size_t n = h.size();
  const auto screen = tridiag::implicit_ql(h.diag, h.offdiag, tridiag::Accumulate::first_row);
  std::vector<double> off_sq(h.offdiag.size());
  for (std::size_t i = 0; i < off_sq.size(); ++i) off_sq[i] = h.offdiag[i] * h.offdiag[i];
  const auto bounds = tridiag::gershgorin(h.diag, h.offdiag);
  const double slack =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(bounds.lo), bounds.hi);

  VacuumModes out;
  out.dim = n;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = screen.vectors[k];
    if (c * c <= weight_cutoff) {
      out.discarded_weight += c * c;
      continue;
    }
    const double guess = screen.values[k];
    double lo = guess - slack;
    double hi = guess + slack;
    double widen = slack;
    while (lo > bounds.lo && tridiag::sturm_count(h.diag, off_sq, lo) > k) {
      widen *= 4.0;
      lo = std::max(bounds.lo, guess - widen);
    }
    widen = slack;
    while (hi < bounds.hi && tridiag::sturm_count(h.diag, off_sq, hi) < k + 1) {
      widen *= 4.0;
      hi = std::min(bounds.hi, guess + widen);
    }
    const double lambda = tridiag::bisect_eigenvalue(h.diag, off_sq, k, lo, hi);
    auto vec = tridiag::twisted_eigenvector(h.diag, h.offdiag, lambda);
    out.eigenvalues.push_back(lambda);
    out.weights.push_back(vec[0]);
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

Extrapolation extrapolate_smallest(int n, std::span<const std::size_t> dims) {
  if (dims.size() < 3) throw InvalidArgument("extrapolation needs at least 3 dimensions");
  Extrapolation ex;
  ex.dims.assign(dims.begin(), dims.end());
  std::vector<double> x;
  for (std::size_t dim : dims) {
    if (dim % 2 != 0) throw InvalidArgument("extrapolation uses even dimensions only");
    const auto h = build_hamiltonian({n, dim, std::nullopt});
    ex.smallest.push_back(smallest_positive(spectrum(h)));
    x.push_back(static_cast<double>(dim));
  }
  const double ceiling = *std::min_element(ex.smallest.begin(), ex.smallest.end());
  auto quality = [&](double inf) {
    std::vector<double> y;
    for (double v : ex.smallest) y.push_back(v - inf);
    return fit_log_log(x, y, 3);
  };
  // Coarse scan, then golden-section refinement around the best cell.
  constexpr int kCells = 400;
  double best_inf = 0.0;
  double best_r2 = quality(0.0).r_squared;
  for (int i = 1; i < kCells; ++i) {
    const double inf = ceiling * i / kCells;
    const double r2 = quality(inf).r_squared;
    if (r2 > best_r2) {
      best_r2 = r2;
      best_inf = inf;
    }
  }
  double a = std::max(0.0, best_inf - ceiling / kCells);
  double b = std::min(ceiling * (1.0 - 0.25 / kCells), best_inf + ceiling / kCells);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60 && b - a > 1e-14 * ceiling; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (quality(c).r_squared >= quality(d).r_squared) {
      b = d;
    } else {
      a = c;
    }
  }
  const double refined = 0.5 * (a + b);
  ex.lambda_inf = quality(refined).r_squared >= best_r2 ? refined : best_inf;
  ex.fit = quality(ex.lambda_inf);
  return ex;
}

}  // namespace squeeze
