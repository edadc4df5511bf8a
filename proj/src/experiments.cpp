#include "squeeze/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "squeeze/error.hpp"

namespace squeeze {

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("series lengths differ");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double series_amplitude(std::span<const double> y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, v);
  return m;
}

std::optional<double> series_period(std::span<const double> r, std::span<const double> y) {
  if (y.size() < 3) return std::nullopt;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  // Upward crossings of the mean; sub-peaks near the top of a hump never reach it.
  std::vector<double> ups;
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k - 1] < mean && y[k] >= mean) {
      const double f = (mean - y[k - 1]) / (y[k] - y[k - 1]);
      ups.push_back(r[k - 1] + f * (r[k] - r[k - 1]));
    }
  }
  if (ups.size() < 2) return std::nullopt;
  return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

namespace {

std::vector<double> photon_series(int n, std::size_t dim, const std::optional<KerrSpec>& kerr,
                                  const ExperimentOptions& opts) {
  const TruncationSpec spec{n, dim, kerr};
  try {
    const JacobiMatrix h = build_hamiltonian(spec);
    PropagationConfig cfg;
    cfg.r_max = opts.r_max;
    cfg.dr = opts.dr;
    cfg.method = opts.method;
    return propagate_vacuum(h, spec, cfg).photon_number;
  } catch (const std::exception& e) {
    throw Error("n=" + std::to_string(n) + " dim=" + std::to_string(dim) + ": " + e.what());
  }
}

PairDistance pair(const std::vector<std::vector<double>>& series,
                  std::span<const std::size_t> dims, std::size_t a, std::size_t b) {
  return {dims[a], dims[b], sup_distance(series[a], series[b])};
}

void check_options(const ExperimentOptions& opts) {
  PropagationConfig cfg;
  cfg.r_max = opts.r_max;
  cfg.dr = opts.dr;
  cfg.method = opts.method;
  cfg.validate();
  if (!(opts.relative_tolerance > 0.0) || !(opts.absolute_floor >= 0.0)) {
    throw InvalidArgument("agreement tolerances must be positive");
  }
}

}  // namespace

ParityReport parity_experiment(int n, std::size_t N, const std::optional<KerrSpec>& kerr,
                               const ExperimentOptions& opts, std::size_t scale) {
  if (N < 100 || N % 2 != 0) throw InvalidArgument("parity experiment needs even N >= 100");
  if (scale < 2) throw InvalidArgument("parity scale must be >= 2");
  check_options(opts);
  ParityReport rep;
  rep.n = n;
  rep.kerr = kerr;
  rep.dims = {N, N + 1, scale * N, scale * N + 1};
  rep.r_grid = make_grid(opts.r_max, opts.dr);
  rep.photon_number.resize(4);
  parallel_for(4, opts.jobs, [&](std::size_t i) {
    rep.photon_number[i] = photon_series(n, rep.dims[i], kerr, opts);
  });
  for (std::size_t i = 0; i < 4; ++i) rep.max_photon[i] = series_amplitude(rep.photon_number[i]);
  rep.even_even = pair(rep.photon_number, rep.dims, 0, 2);
  rep.odd_odd = pair(rep.photon_number, rep.dims, 1, 3);
  rep.even_odd = pair(rep.photon_number, rep.dims, 0, 1);
  rep.even_odd_large = pair(rep.photon_number, rep.dims, 2, 3);
  return rep;
}

namespace {

void summarise(SweepPoint& p, std::span<const std::size_t> dims, std::span<const double> r_grid,
               int n, int order, const ExperimentOptions& opts) {
  for (std::size_t d : dims) p.dominance.push_back(dominance_ratio({n, d, KerrSpec{order, p.strength}}));
  for (const auto& s : p.photon_number) p.max_photon = std::max(p.max_photon, series_amplitude(s));
  p.tolerance = std::max(opts.relative_tolerance * p.max_photon, opts.absolute_floor);
  p.regulated = true;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    for (std::size_t b = a + 1; b < dims.size(); ++b) {
      p.distances.push_back(pair(p.photon_number, dims, a, b));
      if (!(p.distances.back().distance < p.tolerance)) p.regulated = false;
    }
  }
  for (std::size_t k = 0; k < r_grid.size() && !p.divergence_onset; ++k) {
    for (std::size_t a = 0; a < dims.size() && !p.divergence_onset; ++a) {
      for (std::size_t b = a + 1; b < dims.size(); ++b) {
        if (std::abs(p.photon_number[a][k] - p.photon_number[b][k]) >= p.tolerance) {
          p.divergence_onset = r_grid[k];
          break;
        }
      }
    }
  }
  p.amplitude = series_amplitude(p.photon_number.front());
  p.period = series_period(r_grid, p.photon_number.front());
}

SweepReport run_sweep(int n, int order, std::span<const double> strengths,
                      std::span<const std::size_t> dims, const ExperimentOptions& opts) {
  KerrSpec{order, 0.0}.validate();
  check_options(opts);
  if (strengths.empty()) throw InvalidArgument("sweep needs at least one strength");
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    KerrSpec{order, strengths[i]}.validate();
    if (i > 0 && !(strengths[i] > strengths[i - 1])) {
      throw InvalidArgument("sweep strengths must be strictly increasing");
    }
  }
  SweepReport rep;
  rep.n = n;
  rep.order = order;
  rep.dims.assign(dims.begin(), dims.end());
  rep.strengths.assign(strengths.begin(), strengths.end());
  rep.r_grid = make_grid(opts.r_max, opts.dr);
  rep.points.resize(strengths.size());
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    rep.points[i].strength = strengths[i];
    rep.points[i].photon_number.resize(dims.size());
  }
  const std::size_t nd = dims.size();
  parallel_for(strengths.size() * nd, opts.jobs, [&](std::size_t job) {
    const std::size_t i = job / nd;
    const std::size_t d = job % nd;
    rep.points[i].photon_number[d] = photon_series(n, dims[d], KerrSpec{order, strengths[i]}, opts);
  });
  for (auto& p : rep.points) summarise(p, dims, rep.r_grid, n, order, opts);
  return rep;
}

}  // namespace

SweepReport kerr_sweep(int n, int order, std::span<const double> strengths,
                       std::span<const std::size_t> dims, const ExperimentOptions& opts) {
  bool adjacent = false;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    for (std::size_t b = 0; b < dims.size(); ++b) adjacent |= dims[b] == dims[a] + 1;
  }
  if (!adjacent) throw InvalidArgument("sweep dims must include an even/odd adjacent pair");
  return run_sweep(n, order, strengths, dims, opts);
}

double analytic_threshold(int n, std::size_t dim, int order) {
  KerrSpec{order, 0.0}.validate();
  const double edge = static_cast<double>(n) * static_cast<double>(dim);
  const double coeff = std::pow(edge, 0.5 * n - order);
  return order == 4 ? 24.0 * coeff : coeff;
}

Threshold threshold_detect(const SweepReport& report) {
  std::optional<std::size_t> flip;
  for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
    if (!report.points[i].regulated && report.points[i + 1].regulated) flip = i;
  }
  if (!flip) {
    std::ostringstream msg;
    msg << "no unregulated -> regulated flip in sweep:";
    for (const auto& p : report.points) {
      msg << ' ' << p.strength << '=' << (p.regulated ? "regulated" : "unregulated");
    }
    throw Error(msg.str());
  }
  Threshold t;
  t.unregulated = report.strengths[*flip];
  t.regulated = report.strengths[*flip + 1];
  t.midpoint = 0.5 * (t.unregulated + t.regulated);
  const std::size_t smallest = *std::min_element(report.dims.begin(), report.dims.end());
  t.analytic = analytic_threshold(report.n, smallest, report.order);
  return t;
}

SweepReport variable_k_panel(int n, int order, std::span<const double> strengths, std::size_t dim,
                             const ExperimentOptions& opts) {
  const std::array<std::size_t, 2> dims{dim, dim + 1};
  SweepReport rep = run_sweep(n, order, strengths, dims, opts);
  for (const auto& p : rep.points) {
    if (!p.regulated) {
      std::ostringstream msg;
      msg << "strength " << p.strength << " is not regulated at dim " << dim << " (distance "
          << p.distances.front().distance << " vs tolerance " << p.tolerance << ")";
      throw Error(msg.str());
    }
  }
  return rep;
}

}  // namespace squeeze
