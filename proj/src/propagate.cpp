#include "squeeze/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "squeeze/error.hpp"
#include "squeeze/spectral.hpp"

namespace squeeze {

using cplx = std::complex<double>;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::spectral: return "spectral";
    case Method::chebyshev: return "chebyshev";
    case Method::powering: return "powering";
    case Method::automatic: return "auto";
  }
  return "auto";
}

Method parse_method(std::string_view name) {
  if (name == "spectral") return Method::spectral;
  if (name == "chebyshev") return Method::chebyshev;
  if (name == "powering") return Method::powering;
  if (name == "auto" || name == "automatic") return Method::automatic;
  throw InvalidArgument("unknown propagation method '" + std::string(name) + "'");
}

namespace {

bool is_integer_multiple(double r_max, double dr) {
  const double q = r_max / dr;
  const double k = std::nearbyint(q);
  const double ulp = std::nextafter(q, std::numeric_limits<double>::infinity()) - q;
  return std::abs(q - k) <= 0.5 * ulp;
}

double norm_of(const State& psi) {
  double s = 0.0;
  for (const auto& v : psi) s += std::norm(v);
  return std::sqrt(s);
}

double weighted_photons(const State& psi, int n) {
  double s = 0.0;
  for (std::size_t j = 1; j < psi.size(); ++j) s += static_cast<double>(j) * std::norm(psi[j]);
  return static_cast<double>(n) * s;
}

void record(Trajectory& traj, double r, State&& psi, int n, bool keep) {
  traj.r_grid.push_back(r);
  traj.photon_number.push_back(weighted_photons(psi, n));
  traj.norm_drift.push_back(std::abs(norm_of(psi) - 1.0));
  if (keep) traj.states->push_back(std::move(psi));
}

State vacuum(std::size_t dim) {
  State psi(dim, cplx{0.0, 0.0});
  psi[0] = 1.0;
  return psi;
}

Trajectory run_spectral(const JacobiMatrix& h, int n, std::span<const double> rs, bool keep) {
  const auto modes = vacuum_modes(h);
  const std::size_t dim = h.size();
  // Support of the kept eigenvectors; components beyond it are exactly zero.
  std::size_t support = 1;
  for (const auto& v : modes.vectors) {
    for (std::size_t j = dim; j-- > support;) {
      if (v[j] != 0.0) {
        support = j + 1;
        break;
      }
    }
  }
  Trajectory traj;
  if (keep) traj.states.emplace();
  for (double r : rs) {
    if (r == 0.0) {
      record(traj, r, vacuum(dim), n, keep);
      continue;
    }
    State psi(dim, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < modes.eigenvalues.size(); ++k) {
      const cplx amp = modes.weights[k] * std::polar(1.0, -modes.eigenvalues[k] * r);
      const auto& v = modes.vectors[k];
      for (std::size_t j = 0; j < support; ++j) psi[j] += amp * v[j];
    }
    record(traj, r, std::move(psi), n, keep);
  }
  traj.method_used = Method::spectral;
  return traj;
}

// y = (T / a) x
void scaled_matvec(const JacobiMatrix& h, double inv_a, const State& x, State& y) {
  const std::size_t dim = x.size();
  if (dim == 1) {
    y[0] = h.diag[0] * inv_a * x[0];
    return;
  }
  y[0] = (h.diag[0] * x[0] + h.offdiag[0] * x[1]) * inv_a;
  for (std::size_t j = 1; j + 1 < dim; ++j) {
    y[j] = (h.offdiag[j - 1] * x[j - 1] + h.diag[j] * x[j] + h.offdiag[j] * x[j + 1]) * inv_a;
  }
  y[dim - 1] = (h.offdiag[dim - 2] * x[dim - 2] + h.diag[dim - 1] * x[dim - 1]) * inv_a;
}

State chebyshev_step(const JacobiMatrix& h, double half_width,
                     const std::vector<cplx>& coeffs, const State& psi) {
  const std::size_t dim = psi.size();
  const double inv_a = 1.0 / half_width;
  State prev = psi;
  State cur(dim);
  State next(dim);
  State acc(dim);
  for (std::size_t j = 0; j < dim; ++j) acc[j] = coeffs[0] * prev[j];
  if (coeffs.size() == 1) return acc;
  scaled_matvec(h, inv_a, prev, cur);
  for (std::size_t j = 0; j < dim; ++j) acc[j] += coeffs[1] * cur[j];
  for (std::size_t k = 2; k < coeffs.size(); ++k) {
    scaled_matvec(h, inv_a, cur, next);
    const cplx c = coeffs[k];
    for (std::size_t j = 0; j < dim; ++j) {
      next[j] = 2.0 * next[j] - prev[j];
      acc[j] += c * next[j];
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return acc;
}

Trajectory run_chebyshev(const JacobiMatrix& h, int n, std::span<const double> rs, bool keep,
                         std::size_t max_terms) {
  const double a = chebyshev_half_width(h);
  std::map<double, std::vector<cplx>> cache;
  double r_prev = 0.0;
  for (double r : rs) {
    const double step = r - r_prev;
    r_prev = r;
    if (step == 0.0 || cache.count(step)) continue;
    const std::size_t need = chebyshev_series_length(a * step);
    if (need > max_terms) {
      throw SeriesLengthError("Chebyshev step of " + std::to_string(step) + " needs " +
                                  std::to_string(need) + " terms (limit " +
                                  std::to_string(max_terms) +
                                  "); use the spectral method or a smaller step",
                              need);
    }
    cache.emplace(step, chebyshev_coefficients(a * step));
  }
  Trajectory traj;
  if (keep) traj.states.emplace();
  State psi = vacuum(h.size());
  r_prev = 0.0;
  for (double r : rs) {
    const double step = r - r_prev;
    r_prev = r;
    if (step != 0.0) psi = chebyshev_step(h, a, cache.at(step), psi);
    State copy = psi;
    record(traj, r, std::move(copy), n, keep);
  }
  traj.method_used = Method::chebyshev;
  return traj;
}

Trajectory run_powering(const JacobiMatrix& h, int n, std::span<const double> rs, bool keep) {
  const std::size_t dim = h.size();
  if (dim > kPoweringMaxDim) {
    throw CostRefused("powering builds a dense " + std::to_string(dim) + "x" +
                      std::to_string(dim) +
                      " propagator; refused above dimension " + std::to_string(kPoweringMaxDim) +
                      ", use the spectral method");
  }
  if (rs.empty()) return Trajectory{};
  const double step = rs.size() > 1 ? rs[1] - rs[0] : 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double expect = static_cast<double>(k) * step;
    if (std::abs(rs[k] - expect) > 1e-12 * std::max(1.0, std::abs(expect))) {
      throw InvalidArgument("powering needs r values that are consecutive multiples of the step");
    }
  }
  // Physical matrix: H(j+1, j) = i t_j, H(j, j+1) = -i t_j.
  Eigen::MatrixXcd hphys = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) hphys(j, j) = h.diag[j];
  for (std::size_t j = 0; j + 1 < dim; ++j) {
    hphys(j + 1, j) = cplx{0.0, h.offdiag[j]};
    hphys(j, j + 1) = cplx{0.0, -h.offdiag[j]};
  }
  const Eigen::MatrixXcd one_step = (cplx{0.0, -step} * hphys).exp();

  // Gauge back to the Jacobi frame: psi_T(j) = (-i)^j psi_phys(j).
  std::vector<cplx> phase(dim);
  cplx ph{1.0, 0.0};
  for (std::size_t j = 0; j < dim; ++j) {
    phase[j] = ph;
    ph *= cplx{0.0, -1.0};
  }
  Trajectory traj;
  if (keep) traj.states.emplace();
  Eigen::VectorXcd phys = Eigen::VectorXcd::Zero(dim);
  phys(0) = 1.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k > 0) phys = one_step * phys;
    State psi(dim);
    for (std::size_t j = 0; j < dim; ++j) psi[j] = phase[j] * phys(j);
    record(traj, rs[k], std::move(psi), n, keep);
  }
  traj.method_used = Method::powering;
  return traj;
}

Method resolve(Method m, const JacobiMatrix& h, std::span<const double> rs,
               std::size_t max_terms) {
  if (m != Method::automatic) return m;
  if (h.size() <= kAutoSpectralMaxDim || rs.size() < 2) return Method::spectral;
  const double step = std::abs(rs[1] - rs[0]);
  return chebyshev_series_length(chebyshev_half_width(h) * step) <= max_terms
             ? Method::chebyshev
             : Method::spectral;
}

}  // namespace

void PropagationConfig::validate() const {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("r_max must be > 0");
  if (!(dr > 0.0) || !std::isfinite(dr)) throw InvalidArgument("dr must be > 0");
  if (method == Method::powering && !is_integer_multiple(r_max, dr)) {
    throw InvalidArgument("powering needs r_max to be an integer multiple of dr");
  }
}

double Trajectory::max_photon() const noexcept {
  double m = 0.0;
  for (double v : photon_number) m = std::max(m, v);
  return m;
}

std::vector<double> make_grid(double r_max, double dr) {
  const double q = r_max / dr;
  const double k = std::nearbyint(q);
  const auto steps = static_cast<std::size_t>(std::abs(q - k) <= 1e-9 * std::max(1.0, q)
                                                  ? k
                                                  : std::floor(q));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) * dr;
  return grid;
}

Trajectory propagate_vacuum(const JacobiMatrix& h, const TruncationSpec& spec,
                            const PropagationConfig& cfg) {
  cfg.validate();
  const auto grid = make_grid(cfg.r_max, cfg.dr);
  return evolve_vacuum(h, spec, grid, cfg.method, cfg.record_states, cfg.max_series_terms);
}

Trajectory evolve_vacuum(const JacobiMatrix& h, const TruncationSpec& spec,
                         std::span<const double> r_values, Method method, bool record_states,
                         std::size_t max_series_terms) {
  spec.validate();
  if (h.size() != spec.dim) throw InvalidArgument("Hamiltonian dimension does not match spec");
  switch (resolve(method, h, r_values, max_series_terms)) {
    case Method::chebyshev:
      return run_chebyshev(h, spec.n, r_values, record_states, max_series_terms);
    case Method::powering:
      return run_powering(h, spec.n, r_values, record_states);
    case Method::spectral:
    case Method::automatic:
      break;
  }
  return run_spectral(h, spec.n, r_values, record_states);
}

double photon_number(std::span<const std::complex<double>> state, int n) {
  double norm2 = 0.0;
  for (const auto& v : state) norm2 += std::norm(v);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) {
    throw InvalidArgument("photon_number needs a normalised state (norm " +
                          std::to_string(std::sqrt(norm2)) + ")");
  }
  double s = 0.0;
  for (std::size_t j = 1; j < state.size(); ++j) s += static_cast<double>(j) * std::norm(state[j]);
  return static_cast<double>(n) * s;
}

std::size_t chebyshev_series_length(double x) {
  const double ax = std::abs(x);
  return static_cast<std::size_t>(std::ceil(ax + 14.0 * std::cbrt(ax) + 24.0));
}

std::vector<cplx> chebyshev_coefficients(double x) {
  const double ax = std::abs(x);
  const std::size_t terms = chebyshev_series_length(ax);
  std::vector<double> bessel(terms + 1, 0.0);
  if (ax < 1e-8) {
    bessel[0] = 1.0 - ax * ax / 4.0;
    if (terms >= 1) bessel[1] = ax / 2.0;
  } else {
    // Miller's backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, started well
    // beyond the last term kept and normalised by J_0 + 2 sum J_{2k} = 1.
    const std::size_t start = terms + 40;
    double above = 0.0;
    double here = 1e-280;
    double norm = 0.0;
    for (std::size_t k = start; k > 0; --k) {
      const double below = 2.0 * static_cast<double>(k) / ax * here - above;
      above = here;
      here = below;
      const std::size_t idx = k - 1;
      if (idx <= terms) bessel[idx] = here;
      if (idx % 2 == 0) norm += (idx == 0 ? 1.0 : 2.0) * here;
      if (std::abs(here) > 1e250) {
        constexpr double shrink = 1e-250;
        above *= shrink;
        here *= shrink;
        norm *= shrink;
        for (std::size_t m = idx; m <= terms; ++m) bessel[m] *= shrink;
      }
    }
    for (double& b : bessel) b /= norm;
  }
  std::size_t last = 0;
  for (std::size_t k = 0; k <= terms; ++k) {
    if (std::abs(bessel[k]) > 1e-18) last = k;
  }
  std::vector<cplx> coeffs(last + 1);
  const cplx minus_i{0.0, -1.0};
  cplx power{1.0, 0.0};
  for (std::size_t k = 0; k <= last; ++k) {
    double jk = bessel[k];
    if (x < 0.0 && k % 2 == 1) jk = -jk;
    coeffs[k] = (k == 0 ? 1.0 : 2.0) * jk * power;
    power *= minus_i;
  }
  return coeffs;
}

double chebyshev_half_width(const JacobiMatrix& h) {
  return 1.05 * std::max(h.norm_bound(), std::numeric_limits<double>::min());
}

}  // namespace squeeze
