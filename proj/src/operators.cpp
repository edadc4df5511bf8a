#include "squeeze/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "squeeze/error.hpp"

namespace squeeze {

void KerrSpec::validate() const {
  if (order != 2 && order != 4) {
    throw InvalidArgument("Kerr order must be 2 or 4, got " + std::to_string(order));
  }
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw InvalidArgument("Kerr strength must be finite and >= 0");
  }
}

void TruncationSpec::validate() const {
  if (n < 1) throw InvalidArgument("squeezing order n must be >= 1, got " + std::to_string(n));
  if (dim < 1) throw InvalidArgument("truncation dimension must be >= 1");
  if (kerr) kerr->validate();
}

bool JacobiMatrix::has_diagonal() const noexcept {
  return std::any_of(diag.begin(), diag.end(), [](double d) { return d != 0.0; });
}

double JacobiMatrix::norm_bound() const noexcept {
  double dmax = 0.0;
  for (double d : diag) dmax = std::max(dmax, std::abs(d));
  double tmax = 0.0;
  for (double t : offdiag) tmax = std::max(tmax, t);
  return dmax + 2.0 * tmax;
}

double squeezing_coupling(int n, std::uint64_t j) {
  const double base = static_cast<double>(n) * static_cast<double>(j);
  // (base + n)^n below ~1e280 cannot overflow the running product.
  if (static_cast<double>(n) * std::log10(base + n) < 280.0) {
    double prod = 1.0;
    for (int k = 1; k <= n; ++k) prod *= base + k;
    return std::sqrt(prod);
  }
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) log_sum += std::log(base + k);
  return std::exp(0.5 * log_sum);
}

double kerr_diagonal(std::uint64_t m, const std::optional<KerrSpec>& kerr) {
  if (!kerr) return 0.0;
  const double x = static_cast<double>(m);
  switch (kerr->order) {
    case 2:
      return kerr->strength * x * (x - 1.0);
    case 4:
      if (m < 4) return 0.0;
      return kerr->strength / 24.0 * x * (x - 1.0) * (x - 2.0) * (x - 3.0);
    default:
      throw InvalidArgument("Kerr order must be 2 or 4, got " + std::to_string(kerr->order));
  }
}

JacobiMatrix build_hamiltonian(const TruncationSpec& spec) {
  spec.validate();
  JacobiMatrix h;
  h.diag.resize(spec.dim);
  h.offdiag.resize(spec.dim - 1);
  for (std::size_t j = 0; j < spec.dim; ++j) h.diag[j] = kerr_diagonal(spec.photons(j), spec.kerr);
  for (std::size_t j = 0; j + 1 < spec.dim; ++j) h.offdiag[j] = squeezing_coupling(spec.n, j);
  return h;
}

double dominance_ratio(const TruncationSpec& spec) {
  spec.validate();
  if (!spec.kerr) throw InvalidArgument("dominance_ratio needs a Kerr term");
  const double scale = static_cast<double>(spec.n) * static_cast<double>(spec.dim);
  const double coeff = spec.kerr->order == 4 ? spec.kerr->strength / 24.0 : spec.kerr->strength;
  return coeff * std::pow(scale, spec.kerr->order - 0.5 * spec.n);
}

}  // namespace squeeze
