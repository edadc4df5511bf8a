#pragma once

// Numerical Weyl limit-point / limit-circle test for the infinite Jacobi
// operator behind a TruncationSpec (the truncation size is ignored).
//
// For Im z != 0 the deficiency equation (T - z) psi = 0 with psi_0 = 1 has a
// unique solution. It is square summable (limit circle: the operator is not
// essentially self-adjoint on finite Fock states) or it is not (limit point:
// essentially self-adjoint).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "squeeze/operators.hpp"

namespace squeeze {

enum class Verdict { limit_point, limit_circle, inconclusive };

std::string_view to_string(Verdict v);
// e.g. "limit_point (essentially self-adjoint)".
std::string_view describe(Verdict v);

// A complex number stored as log-magnitude and phase so that solutions growing
// or decaying over 10^6 steps stay representable.
struct LogComplex {
  double log_abs = 0.0;
  double phase = 0.0;

  std::complex<double> value() const { return std::polar(std::exp(log_abs), phase); }
};

// Forward solution psi_0..psi_depth of
//   t_{j-1} psi_{j-1} + d_j psi_j + t_j psi_{j+1} = z psi_j,   psi_0 = 1.
std::vector<LogComplex> deficiency_solution(const TruncationSpec& spec, std::complex<double> z,
                                            std::size_t depth);

struct SAClassification {
  Verdict verdict = Verdict::inconclusive;
  // p in |psi_j| ~ j^{-p} over the last blocks; negative p means growth.
  double decay_exponent = 0.0;
  // Partial sums sum_{j <= J} |psi_j|^2 at J = 2^k - 1 (may be +inf when the
  // solution explodes; log_tail_norms always finite).
  std::vector<std::size_t> tail_indices;
  std::vector<double> tail_norms;
  std::vector<double> log_tail_norms;
  // Ratios of consecutive dyadic block sums sum_{2^k <= j < 2^{k+1}} |psi_j|^2.
  std::vector<double> block_ratios;
  std::size_t probe_depth = 0;
  // Sine of the angle between two backward solutions started from independent
  // tails at the probe depth, measured at depth / 2. Near zero when a minimal
  // solution dominates (limit point); order one when none does.
  double backward_independence = 0.0;
  std::string diagnostic;
};

inline constexpr double kBlockRatioThreshold = 0.95;
inline constexpr std::size_t kMinProbeDepth = 1000;

// Classifies at z = +i and z = -i, and again on the first half of the probe;
// any disagreement yields Verdict::inconclusive with a diagnostic.
SAClassification classify(const TruncationSpec& spec, std::size_t depth);

struct CriticalScan {
  int n = 0;
  int order = 0;
  std::vector<double> strengths;
  std::vector<SAClassification> results;
  // Adjacent strengths between which the verdict changes from limit_circle to limit_point.
  std::optional<std::pair<double, double>> flip;
};

// Verdicts across Kerr strengths for the balanced case n = 2h.
CriticalScan critical_scan(int n, int order, std::span<const double> strengths,
                           std::size_t depth = 1'000'000);

}  // namespace squeeze
